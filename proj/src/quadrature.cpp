#include "gbs/quadrature.hpp"

#include <cmath>
#include <random>

#include "gbs/integrands.hpp"

namespace gbs {

namespace {

constexpr double kPi = 3.14159265358979323846;

void compositions(int total, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int v = 0; v <= total; ++v) {
    cur.push_back(v);
    compositions(total - v, parts - 1, cur, out);
    cur.pop_back();
  }
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Tensor grid over [0,1]^r with `order` Gauss points per axis.
template <typename Fn>
void for_each_cube_point(int r, int order, Fn&& fn) {
  const auto gl = gauss_legendre01(order);
  std::vector<int> idx(r, 0);
  Vec y(r);
  while (true) {
    double w = 1.0;
    for (int i = 0; i < r; ++i) {
      y[i] = gl[idx[i]].first;
      w *= gl[idx[i]].second;
    }
    fn(y, w);
    int a = 0;
    while (a < r && ++idx[a] == order) idx[a++] = 0;
    if (a == r || r == 0) break;
  }
}

}  // namespace

const char* to_string(QuadMethod m) {
  switch (m) {
    case QuadMethod::SimplexRule: return "SimplexRule";
    case QuadMethod::TensorDuffy: return "TensorDuffy";
    case QuadMethod::MonteCarloCone: return "MonteCarloCone";
    case QuadMethod::CircleArc: return "CircleArc";
    case QuadMethod::SinglePoint: return "SinglePoint";
  }
  return "Unknown";
}

std::vector<std::pair<double, double>> gauss_legendre01(int n) {
  if (n < 1) throw GeometryError(ErrorKind::ConfigError, "Gauss-Legendre needs at least one point");
  std::vector<std::pair<double, double>> out(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    out[i] = {0.5 * (1.0 - z), 0.5 * w};
    out[n - 1 - i] = {0.5 * (1.0 + z), 0.5 * w};
  }
  return out;
}

std::vector<SimplexRulePoint> grundmann_moller(int r, int s) {
  if (r == 0) return {{Vec::Ones(1), 1.0}};
  std::vector<SimplexRulePoint> out;
  const int d = 2 * s + 1;
  for (int i = 0; i <= s; ++i) {
    const double denom = d + r - 2 * i;
    const double weight = (i % 2 == 0 ? 1.0 : -1.0) * std::pow(2.0, -2 * s) * std::pow(denom, d) /
                          (factorial(i) * factorial(d + r - i));
    std::vector<std::vector<int>> betas;
    std::vector<int> cur;
    compositions(s - i, r + 1, cur, betas);
    for (const auto& beta : betas) {
      Vec c(r + 1);
      for (int j = 0; j <= r; ++j) c[j] = (2.0 * beta[j] + 1.0) / denom;
      out.push_back({c, weight});
    }
  }
  return out;
}

std::vector<SimplexRulePoint> conical_product_rule(int r, int order) {
  std::vector<SimplexRulePoint> out;
  if (r == 0) return {{Vec::Ones(1), 1.0}};
  for_each_cube_point(r, order, [&](const Vec& y, double w) {
    out.push_back({conical_to_barycentric(y), w * conical_jacobian(y)});
  });
  return out;
}

QuadResult integrate_simplex(const std::function<double(const Vec&)>& f, int r, int order, QuadMethod method) {
  if (order < 1) throw GeometryError(ErrorKind::ConfigError, "quadrature order must be >= 1");
  auto rule_for = [&](int ord) {
    if (method == QuadMethod::TensorDuffy) return conical_product_rule(r, ord);
    return grundmann_moller(r, std::max(0, ord / 2));
  };
  auto apply = [&](const std::vector<SimplexRulePoint>& rule) {
    double acc = 0.0;
    for (const auto& p : rule) acc += p.weight * f(p.barycentric);
    return acc;
  };
  const auto fine_rule = rule_for(order);
  QuadResult res;
  res.method = method == QuadMethod::TensorDuffy ? QuadMethod::TensorDuffy : QuadMethod::SimplexRule;
  res.value = apply(fine_rule);
  res.n_evals = static_cast<long>(fine_rule.size());
  const int coarse = method == QuadMethod::TensorDuffy ? std::max(1, order / 2) : order - 2;
  if (coarse >= 1 && coarse < order && r > 0) {
    const auto coarse_rule = rule_for(coarse);
    res.std_error = std::abs(res.value - apply(coarse_rule));
    res.n_evals += static_cast<long>(coarse_rule.size());
  }
  return res;
}

QuadResult integrate_conical(const std::function<Sample(const Vec&)>& f, int r, int order) {
  QuadResult res;
  res.method = QuadMethod::TensorDuffy;
  if (r == 0) {
    const Sample s = f(Vec(0));
    res.value = s.value;
    res.std_error = std::sqrt(s.variance);
    res.n_evals = 1;
    return res;
  }
  double value = 0.0, variance = 0.0;
  bool stochastic = false;
  for_each_cube_point(r, order, [&](const Vec& y, double w) {
    const Sample s = f(y);
    value += w * s.value;
    variance += w * w * s.variance;
    stochastic = stochastic || s.variance > 0.0;
    ++res.n_evals;
  });
  res.value = value;
  if (stochastic) {
    res.std_error = std::sqrt(variance);
  } else if (order > 1) {
    double coarse = 0.0;
    for_each_cube_point(r, std::max(1, order / 2), [&](const Vec& y, double w) {
      coarse += w * f(y).value;
      ++res.n_evals;
    });
    res.std_error = std::abs(value - coarse);
  }
  return res;
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t task) {
  // SplitMix64 finalizer over the pair.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (task + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

QuadResult monte_carlo_sphere(const std::function<double(const Vec&)>& psi, int codim,
                              const std::function<bool(const Vec&)>& accept, const ConeBudget& budget) {
  if (budget.mc_samples < 2) throw GeometryError(ErrorKind::ConfigError, "need at least 2 Monte Carlo samples");
  std::mt19937_64 rng(stream_seed(budget.seed, budget.task));
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec xi(codim);
  double sum = 0.0, sum_sq = 0.0;
  long hits = 0;
  for (long i = 0; i < budget.mc_samples; ++i) {
    double nrm = 0.0;
    do {
      for (int a = 0; a < codim; ++a) xi[a] = normal(rng);
      nrm = xi.norm();
    } while (nrm == 0.0);
    xi /= nrm;
    if (!accept(xi)) continue;
    const double v = psi(xi);
    sum += v;
    sum_sq += v * v;
    ++hits;
  }
  const double area = sphere_area(codim - 1);
  const double n = static_cast<double>(budget.mc_samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  QuadResult res;
  res.method = QuadMethod::MonteCarloCone;
  res.value = area * mean;
  res.std_error = area * std::sqrt(var / (n - 1.0));
  res.n_evals = budget.mc_samples;
  res.empty_cone = hits == 0;
  return res;
}

QuadResult circle_arc(const std::function<double(const Vec&)>& psi, double start, double length, int points) {
  QuadResult res;
  res.method = QuadMethod::CircleArc;
  if (length <= 0.0) {
    res.empty_cone = true;
    return res;
  }
  const auto gl = gauss_legendre01(points);
  Vec xi(2);
  for (const auto& [t, w] : gl) {
    const double a = start + t * length;
    xi << std::cos(a), std::sin(a);
    res.value += w * length * psi(xi);
  }
  res.n_evals = points;
  return res;
}

}  // namespace

QuadResult integrate_normal_sphere(const std::function<double(const Vec&)>& psi, int codim, const ConeBudget& budget) {
  if (codim < 1) throw GeometryError(ErrorKind::IndexError, "codimension must be >= 1");
  if (codim == 1) {
    QuadResult res;
    res.method = QuadMethod::SinglePoint;
    res.value = psi(Vec::Constant(1, 1.0)) + psi(Vec::Constant(1, -1.0));
    res.n_evals = 2;
    return res;
  }
  if (codim == 2) {
    // Equally spaced nodes integrate trigonometric polynomials exactly.
    QuadResult res;
    res.method = QuadMethod::CircleArc;
    const int m = budget.arc_points;
    Vec xi(2);
    for (int i = 0; i < m; ++i) {
      const double a = 2.0 * kPi * i / m;
      xi << std::cos(a), std::sin(a);
      res.value += psi(xi) * 2.0 * kPi / m;
    }
    res.n_evals = m;
    return res;
  }
  return monte_carlo_sphere(psi, codim, [](const Vec&) { return true; }, budget);
}

QuadResult integrate_dual_cone(const std::function<double(const Vec&)>& psi, const NormalConeSample& cone,
                               const ConeBudget& budget) {
  const int codim = cone.codim();
  if (codim == 1) {
    QuadResult res;
    res.method = QuadMethod::SinglePoint;
    Vec xi = cone.inward_direction();
    if (xi.size() == 0 || xi.norm() == 0.0) xi = Vec::Constant(1, 1.0);
    xi[0] = xi[0] >= 0.0 ? 1.0 : -1.0;
    if (!cone.in_dual_cone(xi)) {
      res.empty_cone = true;
      return res;
    }
    res.value = psi(xi);
    res.n_evals = 1;
    return res;
  }
  if (codim == 2) {
    if (cone.generators.cols() == 0) return integrate_normal_sphere(psi, 2, budget);
    const Vec ref = cone.inward_direction();
    const double ref_angle = std::atan2(ref[1], ref[0]);
    double lo = -1e300, hi = 1e300;
    for (int j = 0; j < cone.generators.cols(); ++j) {
      double d = std::atan2(cone.generators(1, j), cone.generators(0, j)) - ref_angle;
      d = std::remainder(d, 2.0 * kPi);
      lo = std::max(lo, d - kPi / 2);
      hi = std::min(hi, d + kPi / 2);
    }
    return circle_arc(psi, ref_angle + lo, hi - lo, budget.arc_points);
  }
  auto accept = [&cone](const Vec& xi) { return cone.in_dual_cone(xi); };
  return monte_carlo_sphere(psi, codim, accept, budget);
}

}  // namespace gbs
