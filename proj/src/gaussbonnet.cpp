#include "gbs/gaussbonnet.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

namespace gbs {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint64_t face_mask(const Face& face) {
  std::uint64_t mask = 0;
  for (int v : face.vertex_subset) mask |= std::uint64_t{1} << v;
  return mask;
}

// Runs fn(i) for i in [0, count) on a small pool; results are written by
// index so the outcome does not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

FaceContribution interior_contribution(const GeodesicSimplex& s, const Face& face, const Budgets& budgets) {
  const int n = s.chart().dim();
  FaceContribution out;
  out.r = n;
  out.face = face.vertex_subset;
  if (n % 2 == 1) {
    out.breakdown = {0.0};
    return out;
  }
  auto integrand = [&](const Vec& y) {
    const FaceFrame ff = face_frame(s, face, y, LocalCoords::Conical);
    const CurvatureData c = curvature_at(s.chart(), ff.point);
    return Sample{psi_intrinsic(c) * ff.volume_element, 0.0};
  };
  const QuadResult q = integrate_conical(integrand, n, budgets.order);
  out.value = q.value;
  out.std_error = q.std_error;
  out.n_evals = q.n_evals;
  out.breakdown = {q.value};
  return out;
}

}  // namespace

FaceContribution face_contribution(const GeodesicSimplex& s, const Face& face, const Budgets& budgets,
                                   std::uint64_t seed) {
  const int n = s.chart().dim();
  if (s.dim() != n) throw GeometryError(ErrorKind::ConfigError, "face contributions need a top-dimensional simplex");
  const int r = face.dim();
  if (r < 0 || r > n) throw GeometryError(ErrorKind::IndexError, "face dimension out of range");
  if (r == n) return interior_contribution(s, face, budgets);

  FaceContribution out;
  out.r = r;
  out.face = face.vertex_subset;
  const int nf = r / 2 + 1;
  out.breakdown.assign(nf, 0.0);
  const std::uint64_t face_seed = stream_seed(seed, face_mask(face));

  // Geometry is evaluated once per point; the per-f inner integrals are
  // cached in call order and replayed to integrate each term separately.
  struct CachedPoint {
    std::vector<Sample> terms;
    double variance;
  };
  std::vector<CachedPoint> cache;
  bool any_empty = false;
  auto integrand = [&](const Vec& y) {
    const FaceFrame ff = face_frame(s, face, y, LocalCoords::Conical);
    const CurvatureData c = curvature_at(s.chart(), ff.point);
    FrameData fd;
    fd.riemann = c.riemann.in_frame(ff.frame);
    fd.lambda_basis = second_fundamental_forms(s, face, y, ff, LocalCoords::Conical);
    const NormalConeSample cone = normal_cone(s, face, ff, budgets.generators);
    const ConeBudget cb{budgets.mc_samples, budgets.arc_points, face_seed, cache.size()};
    std::vector<Sample> terms(nf);
    Sample total;
    for (int f = 0; f < nf; ++f) {
      // Same stream for every f, so the terms add up to the combined estimate.
      const QuadResult inner = integrate_dual_cone(
          [&](const Vec& xi) { return psi_extrinsic_rf(fd, xi, r, f, n); }, cone, cb);
      any_empty = any_empty || inner.empty_cone;
      out.n_evals += inner.n_evals;
      terms[f] = {inner.value * ff.volume_element, std::pow(inner.std_error * ff.volume_element, 2)};
      total.value += terms[f].value;
    }
    // Terms share their random streams; add errors linearly to stay conservative.
    double se = 0.0;
    for (const Sample& t : terms) se += std::sqrt(t.variance);
    total.variance = se * se;
    cache.push_back({std::move(terms), total.variance});
    return total;
  };
  const QuadResult q = integrate_conical(integrand, r, budgets.order);
  out.value = q.value;
  out.std_error = q.std_error;
  for (int f = 0; f < nf; ++f) {
    std::size_t call = 0;
    out.breakdown[f] =
        integrate_conical(
            [&](const Vec&) {
              // Replays the combined variance so the rule takes the same path.
              const CachedPoint& p = cache.at(call++);
              return Sample{p.terms[f].value, p.variance};
            },
            r, budgets.order)
            .value;
  }
  out.empty_cone = any_empty;
  return out;
}

GBReport verify_identity(const GeodesicSimplex& s, const Budgets& budgets, std::uint64_t seed) {
  const int n = s.chart().dim();
  if (s.dim() != n) throw GeometryError(ErrorKind::ConfigError, "identity check needs a top-dimensional simplex");
  std::vector<Face> faces;
  for (int r = 0; r <= n; ++r) {
    auto fr = faces_of_dimension(n, r);
    faces.insert(faces.end(), fr.begin(), fr.end());
  }
  GBReport rep;
  rep.dim = n;
  rep.faces.resize(faces.size());
  parallel_for(faces.size(), budgets.threads,
               [&](std::size_t i) { rep.faces[i] = face_contribution(s, faces[i], budgets, seed); });

  rep.strata.assign(n + 1, 0.0);
  std::vector<double> var(n + 1, 0.0);
  for (const auto& fc : rep.faces) {
    rep.strata[fc.r] += fc.value;
    var[fc.r] += fc.std_error * fc.std_error;
  }
  rep.strata_error.resize(n + 1);
  double total_var = 0.0;
  for (int r = 0; r <= n; ++r) {
    rep.strata_error[r] = std::sqrt(var[r]);
    rep.total += rep.strata[r];
    total_var += var[r];
  }
  rep.std_error = std::sqrt(total_var);
  rep.residual = rep.total - 1.0;
  return rep;
}

double vertex_angle(const GeodesicSimplex& s, int i, int j, int k) {
  const auto& v = s.vertices();
  const Vec& p = v.at(i);
  const Vec a = log_map(s.chart(), p, v.at(j));
  const Vec b = log_map(s.chart(), p, v.at(k));
  const Mat g = s.chart().metric(p);
  const double cosang = a.dot(g * b) / std::sqrt(a.dot(g * a) * b.dot(g * b));
  return std::acos(std::clamp(cosang, -1.0, 1.0));
}

AngleDefect angle_defect_2d(const GeodesicSimplex& s, int order) {
  if (s.chart().dim() != 2 || s.dim() != 2)
    throw GeometryError(ErrorKind::ConfigError, "angle defect needs a triangle in a 2-dimensional model");
  const Face whole = make_face(2, {0, 1, 2});
  auto integrand = [&](const Vec& y) {
    const FaceFrame ff = face_frame(s, whole, y, LocalCoords::Conical);
    const CurvatureData c = curvature_at(s.chart(), ff.point);
    return Sample{c.riemann(0, 1, 0, 1) / c.det_g * ff.volume_element, 0.0};
  };
  const QuadResult q = integrate_conical(integrand, 2, order);
  AngleDefect out;
  out.curv_integral = q.value;
  out.curv_error = q.std_error;
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double alpha = kPi - vertex_angle(s, i, (i + 1) % 3, (i + 2) % 3);
    out.exterior_angles.push_back(alpha);
    sum += alpha;
  }
  out.residual = out.curv_integral + sum - 2.0 * kPi;
  return out;
}

namespace {

double closed_surface_area(const ChartedMetric& m, int genus, double flat_area) {
  if (m.dim() != 2) throw GeometryError(ErrorKind::UnsupportedModel, "product factors must be surfaces");
  switch (m.kind()) {
    case ModelKind::SpherePolar: return 4.0 * kPi * m.parameter() * m.parameter();
    case ModelKind::HyperbolicBall:
      if (genus < 2) throw GeometryError(ErrorKind::UnsupportedModel, "closed hyperbolic surfaces need genus >= 2");
      return 4.0 * kPi * (genus - 1) / (m.parameter() * m.parameter());
    case ModelKind::Euclidean: return flat_area;
    default: throw GeometryError(ErrorKind::UnsupportedModel, "unsupported surface factor");
  }
}

Vec interior_point(const ChartedMetric& m) {
  switch (m.kind()) {
    case ModelKind::SpherePolar: {
      Vec x = Vec::Constant(m.dim(), kPi / 2);
      x[m.dim() - 1] = 0.3;
      return x;
    }
    case ModelKind::Product: {
      const Vec a = interior_point(m.left());
      const Vec b = interior_point(m.right());
      Vec x(a.size() + b.size());
      x << a, b;
      return x;
    }
    default: return Vec::Constant(m.dim(), 0.1 / std::max(1.0, m.parameter()));
  }
}

}  // namespace

EulerCheck euler_check_model(const ChartedMetric& m, int hyperbolic_genus, double flat_area) {
  if (m.dim() != 4) throw GeometryError(ErrorKind::UnsupportedModel, "Euler check is implemented for dimension 4");
  double volume = 0.0;
  switch (m.kind()) {
    case ModelKind::SpherePolar: volume = sphere_area(4) * std::pow(m.parameter(), 4); break;
    case ModelKind::Euclidean: volume = flat_area; break;
    case ModelKind::Product:
      volume = closed_surface_area(m.left(), hyperbolic_genus, flat_area) *
               closed_surface_area(m.right(), hyperbolic_genus, flat_area);
      break;
    default: throw GeometryError(ErrorKind::UnsupportedModel, "no closed quotient with known volume for this model");
  }
  EulerCheck out;
  out.psi4 = psi_intrinsic(curvature_at(m, interior_point(m)));
  out.volume = volume;
  out.chi_estimate = out.psi4 * volume;
  return out;
}

double face_gauss_curvature(const GeodesicSimplex& s, const Face& face, const Vec& y, LocalCoords coords) {
  if (face.dim() != 2) throw GeometryError(ErrorKind::IndexError, "Gauss curvature needs a 2-face");
  const FaceFrame ff = face_frame(s, face, y, coords);
  const CurvatureData c = curvature_at(s.chart(), ff.point);
  const Tensor4 rf = c.riemann.in_frame(ff.frame);
  double k = rf(0, 1, 0, 1);
  for (const Mat& l : second_fundamental_forms(s, face, y, ff, coords)) k += l.determinant();
  return k;
}

TheoremBudget theorem_budget(const GeodesicSimplex& s, const Budgets& budgets, std::uint64_t seed, double epsilon) {
  const ChartedMetric& m = s.chart();
  if (!m.nonpositively_curved())
    throw GeometryError(ErrorKind::PositiveCurvatureModel, "theorem budget needs nonpositive curvature");
  if (m.dim() != 4 || s.dim() != 4)
    throw GeometryError(ErrorKind::ConfigError, "theorem budget is defined for 4-simplices in 4-dimensional models");

  TheoremBudget tb;
  tb.epsilon = epsilon;
  tb.report = verify_identity(s, budgets, seed);
  double edge_var = 0.0, face_var = 0.0;
  for (const auto& fc : tb.report.faces) {
    if (fc.r == 0) {
      tb.vertex_term += fc.value;
      tb.vertex_error += fc.std_error * fc.std_error;
    } else if (fc.r == 1) {
      tb.edge_term += std::abs(fc.value);
      edge_var += fc.std_error * fc.std_error;
    } else if (fc.r == 2) {
      tb.two_face_values.push_back(-fc.value);
      tb.two_face_term -= fc.value;
      face_var += fc.std_error * fc.std_error;
    }
  }
  tb.vertex_error = std::sqrt(tb.vertex_error);
  tb.edge_error = std::sqrt(edge_var);
  tb.two_face_error = std::sqrt(face_var);
  tb.bound_constant = 1.0 + tb.vertex_term + tb.two_face_term;

  for (const Face& face : faces_of_dimension(4, 2)) {
    const QuadResult q = integrate_conical(
        [&](const Vec& y) {
          const FaceFrame ff = face_frame(s, face, y, LocalCoords::Conical);
          return Sample{-face_gauss_curvature(s, face, y, LocalCoords::Conical) * ff.volume_element, 0.0};
        },
        2, budgets.order);
    tb.two_face_caps.push_back(q.value / (2.0 * kPi));
  }

  auto check = [&](bool ok, const std::string& what) {
    if (!ok) tb.violations.push_back(what);
  };
  check(tb.vertex_term >= -epsilon && tb.vertex_term <= 5.0 + epsilon, "vertex_term outside [0, 5]");
  check(tb.edge_term <= epsilon, "edge_term above tolerance");
  for (std::size_t i = 0; i < tb.two_face_values.size(); ++i)
    check(tb.two_face_values[i] <= 0.5 + epsilon, "2-face value above 1/2 (face " + std::to_string(i) + ")");
  check(tb.two_face_term >= -epsilon && tb.two_face_term <= 5.0 + epsilon, "two_face_term outside [0, 5]");
  check(tb.bound_constant <= 11.0 + epsilon, "bound_constant above 11");
  tb.within_ranges = tb.violations.empty();
  return tb;
}

Jittered jitter(const std::vector<Vec>& vertices, double magnitude, std::uint64_t seed) {
  std::mt19937_64 rng(stream_seed(seed, 0x6a17));
  std::uniform_real_distribution<double> u(-magnitude, magnitude);
  Jittered out{vertices, magnitude};
  for (Vec& v : out.vertices)
    for (int i = 0; i < v.size(); ++i) v[i] += u(rng);
  return out;
}

}  // namespace gbs
