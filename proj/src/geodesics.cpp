#include "gbs/geodesics.hpp"

#include <cmath>
#include <sstream>

namespace gbs {

namespace {

constexpr double kPi = 3.14159265358979323846;

// ---- Poincaré ball (unit curvature scale) ---------------------------------

// Ball operations run in extended precision: near the ideal boundary the
// tanh/artanh pair amplifies rounding by the conformal factor.
using VecL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

VecL mobius_add(const VecL& a, const VecL& b) {
  const long double ab = a.dot(b);
  const long double a2 = a.squaredNorm();
  const long double b2 = b.squaredNorm();
  const long double den = 1.0L + 2.0L * ab + a2 * b2;
  return ((1.0L + 2.0L * ab + b2) * a + (1.0L - a2) * b) / den;
}

Vec ball_exp(const Vec& x, const Vec& v) {
  const VecL xl = x.cast<long double>(), vl = v.cast<long double>();
  const long double nv = vl.norm();
  if (nv == 0.0L) return x;
  const long double lambda = 2.0L / (1.0L - xl.squaredNorm());
  return mobius_add(xl, std::tanh(0.5L * lambda * nv) * vl / nv).cast<double>();
}

Vec ball_log(const Vec& x, const Vec& y) {
  const VecL xl = x.cast<long double>();
  const VecL z = mobius_add(-xl, y.cast<long double>());
  const long double nz = z.norm();
  if (nz == 0.0L) return Vec::Zero(x.size());
  return ((1.0L - xl.squaredNorm()) * std::atanh(nz) * z / nz).cast<double>();
}

// ---- hyperspherical chart -------------------------------------------------

// Π_{j<m} f_j(θ_j), with f = cos at index k and sin elsewhere.
double sin_product(const Vec& th, int m, int k) {
  double p = 1.0;
  for (int j = 0; j < m; ++j) p *= (j == k) ? std::cos(th[j]) : std::sin(th[j]);
  return p;
}

Vec sphere_embed(const Vec& th) {
  const int n = static_cast<int>(th.size());
  Vec X(n + 1);
  for (int m = 0; m < n; ++m) X[m] = sin_product(th, m, -1) * std::cos(th[m]);
  X[n] = sin_product(th, n, -1);
  return X;
}

Mat sphere_jacobian(const Vec& th) {
  const int n = static_cast<int>(th.size());
  Mat J = Mat::Zero(n + 1, n);
  for (int m = 0; m <= n; ++m)
    for (int k = 0; k < std::min(m + 1, n); ++k) {
      if (m < n) {
        if (k < m) J(m, k) = sin_product(th, m, k) * std::cos(th[m]);
        else J(m, k) = -sin_product(th, m, -1) * std::sin(th[m]);
      } else {
        J(m, k) = sin_product(th, n, k);
      }
    }
  return J;
}

Vec sphere_chart(const Vec& X) {
  const int n = static_cast<int>(X.size()) - 1;
  Vec th(n);
  for (int k = 0; k + 1 < n; ++k) th[k] = std::atan2(X.tail(n - k).norm(), X[k]);
  th[n - 1] = std::atan2(X[n], X[n - 1]);
  return th;
}

Vec sphere_pull_tangent(const Vec& th, const Vec& W) {
  const Mat J = sphere_jacobian(th);
  Vec u(th.size());
  for (int k = 0; k < th.size(); ++k) u[k] = J.col(k).dot(W) / J.col(k).squaredNorm();
  return u;
}

Vec sphere_exp(const Vec& th, const Vec& v) {
  const Vec X = sphere_embed(th);
  const Vec V = sphere_jacobian(th) * v;
  const double a = V.norm();
  if (a == 0.0) return th;
  return sphere_chart(std::cos(a) * X + std::sin(a) * V / a);
}

Vec sphere_log(const Vec& th, const Vec& phi) {
  const Vec X = sphere_embed(th);
  const Vec Y = sphere_embed(phi);
  const Vec W = Y - X.dot(Y) * X;
  const double nw = W.norm();
  const double angle = std::atan2(nw, X.dot(Y));
  if (nw < 1e-14) {
    if (X.dot(Y) < 0.0) throw GeometryError(ErrorKind::CutLocus, "antipodal points on the sphere");
    return Vec::Zero(th.size());
  }
  if (kPi - angle < 1e-10) throw GeometryError(ErrorKind::CutLocus, "points too close to antipodal");
  return sphere_pull_tangent(th, angle * W / nw);
}

// ---- closed-form dispatch ---------------------------------------------------

Vec closed_exp(const ChartedMetric& m, const Vec& x, const Vec& v) {
  switch (m.kind()) {
    case ModelKind::Euclidean: return x + v;
    case ModelKind::SpherePolar:
      if (m.dim() == 1) {
        Vec y = x + v;
        return y;
      }
      return sphere_exp(x, v);
    case ModelKind::HyperbolicBall: {
      const double s = m.parameter();
      return ball_exp(s * x, s * v) / s;
    }
    case ModelKind::Product: {
      const int a = m.left().dim();
      Vec y(m.dim());
      y.head(a) = closed_exp(m.left(), x.head(a), v.head(a));
      y.tail(m.dim() - a) = closed_exp(m.right(), x.tail(m.dim() - a), v.tail(m.dim() - a));
      return y;
    }
  }
  return x;
}

Vec closed_log(const ChartedMetric& m, const Vec& x, const Vec& y) {
  switch (m.kind()) {
    case ModelKind::Euclidean: return y - x;
    case ModelKind::SpherePolar:
      if (m.dim() == 1) return y - x;
      return sphere_log(x, y);
    case ModelKind::HyperbolicBall: {
      const double s = m.parameter();
      return ball_log(s * x, s * y) / s;
    }
    case ModelKind::Product: {
      const int a = m.left().dim();
      Vec v(m.dim());
      v.head(a) = closed_log(m.left(), x.head(a), y.head(a));
      v.tail(m.dim() - a) = closed_log(m.right(), x.tail(m.dim() - a), y.tail(m.dim() - a));
      return v;
    }
  }
  return y - x;
}

bool use_closed_form(const ChartedMetric& m) { return m.derivative_mode() == DerivativeMode::Analytic; }

Vec geodesic_acceleration(const ChartedMetric& m, const Vec& x, const Vec& v) {
  const Tensor3 gamma = christoffel(m, x);
  const int n = m.dim();
  Vec a = Vec::Zero(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a[k] -= gamma(k, i, j) * v[i] * v[j];
  return a;
}

}  // namespace

double tangent_norm(const ChartedMetric& m, const Vec& x, const Vec& v) {
  return std::sqrt(std::max(0.0, v.dot(m.metric(x) * v)));
}

GeodesicState integrate_geodesic(const ChartedMetric& m, const Vec& x0, const Vec& v0, int n_steps) {
  const double h = 1.0 / n_steps;
  Vec x = x0, v = v0;
  try {
    for (int s = 0; s < n_steps; ++s) {
      const Vec k1x = v;
      const Vec k1v = geodesic_acceleration(m, x, v);
      const Vec k2x = v + 0.5 * h * k1v;
      const Vec k2v = geodesic_acceleration(m, x + 0.5 * h * k1x, k2x);
      const Vec k3x = v + 0.5 * h * k2v;
      const Vec k3v = geodesic_acceleration(m, x + 0.5 * h * k2x, k3x);
      const Vec k4x = v + h * k3v;
      const Vec k4v = geodesic_acceleration(m, x + h * k3x, k4x);
      x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
  } catch (const GeometryError& e) {
    if (e.kind() == ErrorKind::OutOfDomain)
      throw GeometryError(ErrorKind::LeftChartDomain, "geodesic left the chart during integration");
    throw;
  }
  if (!m.contains(x)) throw GeometryError(ErrorKind::LeftChartDomain, "geodesic endpoint outside chart");
  return {x, v};
}

Vec exp_map_numeric(const ChartedMetric& m, const Vec& x, const Vec& v, const IntegratorOptions& opts) {
  m.require_in_domain(x);
  int steps = opts.n_steps;
  Vec coarse = integrate_geodesic(m, x, v, steps).x;
  for (int d = 0; d < opts.max_doublings; ++d) {
    steps *= 2;
    const Vec fine = integrate_geodesic(m, x, v, steps).x;
    if ((fine - coarse).norm() <= opts.richardson_tol) return fine;
    coarse = fine;
  }
  return coarse;
}

Vec log_map_shooting(const ChartedMetric& m, const Vec& x, const Vec& y, const ShootingOptions& opts) {
  m.require_in_domain(x);
  m.require_in_domain(y);
  const int n = m.dim();
  Vec v = y - x;
  auto residual_of = [&](const Vec& trial, Vec& r) {
    try {
      r = exp_map_numeric(m, x, trial, opts.integrator) - y;
      return true;
    } catch (const GeometryError& e) {
      if (e.kind() != ErrorKind::LeftChartDomain) throw;
      return false;
    }
  };
  Vec r;
  if (!residual_of(v, r)) throw GeometryError(ErrorKind::NoConvergence, "initial shooting guess leaves chart");
  double res = r.norm();
  for (int it = 0; it < opts.max_iterations; ++it) {
    if (res <= opts.residual_tol) return v;
    const double h = 1e-6 * std::max(1.0, v.norm());
    Mat J(n, n);
    for (int k = 0; k < n; ++k) {
      Vec vp = v, vm = v, rp, rm;
      vp[k] += h;
      vm[k] -= h;
      if (!residual_of(vp, rp) || !residual_of(vm, rm))
        throw GeometryError(ErrorKind::NoConvergence, "shooting Jacobian probe left chart");
      J.col(k) = (rp - rm) / (2.0 * h);
    }
    const Vec step = J.fullPivLu().solve(-r);
    double damping = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 20; ++ls) {
      Vec trial = v + damping * step, rt;
      if (residual_of(trial, rt) && rt.norm() < res) {
        v = trial;
        r = rt;
        res = rt.norm();
        accepted = true;
        break;
      }
      damping *= 0.5;
    }
    if (!accepted) break;
  }
  if (res <= opts.residual_tol) return v;
  std::ostringstream os;
  os << "shooting stalled after " << opts.max_iterations << " iterations, residual " << res;
  throw GeometryError(ErrorKind::NoConvergence, os.str());
}

Vec exp_map(const ChartedMetric& m, const Vec& x, const Vec& v) {
  m.require_in_domain(x);
  if (!use_closed_form(m)) return exp_map_numeric(m, x, v);
  Vec y = closed_exp(m, x, v);
  if (!m.contains(y)) throw GeometryError(ErrorKind::LeftChartDomain, "exp_map endpoint outside chart");
  return y;
}

Vec log_map(const ChartedMetric& m, const Vec& x, const Vec& y) {
  m.require_in_domain(x);
  m.require_in_domain(y);
  if (!use_closed_form(m)) return log_map_shooting(m, x, y);
  return closed_log(m, x, y);
}

double geodesic_distance(const ChartedMetric& m, const Vec& x, const Vec& y) {
  return tangent_norm(m, x, log_map(m, x, y));
}

GeodesicPath geodesic_between(const ChartedMetric& m, const Vec& x, const Vec& y, int n_samples) {
  if (n_samples < 2) throw GeometryError(ErrorKind::ConfigError, "geodesic_between needs at least 2 samples");
  GeodesicPath path;
  path.start = x;
  path.end = y;
  path.initial_velocity = log_map(m, x, y);
  path.samples.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    GeodesicSample s;
    s.t = static_cast<double>(i) / (n_samples - 1);
    if (i == 0) {
      s.x = x;
      s.v = path.initial_velocity;
    } else if (i == n_samples - 1) {
      s.x = y;
      s.v = -log_map(m, y, x);
    } else {
      s.x = exp_map(m, x, s.t * path.initial_velocity);
      // Velocity from the remaining stretch of the same geodesic.
      s.v = s.t < 0.5 ? Vec(log_map(m, s.x, y) / (1.0 - s.t)) : Vec(-log_map(m, s.x, x) / s.t);
    }
    path.samples.push_back(std::move(s));
  }
  return path;
}

Vec sphere_to_embedding(const Vec& theta) { return sphere_embed(theta); }

Vec sphere_from_embedding(const Vec& X) { return sphere_chart(X / X.norm()); }

}  // namespace gbs
