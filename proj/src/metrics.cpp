#include "gbs/metrics.hpp"

#include <cmath>
#include <sstream>

namespace gbs {

namespace {

constexpr double kPi = 3.14159265358979323846;

double fd_step(const Vec& x, double base) { return std::max(base, base * x.norm()); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

ChartedMetric ChartedMetric::euclidean(int n) {
  if (n < 1) throw GeometryError(ErrorKind::ConfigError, "dimension must be >= 1");
  ChartedMetric m;
  m.kind_ = ModelKind::Euclidean;
  m.dim_ = n;
  return m;
}

ChartedMetric ChartedMetric::sphere(int n, double radius) {
  if (n < 1) throw GeometryError(ErrorKind::ConfigError, "dimension must be >= 1");
  if (!(radius > 0.0)) throw GeometryError(ErrorKind::ConfigError, "sphere radius must be positive");
  ChartedMetric m;
  m.kind_ = ModelKind::SpherePolar;
  m.dim_ = n;
  m.param_ = radius;
  return m;
}

ChartedMetric ChartedMetric::hyperbolic(int n, double scale) {
  if (n < 1) throw GeometryError(ErrorKind::ConfigError, "dimension must be >= 1");
  if (!(scale > 0.0)) throw GeometryError(ErrorKind::ConfigError, "curvature scale must be positive");
  ChartedMetric m;
  m.kind_ = ModelKind::HyperbolicBall;
  m.dim_ = n;
  m.param_ = scale;
  return m;
}

ChartedMetric ChartedMetric::product(const ChartedMetric& left, const ChartedMetric& right) {
  ChartedMetric m;
  m.kind_ = ModelKind::Product;
  m.dim_ = left.dim() + right.dim();
  m.mode_ = (left.mode_ == DerivativeMode::FiniteDifference || right.mode_ == DerivativeMode::FiniteDifference)
                ? DerivativeMode::FiniteDifference
                : DerivativeMode::Analytic;
  m.left_ = std::make_shared<const ChartedMetric>(left.with_derivative_mode(m.mode_));
  m.right_ = std::make_shared<const ChartedMetric>(right.with_derivative_mode(m.mode_));
  return m;
}

ChartedMetric ChartedMetric::with_derivative_mode(DerivativeMode mode) const {
  ChartedMetric m = *this;
  m.mode_ = mode;
  if (kind_ == ModelKind::Product) {
    m.left_ = std::make_shared<const ChartedMetric>(left_->with_derivative_mode(mode));
    m.right_ = std::make_shared<const ChartedMetric>(right_->with_derivative_mode(mode));
  }
  return m;
}

ChartedMetric ChartedMetric::parse(const std::string& raw) {
  std::string d = trim(raw);
  bool fd = false;
  if (d.size() > 3 && d.compare(d.size() - 3, 3, "+fd") == 0) {
    fd = true;
    d = trim(d.substr(0, d.size() - 3));
  }
  auto finish = [fd](ChartedMetric m) {
    return fd ? m.with_derivative_mode(DerivativeMode::FiniteDifference) : m;
  };
  if (d.rfind("product(", 0) == 0 && d.back() == ')') {
    const std::string inner = d.substr(8, d.size() - 9);
    int depth = 0;
    for (std::size_t i = 0; i < inner.size(); ++i) {
      if (inner[i] == '(') ++depth;
      if (inner[i] == ')') --depth;
      if (inner[i] == ',' && depth == 0)
        return finish(product(parse(inner.substr(0, i)), parse(inner.substr(i + 1))));
    }
    throw GeometryError(ErrorKind::ConfigError, "product descriptor needs two factors: " + raw);
  }
  std::vector<std::string> parts;
  std::stringstream ss(d);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(trim(item));
  if (parts.size() < 2 || parts.size() > 3)
    throw GeometryError(ErrorKind::ConfigError, "malformed model descriptor: " + raw);
  int n = 0;
  double p = 1.0;
  try {
    n = std::stoi(parts[1]);
    if (parts.size() == 3) p = std::stod(parts[2]);
  } catch (const std::exception&) {
    throw GeometryError(ErrorKind::ConfigError, "malformed model descriptor: " + raw);
  }
  if (parts[0] == "euclidean" || parts[0] == "flat") return finish(euclidean(n));
  if (parts[0] == "sphere") return finish(sphere(n, p));
  if (parts[0] == "hyperbolic") return finish(hyperbolic(n, p));
  throw GeometryError(ErrorKind::ConfigError, "unknown model kind: " + parts[0]);
}

std::string ChartedMetric::descriptor() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case ModelKind::Euclidean: os << "euclidean:" << dim_; break;
    case ModelKind::SpherePolar: os << "sphere:" << dim_ << ":" << param_; break;
    case ModelKind::HyperbolicBall: os << "hyperbolic:" << dim_ << ":" << param_; break;
    case ModelKind::Product: {
      // Factors inherit the mode; print them without the suffix.
      os << "product(" << left_->with_derivative_mode(DerivativeMode::Analytic).descriptor() << ","
         << right_->with_derivative_mode(DerivativeMode::Analytic).descriptor() << ")";
      break;
    }
  }
  if (mode_ == DerivativeMode::FiniteDifference) os << "+fd";
  return os.str();
}

bool ChartedMetric::contains(const Vec& x) const {
  if (x.size() != dim_ || !x.allFinite()) return false;
  switch (kind_) {
    case ModelKind::Euclidean: return true;
    case ModelKind::SpherePolar:
      for (int i = 0; i + 1 < dim_; ++i)
        if (!(x[i] > 0.0 && x[i] < kPi)) return false;
      return x[dim_ - 1] > -kPi && x[dim_ - 1] < kPi;
    case ModelKind::HyperbolicBall: return param_ * x.norm() < 1.0;
    case ModelKind::Product:
      return left_->contains(x.head(left_->dim())) && right_->contains(x.tail(right_->dim()));
  }
  return false;
}

void ChartedMetric::require_in_domain(const Vec& x) const {
  if (!contains(x)) {
    std::ostringstream os;
    os << "point (" << x.transpose() << ") outside chart " << descriptor();
    throw GeometryError(ErrorKind::OutOfDomain, os.str());
  }
}

Mat ChartedMetric::metric(const Vec& x) const {
  const int n = dim_;
  switch (kind_) {
    case ModelKind::Euclidean: return Mat::Identity(n, n);
    case ModelKind::SpherePolar: {
      Mat g = Mat::Zero(n, n);
      double p = param_ * param_;
      for (int i = 0; i < n; ++i) {
        g(i, i) = p;
        const double s = std::sin(x[i]);
        p *= s * s;
      }
      return g;
    }
    case ModelKind::HyperbolicBall: {
      const double phi = 2.0 / (1.0 - param_ * param_ * x.squaredNorm());
      return phi * phi * Mat::Identity(n, n);
    }
    case ModelKind::Product: {
      const int a = left_->dim();
      Mat g = Mat::Zero(n, n);
      g.topLeftCorner(a, a) = left_->metric(x.head(a));
      g.bottomRightCorner(n - a, n - a) = right_->metric(x.tail(n - a));
      return g;
    }
  }
  return {};
}

Tensor3 ChartedMetric::analytic_first(const Vec& x) const {
  const int n = dim_;
  Tensor3 d(n);
  switch (kind_) {
    case ModelKind::Euclidean: break;
    case ModelKind::SpherePolar: {
      // g_ii = a² Π_{j<i} sin²θ_j
      const double a2 = param_ * param_;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < i; ++k) {
          double p = a2 * 2.0 * std::sin(x[k]) * std::cos(x[k]);
          for (int j = 0; j < i; ++j)
            if (j != k) p *= std::sin(x[j]) * std::sin(x[j]);
          d(k, i, i) = p;
        }
      break;
    }
    case ModelKind::HyperbolicBall: {
      const double s2 = param_ * param_;
      const double q = 1.0 - s2 * x.squaredNorm();
      for (int k = 0; k < n; ++k) {
        const double v = 16.0 * s2 * x[k] / (q * q * q);
        for (int i = 0; i < n; ++i) d(k, i, i) = v;
      }
      break;
    }
    case ModelKind::Product: {
      const int a = left_->dim();
      const Tensor3 l = left_->analytic_first(x.head(a));
      const Tensor3 r = right_->analytic_first(x.tail(n - a));
      for (int k = 0; k < a; ++k)
        for (int i = 0; i < a; ++i)
          for (int j = 0; j < a; ++j) d(k, i, j) = l(k, i, j);
      for (int k = 0; k < n - a; ++k)
        for (int i = 0; i < n - a; ++i)
          for (int j = 0; j < n - a; ++j) d(a + k, a + i, a + j) = r(k, i, j);
      break;
    }
  }
  return d;
}

Tensor4 ChartedMetric::analytic_second(const Vec& x) const {
  const int n = dim_;
  Tensor4 h(n);
  switch (kind_) {
    case ModelKind::Euclidean: break;
    case ModelKind::SpherePolar: {
      const double a2 = param_ * param_;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < i; ++k)
          for (int l = 0; l < i; ++l) {
            double p = a2;
            if (k == l) {
              p *= 2.0 * std::cos(2.0 * x[k]);
            } else {
              p *= 4.0 * std::sin(x[k]) * std::cos(x[k]) * std::sin(x[l]) * std::cos(x[l]);
            }
            for (int j = 0; j < i; ++j)
              if (j != k && j != l) p *= std::sin(x[j]) * std::sin(x[j]);
            h(k, l, i, i) = p;
          }
      break;
    }
    case ModelKind::HyperbolicBall: {
      const double s2 = param_ * param_;
      const double q = 1.0 - s2 * x.squaredNorm();
      const double q3 = q * q * q;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double v = 16.0 * s2 * ((k == l ? 1.0 : 0.0) / q3 + 6.0 * s2 * x[k] * x[l] / (q3 * q));
          for (int i = 0; i < n; ++i) h(k, l, i, i) = v;
        }
      break;
    }
    case ModelKind::Product: {
      const int a = left_->dim();
      const Tensor4 l = left_->analytic_second(x.head(a));
      const Tensor4 r = right_->analytic_second(x.tail(n - a));
      for (int k = 0; k < a; ++k)
        for (int m = 0; m < a; ++m)
          for (int i = 0; i < a; ++i)
            for (int j = 0; j < a; ++j) h(k, m, i, j) = l(k, m, i, j);
      for (int k = 0; k < n - a; ++k)
        for (int m = 0; m < n - a; ++m)
          for (int i = 0; i < n - a; ++i)
            for (int j = 0; j < n - a; ++j) h(a + k, a + m, a + i, a + j) = r(k, m, i, j);
      break;
    }
  }
  return h;
}

Tensor3 ChartedMetric::metric_derivative(const Vec& x) const {
  if (mode_ == DerivativeMode::Analytic) return analytic_first(x);
  const int n = dim_;
  const double h = fd_step(x, 1e-5);
  Tensor3 d(n);
  for (int k = 0; k < n; ++k) {
    Vec xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    const Mat dg = (metric(xp) - metric(xm)) / (2.0 * h);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d(k, i, j) = dg(i, j);
  }
  return d;
}

Tensor4 ChartedMetric::metric_second_derivative(const Vec& x) const {
  if (mode_ == DerivativeMode::Analytic) return analytic_second(x);
  const int n = dim_;
  // Second differences use a wider step than first differences to keep the
  // rounding term eps/h² well below the truncation term.
  const double h = fd_step(x, 1e-4);
  const Mat g0 = metric(x);
  Tensor4 out(n);
  for (int k = 0; k < n; ++k)
    for (int l = k; l < n; ++l) {
      Mat d2;
      if (k == l) {
        Vec xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        d2 = (metric(xp) - 2.0 * g0 + metric(xm)) / (h * h);
      } else {
        Vec pp = x, pm = x, mp = x, mm = x;
        pp[k] += h; pp[l] += h;
        pm[k] += h; pm[l] -= h;
        mp[k] -= h; mp[l] += h;
        mm[k] -= h; mm[l] -= h;
        d2 = (metric(pp) - metric(pm) - metric(mp) + metric(mm)) / (4.0 * h * h);
      }
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          out(k, l, i, j) = d2(i, j);
          out(l, k, i, j) = d2(i, j);
        }
    }
  return out;
}

std::optional<double> ChartedMetric::constant_curvature() const {
  switch (kind_) {
    case ModelKind::Euclidean: return 0.0;
    case ModelKind::SpherePolar: return dim_ >= 2 ? std::optional<double>(1.0 / (param_ * param_)) : 0.0;
    case ModelKind::HyperbolicBall: return dim_ >= 2 ? std::optional<double>(-param_ * param_) : 0.0;
    case ModelKind::Product: {
      // A product of flat factors is flat; anything else mixes curvatures.
      const auto l = left_->constant_curvature();
      const auto r = right_->constant_curvature();
      if (l && r && *l == 0.0 && *r == 0.0) return 0.0;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

bool ChartedMetric::nonpositively_curved() const {
  switch (kind_) {
    case ModelKind::Euclidean: return true;
    case ModelKind::SpherePolar: return dim_ == 1;
    case ModelKind::HyperbolicBall: return true;
    case ModelKind::Product: return left_->nonpositively_curved() && right_->nonpositively_curved();
  }
  return false;
}

MetricValue metric_at(const ChartedMetric& m, const Vec& x) {
  m.require_in_domain(x);
  MetricValue out;
  out.g = m.metric(x);
  out.det = out.g.determinant();
  return out;
}

Tensor3 christoffel(const ChartedMetric& m, const Vec& x) {
  m.require_in_domain(x);
  const int n = m.dim();
  const Mat ginv = m.metric(x).inverse();
  const Tensor3 d = m.metric_derivative(x);
  Tensor3 gamma(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += ginv(k, l) * (d(i, l, j) + d(j, l, i) - d(l, i, j));
        gamma(k, i, j) = 0.5 * s;
        gamma(k, j, i) = 0.5 * s;
      }
  return gamma;
}

double curvature_symmetry_residual(const Tensor4& R) {
  const int n = R.extent();
  double res = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double v = R(i, j, k, l);
          res = std::max(res, std::abs(v + R(j, i, k, l)));
          res = std::max(res, std::abs(v + R(i, j, l, k)));
          res = std::max(res, std::abs(v - R(k, l, i, j)));
          res = std::max(res, std::abs(v + R(i, k, l, j) + R(i, l, j, k)));
        }
  return res;
}

CurvatureData curvature_at(const ChartedMetric& m, const Vec& x) {
  m.require_in_domain(x);
  const int n = m.dim();
  CurvatureData c;
  c.point = x;
  c.metric = m.metric(x);
  c.det_g = c.metric.determinant();
  const Mat ginv = c.metric.inverse();
  const Tensor3 gamma = christoffel(m, x);
  const Tensor4 h = m.metric_second_derivative(x);

  c.riemann = Tensor4(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int p = 0; p < n; ++p) {
          double v = 0.5 * (h(k, l, i, p) + h(i, p, k, l) - h(k, p, i, l) - h(i, l, k, p));
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              v += c.metric(a, b) * (gamma(a, k, l) * gamma(b, i, p) - gamma(a, k, p) * gamma(b, i, l));
          c.riemann(i, k, l, p) = v;
        }

  if (m.derivative_mode() == DerivativeMode::FiniteDifference) {
    const double scale = std::max(1.0, c.riemann.max_abs());
    const double res = curvature_symmetry_residual(c.riemann);
    if (res > 1e-5 * scale)
      throw GeometryError(ErrorKind::NumericalBreakdown,
                          "finite-difference curvature symmetry residual " + std::to_string(res));
  }

  c.ricci = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) s += ginv(i, k) * c.riemann(i, j, k, l);
      c.ricci(j, l) = s;
    }
  c.scalar = (ginv.cwiseProduct(c.ricci)).sum();
  return c;
}

Mat orthonormal_frame(const Mat& g) {
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success)
    throw GeometryError(ErrorKind::NumericalBreakdown, "metric is not positive definite");
  const Mat L = llt.matrixL();
  return L.transpose().triangularView<Eigen::Upper>().solve(Mat::Identity(g.rows(), g.cols()));
}

CurvatureNorms curvature_norms(const CurvatureData& c) {
  const Mat frame = orthonormal_frame(c.metric);
  const Tensor4 r = c.riemann.in_frame(frame);
  const Mat ric = frame.transpose() * c.ricci * frame;
  const int n = r.extent();
  CurvatureNorms out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) out.riemann_sq += r(i, j, k, l) * r(i, j, k, l);
  out.ricci_sq = ric.squaredNorm();
  out.scalar_sq = c.scalar * c.scalar;
  return out;
}

}  // namespace gbs
