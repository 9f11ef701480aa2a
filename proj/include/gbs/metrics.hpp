#pragma once

#include <memory>
#include <optional>
#include <string>

#include "gbs/errors.hpp"
#include "gbs/tensor.hpp"

namespace gbs {

enum class ModelKind { Euclidean, SpherePolar, HyperbolicBall, Product };

// How metric derivatives (and hence Christoffel symbols and curvature) are
// obtained. Geodesics follow the same switch: Analytic charts use closed-form
// exp/log, FiniteDifference charts integrate the geodesic ODE and shoot.
enum class DerivativeMode { Analytic, FiniteDifference };

/// A coordinate chart on one of the model spaces.
///
///  - Euclidean(n): Cartesian coordinates, g = I.
///  - SpherePolar(n, a): hyperspherical angles (θ_1..θ_n) on the sphere of
///    radius a; θ_i ∈ (0, π) for i < n and θ_n ∈ (−π, π).
///  - HyperbolicBall(n, s): Poincaré ball of radius 1/s, sectional curvature −s².
///  - Product(A, B): block-diagonal metric on A × B.
class ChartedMetric {
 public:
  static ChartedMetric euclidean(int n);
  static ChartedMetric sphere(int n, double radius = 1.0);
  static ChartedMetric hyperbolic(int n, double scale = 1.0);
  static ChartedMetric product(const ChartedMetric& left, const ChartedMetric& right);

  // Descriptor grammar: "euclidean:N", "sphere:N[:radius]",
  // "hyperbolic:N[:scale]", "product(A,B)"; a trailing "+fd" selects
  // finite-difference derivatives and numerical geodesics.
  static ChartedMetric parse(const std::string& descriptor);
  std::string descriptor() const;

  ChartedMetric with_derivative_mode(DerivativeMode mode) const;

  int dim() const { return dim_; }
  ModelKind kind() const { return kind_; }
  DerivativeMode derivative_mode() const { return mode_; }
  // Radius for SpherePolar, curvature scale for HyperbolicBall, 0 otherwise.
  double parameter() const { return param_; }
  const ChartedMetric& left() const { return *left_; }
  const ChartedMetric& right() const { return *right_; }

  bool contains(const Vec& x) const;
  void require_in_domain(const Vec& x) const;

  // Raw fields; no domain check.
  Mat metric(const Vec& x) const;
  Tensor3 metric_derivative(const Vec& x) const;          // (k,i,j) -> ∂_k g_ij
  Tensor4 metric_second_derivative(const Vec& x) const;   // (k,l,i,j) -> ∂_k∂_l g_ij

  // Sectional curvature when it is constant (Euclidean, sphere, hyperbolic).
  std::optional<double> constant_curvature() const;
  bool nonpositively_curved() const;

 private:
  ChartedMetric() = default;

  Tensor3 analytic_first(const Vec& x) const;
  Tensor4 analytic_second(const Vec& x) const;

  ModelKind kind_ = ModelKind::Euclidean;
  DerivativeMode mode_ = DerivativeMode::Analytic;
  int dim_ = 0;
  double param_ = 0.0;
  std::shared_ptr<const ChartedMetric> left_;
  std::shared_ptr<const ChartedMetric> right_;
};

struct MetricValue {
  Mat g;
  double det = 0.0;
};

/// Riemann data at a point. The sign convention makes the unit sphere have
/// R_{1212} = g_11 g_22 − g_12² (sectional curvature +1).
struct CurvatureData {
  Vec point;
  Tensor4 riemann;
  Mat ricci;
  double scalar = 0.0;
  Mat metric;
  double det_g = 0.0;
};

struct CurvatureNorms {
  double riemann_sq = 0.0;  // R_ijkl R^ijkl, all index tuples summed
  double ricci_sq = 0.0;    // R_ij R^ij
  double scalar_sq = 0.0;   // R²
};

MetricValue metric_at(const ChartedMetric& m, const Vec& x);
Tensor3 christoffel(const ChartedMetric& m, const Vec& x);
CurvatureData curvature_at(const ChartedMetric& m, const Vec& x);
CurvatureNorms curvature_norms(const CurvatureData& c);

// Largest violation of the pair symmetries and the first Bianchi identity.
double curvature_symmetry_residual(const Tensor4& riemann);

// Columns form a g-orthonormal basis of the tangent space at x (upper
// triangular factor of the Cholesky decomposition of g).
Mat orthonormal_frame(const Mat& g);

}  // namespace gbs
