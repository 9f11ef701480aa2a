#pragma once

#include <random>
#include <vector>

#include "gbs/metrics.hpp"

namespace gbs {

/// Surface area ω_n of the unit n-sphere, 2·(4π)^{n/2}·Γ(n/2+1)/n!.
double sphere_area(int n);

/// Face data in an orthonormal frame: curvature restricted to the face
/// (r-extent, all indices lowered) and the second fundamental form for each
/// normal basis vector, so Λ(ξ) = Σ_a ξ_a lambda_basis[a].
struct FrameData {
  Tensor4 riemann;
  std::vector<Mat> lambda_basis;
  double gamma = 1.0;  // induced metric determinant (1 in an orthonormal frame)

  int face_dim() const { return riemann.extent(); }
  Mat lambda(const Vec& xi) const;
};

/// Intrinsic integrand Ψ_n from the fully lowered curvature tensor in any
/// frame and the metric determinant in that frame. Zero for odd n.
double psi_intrinsic(const Tensor4& riemann, double det_g);
double psi_intrinsic(const CurvatureData& c);

/// Ψ_{r,f}(x, ξ) as a signed double sum over S_r × S_r of f curvature
/// factors and r−2f second-fundamental-form factors. Requires 0 ≤ 2f ≤ r < n.
double psi_extrinsic_rf(const Tensor4& riemann, const Mat& lambda, double gamma, int r, int f, int n);
double psi_extrinsic_rf(const FrameData& fd, const Vec& xi, int r, int f, int n);

/// Ψ_r(x, ξ) = Σ_{0 ≤ 2f ≤ r} Ψ_{r,f}(x, ξ).
double psi_extrinsic(const Tensor4& riemann, const Mat& lambda, double gamma, int r, int n);
double psi_extrinsic(const FrameData& fd, const Vec& xi, int r, int n);

/// Inputs for the displayed four-dimensional formulas.
struct ClosedFormInputs {
  Tensor4 riemann;  // face-restricted, r-extent (r = 2, 3)
  Mat lambda;       // r × r
  double gamma = 1.0;
  CurvatureNorms norms;  // r = 4
};

/// Direct evaluation of the n = 4 closed forms for r ∈ {0,1,2,3,4}.
double psi_closed_form_4d(int r, const ClosedFormInputs& in);

// Random algebraic curvature tensor (all pair symmetries and first Bianchi)
// built from Kulkarni–Nomizu products of random symmetric matrices.
Tensor4 random_curvature_tensor(int dim, std::mt19937_64& rng, int terms = 3);
Mat random_symmetric(int dim, std::mt19937_64& rng);

}  // namespace gbs
