#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gbs/integrands.hpp"
#include "gbs/quadrature.hpp"
#include "gbs/simplices.hpp"

namespace gbs {

struct Budgets {
  int order = 8;               // Gauss points per axis of the conical product rule
  long mc_samples = 200000;    // Monte Carlo samples per cone evaluation
  int arc_points = 64;         // Gauss points on dual-cone arcs
  ConeGenerators generators = ConeGenerators::AdjacentFaceTangent;
  unsigned threads = 0;        // 0: hardware concurrency
};

/// Share of one face in the degree of the Gauss map.
struct FaceContribution {
  int r = 0;
  std::vector<int> face;
  double value = 0.0;
  double std_error = 0.0;
  // Integrated Ψ_{r,f} terms indexed by f; for r = n a single intrinsic term.
  std::vector<double> breakdown;
  bool empty_cone = false;
  long n_evals = 0;
};

struct GBReport {
  int dim = 0;
  std::vector<double> strata;        // strata[r] = G(M[r])
  std::vector<double> strata_error;  // combined standard errors per stratum
  double total = 0.0;
  double residual = 0.0;  // total − 1
  double std_error = 0.0;
  std::vector<FaceContribution> faces;
};

FaceContribution face_contribution(const GeodesicSimplex& s, const Face& face, const Budgets& budgets,
                                   std::uint64_t seed);

GBReport verify_identity(const GeodesicSimplex& s, const Budgets& budgets, std::uint64_t seed);

struct AngleDefect {
  double curv_integral = 0.0;
  double curv_error = 0.0;
  std::vector<double> exterior_angles;
  double residual = 0.0;  // curv_integral + Σα − 2π
};

AngleDefect angle_defect_2d(const GeodesicSimplex& s, int order = 16);

// Interior angle at vertex i of a simplex, between the edges to j and k.
double vertex_angle(const GeodesicSimplex& s, int i, int j, int k);

struct EulerCheck {
  double psi4 = 0.0;
  double volume = 0.0;
  double chi_estimate = 0.0;
};

/// χ = Ψ_4 · volume for closed analytic cases: the round S⁴ of the chart's
/// radius, or a product of two closed constant-curvature surfaces. Surface
/// areas follow from the factor type: spheres 4πa², hyperbolic factors of
/// the given genus 4π(genus−1)/s², flat factors the given flat area.
EulerCheck euler_check_model(const ChartedMetric& m, int hyperbolic_genus = 2, double flat_area = 1.0);

struct TheoremBudget {
  double vertex_term = 0.0;
  double edge_term = 0.0;      // Σ over edges of |G(edge)|
  double two_face_term = 0.0;  // Σ over 2-faces of −G(face)
  std::vector<double> two_face_values;
  std::vector<double> two_face_caps;  // ∫(−K_face) dv / 2π over each 2-face
  double bound_constant = 0.0;        // 1 + vertex_term + two_face_term
  double vertex_error = 0.0;
  double edge_error = 0.0;
  double two_face_error = 0.0;
  double epsilon = 1e-3;
  bool within_ranges = false;
  std::vector<std::string> violations;
  GBReport report;
};

TheoremBudget theorem_budget(const GeodesicSimplex& s, const Budgets& budgets, std::uint64_t seed,
                             double epsilon = 1e-3);

/// Gaussian curvature of a 2-face at a point through the Gauss equation:
/// K = R(e1,e2,e1,e2) + Σ_a det Λ^a in an orthonormal frame.
double face_gauss_curvature(const GeodesicSimplex& s, const Face& face, const Vec& y,
                            LocalCoords coords = LocalCoords::Conical);

struct Jittered {
  std::vector<Vec> vertices;
  double magnitude = 0.0;
};

/// Moves each vertex by a uniform random offset of the given magnitude.
Jittered jitter(const std::vector<Vec>& vertices, double magnitude, std::uint64_t seed);

}  // namespace gbs
