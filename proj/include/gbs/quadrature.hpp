#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "gbs/simplices.hpp"

namespace gbs {

enum class QuadMethod { SimplexRule, TensorDuffy, MonteCarloCone, CircleArc, SinglePoint };

const char* to_string(QuadMethod m);

struct QuadResult {
  double value = 0.0;
  // Monte Carlo standard error, or |Q(order) − Q(lower order)| for
  // deterministic rules.
  double std_error = 0.0;
  long n_evals = 0;
  QuadMethod method = QuadMethod::SimplexRule;
  bool empty_cone = false;
};

/// Integrand value with the variance of its own (inner) estimate.
struct Sample {
  double value = 0.0;
  double variance = 0.0;
};

// Gauss–Legendre nodes and weights on [0, 1].
std::vector<std::pair<double, double>> gauss_legendre01(int n);

struct SimplexRulePoint {
  Vec barycentric;
  double weight;  // weights sum to 1/r!, the volume of Δ^r in (c_1..c_r)
};

/// Grundmann–Möller symmetric rule on Δ^r, exact for polynomials of degree 2s+1.
std::vector<SimplexRulePoint> grundmann_moller(int r, int s);

/// Conical-product (Duffy) rule on Δ^r with `order` Gauss points per axis,
/// collapsing towards the last vertex like the coning recursion.
std::vector<SimplexRulePoint> conical_product_rule(int r, int order);

/// ∫_{Δ^r} f(c) dc over barycentric points c, Lebesgue measure in (c_1..c_r).
/// SimplexRule uses Grundmann–Möller of degree 2⌊order/2⌋+1; TensorDuffy uses
/// the conical product rule with `order` points per axis.
QuadResult integrate_simplex(const std::function<double(const Vec&)>& f, int r, int order,
                             QuadMethod method = QuadMethod::SimplexRule);

/// ∫_{[0,1]^r} f(y) dy in conical coordinates (the integrand supplies its own
/// volume element). Samples carrying a variance are combined as independent
/// estimates; deterministic integrands get a lower-order error estimate.
QuadResult integrate_conical(const std::function<Sample(const Vec&)>& f, int r, int order);

struct ConeBudget {
  long mc_samples = 200000;
  int arc_points = 64;
  std::uint64_t seed = 0;
  std::uint64_t task = 0;
};

/// ∫_{N(x)*} ψ(ξ) dξ with ξ in normal-basis coordinates and the unnormalized
/// spherical measure on S^{codim−1}.
QuadResult integrate_dual_cone(const std::function<double(const Vec&)>& psi, const NormalConeSample& cone,
                               const ConeBudget& budget);

/// ∫_{S^{codim−1}} ψ(ξ) dξ.
QuadResult integrate_normal_sphere(const std::function<double(const Vec&)>& psi, int codim,
                                   const ConeBudget& budget);

// Independent generator for a (seed, task) pair.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t task);

}  // namespace gbs
