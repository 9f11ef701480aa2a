#pragma once

#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace gbs {

using Rational = boost::multiprecision::cpp_rational;

// Exact value of a decimal ("-0.125", "3e-2") or fraction ("7/3") literal.
Rational parse_rational(const std::string& text);
// Exact value of a double (every finite double is a dyadic rational).
Rational to_rational(double x);
double to_double(const Rational& q);

struct AbstractSimplex {
  std::string id;
  std::vector<std::string> labels;  // ordered, distinct

  int dim() const { return static_cast<int>(labels.size()) - 1; }
};

// Builds a simplex whose id is derived from its ordered labels.
AbstractSimplex simplex_from_labels(std::vector<std::string> labels);

struct ChainTerm {
  Rational coefficient;
  AbstractSimplex simplex;
};

/// Formal rational combination of abstract simplices.
class SingularChain {
 public:
  SingularChain() = default;

  void add(const Rational& coefficient, const AbstractSimplex& simplex);
  const std::vector<ChainTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  // Merges terms with equal ids and drops zero coefficients. Terms keep the
  // order in which their ids first appeared.
  SingularChain normalized() const;

  // Identifies simplices with the same label set: each is rewritten with its
  // labels sorted, the coefficient picking up the permutation sign, then
  // merged. Used by the boundary operator.
  SingularChain merged_by_labels() const;

 private:
  std::vector<ChainTerm> terms_;
};

SingularChain boundary(const SingularChain& c);
Rational l1_norm(const SingularChain& c);

/// Face bookkeeping of a chain: distinct codimension-1 faces τ_j (stored
/// with sorted labels), the incidence signs ε_{ji} of τ_j in ∂σ_i, and
/// b_j = Σ_i ε_{ji} a_i. The chain is a cycle iff every b_j vanishes.
struct FaceIncidence {
  std::vector<AbstractSimplex> distinct_faces;
  std::vector<std::vector<int>> epsilon;  // [j][i]
  std::vector<Rational> b;
};

FaceIncidence face_incidence(const SingularChain& c);

// Sign of the permutation sorting the labels; 0 if a label repeats.
int permutation_sign(const std::vector<std::string>& labels);

struct BudgetRecord {
  double vertex_term = 0.0;
  double edge_term = 0.0;
  double two_face_term = 0.0;
  double bound_constant = 0.0;
};

struct ChiBound {
  Rational chi_abs_upper;    // Σ |a_i| (1 + vertex_term_i + two_face_term_i)
  Rational eleven_times_l1;  // 11 Σ |a_i|
  bool within_bound = true;  // chi_abs_upper ≤ 11 ‖c‖ + ε
};

/// Chain-level assembly of the per-simplex budgets. Budget terms are taken
/// as the exact rationals of their double values.
ChiBound chi_bound(const SingularChain& chain, const std::map<std::string, BudgetRecord>& budgets,
                   double epsilon = 1e-3);

/// Plain-text chains: one simplex per line, "<coefficient> <id> <label>...",
/// blank lines and '#' comments ignored.
SingularChain parse_chain(const std::string& text);

std::string to_string(const Rational& q);

}  // namespace gbs
