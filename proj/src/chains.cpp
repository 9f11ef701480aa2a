#include "gbs/chains.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

#include "gbs/errors.hpp"

namespace gbs {

using boost::multiprecision::cpp_int;

namespace {

cpp_int pow10(long e) {
  cpp_int p = 1;
  for (long i = 0; i < e; ++i) p *= 10;
  return p;
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isdigit(ch); });
}

[[noreturn]] void bad_number(const std::string& text) {
  throw GeometryError(ErrorKind::ConfigError, "not an exact number: '" + text + "'");
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); }), s.end());
  if (s.empty()) bad_number(text);
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const Rational num = parse_rational(s.substr(0, slash));
    const Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) bad_number(text);
    return num / den;
  }
  bool negative = false;
  if (s[0] == '+' || s[0] == '-') {
    negative = s[0] == '-';
    s = s.substr(1);
  }
  long exponent = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string::npos) {
    std::string es = s.substr(e + 1);
    s = s.substr(0, e);
    bool eneg = false;
    if (!es.empty() && (es[0] == '+' || es[0] == '-')) {
      eneg = es[0] == '-';
      es = es.substr(1);
    }
    if (!all_digits(es) || es.size() > 6) bad_number(text);
    exponent = std::stol(es) * (eneg ? -1 : 1);
  }
  std::string int_part = s, frac_part;
  if (const auto dot = s.find('.'); dot != std::string::npos) {
    int_part = s.substr(0, dot);
    frac_part = s.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) bad_number(text);
  if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)))
    bad_number(text);
  const cpp_int mantissa(int_part + frac_part == "" ? std::string("0") : int_part + frac_part);
  exponent -= static_cast<long>(frac_part.size());
  Rational q = exponent >= 0 ? Rational(mantissa * pow10(exponent)) : Rational(mantissa, pow10(-exponent));
  return negative ? Rational(-q) : q;
}

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw GeometryError(ErrorKind::NumericalBreakdown, "non-finite value in exact arithmetic");
  return Rational(x);
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::string to_string(const Rational& q) { return q.str(); }

AbstractSimplex simplex_from_labels(std::vector<std::string> labels) {
  std::string id = "[";
  for (std::size_t i = 0; i < labels.size(); ++i) id += (i ? "," : "") + labels[i];
  id += "]";
  return {id, std::move(labels)};
}

int permutation_sign(const std::vector<std::string>& labels) {
  int sign = 1;
  for (std::size_t a = 0; a < labels.size(); ++a)
    for (std::size_t b = a + 1; b < labels.size(); ++b) {
      if (labels[a] == labels[b]) return 0;
      if (labels[b] < labels[a]) sign = -sign;
    }
  return sign;
}

void SingularChain::add(const Rational& coefficient, const AbstractSimplex& simplex) {
  if (permutation_sign(simplex.labels) == 0)
    throw GeometryError(ErrorKind::ConfigError, "simplex " + simplex.id + " repeats a vertex label");
  terms_.push_back({coefficient, simplex});
}

SingularChain SingularChain::normalized() const {
  std::unordered_map<std::string, std::size_t> slot;
  std::vector<ChainTerm> merged;
  for (const auto& t : terms_) {
    const auto [it, fresh] = slot.emplace(t.simplex.id, merged.size());
    if (fresh) {
      merged.push_back(t);
    } else {
      auto& m = merged[it->second];
      if (m.simplex.labels != t.simplex.labels)
        throw GeometryError(ErrorKind::ConfigError, "simplex id " + t.simplex.id + " used with different labels");
      m.coefficient += t.coefficient;
    }
  }
  SingularChain out;
  for (auto& t : merged)
    if (t.coefficient != 0) out.terms_.push_back(std::move(t));
  return out;
}

SingularChain SingularChain::merged_by_labels() const {
  SingularChain canonical;
  for (const auto& t : terms_) {
    auto labels = t.simplex.labels;
    const int sign = permutation_sign(labels);
    std::sort(labels.begin(), labels.end());
    canonical.terms_.push_back({sign * t.coefficient, simplex_from_labels(std::move(labels))});
  }
  return canonical.normalized();
}

SingularChain boundary(const SingularChain& c) {
  SingularChain faces;
  const SingularChain normal = c.normalized();
  for (const auto& t : normal.terms()) {
    const auto& l = t.simplex.labels;
    if (l.size() < 2) continue;
    for (std::size_t i = 0; i < l.size(); ++i) {
      std::vector<std::string> face;
      for (std::size_t j = 0; j < l.size(); ++j)
        if (j != i) face.push_back(l[j]);
      faces.add(i % 2 == 0 ? t.coefficient : Rational(-t.coefficient), simplex_from_labels(std::move(face)));
    }
  }
  return faces.merged_by_labels();
}

Rational l1_norm(const SingularChain& c) {
  Rational total = 0;
  const SingularChain normal = c.normalized();
  for (const auto& t : normal.terms()) total += abs(t.coefficient);
  return total;
}

FaceIncidence face_incidence(const SingularChain& c) {
  const SingularChain chain = c.normalized();
  const auto& terms = chain.terms();
  FaceIncidence out;
  std::map<std::vector<std::string>, std::size_t> index;
  // incidence[j] maps simplex index -> sign
  std::vector<std::map<std::size_t, int>> incidence;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& l = terms[i].simplex.labels;
    if (l.size() < 2) continue;
    for (std::size_t k = 0; k < l.size(); ++k) {
      std::vector<std::string> face;
      for (std::size_t j = 0; j < l.size(); ++j)
        if (j != k) face.push_back(l[j]);
      // The k-th face carries (−1)^k; it agrees with the chosen orientation
      // of τ_j when the labels are an even permutation of the sorted ones.
      const int sign = (k % 2 == 0 ? 1 : -1) * permutation_sign(face);
      std::sort(face.begin(), face.end());
      const auto [it, fresh] = index.emplace(face, out.distinct_faces.size());
      if (fresh) {
        out.distinct_faces.push_back(simplex_from_labels(face));
        incidence.emplace_back();
      }
      incidence[it->second][i] += sign;
    }
  }
  out.epsilon.assign(out.distinct_faces.size(), std::vector<int>(terms.size(), 0));
  out.b.assign(out.distinct_faces.size(), Rational(0));
  for (std::size_t j = 0; j < incidence.size(); ++j)
    for (const auto& [i, sign] : incidence[j]) {
      out.epsilon[j][i] = sign;
      out.b[j] += sign * terms[i].coefficient;
    }
  return out;
}

ChiBound chi_bound(const SingularChain& chain, const std::map<std::string, BudgetRecord>& budgets, double epsilon) {
  ChiBound out;
  Rational l1 = 0;
  const SingularChain normal = chain.normalized();
  for (const auto& t : normal.terms()) {
    const auto it = budgets.find(t.simplex.id);
    if (it == budgets.end()) throw GeometryError(ErrorKind::MissingBudget, "no budget for simplex " + t.simplex.id);
    const Rational per_simplex = 1 + to_rational(it->second.vertex_term) + to_rational(it->second.two_face_term);
    out.chi_abs_upper += abs(t.coefficient) * per_simplex;
    l1 += abs(t.coefficient);
  }
  out.eleven_times_l1 = 11 * l1;
  out.within_bound = out.chi_abs_upper <= out.eleven_times_l1 + to_rational(epsilon);
  return out;
}

SingularChain parse_chain(const std::string& text) {
  SingularChain chain;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string coef, id, label;
    if (!(fields >> coef)) continue;
    if (!(fields >> id)) throw GeometryError(ErrorKind::ConfigError, "chain line " + std::to_string(line_no) + ": missing id");
    std::vector<std::string> labels;
    while (fields >> label) labels.push_back(label);
    if (labels.empty())
      throw GeometryError(ErrorKind::ConfigError, "chain line " + std::to_string(line_no) + ": no vertex labels");
    chain.add(parse_rational(coef), {id, labels});
  }
  return chain;
}

}  // namespace gbs
