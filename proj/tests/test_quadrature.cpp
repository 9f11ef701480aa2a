#include <cmath>
#include <random>

#include "doctest.h"
#include "gbs/quadrature.hpp"

using namespace gbs;

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// Exact ∫_Δ c^α = Π α_i! / (r + Σα)! on the standard simplex.
double monomial_integral(const std::vector<int>& alpha) {
  double num = 1.0;
  int total = 0;
  for (int a : alpha) {
    num *= factorial(a);
    total += a;
  }
  return num / factorial(static_cast<int>(alpha.size()) - 1 + total);
}

}  // namespace

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  const auto gl = gauss_legendre01(5);
  double w = 0.0, m9 = 0.0;
  for (const auto& [x, wt] : gl) {
    w += wt;
    m9 += wt * std::pow(x, 9);
  }
  CHECK(w == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m9 == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("Grundmann-Moller weights and monomials") {
  for (int r = 1; r <= 4; ++r) {
    const auto rule = grundmann_moller(r, 3);
    double w = 0.0;
    for (const auto& p : rule) w += p.weight;
    CHECK(w == doctest::Approx(1.0 / factorial(r)).epsilon(1e-13));
  }
  // Degree 2s+1 = 7 monomials on the 3-simplex, c = (c_0..c_3).
  const auto rule = grundmann_moller(3, 3);
  for (const std::vector<int>& alpha : {std::vector<int>{0, 2, 1, 3}, {1, 1, 1, 1}, {0, 0, 0, 7}}) {
    double acc = 0.0;
    for (const auto& p : rule) {
      double v = p.weight;
      for (int i = 0; i < 4; ++i) v *= std::pow(p.barycentric[i], alpha[i]);
      acc += v;
    }
    CHECK(acc == doctest::Approx(monomial_integral(alpha)).epsilon(1e-12));
  }
}

TEST_CASE("simplex volumes") {
  CHECK(integrate_simplex([](const Vec&) { return 1.0; }, 2, 4).value == doctest::Approx(0.5).epsilon(1e-14));
  for (auto method : {QuadMethod::SimplexRule, QuadMethod::TensorDuffy}) {
    const auto q = integrate_simplex([](const Vec&) { return 1.0; }, 4, 6, method);
    CHECK(q.value == doctest::Approx(1.0 / 24.0).epsilon(1e-13));
  }
  // Flat 4-simplex volume |det(p_i − p_0)|/4!.
  Mat e(4, 4);
  e << 1, 0.2, 0, 0.1, 0, 1, 0.3, 0, 0.1, 0, 2, 0.2, 0, 0.4, 0, 1.5;
  const auto q = integrate_simplex([&](const Vec&) { return std::abs(e.determinant()); }, 4, 3);
  CHECK(q.value == doctest::Approx(std::abs(e.determinant()) / 24.0).epsilon(1e-13));
}

TEST_CASE("hyperbolic triangle area equals the angle defect") {
  const auto m = ChartedMetric::hyperbolic(2);
  const std::vector<Vec> p{vec({0.0, 0.0}), vec({0.6, 0.0}), vec({0.0, 0.6})};
  const auto s = GeodesicSimplex::build(m, p);
  const Face f = make_face(2, {0, 1, 2});
  const auto q = integrate_conical(
      [&](const Vec& y) { return Sample{face_frame(s, f, y, LocalCoords::Conical).volume_element, 0.0}; }, 2, 24);
  // Angles: π/2 at the origin; by symmetry the others are equal.
  const double side = 2.0 * std::atanh(0.6);
  const double hyp = std::acosh(std::cosh(side) * std::cosh(side));
  const double other = std::asin(std::sinh(side) / std::sinh(hyp));
  CHECK(q.value == doctest::Approx(kPi - kPi / 2 - 2 * other).epsilon(1e-8));
}

TEST_CASE("normal circle and sphere rules") {
  const ConeBudget arc{0, 64, 1, 0};
  CHECK(integrate_normal_sphere([](const Vec&) { return 1.0; }, 2, arc).value ==
        doctest::Approx(2 * kPi).epsilon(1e-14));
  CHECK(std::abs(integrate_normal_sphere([](const Vec& xi) { return 3 * xi[0] - xi[1]; }, 2, arc).value) < 1e-13);
  CHECK(integrate_normal_sphere([](const Vec& xi) { return xi[0] * xi[0]; }, 2, arc).value ==
        doctest::Approx(kPi).epsilon(1e-13));
  const ConeBudget mc{200000, 64, 7, 0};
  const auto q = integrate_normal_sphere([](const Vec&) { return 1.0; }, 4, mc);
  CHECK(q.value == doctest::Approx(2 * kPi * kPi).epsilon(1e-12));
  const auto lin = integrate_normal_sphere([](const Vec& xi) { return xi[0]; }, 4, mc);
  CHECK(std::abs(lin.value) < 4 * lin.std_error);
  CHECK(lin.std_error > 0.0);
}

TEST_CASE("Monte Carlo error scales like one over root n") {
  auto err = [](long n) {
    return integrate_normal_sphere([](const Vec& xi) { return xi[0]; }, 3, {n, 64, 3, 0}).std_error;
  };
  const double ratio = err(10000) / err(160000);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("seeded results are reproducible and streams differ") {
  auto run = [](std::uint64_t seed, std::uint64_t task) {
    return integrate_normal_sphere([](const Vec& xi) { return xi[0] * xi[1] + xi[2]; }, 3, {5000, 64, seed, task})
        .value;
  };
  CHECK(run(5, 1) == run(5, 1));
  CHECK(run(5, 1) != run(5, 2));
  CHECK(run(5, 1) != run(6, 1));
  CHECK(stream_seed(1, 2) != stream_seed(2, 1));
}
