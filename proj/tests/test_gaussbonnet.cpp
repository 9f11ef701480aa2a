#include <cmath>
#include <random>

#include "doctest.h"
#include "gbs/gaussbonnet.hpp"

using namespace gbs;

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

std::vector<Vec> flat_corner(int n) {
  std::vector<Vec> v{Vec::Zero(n)};
  for (int i = 0; i < n; ++i) v.push_back(Vec::Unit(n, i));
  return v;
}

double ball_distance(const Vec& x, const Vec& y) {
  const double num = (x - y).squaredNorm();
  const double den = (1.0 - x.squaredNorm()) * (1.0 - y.squaredNorm());
  return std::acosh(1.0 + 2.0 * num / den);
}

// Angle opposite side c from the hyperbolic law of cosines.
double hyperbolic_angle(double a, double b, double c) {
  return std::acos((std::cosh(a) * std::cosh(b) - std::cosh(c)) / (std::sinh(a) * std::sinh(b)));
}

GeodesicSimplex h4_simplex() {
  return GeodesicSimplex::build(ChartedMetric::hyperbolic(4),
                                {vec({0.05, 0.0, 0.0, 0.0}), vec({0.35, 0.05, 0.0, 0.0}), vec({0.0, 0.3, 0.05, 0.0}),
                                 vec({0.0, 0.05, 0.3, 0.05}), vec({0.05, 0.0, 0.05, 0.3})});
}

Budgets cheap(long samples, int order = 4) {
  Budgets b;
  b.order = order;
  b.mc_samples = samples;
  b.threads = 1;
  return b;
}

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const GeometryError& e) {
    return e.kind();
  }
  FAIL("expected a GeometryError");
  return ErrorKind::ConfigError;
}

}  // namespace

TEST_CASE("flat triangles tile the circle") {
  const auto s = GeodesicSimplex::build(ChartedMetric::euclidean(2), {vec({0, 0}), vec({2, 0.3}), vec({0.4, 1})});
  const auto rep = verify_identity(s, cheap(1000), 1);
  CHECK(rep.strata[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(rep.strata[1]) < 1e-9);
  CHECK(std::abs(rep.strata[2]) < 1e-12);
  const auto ad = angle_defect_2d(s);
  CHECK(std::abs(ad.residual) < 1e-12);
  CHECK(std::abs(ad.curv_integral) < 1e-12);
}

TEST_CASE("flat tetrahedra and 4-simplices tile the sphere") {
  for (int n : {3, 4}) {
    const auto rep = verify_identity(GeodesicSimplex::build(ChartedMetric::euclidean(n), flat_corner(n)),
                                     cheap(20000), 2);
    CAPTURE(n);
    CHECK(std::abs(rep.residual) <= 3.0 * rep.std_error + 1e-12);
    for (int r = 1; r <= n; ++r) CHECK(std::abs(rep.strata[r]) < 1e-10);
  }
}

TEST_CASE("octant triangle on the unit sphere") {
  // Mutually orthogonal unit vectors around a centre on the chart's equator.
  const Eigen::Vector3d c = sphere_to_embedding(vec({kPi / 2, 0.0}));
  const Eigen::Vector3d a = c.unitOrthogonal(), b = c.cross(a);
  std::vector<Vec> verts;
  for (int i = 0; i < 3; ++i) {
    const double phi = 0.2 + 2 * kPi * i / 3;
    const Eigen::Vector3d p = c / std::sqrt(3.0) + std::sqrt(2.0 / 3.0) * (std::cos(phi) * a + std::sin(phi) * b);
    verts.push_back(sphere_from_embedding(Vec(p)));
  }
  const auto s = GeodesicSimplex::build(ChartedMetric::sphere(2), verts);
  const auto ad = angle_defect_2d(s, 32);
  CHECK(ad.curv_integral == doctest::Approx(kPi / 2).epsilon(1e-7));
  for (double a : ad.exterior_angles) CHECK(a == doctest::Approx(kPi / 2).epsilon(1e-7));
  const auto rep = verify_identity(s, cheap(1000, 16), 3);
  CHECK(rep.strata[0] == doctest::Approx(0.75).epsilon(1e-7));
  CHECK(std::abs(rep.residual) <= 1e-6);
}

TEST_CASE("simplices across the chart branch cut are rejected") {
  const auto m = ChartedMetric::sphere(2);
  CHECK(kind_of([&] { GeodesicSimplex::build(m, {vec({1.5, 3.0}), vec({1.6, -3.0}), vec({1.2, 2.9})}); }) ==
        ErrorKind::LeftChartDomain);
}

TEST_CASE("hyperbolic triangle interior term is minus area over 2 pi") {
  const std::vector<Vec> p{vec({0.1, 0.0}), vec({-0.3, 0.5}), vec({-0.2, -0.6})};
  const auto s = GeodesicSimplex::build(ChartedMetric::hyperbolic(2), p);
  const double a = ball_distance(p[1], p[2]), b = ball_distance(p[0], p[2]), c = ball_distance(p[0], p[1]);
  const double area = kPi - hyperbolic_angle(b, c, a) - hyperbolic_angle(a, c, b) - hyperbolic_angle(a, b, c);
  const auto interior = face_contribution(s, make_face(2, {0, 1, 2}), cheap(1000, 16), 4);
  CHECK(interior.value == doctest::Approx(-area / (2 * kPi)).epsilon(1e-8));
  CHECK(interior.value > -0.5);
  CHECK(interior.value < 0.0);
  CHECK(vertex_angle(s, 0, 1, 2) == doctest::Approx(hyperbolic_angle(b, c, a)).epsilon(1e-9));
}

TEST_CASE("hyperbolic 4-simplices have vanishing odd strata") {
  const auto s = h4_simplex();
  const auto b = cheap(4000);
  for (const auto& f : {make_face(4, {0, 1, 2, 3}), make_face(4, {1, 2, 3, 4})})
    CHECK(std::abs(face_contribution(s, f, b, 5).value) <= 1e-6);
  for (const auto& f : {make_face(4, {0, 1}), make_face(4, {2, 4})}) {
    const auto c = face_contribution(s, f, b, 5);
    CHECK(std::abs(c.value) <= 1e-6 + 3.0 * c.std_error);
  }
}

TEST_CASE("Euler characteristics of closed model cases") {
  CHECK(euler_check_model(ChartedMetric::sphere(4)).chi_estimate == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(euler_check_model(ChartedMetric::parse("sphere:4+fd")).chi_estimate == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(std::abs(euler_check_model(ChartedMetric::euclidean(4)).chi_estimate) < 1e-12);
  CHECK(euler_check_model(ChartedMetric::parse("product(hyperbolic:2,hyperbolic:2)")).chi_estimate ==
        doctest::Approx(4.0).epsilon(1e-6));
  CHECK(kind_of([] { euler_check_model(ChartedMetric::hyperbolic(4)); }) == ErrorKind::UnsupportedModel);
}

TEST_CASE("flat theorem budget") {
  const auto s = GeodesicSimplex::build(ChartedMetric::euclidean(4), flat_corner(4));
  const auto tb = theorem_budget(s, cheap(50000), 6);
  CHECK(std::abs(tb.vertex_term - 1.0) <= 3.0 * tb.vertex_error + 1e-12);
  CHECK(std::abs(tb.edge_term) < 1e-10);
  CHECK(std::abs(tb.two_face_term) < 1e-10);
  CHECK(std::abs(tb.bound_constant - 2.0) <= 3.0 * tb.vertex_error + 1e-12);
  CHECK(tb.within_ranges);
}

TEST_CASE("theorem budget needs nonpositive curvature") {
  const auto s = GeodesicSimplex::build(ChartedMetric::parse("product(sphere:2,hyperbolic:2)"),
                                        {vec({1.5, 0.1, 0.0, 0.0}), vec({1.7, 0.1, 0.1, 0.0}),
                                         vec({1.5, 0.3, 0.0, 0.1}), vec({1.6, 0.2, 0.2, 0.1}),
                                         vec({1.4, 0.2, 0.1, 0.2})});
  CHECK(kind_of([&] { theorem_budget(s, cheap(100), 1); }) == ErrorKind::PositiveCurvatureModel);
}

TEST_CASE("2-face Gauss curvature in constant curvature") {
  const auto s = h4_simplex();
  CHECK(face_gauss_curvature(s, make_face(4, {0, 2, 3}), vec({0.3, 0.4})) == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("jitter is bounded and seeded") {
  const auto v = flat_corner(3);
  const auto a = jitter(v, 1e-3, 9), b = jitter(v, 1e-3, 9), c = jitter(v, 1e-3, 10);
  CHECK(a.magnitude == 1e-3);
  bool differs = false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK((a.vertices[i] - v[i]).lpNorm<Eigen::Infinity>() <= 1e-3);
    CHECK(a.vertices[i] == b.vertices[i]);
    differs = differs || a.vertices[i] != c.vertices[i];
  }
  CHECK(differs);
}

TEST_CASE("doubling the Monte Carlo budget stays within error bars") {
  const auto s = GeodesicSimplex::build(ChartedMetric::euclidean(3), flat_corner(3));
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto lo = verify_identity(s, cheap(2000), seed);
    const auto hi = verify_identity(s, cheap(4000), seed);
    CHECK(std::abs(hi.residual) <= std::abs(lo.residual) + 3.0 * (lo.std_error + hi.std_error));
    CHECK(hi.std_error < lo.std_error);
  }
}

TEST_CASE("seeded runs are deterministic across thread counts") {
  const auto s = GeodesicSimplex::build(ChartedMetric::euclidean(3), flat_corner(3));
  auto b1 = cheap(3000), b4 = cheap(3000);
  b4.threads = 4;
  CHECK(verify_identity(s, b1, 7).total == verify_identity(s, b4, 7).total);
}
