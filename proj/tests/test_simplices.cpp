#include <cmath>
#include <random>

#include "doctest.h"
#include "gbs/quadrature.hpp"
#include "gbs/simplices.hpp"

using namespace gbs;

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Vec random_barycentric(int k, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  Vec b(k + 1);
  for (int i = 0; i <= k; ++i) b[i] = e(rng);
  return b / b.sum();
}

double ball_distance(const Vec& x, const Vec& y) {
  const double num = (x - y).squaredNorm();
  const double den = (1.0 - x.squaredNorm()) * (1.0 - y.squaredNorm());
  return std::acosh(1.0 + 2.0 * num / den);
}

GeodesicSimplex h3_tetrahedron() {
  return GeodesicSimplex::build(ChartedMetric::hyperbolic(3), {vec({0.1, 0.0, 0.0}), vec({0.4, 0.1, 0.0}),
                                                               vec({0.0, 0.5, 0.1}), vec({0.1, 0.1, 0.45})});
}

GeodesicSimplex h2xh2_simplex() {
  return GeodesicSimplex::build(ChartedMetric::parse("product(hyperbolic:2,hyperbolic:2)"),
                                {vec({0.0, 0.0, 0.0, 0.0}), vec({0.3, 0.0, 0.0, 0.05}), vec({0.0, 0.3, 0.1, 0.02}),
                                 vec({0.15, 0.1, 0.3, 0.1}), vec({0.05, 0.2, 0.05, 0.3})});
}

}  // namespace

TEST_CASE("flat simplices are affine") {
  std::mt19937_64 rng(1);
  const std::vector<Vec> p{vec({0, 0, 0}), vec({1, 0.2, 0}), vec({0.1, 1, 0.3}), vec({0.2, 0.1, 1.5})};
  const auto s = GeodesicSimplex::build(ChartedMetric::euclidean(3), p);
  for (int t = 0; t < 50; ++t) {
    const Vec b = random_barycentric(3, rng);
    Vec expect = Vec::Zero(3);
    for (int i = 0; i < 4; ++i) expect += b[i] * p[i];
    CHECK((s.eval(b) - expect).norm() < 1e-14);
    const Mat d = s.differential(b);
    for (int i = 1; i < 4; ++i) CHECK((d.col(i - 1) - (p[i] - p[0])).norm() < 1e-6);
  }
}

TEST_CASE("vertices are hit exactly") {
  const auto s = h3_tetrahedron();
  for (int i = 0; i < 4; ++i) {
    Vec b = Vec::Zero(4);
    b[i] = 1.0;
    CHECK((s.eval(b) - s.vertices()[i]).norm() < 1e-12);
  }
}

TEST_CASE("the last facet of the coning is the sub-simplex") {
  std::mt19937_64 rng(2);
  const auto s = h3_tetrahedron();
  const auto sub = GeodesicSimplex::build(s.chart(), {s.vertices()[0], s.vertices()[1], s.vertices()[2]});
  for (int t = 0; t < 20; ++t) {
    const Vec c = random_barycentric(2, rng);
    Vec b = Vec::Zero(4);
    b.head(3) = c;
    CHECK((s.eval(b) - sub.eval(c)).norm() <= 1e-8);
  }
}

TEST_CASE("hyperbolic edges are geodesic segments") {
  const auto s = h3_tetrahedron();
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      Vec mid = Vec::Zero(4);
      mid[i] = mid[j] = 0.5;
      const Vec x = s.eval(mid);
      const double d = ball_distance(s.vertices()[i], s.vertices()[j]);
      CHECK(ball_distance(x, s.vertices()[i]) == doctest::Approx(d / 2).epsilon(1e-7));
      CHECK(ball_distance(x, s.vertices()[j]) == doctest::Approx(d / 2).epsilon(1e-7));
    }
}

TEST_CASE("restricted faces coincide with re-coned faces on space forms") {
  const auto s = h3_tetrahedron();
  for (int r = 1; r <= 2; ++r)
    for (const auto& f : faces_of_dimension(3, r)) CHECK(face_recone_deviation(s, f) <= 1e-8);
}

TEST_CASE("face orientations of a 4-simplex alternate") {
  const auto facets = faces_of_dimension(4, 3);
  REQUIRE(facets.size() == 5);
  // Lexicographic order lists the facet omitting vertex 4 first.
  for (std::size_t i = 0; i < 5; ++i) {
    const int omitted = 4 - static_cast<int>(i);
    CHECK(facets[i].orientation == (omitted % 2 == 0 ? 1 : -1));
  }
  CHECK(faces_of_dimension(4, 0).size() == 5);
  CHECK(faces_of_dimension(4, 1).size() == 10);
  CHECK(faces_of_dimension(4, 2).size() == 10);
}

TEST_CASE("collinear vertices are degenerate") {
  try {
    GeodesicSimplex::build(ChartedMetric::euclidean(2), {vec({0, 0}), vec({1, 1}), vec({2, 2})});
    FAIL("expected DegenerateSimplex");
  } catch (const GeometryError& e) {
    CHECK(e.kind() == ErrorKind::DegenerateSimplex);
  }
}

TEST_CASE("conical coordinates cover the simplex with the right volume") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const Vec y = vec({u(rng), u(rng), u(rng)});
    const Vec c = conical_to_barycentric(y);
    CHECK(c.sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c.minCoeff() >= 0.0);
  }
  const auto q = integrate_simplex([](const Vec&) { return 1.0; }, 3, 8);
  CHECK(q.value == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  double acc = 0.0;
  const auto gl = gauss_legendre01(8);
  for (const auto& [a, wa] : gl)
    for (const auto& [b, wb] : gl)
      for (const auto& [c, wc] : gl) acc += wa * wb * wc * conical_jacobian(vec({a, b, c}));
  CHECK(acc == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("faces of constant-curvature simplices are totally geodesic") {
  std::mt19937_64 rng(4);
  const auto s = h3_tetrahedron();
  for (const auto& f : faces_of_dimension(3, 2)) {
    const Vec y = random_barycentric(2, rng).tail(2);
    const FaceFrame ff = face_frame(s, f, y);
    for (const Mat& l : second_fundamental_forms(s, f, y, ff)) CHECK(l.norm() <= 1e-5);
  }
}

TEST_CASE("second fundamental forms on H2xH2 are symmetric and nonzero") {
  const auto s = h2xh2_simplex();
  const Face f = make_face(4, {0, 1, 2});
  const Vec y = vec({0.3, 0.3});
  const FaceFrame ff = face_frame(s, f, y);
  double largest = 0.0;
  for (int a = 0; a < ff.normal.cols(); ++a) {
    const Mat l = second_fundamental_form(s, f, y, ff.normal.col(a));
    CHECK((l - l.transpose()).norm() <= 1e-6 * std::max(1.0, l.norm()));
    largest = std::max(largest, l.norm());
  }
  CHECK(largest > 1e-3);
}

TEST_CASE("face frames are orthonormal and normal") {
  std::mt19937_64 rng(5);
  const auto s = h2xh2_simplex();
  for (int r = 1; r <= 3; ++r)
    for (const auto& f : faces_of_dimension(4, r)) {
      const Vec y = random_barycentric(r, rng).tail(r);
      const FaceFrame ff = face_frame(s, f, y);
      Mat all(4, 4);
      all << ff.frame, ff.normal;
      CHECK((all.transpose() * ff.metric * all - Mat::Identity(4, 4)).norm() <= 1e-10);
      CHECK(ff.volume_element == doctest::Approx(std::sqrt(ff.induced_metric.determinant())).epsilon(1e-10));
    }
}

TEST_CASE("dual cones of flat triangles") {
  const ConeBudget budget{0, 64, 1, 0};
  auto arc = [&](const GeodesicSimplex& s, int vertex) {
    const Face f = make_face(2, {vertex});
    return integrate_dual_cone([](const Vec&) { return 1.0; }, normal_cone(s, f, Vec::Ones(1)), budget).value;
  };
  const auto eq = GeodesicSimplex::build(ChartedMetric::euclidean(2),
                                         {vec({0, 0}), vec({1, 0}), vec({0.5, std::sqrt(3.0) / 2})});
  for (int i = 0; i < 3; ++i) CHECK(arc(eq, i) == doctest::Approx(2 * kPi / 3).epsilon(1e-12));
  const auto right = GeodesicSimplex::build(ChartedMetric::euclidean(2), {vec({0, 0}), vec({2, 0}), vec({0, 1})});
  CHECK(arc(right, 0) == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(arc(right, 1) == doctest::Approx(kPi - std::atan(0.5)).epsilon(1e-12));
}

TEST_CASE("facets have one inward unit normal") {
  const auto s = h3_tetrahedron();
  for (const auto& f : faces_of_dimension(3, 2)) {
    const auto cone = normal_cone(s, f, vec({1.0 / 3, 1.0 / 3, 1.0 / 3}));
    REQUIRE(cone.codim() == 1);
    REQUIRE(cone.generators.cols() == 1);
    CHECK(std::abs(cone.generators(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
    const auto q = integrate_dual_cone([](const Vec& xi) { return xi[0]; }, cone, {});
    CHECK(std::abs(q.value) == doctest::Approx(1.0).epsilon(1e-12));
  }
}
