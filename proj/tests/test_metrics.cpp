#include <cmath>
#include <random>

#include "doctest.h"
#include "gbs/metrics.hpp"

using namespace gbs;

namespace {

constexpr double kPi = 3.14159265358979323846;

// K (g_ik g_jl − g_il g_jk), the curvature of a space form.
double space_form(const Mat& g, double K, int i, int j, int k, int l) {
  return K * (g(i, k) * g(j, l) - g(i, l) * g(j, k));
}

double max_space_form_error(const CurvatureData& c, double K) {
  const int n = c.riemann.extent();
  double err = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          err = std::max(err, std::abs(c.riemann(i, j, k, l) - space_form(c.metric, K, i, j, k, l)));
  return err;
}

Vec random_point(const ChartedMetric& m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec x(m.dim());
  switch (m.kind()) {
    case ModelKind::SpherePolar:
      for (int i = 0; i < m.dim(); ++i) x[i] = kPi / 2 + 0.9 * u(rng);
      x[m.dim() - 1] = 2.0 * u(rng);
      return x;
    case ModelKind::HyperbolicBall:
      for (int i = 0; i < m.dim(); ++i) x[i] = 0.9 / std::sqrt(m.dim()) * u(rng) / m.parameter();
      return x;
    case ModelKind::Product: {
      Vec a = random_point(m.left(), rng), b = random_point(m.right(), rng);
      x << a, b;
      return x;
    }
    default:
      for (int i = 0; i < m.dim(); ++i) x[i] = 3.0 * u(rng);
      return x;
  }
}

}  // namespace

TEST_CASE("metric values at known points") {
  const auto e = metric_at(ChartedMetric::euclidean(4), Vec::Constant(4, 0.3));
  CHECK((e.g - Mat::Identity(4, 4)).norm() == doctest::Approx(0.0));
  CHECK(e.det == doctest::Approx(1.0));

  const auto h = metric_at(ChartedMetric::hyperbolic(4), Vec::Zero(4));
  CHECK((h.g - 4.0 * Mat::Identity(4, 4)).norm() < 1e-14);
  CHECK(h.det == doctest::Approx(256.0));

  const auto p = metric_at(ChartedMetric::parse("product(hyperbolic:2,hyperbolic:2)"), Vec::Zero(4));
  CHECK((p.g - 4.0 * Mat::Identity(4, 4)).norm() < 1e-14);
}

TEST_CASE("points outside the chart are rejected") {
  const auto ball = ChartedMetric::hyperbolic(2);
  Vec x(2);
  x << 0.8, 0.7;
  CHECK_THROWS_AS(metric_at(ball, x), GeometryError);
  try {
    metric_at(ball, x);
  } catch (const GeometryError& err) {
    CHECK(err.kind() == ErrorKind::OutOfDomain);
  }
  Vec pole(2);
  pole << 0.0, 0.3;
  CHECK_FALSE(ChartedMetric::sphere(2).contains(pole));
  CHECK_THROWS_AS(curvature_at(ChartedMetric::sphere(2), pole), GeometryError);
}

TEST_CASE("descriptors round-trip") {
  for (const char* d : {"euclidean:3", "sphere:2:2.5", "hyperbolic:4:0.5", "product(hyperbolic:2,sphere:2)",
                        "hyperbolic:2+fd"}) {
    const auto m = ChartedMetric::parse(d);
    CHECK(ChartedMetric::parse(m.descriptor()).descriptor() == m.descriptor());
  }
  CHECK(ChartedMetric::parse("product(hyperbolic:2,hyperbolic:3)").dim() == 5);
  CHECK(ChartedMetric::parse("hyperbolic:2+fd").derivative_mode() == DerivativeMode::FiniteDifference);
  CHECK_THROWS_AS(ChartedMetric::parse("torus:4"), GeometryError);
  CHECK_THROWS_AS(ChartedMetric::parse("product(hyperbolic:2"), GeometryError);
}

TEST_CASE("sphere Christoffel symbols by hand") {
  const auto m = ChartedMetric::sphere(2);
  Vec x(2);
  x << 0.7, 0.4;
  const Tensor3 G = christoffel(m, x);
  // ds² = dθ² + sin²θ dφ²
  CHECK(G(0, 1, 1) == doctest::Approx(-std::sin(0.7) * std::cos(0.7)).epsilon(1e-12));
  CHECK(G(1, 0, 1) == doctest::Approx(std::cos(0.7) / std::sin(0.7)).epsilon(1e-12));
  CHECK(G(1, 1, 0) == doctest::Approx(std::cos(0.7) / std::sin(0.7)).epsilon(1e-12));
  CHECK(std::abs(G(0, 0, 0)) < 1e-14);
}

TEST_CASE("Christoffel symbols are symmetric and block-diagonal on products") {
  std::mt19937_64 rng(7);
  const auto m = ChartedMetric::parse("product(hyperbolic:2,sphere:2)");
  for (int t = 0; t < 20; ++t) {
    const Vec x = random_point(m, rng);
    const Tensor3 G = christoffel(m, x);
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          CHECK(std::abs(G(k, i, j) - G(k, j, i)) < 1e-12);
          if ((k < 2) != (i < 2) || (k < 2) != (j < 2)) CHECK(std::abs(G(k, i, j)) < 1e-14);
        }
  }
  const Tensor3 flat = christoffel(ChartedMetric::euclidean(3), Vec::Ones(3));
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(flat(k, i, j) == 0.0);
}

TEST_CASE("unit sphere has sectional curvature +1") {
  Vec x(2);
  x << kPi / 2, 0.3;
  const auto c = curvature_at(ChartedMetric::sphere(2), x);
  CHECK(c.riemann(0, 1, 0, 1) / c.det_g == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("space forms match K(g∧g) at random points") {
  std::mt19937_64 rng(11);
  struct Case {
    const char* model;
    double K;
  };
  for (const Case& cs : {Case{"sphere:2", 1.0}, Case{"sphere:3:2", 0.25}, Case{"sphere:4", 1.0},
                         Case{"hyperbolic:2", -1.0}, Case{"hyperbolic:3:2", -4.0}, Case{"hyperbolic:4", -1.0},
                         Case{"euclidean:4", 0.0}}) {
    const auto m = ChartedMetric::parse(cs.model);
    CAPTURE(cs.model);
    for (int t = 0; t < 20; ++t) {
      const auto c = curvature_at(m, random_point(m, rng));
      CHECK(max_space_form_error(c, cs.K) <= 1e-6 * std::max(1.0, c.riemann.max_abs()));
    }
  }
}

TEST_CASE("curvature symmetries and Bianchi on every model") {
  std::mt19937_64 rng(3);
  for (const char* d : {"sphere:3", "hyperbolic:4", "product(hyperbolic:2,hyperbolic:2)",
                        "product(sphere:2,hyperbolic:2)", "euclidean:3"}) {
    const auto m = ChartedMetric::parse(d);
    CAPTURE(d);
    for (int t = 0; t < 100; ++t) {
      const auto c = curvature_at(m, random_point(m, rng));
      CHECK(curvature_symmetry_residual(c.riemann) <= 1e-8 * std::max(1.0, c.riemann.max_abs()));
    }
  }
  for (const char* d : {"sphere:3+fd", "hyperbolic:4+fd", "product(hyperbolic:2,hyperbolic:2)+fd"}) {
    const auto m = ChartedMetric::parse(d);
    CAPTURE(d);
    for (int t = 0; t < 20; ++t) {
      const auto c = curvature_at(m, random_point(m, rng));
      CHECK(curvature_symmetry_residual(c.riemann) <= 1e-5 * std::max(1.0, c.riemann.max_abs()));
    }
  }
}

TEST_CASE("finite-difference curvature agrees with the analytic route") {
  std::mt19937_64 rng(5);
  for (const char* d : {"sphere:4", "hyperbolic:3", "product(hyperbolic:2,sphere:2)"}) {
    const auto a = ChartedMetric::parse(d);
    const auto f = a.with_derivative_mode(DerivativeMode::FiniteDifference);
    for (int t = 0; t < 5; ++t) {
      const Vec x = random_point(a, rng);
      const auto ca = curvature_at(a, x), cf = curvature_at(f, x);
      double err = 0.0;
      const int n = a.dim();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) err = std::max(err, std::abs(ca.riemann(i, j, k, l) - cf.riemann(i, j, k, l)));
      CHECK(err <= 1e-5 * std::max(1.0, ca.riemann.max_abs()));
    }
  }
}

TEST_CASE("curvature norms use the full index sum") {
  Vec x(4);
  x << 1.2, 1.9, 1.4, 0.5;
  const auto s4 = curvature_norms(curvature_at(ChartedMetric::sphere(4), x));
  CHECK(s4.riemann_sq == doctest::Approx(24.0).epsilon(1e-9));
  CHECK(s4.ricci_sq == doctest::Approx(36.0).epsilon(1e-9));
  CHECK(s4.scalar_sq == doctest::Approx(144.0).epsilon(1e-9));

  Vec y(4);
  y << 0.1, -0.2, 0.3, 0.05;
  const auto c = curvature_at(ChartedMetric::parse("product(hyperbolic:2,hyperbolic:2)"), y);
  const auto hh = curvature_norms(c);
  CHECK(hh.riemann_sq == doctest::Approx(8.0).epsilon(1e-9));
  CHECK(hh.ricci_sq == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(hh.scalar_sq == doctest::Approx(16.0).epsilon(1e-9));
  CHECK(c.scalar == doctest::Approx(-4.0).epsilon(1e-9));

  const auto flat = curvature_norms(curvature_at(ChartedMetric::euclidean(4), y));
  CHECK(flat.riemann_sq == 0.0);
  CHECK(flat.scalar_sq == 0.0);
}

TEST_CASE("product curvature restricts to the factors") {
  std::mt19937_64 rng(9);
  const auto m = ChartedMetric::parse("product(sphere:2,hyperbolic:2)");
  for (int t = 0; t < 10; ++t) {
    const Vec x = random_point(m, rng);
    const auto c = curvature_at(m, x);
    const auto a = curvature_at(m.left(), x.head(2));
    const auto b = curvature_at(m.right(), x.tail(2));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            const bool left = i < 2 && j < 2 && k < 2 && l < 2;
            const bool right = i >= 2 && j >= 2 && k >= 2 && l >= 2;
            const double expect = left ? a.riemann(i, j, k, l) : right ? b.riemann(i - 2, j - 2, k - 2, l - 2) : 0.0;
            CHECK(std::abs(c.riemann(i, j, k, l) - expect) <= 1e-10);
          }
  }
}

TEST_CASE("ricci and scalar are traces") {
  Vec x(3);
  x << 0.1, 0.2, -0.3;
  const auto c = curvature_at(ChartedMetric::hyperbolic(3, 1.5), x);
  const Mat gi = c.metric.inverse();
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l) {
      double tr = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) tr += gi(i, k) * c.riemann(i, j, k, l);
      CHECK(c.ricci(j, l) == doctest::Approx(tr).epsilon(1e-10));
    }
  CHECK(c.scalar == doctest::Approx((gi * c.ricci).trace()).epsilon(1e-10));
  CHECK(c.scalar == doctest::Approx(-2.25 * 6.0).epsilon(1e-9));
}

TEST_CASE("orthonormal frame") {
  Mat g(3, 3);
  g << 4, 1, 0, 1, 3, 0.5, 0, 0.5, 2;
  const Mat E = orthonormal_frame(g);
  CHECK((E.transpose() * g * E - Mat::Identity(3, 3)).norm() < 1e-13);
}
