#include <cmath>
#include <string>

#include "gbs/cli.hpp"
#include "gbs/errors.hpp"
#include "gbs/geodesics.hpp"

namespace gbs::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

std::vector<Vec> flat_corner(int n, double scale) {
  std::vector<Vec> v{Vec::Zero(n)};
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e[i] = scale;
    v.push_back(e);
  }
  return v;
}

// Octant triangle centred on (0,1,1)/√2, away from the chart's pole and
// branch cut.
std::vector<Vec> s2_octant() {
  const Eigen::Vector3d c = Eigen::Vector3d(0.0, 1.0, 1.0).normalized();
  const Eigen::Vector3d a(1.0, 0.0, 0.0);
  const Eigen::Vector3d b = c.cross(a);
  std::vector<Vec> out;
  for (int i = 0; i < 3; ++i) {
    const double phi = 0.2 + 2.0 * kPi * i / 3.0;
    const Eigen::Vector3d p = c / std::sqrt(3.0) + std::sqrt(2.0 / 3.0) * (std::cos(phi) * a + std::sin(phi) * b);
    out.push_back(sphere_from_embedding(Vec(p)));
  }
  return out;
}

std::vector<Vec> h3_tetrahedron(double radius) {
  std::vector<Vec> out;
  for (const auto& d : {vec({1, 1, 1}), vec({1, -1, -1}), vec({-1, 1, -1}), vec({-1, -1, 1})})
    out.push_back(radius * d.normalized() + vec({0.02, -0.01, 0.015}));
  return out;
}

std::vector<Vec> h2xh2_pairs() {
  const std::vector<Vec> a{vec({0.0, 0.0}), vec({0.3, 0.0}), vec({0.0, 0.3}), vec({0.15, 0.1}), vec({0.05, 0.2})};
  const std::vector<Vec> b{vec({0.0, 0.0}), vec({0.0, 0.05}), vec({0.1, 0.02}), vec({0.3, 0.1}), vec({0.05, 0.3})};
  std::vector<Vec> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Vec x(4);
    x << a[i], b[i];
    out.push_back(x);
  }
  return out;
}

SimplexSpec spec(std::string id, std::string model, std::vector<Vec> vertices) {
  return {std::move(id), std::move(model), std::move(vertices)};
}

}  // namespace

std::vector<Vec> regular_h4_vertices(double side) {
  if (!(side > 0.0)) throw GeometryError(ErrorKind::ConfigError, "regular simplex side must be positive");
  // Unit directions with pairwise dot −1/4: centred simplex corners of R^5
  // expressed in an orthonormal basis of their hyperplane.
  Mat w(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) w(j, i) = (i == j ? 1.0 : 0.0) - 0.2;
  const Eigen::HouseholderQR<Mat> qr(w.leftCols(4));
  const Mat basis = qr.householderQ() * Mat::Identity(5, 4);
  // Hyperbolic law of cosines: cosh L = 1 + (5/4) sinh²ρ.
  const double rho = std::asinh(std::sqrt(4.0 * (std::cosh(side) - 1.0) / 5.0));
  const double radius = std::tanh(rho / 2.0);
  std::vector<Vec> out;
  for (int i = 0; i < 5; ++i) out.push_back(radius * (basis.transpose() * w.col(i)).normalized());
  return out;
}

std::vector<Vec> h2_equilateral(double radius) {
  std::vector<Vec> out;
  for (int i = 0; i < 3; ++i) {
    const double a = 0.1 + 2.0 * kPi * i / 3.0;
    out.push_back(vec({radius * std::cos(a), radius * std::sin(a)}));
  }
  return out;
}

std::vector<std::string> preset_names() {
  return {"flat-2", "flat-3",   "flat-4",    "flat-chain", "regular-h4-side=1", "h2xh2",
          "s2-octant", "h2-small", "h2-medium", "h2-large",   "h3",                "2d-suite"};
}

Preset make_preset(const std::string& name) {
  Preset p;
  if (name == "flat-2" || name == "flat-3" || name == "flat-4") {
    const int n = name.back() - '0';
    p.simplices = {spec("flat-" + std::to_string(n), "euclidean:" + std::to_string(n), flat_corner(n, 1.0))};
  } else if (name == "flat-chain") {
    p.simplices = {spec("s0", "euclidean:4", flat_corner(4, 1.0)), spec("s1", "euclidean:4", flat_corner(4, 1.0))};
    // Two copies glued along all five faces with opposite orientations.
    p.chain = "1 s0 a b c d e\n-1 s1 a b c d e\n";
  } else if (name.rfind("regular-h4-side=", 0) == 0) {
    double side = 0.0;
    try {
      side = std::stod(name.substr(16));
    } catch (const std::exception&) {
      throw GeometryError(ErrorKind::ConfigError, "bad side length in preset " + name);
    }
    p.simplices = {spec(name, "hyperbolic:4", regular_h4_vertices(side))};
  } else if (name == "h2xh2") {
    p.simplices = {spec(name, "product(hyperbolic:2,hyperbolic:2)", h2xh2_pairs())};
  } else if (name == "s2-octant") {
    p.simplices = {spec(name, "sphere:2", s2_octant())};
  } else if (name == "h2-small") {
    p.simplices = {spec(name, "hyperbolic:2", h2_equilateral(0.1))};
  } else if (name == "h2-medium") {
    p.simplices = {spec(name, "hyperbolic:2", h2_equilateral(0.5))};
  } else if (name == "h2-large") {
    // Near-ideal: the area is within 0.035 of π.
    p.simplices = {spec(name, "hyperbolic:2", h2_equilateral(0.99))};
  } else if (name == "h3") {
    p.simplices = {spec(name, "hyperbolic:3", h3_tetrahedron(0.3))};
  } else if (name == "2d-suite") {
    for (const char* sub : {"flat-2", "s2-octant", "h2-small", "h2-medium", "h2-large"})
      p.simplices.push_back(make_preset(sub).simplices.front());
  } else {
    throw GeometryError(ErrorKind::ConfigError, "unknown preset '" + name + "'");
  }
  return p;
}

}  // namespace gbs::cli
