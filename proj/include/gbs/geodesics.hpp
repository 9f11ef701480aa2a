#pragma once

#include <vector>

#include "gbs/metrics.hpp"

namespace gbs {

struct GeodesicSample {
  double t = 0.0;
  Vec x;
  Vec v;
};

// Geodesics are parameterized on [0, 1] (constant speed, not arc length).
struct GeodesicPath {
  Vec start;
  Vec end;
  Vec initial_velocity;
  std::vector<GeodesicSample> samples;
};

struct IntegratorOptions {
  int n_steps = 256;
  double richardson_tol = 1e-9;
  int max_doublings = 8;
};

struct ShootingOptions {
  int max_iterations = 50;
  double residual_tol = 1e-10;
  IntegratorOptions integrator;
};

/// Endpoint of the unit-time geodesic with initial data (x, v). Closed form
/// on analytic model charts, RK4 otherwise.
Vec exp_map(const ChartedMetric& m, const Vec& x, const Vec& v);

/// Initial velocity of the unit-time geodesic from x to y. Closed form on
/// analytic model charts, Newton shooting otherwise.
Vec log_map(const ChartedMetric& m, const Vec& x, const Vec& y);

GeodesicPath geodesic_between(const ChartedMetric& m, const Vec& x, const Vec& y, int n_samples);

double geodesic_distance(const ChartedMetric& m, const Vec& x, const Vec& y);

/// Riemannian norm |v|_g at x.
double tangent_norm(const ChartedMetric& m, const Vec& x, const Vec& v);

// Hyperspherical angles <-> points of the unit sphere in R^{n+1}.
Vec sphere_to_embedding(const Vec& theta);
Vec sphere_from_embedding(const Vec& X);

// Numerical routes; valid on every chart regardless of its derivative mode.
struct GeodesicState {
  Vec x;
  Vec v;
};
GeodesicState integrate_geodesic(const ChartedMetric& m, const Vec& x, const Vec& v, int n_steps);
Vec exp_map_numeric(const ChartedMetric& m, const Vec& x, const Vec& v, const IntegratorOptions& opts = {});
Vec log_map_shooting(const ChartedMetric& m, const Vec& x, const Vec& y, const ShootingOptions& opts = {});

}  // namespace gbs
