#include "gbs/simplices.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace gbs {

namespace {

constexpr double kFirstStep = 1e-5;
constexpr double kSecondStep = 5e-4;

std::string describe(const Vec& b) {
  std::ostringstream os;
  os << "(" << b.transpose() << ")";
  return os.str();
}

// Extends a g-orthonormal family to a g-orthonormal basis of the tangent
// space; returns only the added columns.
Mat complete_basis(const Mat& g, const Mat& frame) {
  const int n = static_cast<int>(g.rows());
  std::vector<Vec> basis;
  for (int j = 0; j < frame.cols(); ++j) basis.push_back(frame.col(j));
  std::vector<Vec> added;
  // Candidates ordered by how far they stick out of the current span keeps
  // Gram-Schmidt well conditioned.
  while (static_cast<int>(basis.size()) < n) {
    double best_norm = -1.0;
    Vec best;
    for (int i = 0; i < n; ++i) {
      Vec w = Vec::Unit(n, i);
      for (int pass = 0; pass < 2; ++pass)
        for (const Vec& q : basis) w -= q.dot(g * w) * q;
      const double nw = std::sqrt(std::max(0.0, w.dot(g * w)));
      if (nw > best_norm) {
        best_norm = nw;
        best = w / nw;
      }
    }
    basis.push_back(best);
    added.push_back(best);
  }
  Mat out(n, static_cast<int>(added.size()));
  for (std::size_t j = 0; j < added.size(); ++j) out.col(static_cast<int>(j)) = added[j];
  return out;
}

Vec local_to_face_barycentric(const Vec& y, LocalCoords coords) {
  if (coords == LocalCoords::Conical) return conical_to_barycentric(y);
  Vec c(y.size() + 1);
  c[0] = 1.0 - y.sum();
  c.tail(y.size()) = y;
  return c;
}

Vec face_point_from_local(const GeodesicSimplex& s, const Face& face, const Vec& y, LocalCoords coords) {
  return eval_face(s, face, local_to_face_barycentric(y, coords));
}

}  // namespace

GeodesicSimplex GeodesicSimplex::build(const ChartedMetric& m, std::vector<Vec> vertices, double degen_tol) {
  if (vertices.empty()) throw GeometryError(ErrorKind::ConfigError, "simplex needs at least one vertex");
  for (const Vec& p : vertices) {
    if (p.size() != m.dim())
      throw GeometryError(ErrorKind::ConfigError, "vertex dimension does not match the chart");
    m.require_in_domain(p);
  }
  GeodesicSimplex s(m, std::move(vertices));
  const int k = s.dim();
  if (k > m.dim())
    throw GeometryError(ErrorKind::DegenerateSimplex, "simplex dimension exceeds chart dimension");

  double longest = 0.0;
  for (int i = 0; i <= k; ++i)
    for (int j = i + 1; j <= k; ++j)
      longest = std::max(longest, geodesic_distance(m, s.vertices_[i], s.vertices_[j]));
  s.longest_edge_ = longest;
  // Edges must stay in one sheet of the chart: a step much longer than the
  // chart velocity allows means the geodesic crossed a branch cut.
  constexpr int kEdgeSamples = 32;
  for (int i = 0; i <= k; ++i)
    for (int j = i + 1; j <= k; ++j) {
      const auto path = geodesic_between(m, s.vertices_[i], s.vertices_[j], kEdgeSamples + 1);
      for (std::size_t a = 1; a < path.samples.size(); ++a) {
        const auto& p0 = path.samples[a - 1];
        const auto& p1 = path.samples[a];
        const double allowed = 2.0 * std::max(p0.v.norm(), p1.v.norm()) / kEdgeSamples + 1e-9;
        if ((p1.x - p0.x).norm() > allowed)
          throw GeometryError(ErrorKind::LeftChartDomain, "edge crosses a chart branch cut");
      }
    }
  if (k == 0) {
    s.nondegeneracy_ = 1.0;
    return s;
  }
  if (longest == 0.0) throw GeometryError(ErrorKind::DegenerateSimplex, "coincident vertices");

  const Vec bary = Vec::Constant(k + 1, 1.0 / (k + 1));
  const Mat d = s.differential(bary);
  const Mat g = m.metric(s.eval(bary));
  Eigen::LLT<Mat> llt(g);
  const Mat Lt = llt.matrixU();
  const Eigen::JacobiSVD<Mat> svd(Lt * d);
  const double smin = svd.singularValues()(k - 1);
  s.nondegeneracy_ = smin / longest;
  if (!(s.nondegeneracy_ >= degen_tol)) {
    std::ostringstream os;
    os << "smallest singular value " << smin << " (relative " << s.nondegeneracy_ << ") below " << degen_tol;
    throw GeometryError(ErrorKind::DegenerateSimplex, os.str());
  }
  return s;
}

Vec GeodesicSimplex::eval(const Vec& b) const {
  const int k = dim();
  if (b.size() != k + 1) throw GeometryError(ErrorKind::ConfigError, "barycentric size mismatch");
  Vec x = vertices_[0];
  double mass = b[0];
  for (int m = 1; m <= k; ++m) {
    const double bm = b[m];
    const double total = mass + bm;
    if (mass == 0.0) {
      x = vertices_[m];
    } else if (bm != 0.0) {
      const double t = bm / total;
      x = exp_map(chart_, x, t * log_map(chart_, x, vertices_[m]));
    }
    mass = total;
  }
  return x;
}

Mat GeodesicSimplex::differential(const Vec& b) const {
  const int k = dim();
  Mat d(chart_.dim(), k);
  for (int i = 1; i <= k; ++i) {
    Vec bp = b, bm = b;
    bp[i] += kFirstStep;
    bp[0] -= kFirstStep;
    bm[i] -= kFirstStep;
    bm[0] += kFirstStep;
    d.col(i - 1) = (eval(bp) - eval(bm)) / (2.0 * kFirstStep);
  }
  return d;
}

Face make_face(int parent_dim, std::vector<int> subset) {
  std::sort(subset.begin(), subset.end());
  if (subset.empty() || subset.front() < 0 || subset.back() > parent_dim ||
      std::adjacent_find(subset.begin(), subset.end()) != subset.end())
    throw GeometryError(ErrorKind::IndexError, "invalid face vertex subset");
  std::vector<int> perm;
  for (int i = 0; i <= parent_dim; ++i)
    if (!std::binary_search(subset.begin(), subset.end(), i)) perm.push_back(i);
  perm.insert(perm.end(), subset.begin(), subset.end());
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inversions;
  Face f;
  f.vertex_subset = std::move(subset);
  f.orientation = inversions % 2 == 0 ? 1 : -1;
  return f;
}

std::vector<Face> faces_of_dimension(int parent_dim, int r) {
  std::vector<Face> out;
  if (r < 0 || r > parent_dim) return out;
  std::vector<bool> mask(parent_dim + 1, false);
  std::fill(mask.begin(), mask.begin() + r + 1, true);
  do {
    std::vector<int> subset;
    for (int i = 0; i <= parent_dim; ++i)
      if (mask[i]) subset.push_back(i);
    out.push_back(make_face(parent_dim, subset));
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return out;
}

Vec embed_face_barycentric(const GeodesicSimplex& s, const Face& face, const Vec& c) {
  if (c.size() != static_cast<int>(face.vertex_subset.size()))
    throw GeometryError(ErrorKind::ConfigError, "face barycentric size mismatch");
  Vec b = Vec::Zero(s.dim() + 1);
  for (std::size_t i = 0; i < face.vertex_subset.size(); ++i) b[face.vertex_subset[i]] = c[static_cast<int>(i)];
  return b;
}

Vec eval_face(const GeodesicSimplex& s, const Face& face, const Vec& c) {
  return s.eval(embed_face_barycentric(s, face, c));
}

GeodesicSimplex recone_face(const GeodesicSimplex& s, const Face& face) {
  std::vector<Vec> verts;
  for (int i : face.vertex_subset) verts.push_back(s.vertices()[i]);
  return GeodesicSimplex::build(s.chart(), std::move(verts), 0.0);
}

double face_recone_deviation(const GeodesicSimplex& s, const Face& face, int samples_per_axis) {
  const GeodesicSimplex sub = recone_face(s, face);
  const int r = face.dim();
  if (r == 0) return (sub.vertices()[0] - eval_face(s, face, Vec::Ones(1))).norm();
  double worst = 0.0;
  std::vector<int> idx(r, 0);
  while (true) {
    Vec y(r);
    for (int i = 0; i < r; ++i) y[i] = (idx[i] + 0.5) / samples_per_axis;
    const Vec c = conical_to_barycentric(y);
    worst = std::max(worst, (sub.eval(c) - eval_face(s, face, c)).norm());
    int a = 0;
    while (a < r && ++idx[a] == samples_per_axis) idx[a++] = 0;
    if (a == r) break;
  }
  return worst;
}

Vec conical_to_barycentric(const Vec& y) {
  const int r = static_cast<int>(y.size());
  Vec c = Vec::Zero(r + 1);
  c[0] = 1.0;
  for (int m = 1; m <= r; ++m) {
    const double t = y[m - 1];
    c.head(m) *= (1.0 - t);
    c[m] = t;
  }
  return c;
}

double conical_jacobian(const Vec& y) {
  double j = 1.0;
  for (int m = 2; m <= y.size(); ++m) j *= std::pow(1.0 - y[m - 1], m - 1);
  return j;
}

FaceFrame face_frame(const GeodesicSimplex& s, const Face& face, const Vec& y, LocalCoords coords) {
  const ChartedMetric& m = s.chart();
  const int r = face.dim();
  if (y.size() != r) throw GeometryError(ErrorKind::ConfigError, "local coordinate size mismatch");
  FaceFrame ff;
  ff.face_barycentric = local_to_face_barycentric(y, coords);
  ff.point = eval_face(s, face, ff.face_barycentric);
  ff.metric = m.metric(ff.point);
  ff.tangent = Mat(m.dim(), r);
  for (int i = 0; i < r; ++i) {
    Vec yp = y, ym = y;
    yp[i] += kFirstStep;
    ym[i] -= kFirstStep;
    ff.tangent.col(i) =
        (face_point_from_local(s, face, yp, coords) - face_point_from_local(s, face, ym, coords)) /
        (2.0 * kFirstStep);
  }
  ff.induced_metric = ff.tangent.transpose() * ff.metric * ff.tangent;
  if (r > 0) {
    Eigen::LLT<Mat> llt(ff.induced_metric);
    const double det = ff.induced_metric.determinant();
    if (llt.info() != Eigen::Success || !(det > 0.0)) {
      throw GeometryError(ErrorKind::DegenerateAt, "induced metric degenerate at " + describe(ff.face_barycentric));
    }
    ff.chol_lower = llt.matrixL();
    ff.volume_element = std::sqrt(det);
    ff.frame = ff.chol_lower.triangularView<Eigen::Lower>().solve(ff.tangent.transpose()).transpose();
  } else {
    ff.chol_lower = Mat(0, 0);
    ff.volume_element = 1.0;
    ff.frame = Mat(m.dim(), 0);
  }
  ff.normal = complete_basis(ff.metric, ff.frame);
  return ff;
}

namespace {

// Vectors ∂_i∂_j σ + Γ(∂_iσ, ∂_jσ), indexed [i * r + j].
std::vector<Vec> covariant_hessian(const GeodesicSimplex& s, const Face& face, const Vec& y, const FaceFrame& ff,
                                   LocalCoords coords) {
  const ChartedMetric& m = s.chart();
  const int r = face.dim();
  const int n = m.dim();
  const Vec f0 = ff.point;
  auto F = [&](const Vec& yy) { return face_point_from_local(s, face, yy, coords); };
  const Tensor3 gamma = christoffel(m, ff.point);
  std::vector<Vec> out(static_cast<std::size_t>(r) * r);
  const double h = kSecondStep;
  for (int i = 0; i < r; ++i)
    for (int j = i; j < r; ++j) {
      Vec d2;
      if (i == j) {
        Vec yp = y, ym = y;
        yp[i] += h;
        ym[i] -= h;
        d2 = (F(yp) - 2.0 * f0 + F(ym)) / (h * h);
      } else {
        Vec pp = y, pm = y, mp = y, mm = y;
        pp[i] += h; pp[j] += h;
        pm[i] += h; pm[j] -= h;
        mp[i] -= h; mp[j] += h;
        mm[i] -= h; mm[j] -= h;
        d2 = (F(pp) - F(pm) - F(mp) + F(mm)) / (4.0 * h * h);
      }
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) acc += gamma(k, a, b) * ff.tangent(a, i) * ff.tangent(b, j);
        d2[k] += acc;
      }
      out[static_cast<std::size_t>(i) * r + j] = d2;
      out[static_cast<std::size_t>(j) * r + i] = d2;
    }
  return out;
}

}  // namespace

Mat second_fundamental_form(const GeodesicSimplex& s, const Face& face, const Vec& y, const Vec& xi,
                            LocalCoords coords) {
  const FaceFrame ff = face_frame(s, face, y, coords);
  const int r = face.dim();
  const Vec gxi = ff.metric * xi;
  const double tangential = (ff.tangent.transpose() * gxi).norm();
  if (std::abs(xi.dot(gxi) - 1.0) > 1e-6 || tangential > 1e-6 * std::max(1.0, ff.tangent.norm()))
    throw GeometryError(ErrorKind::ConfigError, "xi must be a unit normal to the face");
  const auto hess = covariant_hessian(s, face, y, ff, coords);
  Mat lambda(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) lambda(i, j) = hess[static_cast<std::size_t>(i) * r + j].dot(gxi);
  return lambda;
}

std::vector<Mat> second_fundamental_forms(const GeodesicSimplex& s, const Face& face, const Vec& y,
                                          const FaceFrame& ff, LocalCoords coords) {
  const int r = face.dim();
  std::vector<Mat> out;
  if (r == 0) {
    out.assign(ff.normal.cols(), Mat(0, 0));
    return out;
  }
  const auto hess = covariant_hessian(s, face, y, ff, coords);
  for (int a = 0; a < ff.normal.cols(); ++a) {
    const Vec gn = ff.metric * ff.normal.col(a);
    Mat local(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) local(i, j) = hess[static_cast<std::size_t>(i) * r + j].dot(gn);
    // Λ_ON = L⁻¹ Λ_local L⁻ᵀ
    const auto L = ff.chol_lower.triangularView<Eigen::Lower>();
    Mat tmp = L.solve(local);
    Mat on = L.solve(tmp.transpose()).transpose();
    out.push_back(0.5 * (on + on.transpose()));
  }
  return out;
}

bool NormalConeSample::in_dual_cone(const Vec& xi) const {
  for (int j = 0; j < generators.cols(); ++j)
    if (xi.dot(generators.col(j)) < -cone_tol) return false;
  return true;
}

Vec NormalConeSample::inward_direction() const {
  Vec mean = generators.rowwise().sum();
  const double nm = mean.norm();
  return nm > 0.0 ? Vec(mean / nm) : mean;
}

NormalConeSample normal_cone(const GeodesicSimplex& s, const Face& face, const Vec& c, ConeGenerators kind) {
  const int r = face.dim();
  Vec y(r);
  for (int i = 0; i < r; ++i) y[i] = c[i + 1];
  return normal_cone(s, face, face_frame(s, face, y, LocalCoords::Barycentric), kind);
}

NormalConeSample normal_cone(const GeodesicSimplex& s, const Face& face, const FaceFrame& ff, ConeGenerators kind) {
  const ChartedMetric& m = s.chart();
  const int k = s.dim();
  NormalConeSample cone;
  cone.base_point = ff.face_barycentric;
  cone.face_tangent_frame = ff.frame;
  cone.normal_basis = ff.normal;
  std::vector<int> omitted;
  for (int i = 0; i <= k; ++i)
    if (!std::binary_search(face.vertex_subset.begin(), face.vertex_subset.end(), i)) omitted.push_back(i);
  const int codim = static_cast<int>(ff.normal.cols());
  cone.generators = Mat(codim, static_cast<int>(omitted.size()));
  cone.generators_chart = Mat(m.dim(), static_cast<int>(omitted.size()));
  const Vec parent_b = embed_face_barycentric(s, face, ff.face_barycentric);
  for (std::size_t g = 0; g < omitted.size(); ++g) {
    const int j = omitted[g];
    Vec w;
    if (kind == ConeGenerators::GeodesicToVertex) {
      w = log_map(m, ff.point, s.vertices()[j]);
    } else {
      // Second-order one-sided difference along the adjacent face.
      const double h = 1e-5;
      Vec dir = -parent_b;
      dir[j] += 1.0;
      w = (-3.0 * ff.point + 4.0 * s.eval(parent_b + h * dir) - s.eval(parent_b + 2.0 * h * dir)) / (2.0 * h);
    }
    const Vec coords = ff.normal.transpose() * (ff.metric * w);
    const double nc = coords.norm();
    if (!(nc > 1e-12 * std::max(1.0, tangent_norm(m, ff.point, w))))
      throw GeometryError(ErrorKind::DegenerateAt, "cone generator tangent to the face");
    cone.generators.col(static_cast<int>(g)) = coords / nc;
    cone.generators_chart.col(static_cast<int>(g)) = ff.normal * (coords / nc);
  }
  return cone;
}

}  // namespace gbs
