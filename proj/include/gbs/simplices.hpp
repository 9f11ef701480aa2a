#pragma once

#include <vector>

#include "gbs/geodesics.hpp"

namespace gbs {

/// Geodesic k-simplex built by inductive coning over an ordered vertex list:
/// the (k−1)-simplex on p_0..p_{k−1} is joined to p_k along geodesics, so
/// σ((1−t)s + t e_k) = γ_s(t) with γ_s the geodesic from σ'(s) to p_k.
class GeodesicSimplex {
 public:
  static constexpr double kDefaultDegenTol = 1e-7;

  static GeodesicSimplex build(const ChartedMetric& m, std::vector<Vec> vertices,
                               double degen_tol = kDefaultDegenTol);

  const ChartedMetric& chart() const { return chart_; }
  const std::vector<Vec>& vertices() const { return vertices_; }
  int dim() const { return static_cast<int>(vertices_.size()) - 1; }

  // Barycentric b has k+1 entries (weight of p_i at index i). Entries may be
  // slightly negative; finite-difference stencils evaluate just outside Δ^k.
  Vec eval(const Vec& b) const;

  // n × k matrix; column i−1 is the derivative along e_i − e_0 (i = 1..k).
  Mat differential(const Vec& b) const;

  // Smallest singular value of dσ at the barycenter in a g-orthonormal
  // frame, divided by the longest edge length.
  double nondegeneracy() const { return nondegeneracy_; }
  double longest_edge() const { return longest_edge_; }

 private:
  GeodesicSimplex(ChartedMetric m, std::vector<Vec> v) : chart_(std::move(m)), vertices_(std::move(v)) {}

  ChartedMetric chart_;
  std::vector<Vec> vertices_;
  double nondegeneracy_ = 0.0;
  double longest_edge_ = 0.0;
};

/// A face of a parent simplex, given by an increasing list of parent vertex
/// indices. The face map is the restriction of the parent map to the
/// corresponding sub-simplex of Δ^k.
struct Face {
  std::vector<int> vertex_subset;
  int orientation = 1;  // sign of (omitted..., subset...) as a permutation of 0..k

  int dim() const { return static_cast<int>(vertex_subset.size()) - 1; }
};

Face make_face(int parent_dim, std::vector<int> vertex_subset);
// All faces of dimension r, in lexicographic order of their vertex subsets.
std::vector<Face> faces_of_dimension(int parent_dim, int r);

// Face barycentric (r+1 entries) -> parent barycentric (k+1 entries).
Vec embed_face_barycentric(const GeodesicSimplex& s, const Face& face, const Vec& c);
Vec eval_face(const GeodesicSimplex& s, const Face& face, const Vec& c);

// Re-coned face: the geodesic simplex built directly from the face vertices.
GeodesicSimplex recone_face(const GeodesicSimplex& s, const Face& face);
// Max chart-coordinate deviation between restricted and re-coned face maps
// over a deterministic sample of face barycentric points.
double face_recone_deviation(const GeodesicSimplex& s, const Face& face, int samples_per_axis = 5);

// Local coordinates on a face.
//  - Barycentric: y_i = c_i for i = 1..r (c_0 = 1 − Σ y).
//  - Conical: y ∈ [0,1]^r following the coning order,
//      c = (1 − y_r)·(c'(y_1..y_{r−1}), 0) + y_r e_r,
//    in which geodesic simplices are smooth up to their apex vertices.
enum class LocalCoords { Barycentric, Conical };

Vec conical_to_barycentric(const Vec& y);
// |∂c/∂y| for the conical map, measured against the barycentric volume.
double conical_jacobian(const Vec& y);

/// Differential-geometric data of a face at one point.
struct FaceFrame {
  Vec point;             // chart coordinates
  Vec face_barycentric;  // r+1 entries
  Mat metric;            // g at point
  Mat tangent;           // n × r, ∂σ/∂y in the chosen local coordinates
  Mat induced_metric;    // r × r, tangentᵀ g tangent
  Mat frame;             // n × r, g-orthonormal, same orientation as tangent
  Mat normal;            // n × (n−r), g-orthonormal basis of the normal space
  Mat chol_lower;        // L with induced_metric = L Lᵀ
  double volume_element = 0.0;  // sqrt(det induced_metric)
};

FaceFrame face_frame(const GeodesicSimplex& s, const Face& face, const Vec& y,
                     LocalCoords coords = LocalCoords::Barycentric);

/// Λ_ij(ξ) = g(∂_i∂_j σ + Γ(∂_iσ, ∂_jσ), ξ) in the face's local coordinates.
Mat second_fundamental_form(const GeodesicSimplex& s, const Face& face, const Vec& y, const Vec& xi,
                            LocalCoords coords = LocalCoords::Barycentric);

/// Second fundamental forms in the orthonormal frame, one r × r matrix per
/// normal basis vector: Λ(ξ) = Σ_a ξ_a Λ^a for ξ = Σ_a ξ_a normal.col(a).
std::vector<Mat> second_fundamental_forms(const GeodesicSimplex& s, const Face& face, const Vec& y,
                                          const FaceFrame& ff, LocalCoords coords = LocalCoords::Barycentric);

enum class ConeGenerators {
  // Initial velocities of geodesics from the point to each omitted vertex.
  GeodesicToVertex,
  // One-sided tangent of the adjacent (r+1)-face toward each omitted vertex.
  // These span the tangent cone of the simplex exactly; geodesics to the
  // vertices agree only when faces are totally geodesic.
  AdjacentFaceTangent,
};

/// Normal cone at a face point. Generators and test vectors are expressed in
/// coordinates of the orthonormal normal basis, so the dual-cone inequalities
/// are plain dot products.
struct NormalConeSample {
  Vec base_point;            // face barycentric
  Mat face_tangent_frame;    // n × r
  Mat normal_basis;          // n × (n−r)
  Mat generators;            // (n−r) × m, unit columns
  Mat generators_chart;      // n × m, the same vectors in chart components
  double cone_tol = 1e-10;

  int codim() const { return static_cast<int>(normal_basis.cols()); }
  // ξ given in normal-basis coordinates, assumed unit.
  bool in_dual_cone(const Vec& xi) const;
  // The mean of the generators; inward normals pair positively with it.
  Vec inward_direction() const;
};

NormalConeSample normal_cone(const GeodesicSimplex& s, const Face& face, const Vec& c,
                             ConeGenerators kind = ConeGenerators::GeodesicToVertex);
NormalConeSample normal_cone(const GeodesicSimplex& s, const Face& face, const FaceFrame& ff,
                             ConeGenerators kind = ConeGenerators::GeodesicToVertex);

}  // namespace gbs
