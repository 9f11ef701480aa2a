#include "gbs/integrands.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gbs {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct SignedPermutation {
  std::vector<int> p;
  int sign;
};

std::vector<SignedPermutation> make_permutations(int r) {
  std::vector<SignedPermutation> out;
  std::vector<int> p(r);
  std::iota(p.begin(), p.end(), 0);
  do {
    int inv = 0;
    for (int a = 0; a < r; ++a)
      for (int b = a + 1; b < r; ++b)
        if (p[a] > p[b]) ++inv;
    out.push_back({p, inv % 2 == 0 ? 1 : -1});
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

const std::vector<SignedPermutation>& permutations(int r) {
  static const std::vector<std::vector<SignedPermutation>> table = [] {
    std::vector<std::vector<SignedPermutation>> t;
    for (int k = 0; k <= 6; ++k) t.push_back(make_permutations(k));
    return t;
  }();
  if (r < 0 || r > 6) throw GeometryError(ErrorKind::IndexError, "permutation sums limited to r <= 6");
  return table[r];
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Σ_{i,j ∈ S_r} ε(i)ε(j) Π_{m<f} R(i_{2m} i_{2m+1} j_{2m} j_{2m+1}) Π_{q ≥ 2f} Λ(i_q, j_q)
double permutation_sum(const Tensor4* riemann, const Mat* lambda, int r, int f) {
  const auto& perms = permutations(r);
  double total = 0.0;
  for (const auto& pi : perms)
    for (const auto& pj : perms) {
      double term = pi.sign * pj.sign;
      for (int m = 0; m < f && term != 0.0; ++m)
        term *= (*riemann)(pi.p[2 * m], pi.p[2 * m + 1], pj.p[2 * m], pj.p[2 * m + 1]);
      for (int q = 2 * f; q < r && term != 0.0; ++q) term *= (*lambda)(pi.p[q], pj.p[q]);
      total += term;
    }
  return total;
}

double levi_civita3(int a, int b, int c) { return 0.5 * (a - b) * (b - c) * (c - a); }

}  // namespace

double sphere_area(int n) {
  if (n < 0) throw GeometryError(ErrorKind::IndexError, "sphere dimension must be >= 0");
  return 2.0 * std::pow(4.0 * kPi, 0.5 * n) * std::tgamma(0.5 * n + 1.0) / factorial(n);
}

Mat FrameData::lambda(const Vec& xi) const {
  const int r = face_dim();
  Mat out = Mat::Zero(r, r);
  for (std::size_t a = 0; a < lambda_basis.size(); ++a) out += xi[static_cast<int>(a)] * lambda_basis[a];
  return out;
}

double psi_intrinsic(const Tensor4& riemann, double det_g) {
  const int n = riemann.extent();
  if (n % 2 == 1) return 0.0;
  const double prefactor = (2.0 / sphere_area(n)) / (std::pow(2.0, n / 2) * factorial(n));
  return prefactor * permutation_sum(&riemann, nullptr, n, n / 2) / det_g;
}

double psi_intrinsic(const CurvatureData& c) { return psi_intrinsic(c.riemann, c.det_g); }

double psi_extrinsic_rf(const Tensor4& riemann, const Mat& lambda, double gamma, int r, int f, int n) {
  if (f < 0 || 2 * f > r || r >= n) throw GeometryError(ErrorKind::IndexError, "need 0 <= 2f <= r < n");
  if ((f > 0 && riemann.extent() < r) || (r - 2 * f > 0 && lambda.rows() < r))
    throw GeometryError(ErrorKind::IndexError, "frame data smaller than face dimension");
  const double prefactor = 2.0 / (sphere_area(2 * f) * sphere_area(n - 2 * f - 1)) /
                           (std::pow(2.0, f) * factorial(2 * f) * factorial(r - 2 * f));
  return prefactor * permutation_sum(&riemann, &lambda, r, f) / gamma;
}

double psi_extrinsic_rf(const FrameData& fd, const Vec& xi, int r, int f, int n) {
  return psi_extrinsic_rf(fd.riemann, fd.lambda(xi), fd.gamma, r, f, n);
}

double psi_extrinsic(const Tensor4& riemann, const Mat& lambda, double gamma, int r, int n) {
  double total = 0.0;
  for (int f = 0; 2 * f <= r; ++f) total += psi_extrinsic_rf(riemann, lambda, gamma, r, f, n);
  return total;
}

double psi_extrinsic(const FrameData& fd, const Vec& xi, int r, int n) {
  return psi_extrinsic(fd.riemann, fd.lambda(xi), fd.gamma, r, n);
}

double psi_closed_form_4d(int r, const ClosedFormInputs& in) {
  const double pi2 = kPi * kPi;
  switch (r) {
    case 0: return 1.0 / (2.0 * pi2);
    case 1: return in.lambda(0, 0) / (2.0 * pi2 * in.gamma);
    case 2: {
      const Mat l = in.lambda.topLeftCorner(2, 2);
      return (in.riemann(0, 1, 0, 1) + 2.0 * l.determinant()) / (4.0 * pi2 * in.gamma);
    }
    case 3: {
      const Mat l = in.lambda.topLeftCorner(3, 3);
      double contraction = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          for (int c = 0; c < 3; ++c) {
            const double e1 = levi_civita3(a, b, c);
            if (e1 == 0.0) continue;
            for (int p = 0; p < 3; ++p)
              for (int q = 0; q < 3; ++q)
                for (int s = 0; s < 3; ++s) {
                  const double e2 = levi_civita3(p, q, s);
                  if (e2 == 0.0) continue;
                  contraction += e1 * e2 * in.riemann(a, b, p, q) * l(c, s);
                }
          }
      return l.determinant() / (2.0 * pi2 * in.gamma) + contraction / (16.0 * pi2 * in.gamma);
    }
    case 4:
      return (in.norms.riemann_sq - 4.0 * in.norms.ricci_sq + in.norms.scalar_sq) / (32.0 * pi2);
    default: throw GeometryError(ErrorKind::IndexError, "closed forms exist for r in 0..4");
  }
}

Mat random_symmetric(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = normal(rng);
  return 0.5 * (a + a.transpose());
}

Tensor4 random_curvature_tensor(int dim, std::mt19937_64& rng, int terms) {
  Tensor4 R(dim);
  for (int t = 0; t < terms; ++t) {
    const Mat a = random_symmetric(dim, rng);
    const Mat b = random_symmetric(dim, rng);
    // Kulkarni–Nomizu product (a ∧ b)_{ijkl}
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k)
          for (int l = 0; l < dim; ++l)
            R(i, j, k, l) += a(i, k) * b(j, l) + a(j, l) * b(i, k) - a(i, l) * b(j, k) - a(j, k) * b(i, l);
  }
  return R;
}

}  // namespace gbs
