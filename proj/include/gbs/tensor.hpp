#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace gbs {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Dense rank-3 array with equal extents. Used for metric derivatives
// (d(k, i, j) = ∂_k g_ij) and Christoffel symbols (G(k, i, j) = Γ^k_ij).
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n, 0.0) {}

  int extent() const { return n_; }
  double& operator()(int a, int b, int c) { return data_[index(a, b, c)]; }
  double operator()(int a, int b, int c) const { return data_[index(a, b, c)]; }

 private:
  std::size_t index(int a, int b, int c) const {
    return (static_cast<std::size_t>(a) * n_ + b) * n_ + c;
  }
  int n_ = 0;
  std::vector<double> data_;
};

// Dense rank-4 array with equal extents. Riemann tensors are stored fully
// lowered; second metric derivatives as h(k, l, i, j) = ∂_k ∂_l g_ij.
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}

  int extent() const { return n_; }
  double& operator()(int a, int b, int c, int d) { return data_[index(a, b, c, d)]; }
  double operator()(int a, int b, int c, int d) const { return data_[index(a, b, c, d)]; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  // Components in a new frame: T'(a,b,c,d) = T(i,j,k,l) F(i,a) F(j,b) F(k,c) F(l,d).
  // F may be rectangular (n x r), producing an r-extent tensor.
  Tensor4 in_frame(const Mat& frame) const;

 private:
  std::size_t index(int a, int b, int c, int d) const {
    return ((static_cast<std::size_t>(a) * n_ + b) * n_ + c) * n_ + d;
  }
  int n_ = 0;
  std::vector<double> data_;
};

inline Tensor4 Tensor4::in_frame(const Mat& frame) const {
  const int n = n_;
  const int r = static_cast<int>(frame.cols());
  // Contract one index at a time; r, n <= ~8 so the intermediate sizes stay tiny.
  std::vector<double> t1(static_cast<std::size_t>(r) * n * n * n, 0.0);
  for (int a = 0; a < r; ++a)
    for (int i = 0; i < n; ++i) {
      const double f = frame(i, a);
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            t1[((static_cast<std::size_t>(a) * n + j) * n + k) * n + l] += f * (*this)(i, j, k, l);
    }
  std::vector<double> t2(static_cast<std::size_t>(r) * r * n * n, 0.0);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int j = 0; j < n; ++j) {
        const double f = frame(j, b);
        if (f == 0.0) continue;
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            t2[((static_cast<std::size_t>(a) * r + b) * n + k) * n + l] +=
                f * t1[((static_cast<std::size_t>(a) * n + j) * n + k) * n + l];
      }
  std::vector<double> t3(static_cast<std::size_t>(r) * r * r * n, 0.0);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c)
        for (int k = 0; k < n; ++k) {
          const double f = frame(k, c);
          if (f == 0.0) continue;
          for (int l = 0; l < n; ++l)
            t3[((static_cast<std::size_t>(a) * r + b) * r + c) * n + l] +=
                f * t2[((static_cast<std::size_t>(a) * r + b) * n + k) * n + l];
        }
  Tensor4 out(r);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c)
        for (int d = 0; d < r; ++d) {
          double s = 0.0;
          for (int l = 0; l < n; ++l)
            s += frame(l, d) * t3[((static_cast<std::size_t>(a) * r + b) * r + c) * n + l];
          out(a, b, c, d) = s;
        }
  return out;
}

}  // namespace gbs
