#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace wpdm {

using cplx = std::complex<double>;

// Minimal dense row-major complex matrix; the shapes in this project are tiny
// (N <= a few hundred antennas, M <= 16 sensors), so no external linear
// algebra is pulled in.
struct CMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<cplx> a;

  CMatrix() = default;
  CMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  cplx& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  const cplx& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
};

// Solves A x = b for small Hermitian positive definite A via unpivoted
// Cholesky. b holds the solution on return. Throws std::runtime_error when a
// pivot collapses.
inline void solve_hermitian(CMatrix a, std::vector<cplx>& b) {
  int n = a.rows;
  if (a.cols != n || static_cast<int>(b.size()) != n)
    throw std::invalid_argument("solve_hermitian: shape mismatch");
  // In-place LL^H factorization.
  for (int j = 0; j < n; ++j) {
    double diag = a.at(j, j).real();
    for (int k = 0; k < j; ++k) diag -= std::norm(a.at(j, k));
    if (!(diag > 1e-300)) throw std::runtime_error("solve_hermitian: matrix not positive definite");
    double ljj = std::sqrt(diag);
    a.at(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      cplx s = a.at(i, j);
      for (int k = 0; k < j; ++k) s -= a.at(i, k) * std::conj(a.at(j, k));
      a.at(i, j) = s / ljj;
    }
  }
  // Forward then backward substitution.
  for (int i = 0; i < n; ++i) {
    cplx s = b[i];
    for (int k = 0; k < i; ++k) s -= a.at(i, k) * b[k];
    b[i] = s / a.at(i, i).real();
  }
  for (int i = n - 1; i >= 0; --i) {
    cplx s = b[i];
    for (int k = i + 1; k < n; ++k) s -= std::conj(a.at(k, i)) * b[k];
    b[i] = s / a.at(i, i).real();
  }
}

// Real symmetric positive definite factor for repeated right-hand sides.
struct CholeskyReal {
  int n = 0;
  std::vector<double> l;  // row-major lower triangle (full storage)

  CholeskyReal() = default;

  explicit CholeskyReal(const std::vector<double>& a, int dim) : n(dim), l(a) {
    if (static_cast<int>(a.size()) != dim * dim)
      throw std::invalid_argument("CholeskyReal: shape mismatch");
    for (int j = 0; j < n; ++j) {
      double diag = l[j * n + j];
      for (int k = 0; k < j; ++k) diag -= l[j * n + k] * l[j * n + k];
      if (!(diag > 1e-300)) throw std::runtime_error("CholeskyReal: matrix not positive definite");
      double ljj = std::sqrt(diag);
      l[j * n + j] = ljj;
      for (int i = j + 1; i < n; ++i) {
        double s = l[i * n + j];
        for (int k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
        l[i * n + j] = s / ljj;
      }
    }
  }

  // Solves A x = b, overwriting b. Works for complex right-hand sides too.
  template <typename T>
  void solve(std::vector<T>& b) const {
    for (int i = 0; i < n; ++i) {
      T s = b[i];
      for (int k = 0; k < i; ++k) s -= l[i * n + k] * b[k];
      b[i] = s / l[i * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
      T s = b[i];
      for (int k = i + 1; k < n; ++k) s -= l[k * n + i] * b[k];
      b[i] = s / l[i * n + i];
    }
  }
};

}  // namespace wpdm
