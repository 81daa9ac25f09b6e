#pragma once

#include "qpc/matrix.hpp"
#include "qpc/laurent.hpp"

#include <Eigen/QR>

#include <random>

namespace qpc::test {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

inline double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng()); }

inline Matrix random_real(int r, int c) {
  Matrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = normal();
  return m;
}

inline Matrix random_complex(int r, int c) {
  Matrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = Complex(normal(), normal());
  return m;
}

inline Matrix random_unitary(int n) {
  Eigen::HouseholderQR<Matrix> qr(random_complex(n, n));
  return qr.householderQ() * Matrix::Identity(n, n);
}

inline Matrix random_orthogonal(int n) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_real(n, n).real());
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return q.cast<Complex>();
}

inline LaurentScalar random_laurent(int lo, int hi, bool real_on_torus = false) {
  std::vector<Complex> c(static_cast<std::size_t>(hi - lo + 1));
  for (auto& x : c) x = Complex(normal(), normal());
  LaurentScalar f(lo, c);
  if (!real_on_torus) return f;
  const int top = std::max(-lo, hi);
  std::vector<Complex> s(static_cast<std::size_t>(2 * top + 1));
  for (int k = -top; k <= top; ++k) {
    const Complex a = f.coefficient(k), b = std::conj(f.coefficient(-k));
    s[static_cast<std::size_t>(k + top)] = 0.5 * (a + b);
  }
  return LaurentScalar(-top, s);
}

inline LaurentMatrixFunction random_laurent_matrix(int rows, int cols, int lo, int hi, double scale = 1.0) {
  LaurentMatrixFunction f(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) f.at(i, j) = random_laurent(lo, hi) * Complex(scale);
  return f;
}

/// Real symmetric on the torus: entries real-on-torus, V_ij = V_ji.
inline LaurentMatrixFunction random_symmetric_laurent(int d, int degree, double scale = 1.0) {
  LaurentMatrixFunction f(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      LaurentScalar s = random_laurent(-degree, degree, true);
      f.at(i, j) = s * Complex(scale);
      f.at(j, i) = f.at(i, j);
    }
  return f;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace qpc::test
