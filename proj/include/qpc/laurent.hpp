#pragma once

// Finite Laurent series f(z) = sum_k c_k z^k. On the torus chart
// z = exp(2 pi i x) these are trigonometric polynomials; they extend
// holomorphically to C \ {0}, hence to every annulus 1-r <= |z| <= 1+r.

#include "qpc/matrix.hpp"

#include "json.hpp"

#include <functional>
#include <span>
#include <vector>

namespace qpc {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// exp(2 pi i x)
Complex torus_point(double x, double modulus = 1.0);

class LaurentScalar {
 public:
  LaurentScalar() = default;
  LaurentScalar(int lowest_degree, std::vector<Complex> coefficients);

  static LaurentScalar constant(Complex c);
  static LaurentScalar monomial(int degree, Complex c = 1.0);
  /// amplitude * cos(2 pi (x + phase)) = amplitude/2 (e^{2 pi i phase} z + e^{-2 pi i phase} / z)
  static LaurentScalar cosine(double amplitude = 1.0, double phase = 0.0);
  static LaurentScalar sine(double amplitude = 1.0, double phase = 0.0);
  /// lead * z^lowest_degree * prod (z - r)
  static LaurentScalar from_roots(Complex lead, int lowest_degree, std::span<const Complex> roots);

  int lowest_degree() const { return lo_; }
  int highest_degree() const { return lo_ + static_cast<int>(c_.size()) - 1; }
  std::span<const Complex> coefficients() const { return c_; }
  Complex coefficient(int degree) const;
  double max_abs_coefficient() const;

  /// True when all coefficients are below tol (exact zero for tol = 0).
  bool is_zero(double tol = 0.0) const;
  /// c_{-k} == conj(c_k) within tol; the function is then real on the torus.
  bool is_real_on_torus(double tol = 0.0) const;

  /// Horner evaluation in z (nonnegative degrees) and 1/z (negative degrees).
  Complex operator()(Complex z) const;
  Complex evaluate(Complex z) const { return (*this)(z); }

  /// d/dz as a Laurent series.
  LaurentScalar derivative() const;
  /// d^order/dx^order of x -> f(exp(2 pi i x)).
  Complex torus_derivative(double x, int order) const;
  /// x -> f(x + omega), i.e. z -> f(z exp(2 pi i omega)).
  LaurentScalar shifted(double omega) const;
  /// Drops leading/trailing coefficients with |c| <= rel_tol * max|c|.
  LaurentScalar trimmed(double rel_tol) const;

  LaurentScalar& operator+=(const LaurentScalar& other);
  LaurentScalar& operator-=(const LaurentScalar& other);
  LaurentScalar& operator*=(Complex s);
  friend LaurentScalar operator+(LaurentScalar a, const LaurentScalar& b) { return a += b; }
  friend LaurentScalar operator-(LaurentScalar a, const LaurentScalar& b) { return a -= b; }
  friend LaurentScalar operator*(LaurentScalar a, Complex s) { return a *= s; }
  friend LaurentScalar operator*(Complex s, LaurentScalar a) { return a *= s; }
  friend LaurentScalar operator*(const LaurentScalar& a, const LaurentScalar& b);

 private:
  void normalize();

  int lo_ = 0;
  std::vector<Complex> c_;
};

/// Recovers the Laurent series with support in [lo, hi] from samples of f on
/// the unit circle (exact up to rounding when the support assumption holds).
LaurentScalar interpolate_laurent(const std::function<Complex(Complex)>& f, int lo, int hi,
                                  double trim_tol = 1e-13);

/// Matrix-valued Laurent series on a common annulus convention.
class LaurentMatrixFunction {
 public:
  LaurentMatrixFunction() = default;
  LaurentMatrixFunction(int rows, int cols, double rho = 0.5);
  LaurentMatrixFunction(int rows, int cols, std::vector<LaurentScalar> entries, double rho = 0.5);

  static LaurentMatrixFunction constant(const Matrix& m, double rho = 0.5);
  static LaurentMatrixFunction identity(int d, double rho = 0.5);
  static LaurentMatrixFunction zero(int rows, int cols, double rho = 0.5);
  static LaurentMatrixFunction diagonal(const std::vector<LaurentScalar>& diag, double rho = 0.5);
  static LaurentMatrixFunction scalar(const LaurentScalar& f, double rho = 0.5);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  double rho() const { return rho_; }
  void set_rho(double rho) { rho_ = rho; }

  LaurentScalar& at(int i, int j);
  const LaurentScalar& at(int i, int j) const;

  Matrix operator()(Complex z) const;
  Matrix evaluate(Complex z) const { return (*this)(z); }
  Matrix torus_derivative(double x, int order) const;

  int lowest_degree() const;
  int highest_degree() const;

  /// max over the annulus |z| in [1-r, 1+r] of the operator norm; by the
  /// maximum principle only the two boundary circles are scanned.
  double norm_on_annulus(double r) const;
  double norm_rho() const { return norm_on_annulus(rho_); }

  /// det V(z) as a Laurent series.
  LaurentScalar det() const;
  /// det(V(z) - e I) as a Laurent series.
  LaurentScalar det_minus(Complex e) const;

  LaurentMatrixFunction shifted(double omega) const;
  LaurentMatrixFunction transpose() const;
  bool is_symmetric(double tol = 0.0) const;
  bool is_hermitian_on_torus(double tol = 0.0) const;

  LaurentMatrixFunction& operator+=(const LaurentMatrixFunction& other);
  LaurentMatrixFunction& operator-=(const LaurentMatrixFunction& other);
  LaurentMatrixFunction& operator*=(Complex s);
  friend LaurentMatrixFunction operator+(LaurentMatrixFunction a, const LaurentMatrixFunction& b) {
    return a += b;
  }
  friend LaurentMatrixFunction operator-(LaurentMatrixFunction a, const LaurentMatrixFunction& b) {
    return a -= b;
  }
  friend LaurentMatrixFunction operator*(LaurentMatrixFunction a, Complex s) { return a *= s; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  double rho_ = 0.5;
  std::vector<LaurentScalar> e_;  // row-major
};

void to_json(nlohmann::json& j, const LaurentScalar& f);
void from_json(const nlohmann::json& j, LaurentScalar& f);
void to_json(nlohmann::json& j, const LaurentMatrixFunction& v);
void from_json(const nlohmann::json& j, LaurentMatrixFunction& v);

}  // namespace qpc
