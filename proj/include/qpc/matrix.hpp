#pragma once

// Dense matrix primitives: singular values, minimum expansion, compound
// (exterior power) matrices, adjugate and realification.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace qpc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Singular values sorted nonincreasing.
struct SingularSpectrum {
  std::vector<double> values;

  double largest() const { return values.front(); }
  double smallest() const { return values.back(); }
  std::size_t size() const { return values.size(); }
};

/// True when every imaginary part is exactly zero.
bool is_real(const Matrix& a);
bool is_finite(const Matrix& a);

Matrix identity(int n);
Matrix diagonal(const std::vector<Complex>& entries);

SingularSpectrum singular_values(const Matrix& a);

/// Operator 2-norm (largest singular value).
double operator_norm(const Matrix& a);

/// Least singular value m(A) of a square matrix.
double min_expansion(const Matrix& a);

Complex determinant(const Matrix& a);

/// Lexicographically ordered k-subsets of {0, ..., n-1}.
std::vector<std::vector<int>> k_subsets(int n, int k);

std::uint64_t binomial(int n, int k);

/// Largest compound dimension exterior_power will build.
inline constexpr std::uint64_t kMaxCompoundDim = 5000;

/// The k-th compound matrix (det A_{I x J})_{I,J} with index sets in
/// lexicographic order. Works for rectangular A.
Matrix exterior_power(const Matrix& a, int k);

/// Classical adjugate: A * adj(A) = det(A) I.
Matrix adjugate(const Matrix& a);

/// Replaces every entry a+ib by the real block [[a, -b], [b, a]].
Matrix realify(const Matrix& a);

/// Lower bound eps / B^(d-1) on m(P) for any d x d P with |det P| >= eps and
/// ||P|| <= B.
double min_expansion_from_det(double eps, double bound, int d);

}  // namespace qpc
