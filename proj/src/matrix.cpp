#include "qpc/matrix.hpp"

#include "qpc/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qpc {

bool is_real(const Matrix& a) { return (a.imag().array() == 0.0).all(); }

bool is_finite(const Matrix& a) { return a.allFinite(); }

Matrix identity(int n) { return Matrix::Identity(n, n); }

Matrix diagonal(const std::vector<Complex>& entries) {
  const int n = static_cast<int>(entries.size());
  Matrix d = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = entries[static_cast<std::size_t>(i)];
  return d;
}

SingularSpectrum singular_values(const Matrix& a) {
  require(a.size() > 0, ErrorKind::invalid_input, "singular_values: empty matrix");
  require(is_finite(a), ErrorKind::invalid_input, "singular_values: non-finite entries");
  Eigen::JacobiSVD<Matrix> svd(a);
  const Eigen::VectorXd& s = svd.singularValues();
  SingularSpectrum out;
  out.values.assign(s.data(), s.data() + s.size());
  // Eigen already sorts, but keep the contract explicit.
  std::sort(out.values.begin(), out.values.end(), std::greater<>());
  return out;
}

double operator_norm(const Matrix& a) { return singular_values(a).largest(); }

double min_expansion(const Matrix& a) {
  require(a.rows() == a.cols(), ErrorKind::dimension, "min_expansion: matrix is not square");
  return singular_values(a).smallest();
}

Complex determinant(const Matrix& a) {
  require(a.rows() == a.cols(), ErrorKind::dimension, "determinant: matrix is not square");
  switch (a.rows()) {
    case 0: return {1.0, 0.0};
    case 1: return a(0, 0);
    case 2: return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    default: return a.partialPivLu().determinant();
  }
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

std::vector<std::vector<int>> k_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

Matrix exterior_power(const Matrix& a, int k) {
  const int n = static_cast<int>(a.rows());
  const int p = static_cast<int>(a.cols());
  require(k >= 1 && k <= std::min(n, p), ErrorKind::dimension,
          "exterior_power: k=" + std::to_string(k) + " out of range for " + std::to_string(n) + "x" +
              std::to_string(p) + " matrix");
  if (k == 1) return a;
  const std::uint64_t rdim = binomial(n, k);
  const std::uint64_t cdim = binomial(p, k);
  require(rdim <= kMaxCompoundDim && cdim <= kMaxCompoundDim, ErrorKind::compound_overflow,
          "exterior_power: compound dimension exceeds " + std::to_string(kMaxCompoundDim));

  const auto rows = k_subsets(n, k);
  const auto cols = k_subsets(p, k);
  Matrix out(static_cast<Eigen::Index>(rdim), static_cast<Eigen::Index>(cdim));
  Matrix minor(k, k);
  for (std::size_t I = 0; I < rows.size(); ++I) {
    for (std::size_t J = 0; J < cols.size(); ++J) {
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
          minor(r, c) = a(rows[I][static_cast<std::size_t>(r)], cols[J][static_cast<std::size_t>(c)]);
      out(static_cast<Eigen::Index>(I), static_cast<Eigen::Index>(J)) = determinant(minor);
    }
  }
  return out;
}

Matrix adjugate(const Matrix& a) {
  require(a.rows() == a.cols(), ErrorKind::dimension, "adjugate: matrix is not square");
  const int d = static_cast<int>(a.rows());
  require(d >= 1, ErrorKind::dimension, "adjugate: empty matrix");
  if (d == 1) return Matrix::Ones(1, 1);
  Matrix adj(d, d);
  Matrix minor(d - 1, d - 1);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      // Cofactor C_ij from deleting row i and column j; adj = C^T.
      for (int r = 0, rr = 0; r < d; ++r) {
        if (r == i) continue;
        for (int c = 0, cc = 0; c < d; ++c) {
          if (c == j) continue;
          minor(rr, cc++) = a(r, c);
        }
        ++rr;
      }
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      adj(j, i) = sign * determinant(minor);
    }
  }
  return adj;
}

Matrix realify(const Matrix& a) {
  Matrix out = Matrix::Zero(2 * a.rows(), 2 * a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double re = a(i, j).real();
      const double im = a(i, j).imag();
      out(2 * i, 2 * j) = re;
      out(2 * i, 2 * j + 1) = -im;
      out(2 * i + 1, 2 * j) = im;
      out(2 * i + 1, 2 * j + 1) = re;
    }
  }
  return out;
}

double min_expansion_from_det(double eps, double bound, int d) {
  require(std::isfinite(eps) && std::isfinite(bound) && eps > 0.0 && bound > 0.0 && d >= 1,
          ErrorKind::invalid_input, "min_expansion_from_det: inputs must be positive");
  // |det P| <= ||P||^d, so eps > B^d cannot come from a real matrix.
  require(eps <= std::pow(bound, d) * (1.0 + 1e-12), ErrorKind::invalid_input,
          "min_expansion_from_det: eps exceeds B^d");
  return eps / std::pow(bound, d - 1);
}

}  // namespace qpc
