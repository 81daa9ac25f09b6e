#include "qpc/jets.hpp"

#include "qpc/error.hpp"
#include "numeric_util.hpp"

#include <Eigen/LU>

#include <cmath>

namespace qpc {

namespace {

constexpr double kDegenerateTol = 1e-10;

// truncated power series in t with matrix coefficients, order d
using MatrixSeries = std::vector<Matrix>;
using Series = std::vector<Complex>;

MatrixSeries multiply(const MatrixSeries& a, const MatrixSeries& b) {
  const std::size_t n = a.size();
  MatrixSeries c(n, Matrix::Zero(a[0].rows(), b[0].cols()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; i + j < n; ++j) c[i + j].noalias() += a[i] * b[j];
  return c;
}

Series multiply(const Series& a, const Series& b) {
  Series c(a.size(), Complex{});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; i + j < a.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

std::vector<Complex> elementary_symmetric(const Matrix& A) {
  require(A.rows() == A.cols(), ErrorKind::dimension, "elementary_symmetric: A must be square");
  const int d = static_cast<int>(A.rows());
  std::vector<Complex> e(static_cast<std::size_t>(d));
  for (int k = 1; k <= d; ++k) {
    const Complex tr = k == d ? determinant(A) : exterior_power(A, k).trace();
    e[static_cast<std::size_t>(k - 1)] = (k % 2 ? -1.0 : 1.0) * tr;
  }
  return e;
}

Jet jet_of(const LaurentMatrixFunction& V, double x, int order) {
  require(V.is_square(), ErrorKind::dimension, "jet_of: V must be square");
  require(order >= 0, ErrorKind::invalid_input, "jet_of: order must be >= 0");
  Jet j;
  j.order = order;
  j.x = x;
  for (int k = 0; k <= order; ++k) j.values.push_back(V.torus_derivative(x, k));
  return j;
}

Matrix nondegeneracy_matrix(const Jet& j) {
  require(!j.values.empty(), ErrorKind::invalid_input, "nondegeneracy_matrix: empty jet");
  const int d = static_cast<int>(j.values[0].rows());
  require(j.order == d && static_cast<int>(j.values.size()) == d + 1, ErrorKind::dimension,
          "nondegeneracy_matrix: jet order must equal the matrix size");
  const auto n = static_cast<std::size_t>(d + 1);

  // A(t) = sum t^k / k! A_k
  MatrixSeries A(n);
  for (int k = 0; k <= d; ++k) A[static_cast<std::size_t>(k)] = j.values[static_cast<std::size_t>(k)] / factorial(k);

  // power sums p_i = tr A(t)^i, then Newton: i s_i = sum_{l=1}^{i} (-1)^{l-1} s_{i-l} p_l
  std::vector<Series> p(n, Series(n));
  MatrixSeries P = A;
  for (int i = 1; i <= d; ++i) {
    if (i > 1) P = multiply(P, A);
    for (std::size_t c = 0; c < n; ++c) p[static_cast<std::size_t>(i)][c] = P[c].trace();
  }
  std::vector<Series> s(n, Series(n, Complex{}));
  s[0][0] = 1.0;
  for (int i = 1; i <= d; ++i) {
    Series acc(n, Complex{});
    for (int l = 1; l <= i; ++l) {
      const Series term = multiply(s[static_cast<std::size_t>(i - l)], p[static_cast<std::size_t>(l)]);
      const double sign = l % 2 ? 1.0 : -1.0;
      for (std::size_t c = 0; c < n; ++c) acc[c] += sign * term[c];
    }
    for (std::size_t c = 0; c < n; ++c) s[static_cast<std::size_t>(i)][c] = acc[c] / static_cast<double>(i);
  }

  // e_k = (-1)^k s_k; row i holds i-th derivatives = i! [t^i]
  Matrix I(d, d);
  for (int i = 1; i <= d; ++i)
    for (int k = 1; k <= d; ++k)
      I(i - 1, k - 1) = (k % 2 ? -1.0 : 1.0) * factorial(i) * s[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
  return I;
}

NondegeneracyCertificate has_no_constant_eigenvalues(const LaurentMatrixFunction& V, int scan, int threads) {
  require(V.is_square(), ErrorKind::dimension, "has_no_constant_eigenvalues: V must be square");
  require(scan >= 1, ErrorKind::invalid_input, "has_no_constant_eigenvalues: scan must be positive");
  const int d = V.rows();
  struct Point {
    Complex det;
    double scale = 0.0;
  };
  std::vector<Point> pts(static_cast<std::size_t>(scan));
  detail::parallel_for(scan, threads, [&](int i) {
    const double x = (i + 0.5) / scan;
    const Matrix I = nondegeneracy_matrix(jet_of(V, x, d));
    Point& p = pts[static_cast<std::size_t>(i)];
    p.det = I.determinant();
    p.scale = 1.0;
    for (int r = 0; r < d; ++r) p.scale *= I.row(r).norm();
  });
  NondegeneracyCertificate out;
  out.scanned = scan;
  for (int i = 0; i < scan; ++i) {
    const Point& p = pts[static_cast<std::size_t>(i)];
    if (p.scale > 0.0 && std::abs(p.det) > kDegenerateTol * p.scale) {
      out.certified = true;
      out.witness_x = (i + 0.5) / scan;
      out.det = p.det;
      out.scale = p.scale;
      break;
    }
  }
  return out;
}

void to_json(nlohmann::json& j, const NondegeneracyCertificate& c) {
  j = nlohmann::json{{"result", c.certified ? "certified_yes" : "inconclusive"}, {"scanned", c.scanned}};
  if (c.certified) {
    j["witness_x"] = c.witness_x;
    j["det_abs"] = std::abs(c.det);
    j["row_norm_product"] = c.scale;
  }
}

}  // namespace qpc
