#pragma once

// Jets of matrix potentials, elementary symmetric functions e_k, and the
// non-degeneracy test that rules out constant eigenvalues.

#include "qpc/laurent.hpp"

#include <vector>

namespace qpc {

/// (e_1(A), ..., e_d(A)) with e_k(A) = (-1)^k tr(wedge^k A).
std::vector<Complex> elementary_symmetric(const Matrix& A);

struct Jet {
  int order = 0;
  double x = 0.0;
  // values[k] = d^k V / dx^k at x, torus chart x -> exp(2 pi i x)
  std::vector<Matrix> values;
};

Jet jet_of(const LaurentMatrixFunction& V, double x, int order);

/// d x d matrix whose row i is the i-th t-derivative at t = 0 of
/// e_*(sum_k t^k / k! A_k); computed with truncated power series in t.
Matrix nondegeneracy_matrix(const Jet& j);

struct NondegeneracyCertificate {
  bool certified = false;  // false means inconclusive
  double witness_x = 0.0;
  Complex det{};
  double scale = 0.0;  // product of the row norms
  int scanned = 0;
};

/// Scans x = (i + 1/2) / scan; certified at the first x (by index) with
/// |det I| > 1e-10 * product of row norms.
NondegeneracyCertificate has_no_constant_eigenvalues(const LaurentMatrixFunction& V, int scan = 64, int threads = 1);

void to_json(nlohmann::json& j, const NondegeneracyCertificate& c);

}  // namespace qpc
