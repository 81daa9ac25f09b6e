#pragma once

// Cocycles z -> A(z) over the rotation z -> z exp(2 pi i omega), and their
// transfer products M_n(z) = A(z_{n-1}) ... A(z_0).

#include "qpc/laurent.hpp"

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace qpc {

/// Irrational rotation number. Construction rejects omega that lies within
/// 1e-14 of a rational p/q with q <= 1e6.
class Rotation {
 public:
  Rotation() : Rotation(golden()) {}
  explicit Rotation(double omega);

  /// (sqrt(5) - 1) / 2
  static Rotation golden();

  double omega() const { return omega_; }
  /// exp(2 pi i omega)
  Complex multiplier() const { return torus_point(omega_); }
  /// Phase of the j-th iterate of z: |z| exp(2 pi i (arg(z)/2pi + j omega)).
  Complex iterate(Complex z, long long j) const;

 private:
  double omega_;
};

enum class CocycleKind {
  A_lambda,
  A_lambda_E,
  schrodinger_1d,
  band_jacobi,
  adjugate_regularized,
  symplectic_weighted,
  scalar,
  general,
};

std::string_view to_string(CocycleKind kind);
CocycleKind cocycle_kind_from_string(std::string_view name);

class BlockCocycle {
 public:
  using Generator = std::function<Matrix(Complex)>;

  BlockCocycle(CocycleKind kind, int m, int d, Generator generator, Rotation rot = {});

  CocycleKind kind() const { return kind_; }
  int m() const { return m_; }
  int d() const { return d_; }
  const Rotation& rotation() const { return rot_; }

  double lambda() const { return lambda_; }
  /// Energy in the units the caller passed.
  double energy() const { return energy_; }
  /// Energy as it enters the corner block. Differs from energy() for the
  /// band models, which divide the operator energy by lambda.
  double energy_internal() const { return energy_internal_; }
  void set_parameters(double lambda, double energy, double energy_internal);

  /// Points where the generator is undefined (band_jacobi, symplectic).
  const std::vector<Complex>& singular_phases() const { return singular_; }
  void set_singular_phases(std::vector<Complex> s) { singular_ = std::move(s); }

  /// Evaluates A(z); throws singular_phase within 1e-9 of a singular phase.
  Matrix operator()(Complex z) const;
  void check_phase(Complex z) const;

 private:
  CocycleKind kind_;
  int m_;
  int d_;
  Generator gen_;
  Rotation rot_;
  double lambda_ = 0.0;
  double energy_ = 0.0;
  double energy_internal_ = 0.0;
  std::vector<Complex> singular_;
};

inline constexpr double kSingularPhaseTol = 1e-9;

/// [[lambda V, Wb], [Ws, O]]
BlockCocycle build_A_lambda(const LaurentMatrixFunction& V, const LaurentMatrixFunction& Wb,
                            const LaurentMatrixFunction& Ws, const LaurentMatrixFunction& O, double lambda,
                            Rotation rot = {});

/// [[lambda U (V - E I), Wb], [Ws, O]]
BlockCocycle build_A_lambda_E(const LaurentMatrixFunction& U, const LaurentMatrixFunction& V,
                              const LaurentMatrixFunction& Wb, const LaurentMatrixFunction& Ws,
                              const LaurentMatrixFunction& O, double lambda, double E, Rotation rot = {});

/// [[lambda v - E, -1], [1, 0]]
BlockCocycle build_schrodinger_1d(const LaurentScalar& v, double lambda, double E, Rotation rot = {});

/// Energies are in operator units: E enters as e = E / lambda with
/// V = D - R / lambda, so the corner is W^{-1}(z+w) (lambda D - R - E).
BlockCocycle build_band_jacobi(const LaurentMatrixFunction& W, const LaurentMatrixFunction& R,
                               const LaurentMatrixFunction& D, double lambda, double E, Rotation rot = {});
/// g(z+w) times the band_jacobi generator, with g = det W; no singularities.
BlockCocycle build_adjugate_regularized(const LaurentMatrixFunction& W, const LaurentMatrixFunction& R,
                                        const LaurentMatrixFunction& D, double lambda, double E,
                                        Rotation rot = {});
/// [[lambda (V - e I) W^{-1}, -W^T], [W^{-1}, O]]
BlockCocycle build_symplectic_weighted(const LaurentMatrixFunction& W, const LaurentMatrixFunction& R,
                                       const LaurentMatrixFunction& D, double lambda, double E,
                                       Rotation rot = {});

/// 1x1 cocycle z -> g(z).
BlockCocycle build_scalar(const LaurentScalar& g, Rotation rot = {});

/// Cocycle given by a square Laurent matrix function; d marks the corner.
BlockCocycle build_general(const LaurentMatrixFunction& A, int d, Rotation rot = {});
/// Constant cocycle.
BlockCocycle build_constant(const Matrix& A, int d = 1, Rotation rot = {});
/// Entrywise realification of the generator (2m x 2m, corner 2d).
BlockCocycle realified(const BlockCocycle& c);

/// C(z) = diag(W(z), I) from the conjugation A(z) = C(z+w)^{-1} A^W(z) C(z).
Matrix conjugation_matrix(const LaurentMatrixFunction& W, Complex z);

struct TransferProduct {
  int n = 0;
  double log_scale = 0.0;  // true product = exp(log_scale) * matrix
  Matrix matrix;

  /// (1/n) log ||M_n||
  double log_norm_rate() const;
};

/// Rescales by powers of two whenever the norm leaves [2^-10, 2^10]; on
/// return ||matrix|| lies in [1, 2).
TransferProduct transfer(const BlockCocycle& c, Complex z, int n);

}  // namespace qpc
