#include "qpc/cocycle.hpp"

#include "qpc/annulus.hpp"
#include "qpc/error.hpp"

#include <cmath>
#include <string>

namespace qpc {

// ---------------------------------------------------------------------------
// Rotation

Rotation::Rotation(double omega) : omega_(omega) {
  require(std::isfinite(omega) && omega > 0.0 && omega < 1.0, ErrorKind::invalid_input,
          "rotation: omega must lie in (0, 1)");
  // Continued fraction convergents p/q up to q = 1e6.
  double x = omega;
  long double p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(x);
    const long double p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > 1e6) break;
    if (q2 > 0 && std::abs(omega - static_cast<double>(p2 / q2)) < 1e-14)
      fail(ErrorKind::invalid_input, "rotation: omega is numerically rational (p/q = " +
                                         std::to_string(static_cast<long long>(p2)) + "/" +
                                         std::to_string(static_cast<long long>(q2)) + ")");
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = x - a;
    if (frac <= 0.0) break;
    x = 1.0 / frac;
  }
}

Rotation Rotation::golden() { return Rotation((std::sqrt(5.0) - 1.0) / 2.0); }

Complex Rotation::iterate(Complex z, long long j) const {
  const long double x = std::arg(z) / kTwoPi + static_cast<long double>(j) * omega_;
  const long double frac = x - std::floor(x);
  return std::polar(std::abs(z), kTwoPi * static_cast<double>(frac));
}

// ---------------------------------------------------------------------------
// BlockCocycle

std::string_view to_string(CocycleKind kind) {
  switch (kind) {
    case CocycleKind::A_lambda: return "A_lambda";
    case CocycleKind::A_lambda_E: return "A_lambda_E";
    case CocycleKind::schrodinger_1d: return "schrodinger_1d";
    case CocycleKind::band_jacobi: return "band_jacobi";
    case CocycleKind::adjugate_regularized: return "adjugate_regularized";
    case CocycleKind::symplectic_weighted: return "symplectic_weighted";
    case CocycleKind::scalar: return "scalar";
    case CocycleKind::general: return "general";
  }
  return "general";
}

CocycleKind cocycle_kind_from_string(std::string_view name) {
  for (CocycleKind k : {CocycleKind::A_lambda, CocycleKind::A_lambda_E, CocycleKind::schrodinger_1d,
                        CocycleKind::band_jacobi, CocycleKind::adjugate_regularized,
                        CocycleKind::symplectic_weighted, CocycleKind::scalar, CocycleKind::general})
    if (to_string(k) == name) return k;
  fail(ErrorKind::parse, "unknown cocycle kind '" + std::string(name) + "'");
}

BlockCocycle::BlockCocycle(CocycleKind kind, int m, int d, Generator generator, Rotation rot)
    : kind_(kind), m_(m), d_(d), gen_(std::move(generator)), rot_(rot) {
  require(m >= 1 && d >= 1 && d <= m, ErrorKind::dimension, "cocycle: need 1 <= d <= m");
  require(static_cast<bool>(gen_), ErrorKind::invalid_input, "cocycle: empty generator");
}

void BlockCocycle::set_parameters(double lambda, double energy, double energy_internal) {
  lambda_ = lambda;
  energy_ = energy;
  energy_internal_ = energy_internal;
}

void BlockCocycle::check_phase(Complex z) const {
  for (const Complex& s : singular_) {
    if (std::abs(z - s) <= kSingularPhaseTol * std::max(1.0, std::abs(s))) {
      fail(ErrorKind::singular_phase, "cocycle: phase z = (" + std::to_string(z.real()) + ", " +
                                          std::to_string(z.imag()) + ") hits the singular point (" +
                                          std::to_string(s.real()) + ", " + std::to_string(s.imag()) + ")");
    }
  }
}

Matrix BlockCocycle::operator()(Complex z) const {
  if (!singular_.empty()) check_phase(z);
  return gen_(z);
}

// ---------------------------------------------------------------------------
// builders

namespace {

void require_shape(const LaurentMatrixFunction& f, int rows, int cols, const char* name) {
  require(f.rows() == rows && f.cols() == cols, ErrorKind::dimension,
          std::string("cocycle: block ") + name + " must be " + std::to_string(rows) + "x" + std::to_string(cols) +
              ", got " + std::to_string(f.rows()) + "x" + std::to_string(f.cols()));
}

void require_finite(double x, const char* name) {
  require(std::isfinite(x), ErrorKind::invalid_input, std::string("cocycle: ") + name + " must be finite");
}

void require_no_constant_eigenvalue(const LaurentMatrixFunction& V, const char* name) {
  if (auto e = find_constant_eigenvalue(V))
    fail(ErrorKind::transversality_violation, std::string("cocycle: ") + name + " has the constant eigenvalue " +
                                                  std::to_string(e->real()));
}

void require_hermitian(const LaurentMatrixFunction& V, const char* name) {
  require(V.is_hermitian_on_torus(1e-12), ErrorKind::invalid_input,
          std::string("cocycle: ") + name + " must be symmetric/Hermitian on the torus");
}

// Common data of the three band models.
struct BandData {
  int d;
  double lambda;
  double e;  // E / lambda
  LaurentMatrixFunction W, W_next, WT, V;
  LaurentScalar g, g_next;
};

std::shared_ptr<const BandData> band_data(const LaurentMatrixFunction& W, const LaurentMatrixFunction& R,
                                          const LaurentMatrixFunction& D, double lambda, double E,
                                          const Rotation& rot) {
  require(W.is_square(), ErrorKind::dimension, "band model: W must be square");
  const int d = W.rows();
  require_shape(R, d, d, "R");
  require_shape(D, d, d, "D");
  require_finite(lambda, "lambda");
  require_finite(E, "E");
  require(lambda > 0.0, ErrorKind::invalid_input, "band model: lambda must be positive");
  require_hermitian(R, "R");
  require_hermitian(D, "D");
  if (det_identically_zero(W)) fail(ErrorKind::transversality_violation, "band model: det W vanishes identically");
  require_no_constant_eigenvalue(D, "D");

  auto b = std::make_shared<BandData>();
  b->d = d;
  b->lambda = lambda;
  b->e = E / lambda;
  b->W = W;
  b->W_next = W.shifted(rot.omega());
  b->WT = W.transpose();
  b->V = D - R * Complex(1.0 / lambda);
  b->g = W.det();
  b->g_next = b->g.shifted(rot.omega());
  return b;
}

std::vector<Complex> zero_locations(const LaurentScalar& g) {
  std::vector<Complex> out;
  for (const Zero& z : all_zeros(g).zeros) out.push_back(z.location);
  return out;
}

Matrix shifted_V(const BandData& b, Complex z) {
  Matrix v = b.V(z);
  v.diagonal().array() -= b.e;
  return v;
}

}  // namespace

BlockCocycle build_A_lambda(const LaurentMatrixFunction& V, const LaurentMatrixFunction& Wb,
                            const LaurentMatrixFunction& Ws, const LaurentMatrixFunction& O, double lambda,
                            Rotation rot) {
  require(V.is_square(), ErrorKind::dimension, "A_lambda: V must be square");
  const int d = V.rows();
  const int m = d + O.rows();
  require_shape(O, m - d, m - d, "O");
  require_shape(Wb, d, m - d, "Wb");
  require_shape(Ws, m - d, d, "Ws");
  require_finite(lambda, "lambda");
  if (det_identically_zero(V)) fail(ErrorKind::transversality_violation, "A_lambda: det V vanishes identically");

  BlockCocycle c(
      CocycleKind::A_lambda, m, d,
      [=](Complex z) {
        Matrix a(m, m);
        a.topLeftCorner(d, d) = lambda * V(z);
        a.topRightCorner(d, m - d) = Wb(z);
        a.bottomLeftCorner(m - d, d) = Ws(z);
        a.bottomRightCorner(m - d, m - d) = O(z);
        return a;
      },
      rot);
  c.set_parameters(lambda, 0.0, 0.0);
  return c;
}

BlockCocycle build_A_lambda_E(const LaurentMatrixFunction& U, const LaurentMatrixFunction& V,
                              const LaurentMatrixFunction& Wb, const LaurentMatrixFunction& Ws,
                              const LaurentMatrixFunction& O, double lambda, double E, Rotation rot) {
  require(V.is_square(), ErrorKind::dimension, "A_lambda_E: V must be square");
  const int d = V.rows();
  const int m = d + O.rows();
  require_shape(U, d, d, "U");
  require_shape(O, m - d, m - d, "O");
  require_shape(Wb, d, m - d, "Wb");
  require_shape(Ws, m - d, d, "Ws");
  require_finite(lambda, "lambda");
  require_finite(E, "E");
  require_hermitian(V, "V");
  if (det_identically_zero(U)) fail(ErrorKind::transversality_violation, "A_lambda_E: det U vanishes identically");
  require_no_constant_eigenvalue(V, "V");

  BlockCocycle c(
      CocycleKind::A_lambda_E, m, d,
      [=](Complex z) {
        Matrix v = V(z);
        v.diagonal().array() -= E;
        Matrix a(m, m);
        a.topLeftCorner(d, d) = lambda * U(z) * v;
        a.topRightCorner(d, m - d) = Wb(z);
        a.bottomLeftCorner(m - d, d) = Ws(z);
        a.bottomRightCorner(m - d, m - d) = O(z);
        return a;
      },
      rot);
  c.set_parameters(lambda, E, E);
  return c;
}

BlockCocycle build_schrodinger_1d(const LaurentScalar& v, double lambda, double E, Rotation rot) {
  require_finite(lambda, "lambda");
  require_finite(E, "E");
  require(v.is_real_on_torus(1e-12 * std::max(1.0, v.max_abs_coefficient())), ErrorKind::invalid_input,
          "schrodinger_1d: v must be real on the torus");
  BlockCocycle c(
      CocycleKind::schrodinger_1d, 2, 1,
      [=](Complex z) {
        Matrix a(2, 2);
        a << lambda * v(z) - E, -1.0, 1.0, 0.0;
        return a;
      },
      rot);
  c.set_parameters(lambda, E, E);
  return c;
}

BlockCocycle build_band_jacobi(const LaurentMatrixFunction& W, const LaurentMatrixFunction& R,
                               const LaurentMatrixFunction& D, double lambda, double E, Rotation rot) {
  auto b = band_data(W, R, D, lambda, E, rot);
  const int d = b->d;
  BlockCocycle c(
      CocycleKind::band_jacobi, 2 * d, d,
      [b, d](Complex z) {
        const auto lu = b->W_next(z).partialPivLu();
        Matrix a = Matrix::Zero(2 * d, 2 * d);
        a.topLeftCorner(d, d) = b->lambda * lu.solve(shifted_V(*b, z));
        a.topRightCorner(d, d) = -lu.solve(b->WT(z));
        a.bottomLeftCorner(d, d).setIdentity();
        return a;
      },
      rot);
  c.set_parameters(lambda, E, b->e);
  // W(z + w) is singular where g(z exp(2 pi i w)) = 0.
  c.set_singular_phases(zero_locations(b->g_next));
  return c;
}

BlockCocycle build_adjugate_regularized(const LaurentMatrixFunction& W, const LaurentMatrixFunction& R,
                                        const LaurentMatrixFunction& D, double lambda, double E, Rotation rot) {
  auto b = band_data(W, R, D, lambda, E, rot);
  const int d = b->d;
  BlockCocycle c(
      CocycleKind::adjugate_regularized, 2 * d, d,
      [b, d](Complex z) {
        const Matrix adj = adjugate(b->W_next(z));
        Matrix a = Matrix::Zero(2 * d, 2 * d);
        a.topLeftCorner(d, d) = b->lambda * adj * shifted_V(*b, z);
        a.topRightCorner(d, d) = -adj * b->WT(z);
        a.bottomLeftCorner(d, d) = b->g_next(z) * Matrix::Identity(d, d);
        return a;
      },
      rot);
  c.set_parameters(lambda, E, b->e);
  return c;
}

BlockCocycle build_symplectic_weighted(const LaurentMatrixFunction& W, const LaurentMatrixFunction& R,
                                       const LaurentMatrixFunction& D, double lambda, double E, Rotation rot) {
  auto b = band_data(W, R, D, lambda, E, rot);
  const int d = b->d;
  BlockCocycle c(
      CocycleKind::symplectic_weighted, 2 * d, d,
      [b, d](Complex z) {
        const Matrix w_inv = b->W(z).inverse();
        Matrix a = Matrix::Zero(2 * d, 2 * d);
        a.topLeftCorner(d, d) = b->lambda * shifted_V(*b, z) * w_inv;
        a.topRightCorner(d, d) = -b->WT(z);
        a.bottomLeftCorner(d, d) = w_inv;
        return a;
      },
      rot);
  c.set_parameters(lambda, E, b->e);
  c.set_singular_phases(zero_locations(b->g));
  return c;
}

BlockCocycle build_scalar(const LaurentScalar& g, Rotation rot) {
  require(!g.is_zero(), ErrorKind::invalid_input, "scalar cocycle: g vanishes identically");
  return BlockCocycle(
      CocycleKind::scalar, 1, 1, [g](Complex z) { return Matrix::Constant(1, 1, g(z)); }, rot);
}

BlockCocycle build_general(const LaurentMatrixFunction& A, int d, Rotation rot) {
  require(A.is_square(), ErrorKind::dimension, "general cocycle: A must be square");
  return BlockCocycle(
      CocycleKind::general, A.rows(), d, [A](Complex z) { return A(z); }, rot);
}

BlockCocycle build_constant(const Matrix& A, int d, Rotation rot) {
  require(A.rows() == A.cols() && A.rows() > 0, ErrorKind::dimension, "constant cocycle: A must be square");
  require(is_finite(A), ErrorKind::invalid_input, "constant cocycle: non-finite entries");
  return BlockCocycle(
      CocycleKind::general, static_cast<int>(A.rows()), d, [A](Complex) { return A; }, rot);
}

BlockCocycle realified(const BlockCocycle& c) {
  BlockCocycle r(
      CocycleKind::general, 2 * c.m(), 2 * c.d(), [c](Complex z) { return realify(c(z)); }, c.rotation());
  r.set_parameters(c.lambda(), c.energy(), c.energy_internal());
  return r;
}

Matrix conjugation_matrix(const LaurentMatrixFunction& W, Complex z) {
  const int d = W.rows();
  Matrix c = Matrix::Identity(2 * d, 2 * d);
  c.topLeftCorner(d, d) = W(z);
  return c;
}

// ---------------------------------------------------------------------------
// transfer

double TransferProduct::log_norm_rate() const { return (log_scale + std::log(operator_norm(matrix))) / n; }

namespace {

// Largest |entry| bounds the operator norm within a factor m.
double cheap_norm(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }

void rescale_pow2(Matrix& a, double& log_scale, double norm) {
  int e = 0;
  std::frexp(norm, &e);
  a *= std::ldexp(1.0, -(e - 1));
  log_scale += (e - 1) * std::log(2.0);
}

}  // namespace

TransferProduct transfer(const BlockCocycle& c, Complex z, int n) {
  require(n >= 1, ErrorKind::invalid_input, "transfer: n must be positive");
  require(z != Complex{}, ErrorKind::domain, "transfer: z = 0");
  TransferProduct t;
  t.n = n;
  t.matrix = Matrix::Identity(c.m(), c.m());
  constexpr double kLo = 1.0 / 1024.0, kHi = 1024.0;
  for (int j = 0; j < n; ++j) {
    t.matrix = c(c.rotation().iterate(z, j)) * t.matrix;
    const double s = cheap_norm(t.matrix);
    require(std::isfinite(s), ErrorKind::invalid_input, "transfer: non-finite product");
    if (s == 0.0) fail(ErrorKind::invalid_input, "transfer: product vanished (singular generator)");
    if (s < kLo || s > kHi) rescale_pow2(t.matrix, t.log_scale, s);
  }
  rescale_pow2(t.matrix, t.log_scale, operator_norm(t.matrix));
  return t;
}

}  // namespace qpc
