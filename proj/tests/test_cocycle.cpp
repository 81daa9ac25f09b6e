#include "doctest.h"
#include "support.hpp"

#include "qpc/cocycle.hpp"
#include "qpc/error.hpp"

#include <cmath>

using namespace qpc;
using namespace qpc::test;

namespace {

using LMatrix = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;

LaurentMatrixFunction scalar_block(const LaurentScalar& f) { return LaurentMatrixFunction::scalar(f); }
LaurentMatrixFunction const_block(Complex c) { return LaurentMatrixFunction::scalar(LaurentScalar::constant(c)); }

LaurentMatrixFunction goldsheid_sorets_D() {
  return LaurentMatrixFunction::diagonal({LaurentScalar::cosine(2.0), LaurentScalar::cosine(2.0, 0.31)});
}

LaurentMatrixFunction invertible_W(int d) {
  return LaurentMatrixFunction::identity(d) * Complex(3.0) + random_laurent_matrix(d, d, -1, 1, 0.15);
}

}  // namespace

TEST_CASE("rotation") {
  const Rotation g = Rotation::golden();
  CHECK(g.omega() == doctest::Approx((std::sqrt(5.0) - 1) / 2));
  CHECK_THROWS_AS(Rotation(0.5), Error);
  CHECK_THROWS_AS(Rotation(1.0 / 3.0), Error);
  CHECK_THROWS_AS(Rotation(355.0 / 999983.0), Error);
  CHECK_THROWS_AS(Rotation(0.0), Error);
  CHECK_THROWS_AS(Rotation(1.2), Error);
  CHECK_NOTHROW(Rotation(std::sqrt(2.0) - 1));

  // iterates stay on the starting circle
  const Complex z = std::polar(1.3, 0.4);
  for (long long j : {1LL, 17LL, 100000LL}) {
    CHECK(std::abs(std::abs(g.iterate(z, j)) - 1.3) < 1e-15);
    CHECK(std::abs(g.iterate(z, j) - z * std::pow(g.multiplier(), static_cast<double>(j))) < 1e-9);
  }
}

TEST_CASE("A_lambda assembly") {
  const auto c = build_A_lambda(scalar_block(LaurentScalar::cosine(2.0)), const_block(1.0), const_block(1.0),
                                const_block(0.0), 5.0);
  Matrix want(2, 2);
  want << 10, 1, 1, 0;
  CHECK((c(1.0) - want).norm() < 1e-14);
  CHECK(c.m() == 2);
  CHECK(c.d() == 1);

  const auto c0 = build_A_lambda(scalar_block(LaurentScalar::cosine(2.0)), const_block(1.0), const_block(1.0),
                                 const_block(0.0), 0.0);
  CHECK(std::abs(c0(Complex(0.3, 0.9))(0, 0)) == 0.0);

  // random blocks, entrywise oracle
  const auto V = random_laurent_matrix(2, 2, -1, 1), Wb = random_laurent_matrix(2, 3, -1, 1),
             Ws = random_laurent_matrix(3, 2, -2, 0), O = random_laurent_matrix(3, 3, 0, 1);
  const auto r = build_A_lambda(V, Wb, Ws, O, 2.5);
  for (int t = 0; t < 10; ++t) {
    const Complex z = std::polar(uniform(0.6, 1.4), uniform(0, kTwoPi));
    const Matrix a = r(z);
    CHECK((a.topLeftCorner(2, 2) - 2.5 * V(z)).norm() < 1e-12);
    CHECK((a.topRightCorner(2, 3) - Wb(z)).norm() < 1e-12);
    CHECK((a.bottomLeftCorner(3, 2) - Ws(z)).norm() < 1e-12);
    CHECK((a.bottomRightCorner(3, 3) - O(z)).norm() < 1e-12);
  }

  CHECK_THROWS_AS(build_A_lambda(V, Ws, Ws, O, 1.0), Error);
  try {
    build_A_lambda(const_block(0.0), const_block(1.0), const_block(1.0), const_block(0.0), 1.0);
    FAIL("expected transversality violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::transversality_violation);
  }
}

TEST_CASE("A_lambda_E") {
  const auto V = random_symmetric_laurent(2, 1);
  const auto Wb = random_laurent_matrix(2, 2, -1, 1), Ws = random_laurent_matrix(2, 2, -1, 1),
             O = random_laurent_matrix(2, 2, 0, 0);
  const auto a = build_A_lambda_E(LaurentMatrixFunction::identity(2), V, Wb, Ws, O, 3.0, 0.0);
  const auto b = build_A_lambda(V, Wb, Ws, O, 3.0);
  const Complex z = std::polar(1.1, 0.7);
  CHECK((a(z) - b(z)).norm() < 1e-12);

  // E beyond 2||V||_rho: m(V - E) > |E|/2 on the annulus
  const double rho = 0.5;
  const double E = 2.0 * V.norm_on_annulus(rho) * 1.01;
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 64; ++j) {
      const Complex w = std::polar(1.0 - rho + rho * i / 4.0, kTwoPi * j / 64);
      Matrix m = V(w);
      m.diagonal().array() -= E;
      CHECK(min_expansion(m) > E / 2);
    }

  // d = 1 scalar product
  const LaurentScalar u = LaurentScalar::constant(2.0) + LaurentScalar::cosine(1.0);
  const LaurentScalar v = LaurentScalar::cosine(2.0, 0.1);
  const auto s = build_A_lambda_E(scalar_block(u), scalar_block(v), const_block(1.0), const_block(-1.0),
                                  const_block(0.0), 4.0, 0.3);
  CHECK(std::abs(s(z)(0, 0) - 4.0 * u(z) * (v(z) - 0.3)) < 1e-12);

  CHECK_THROWS_AS(build_A_lambda_E(LaurentMatrixFunction::identity(2), LaurentMatrixFunction::identity(2), Wb, Ws,
                                   O, 1.0, 0.0),
                  Error);
}

TEST_CASE("schrodinger_1d") {
  const auto c = build_schrodinger_1d(LaurentScalar::cosine(2.0), 0.0, 3.0);
  Matrix want(2, 2);
  want << -3, -1, 1, 0;
  CHECK((c(Complex(0.2, 1.1)) - want).norm() < 1e-14);
  const auto c1 = build_schrodinger_1d(LaurentScalar::cosine(2.0), 1.0, 0.0);
  want << 2, -1, 1, 0;
  CHECK((c1(1.0) - want).norm() < 1e-14);
  for (int t = 0; t < 20; ++t) CHECK(std::abs(determinant(c1(std::polar(uniform(0.5, 1.5), uniform(0, 7)))) - 1.0) < 1e-14);

  // products stay in SL2
  const auto c2 = build_schrodinger_1d(LaurentScalar::cosine(2.0), 3.0, 0.4);
  // det cancels like eps ||M||^2, so only short products are meaningful
  for (int n : {1, 3, 6}) {
    const auto t = transfer(c2, torus_point(0.17), n);
    const double scale = std::exp(2.0 * t.log_scale);
    const Complex det = determinant(t.matrix) * scale;
    CHECK(std::abs(det - 1.0) < 1e-13 * std::max(1.0, scale * std::pow(operator_norm(t.matrix), 2)));
  }
}

TEST_CASE("band_jacobi reductions") {
  const auto D = goldsheid_sorets_D();
  const auto c = build_band_jacobi(LaurentMatrixFunction::identity(2), LaurentMatrixFunction::zero(2, 2), D, 7.0,
                                   1.5);
  const Complex z = std::polar(1.2, 0.3);
  Matrix m = D(z) * 7.0;
  m.diagonal().array() -= 1.5;
  CHECK((c(z).topLeftCorner(2, 2) - m).norm() < 1e-12);
  CHECK((c(z).bottomLeftCorner(2, 2) - Matrix::Identity(2, 2)).norm() == 0.0);
  CHECK(c.energy() == 1.5);
  CHECK(c.energy_internal() == doctest::Approx(1.5 / 7.0));

  // d = 1 reduces to schrodinger_1d with operator-units E
  const auto b1 = build_band_jacobi(LaurentMatrixFunction::identity(1), LaurentMatrixFunction::zero(1, 1),
                                    scalar_block(LaurentScalar::cosine(2.0)), 4.0, 0.8);
  const auto s1 = build_schrodinger_1d(LaurentScalar::cosine(2.0), 4.0, 0.8);
  for (double x : {0.1, 0.5, 0.77}) CHECK((b1(torus_point(x)) - s1(torus_point(x))).norm() < 1e-13);

  CHECK_THROWS_AS(build_band_jacobi(LaurentMatrixFunction::identity(2), LaurentMatrixFunction::zero(2, 2),
                                    LaurentMatrixFunction::identity(2), 1.0, 0.0),
                  Error);
  CHECK_THROWS_AS(build_band_jacobi(LaurentMatrixFunction::zero(2, 2), LaurentMatrixFunction::zero(2, 2), D, 1.0, 0.0),
                  Error);
}

TEST_CASE("band_jacobi reproduces the three-term recursion") {
  const Rotation rot = Rotation::golden();
  const int d = 2;
  const auto W = invertible_W(d);
  const auto R = random_symmetric_laurent(d, 1, 0.5);
  const auto D = goldsheid_sorets_D();
  const double lambda = 3.0, E = 0.7;
  const auto c = build_band_jacobi(W, R, D, lambda, E, rot);

  const double x = 0.2345;
  auto at = [&](const LaurentMatrixFunction& f, int n) { return f(torus_point(x + n * rot.omega())); };
  Vector psi_prev = random_complex(d, 1), psi = random_complex(d, 1);
  Vector state(2 * d);
  state << psi, psi_prev;
  for (int n = 0; n < 12; ++n) {
    // W_{n+1} psi_{n+1} = (lambda D_n - R_n - E) psi_n - W_n^T psi_{n-1}
    Matrix h = lambda * at(D, n) - at(R, n);
    h.diagonal().array() -= E;
    const Vector rhs = h * psi - at(W, n).transpose() * psi_prev;
    const Vector next = at(W, n + 1).partialPivLu().solve(rhs);
    psi_prev = psi;
    psi = next;
    state = c(torus_point(x + n * rot.omega())) * state;
    CHECK((state.head(d) - psi).norm() < 1e-9 * psi.norm());
    CHECK((state.tail(d) - psi_prev).norm() < 1e-9 * psi_prev.norm());
  }
}

TEST_CASE("adjugate regularization and symplectic conjugation") {
  const Rotation rot = Rotation::golden();
  for (int d : {1, 2, 3}) {
    const auto W = d == 1 ? scalar_block(LaurentScalar::constant(2.0) + LaurentScalar::cosine(1.0)) : invertible_W(d);
    const auto R = random_symmetric_laurent(d, 1, 0.3);
    const auto D = d == 1 ? scalar_block(LaurentScalar::cosine(2.0)) : random_symmetric_laurent(d, 1);
    const auto A = build_band_jacobi(W, R, D, 2.0, 0.4, rot);
    const auto At = build_adjugate_regularized(W, R, D, 2.0, 0.4, rot);
    const auto Aw = build_symplectic_weighted(W, R, D, 2.0, 0.4, rot);
    CHECK(At.singular_phases().empty());
    const LaurentScalar g = W.det();
    for (int t = 0; t < 100; ++t) {
      const Complex z = std::polar(uniform(0.8, 1.2), uniform(0, kTwoPi));
      const Complex zn = z * rot.multiplier();
      const Matrix a = A(z);
      CHECK((At(z) - g(zn) * a).norm() < 1e-10 * std::max(1.0, a.norm()));
      const Matrix conj = conjugation_matrix(W, zn).inverse() * Aw(z) * conjugation_matrix(W, z);
      CHECK((a - conj).norm() < 1e-10 * std::max(1.0, a.norm()));
      if (d == 1) CHECK(std::abs(determinant(Aw(z)) - 1.0) < 1e-12);
    }
  }

  // W = I: all three coincide
  const auto D = goldsheid_sorets_D();
  const auto R = LaurentMatrixFunction::constant(Matrix::Ones(2, 2) - Matrix::Identity(2, 2));
  const auto I = LaurentMatrixFunction::identity(2);
  const auto A = build_band_jacobi(I, R, D, 5.0, 1.0), At = build_adjugate_regularized(I, R, D, 5.0, 1.0),
             Aw = build_symplectic_weighted(I, R, D, 5.0, 1.0);
  const Complex z = torus_point(0.42);
  CHECK((A(z) - At(z)).norm() < 1e-13);
  CHECK((A(z) - Aw(z)).norm() < 1e-13);
}

TEST_CASE("singular phases are guarded") {
  // W = cos(2 pi x) vanishes at x = 1/4, 3/4
  const auto W = scalar_block(LaurentScalar::cosine(1.0));
  const auto D = scalar_block(LaurentScalar::cosine(2.0));
  const auto R = LaurentMatrixFunction::zero(1, 1);
  const Rotation rot = Rotation::golden();
  const auto A = build_band_jacobi(W, R, D, 2.0, 0.0, rot);
  REQUIRE(A.singular_phases().size() == 2);
  // A(z) needs W(z + w): singular at x = 1/4 - w
  try {
    A(torus_point(0.25 - rot.omega()));
    FAIL("expected singular phase");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::singular_phase);
  }
  CHECK_NOTHROW(A(torus_point(0.25)));

  const auto Aw = build_symplectic_weighted(W, R, D, 2.0, 0.0, rot);
  CHECK_THROWS_AS(Aw(torus_point(0.75)), Error);

  // adjugate: scalar d = 1, generator is cos(z + w) times the band generator
  const auto At = build_adjugate_regularized(W, R, D, 2.0, 0.0, rot);
  CHECK_NOTHROW(At(torus_point(0.25 - rot.omega())));
  const Complex z = torus_point(0.1);
  CHECK((At(z) - LaurentScalar::cosine(1.0)(z * rot.multiplier()) * A(z)).norm() < 1e-12);
}

TEST_CASE("transfer products") {
  const auto diag = build_constant(diagonal({2.0, 0.5}));
  auto t = transfer(diag, 1.0, 1);
  CHECK(std::exp(t.log_scale) * operator_norm(t.matrix) == doctest::Approx(2.0));
  CHECK(operator_norm(t.matrix) >= 1.0);
  CHECK(operator_norm(t.matrix) < 2.0);
  t = transfer(diag, 1.0, 100);
  CHECK(std::abs(t.log_norm_rate() - std::log(2.0)) < 1e-15);

  // naive product in long double
  const auto A = build_general(random_laurent_matrix(3, 3, -1, 1, 0.7), 1);
  const Complex z0 = torus_point(0.31);
  t = transfer(A, z0, 50);
  LMatrix naive = LMatrix::Identity(3, 3);
  for (int j = 0; j < 50; ++j) naive = A(A.rotation().iterate(z0, j)).cast<std::complex<long double>>() * naive;
  const Matrix ours = t.matrix * std::exp(t.log_scale);
  const Matrix ref = naive.cast<Complex>();
  CHECK((ours - ref).norm() <= 1e-8 * ref.norm());

  // cocycle law
  const int n = 30, m = 25;
  const auto tn = transfer(A, z0, n);
  const auto tm = transfer(A, A.rotation().iterate(z0, n), m);
  const auto tnm = transfer(A, z0, n + m);
  const Matrix composed = tm.matrix * tn.matrix;
  const double shift = tm.log_scale + tn.log_scale - tnm.log_scale;
  CHECK((composed * std::exp(shift) - tnm.matrix).norm() <= 1e-8 * tnm.matrix.norm());

  // long products do not overflow
  const auto big = build_constant(diagonal({1e6, 1e-6}));
  t = transfer(big, 1.0, 5000);
  CHECK(std::abs(t.log_norm_rate() - std::log(1e6)) < 1e-10);

  CHECK_THROWS_AS(transfer(diag, 1.0, 0), Error);
}

TEST_CASE("realified cocycle") {
  const auto A = build_general(random_laurent_matrix(2, 2, -1, 1), 1);
  const auto R = realified(A);
  CHECK(R.m() == 4);
  CHECK(R.d() == 2);
  const Complex z = torus_point(0.6);
  CHECK((R(z) - realify(A(z))).norm() == 0.0);
}
