#include "doctest.h"
#include "support.hpp"

#include "qpc/bounds.hpp"
#include "qpc/error.hpp"

#include <cmath>
#include <cstring>

using namespace qpc;
using namespace qpc::test;

TEST_CASE("growth: trivial products") {
  const double lambda = 10.0, B = 1.0;
  std::vector<Matrix> blocks;
  for (int j = 0; j < 15; ++j) {
    Matrix a = Matrix::Zero(4, 4);
    a.topLeftCorner(2, 2) = lambda * Matrix::Identity(2, 2);
    blocks.push_back(a);
  }
  const GrowthHypothesis h(lambda, B, 2, blocks);
  for (int k : {1, 2}) {
    const auto g = verify_growth(h, k);
    CHECK(g.measured == doctest::Approx(k * 15 * std::log(lambda)).epsilon(1e-12));
    CHECK(g.bound == doctest::Approx(k * 15 * std::log(9.0)).epsilon(1e-14));
    CHECK(g.pass);
    CHECK(g.max_step_ratio == 0.0);
  }

  // d = 1 scalar corners
  std::vector<Matrix> sc;
  double sum = 0.0;
  for (int j = 0; j < 12; ++j) {
    const double a = uniform(10.0, 30.0) * (j % 2 ? -1 : 1);
    sum += std::log(std::abs(a));
    Matrix m(2, 2);
    m << a, 0.3, -0.2, 0.5;
    sc.push_back(m);
  }
  const auto g = verify_growth(GrowthHypothesis(10.0, 1.0, 1, sc), 1);
  CHECK(g.pass);
  CHECK(g.measured >= sum - 12 * std::log(1.1));  // off-blocks perturb each step by < B / lambda
  CHECK(g.measured >= 12 * std::log(9.0));
}

TEST_CASE("growth: random hypotheses") {
  std::mt19937_64 gen(99);
  for (int t = 0; t < 100; ++t) {
    const auto h = random_growth_hypothesis(gen, 10.0, 1.0, 20, 2, 4);
    for (int k : {1, 2}) {
      const auto g = verify_growth(h, k);
      CHECK(g.pass);
      CHECK(g.step_invariant);
      CHECK(g.max_step_ratio <= 2.0 / 9.0 + 1e-12);
    }
  }
  for (int t = 0; t < 300; ++t) {
    const int d = 1 + t % 3;
    const int m = std::max(d + (t / 3) % 5, 2);
    const auto h = random_growth_hypothesis(gen, 10.0, 1.0, 20, d, std::min(m, 6));
    CHECK(verify_growth(h, 1 + t % d).pass);
  }
}

TEST_CASE("growth: hypothesis violations") {
  Matrix ok = Matrix::Identity(3, 3) * 0.5;
  ok(0, 0) = 10.0;
  std::vector<Matrix> blocks(4, ok);
  CHECK_NOTHROW(GrowthHypothesis(10.0, 1.0, 1, blocks));
  blocks[2](0, 0) = 5.0;
  try {
    GrowthHypothesis(10.0, 1.0, 1, blocks);
    FAIL("expected precondition");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::precondition);
    CHECK(std::strstr(e.what(), "j = 3") != nullptr);
  }
  blocks[2](0, 0) = 10.0;
  blocks[1](2, 0) = 1.5;
  CHECK_THROWS_AS(GrowthHypothesis(10.0, 1.0, 1, blocks), Error);
  CHECK_THROWS_AS(GrowthHypothesis(3.0, 1.0, 1, std::vector<Matrix>(2, Matrix::Identity(2, 2) * 3.0)), Error);
}

TEST_CASE("subharmonic mean estimate") {
  CHECK(subharmonic_lower_mean(2.0, 5.0, 0.0, 0.5) == 2.0);
  CHECK(subharmonic_lower_mean(3.0, 3.0, 0.3, 0.5) == doctest::Approx(3.0).epsilon(1e-14));
  const double a = std::log(1.05) / std::log(1.5);
  CHECK(alpha_from(0.05, 0.5) == doctest::Approx(0.12033).epsilon(1e-4));
  CHECK(subharmonic_lower_mean(2.0, 4.0, 0.05, 0.5) == doctest::Approx((2 - 4 * a) / (1 - a)).epsilon(1e-14));
  CHECK(subharmonic_lower_mean(2.0, 4.0, 0.05, 0.5) == doctest::Approx(1.7264).epsilon(1e-4));
  for (int t = 0; t < 200; ++t) {
    const double rho = uniform(0.05, 0.95), y0 = uniform(0, rho * 0.99);
    const double gamma = uniform(-5, 5), S = gamma + uniform(0, 5);
    CHECK(subharmonic_lower_mean(gamma, S, y0, rho) <= gamma + 1e-12);
  }
  CHECK(std::abs(subharmonic_lower_mean(1.0, 9.0, 1e-9, 0.5) - 1.0) < 1e-7);
  CHECK_THROWS_AS(subharmonic_lower_mean(3.0, 2.0, 0.1, 0.5), Error);
  CHECK_THROWS_AS(subharmonic_lower_mean(1.0, 2.0, 0.5, 0.5), Error);
}

TEST_CASE("thresholds") {
  const auto b = threshold_bounded_E({0, 0, 1.0, 1.0}, 1.0, 1, 0.5, 0.1);
  CHECK(b.eps0 == 1.0);
  CHECK(b.eps1 == 1.0);
  CHECK(b.lambda0 == doctest::Approx(3.0));
  CHECK(b.c(1) == doctest::Approx(std::log(81.0 / 4.0)));
  CHECK(b.c(1) == doctest::Approx(3.0082).epsilon(1e-4));
  CHECK(b.alpha < 0.5);

  const auto b2 = threshold_bounded_E({0, 0, 2.0, 1.0}, 1.0, 1, 0.5, 0.1);
  CHECK(b2.eps0 == 2 * b.eps0);
  CHECK(b2.lambda0 == doctest::Approx(b.lambda0 / 2));

  const auto d2 = threshold_bounded_E({1, 2, 0.3, 0.7}, 2.0, 2, 0.5, 0.1);
  CHECK(d2.eps1 == doctest::Approx(d2.eps0 / 12.0).epsilon(1e-15));
  CHECK(d2.N == 3);
  CHECK(d2.beta == doctest::Approx(0.21));
  CHECK(d2.c(2) == doctest::Approx(2 * d2.c(1)));
  CHECK(d2.eps0 == epsilon0(0.5, 0.1, 3, 0.3 * 0.7));

  const auto l = threshold_large_E({0, 5, 1.0, 0.01}, 1.0, 1, 0.5, 0.1);
  CHECK(l.eps1 == 1.0);
  CHECK(l.lambda0 == doctest::Approx(3.0));
  CHECK(l.c(1) == doctest::Approx(std::log(81.0 / 4.0)));
  const auto l1 = threshold_large_E({1, 0, 1.0, 1.0}, 1.0, 3, 0.5, 0.1);
  CHECK(l1.eps0 == doctest::Approx(1.0 / 30.0));
  CHECK(l1.eps1 == l1.eps0);
  const auto l2 = threshold_large_E({1, 0, 1.0, 1.0}, 2.0, 3, 0.5, 0.1);
  CHECK(l2.eps1 == doctest::Approx(l2.eps0 / 4.0));
  CHECK(l2.lower_bound(1, 100.0, -8.0) == doctest::Approx(std::log(800.0) - l2.c(1)));

  try {
    threshold_bounded_E({}, 1.0, 1, 0.5, 0.2);
    FAIL("expected parameter error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parameter);
  }
  CHECK_THROWS_AS(threshold_large_E({}, 1.0, 1, 0.5, max_delta(0.5)), Error);
  CHECK(default_delta(0.5) < max_delta(0.5));
}

TEST_CASE("threshold monotonicity") {
  const double rho = 0.5, delta = default_delta(rho);
  for (int t = 0; t < 50; ++t) {
    const BoundMeasurements m{static_cast<int>(uniform(0, 4)), static_cast<int>(uniform(0, 4)), uniform(0.01, 2),
                              uniform(0.01, 2)};
    const double B = uniform(0.5, 4);
    const int d = 1 + t % 3;
    const auto base = threshold_bounded_E(m, B, d, rho, delta);
    auto mb = m;
    mb.beta2 *= 1.01;
    CHECK(threshold_bounded_E(mb, B, d, rho, delta).lambda0 < base.lambda0);
    auto mn = m;
    mn.N1 += 1;
    CHECK(threshold_bounded_E(mn, B, d, rho, delta).lambda0 > base.lambda0);
    const auto bB = threshold_bounded_E(m, B * 1.01, d, rho, delta);
    CHECK(bB.lambda0 > base.lambda0);
    CHECK(bB.c(1) > base.c(1));
    CHECK(threshold_bounded_E(mb, B, d, rho, delta).c(1) < base.c(1));  // larger eps1

    const auto lb = threshold_large_E(m, B, d, rho, delta);
    const auto lB = threshold_large_E(m, B * 1.01, d, rho, delta);
    if (d > 1) CHECK(lB.lambda0 > lb.lambda0);
    CHECK(lB.c(1) > lb.c(1));
    CHECK(lb.eps0 == epsilon0(rho, delta, m.N1, m.beta1));
  }
}

TEST_CASE("E grid") {
  const auto E = theorem_E_grid(3.5);
  CHECK(E.size() == 37);
  CHECK(std::is_sorted(E.begin(), E.end()));
  CHECK(E.front() == -2 * 3.5 * 4.5);
  CHECK(std::count(E.begin(), E.end(), 0.0) == 1);
  CHECK(std::count(E.begin(), E.end(), -7.0) == 1);
}

TEST_CASE("theorem check on the almost Mathieu family") {
  const double rho = 0.5, delta = default_delta(rho);
  const auto U = LaurentMatrixFunction::identity(1);
  const auto V = LaurentMatrixFunction::scalar(LaurentScalar::cosine(2.0));
  const auto Wb = LaurentMatrixFunction::scalar(LaurentScalar::constant(-1.0));
  const auto Ws = LaurentMatrixFunction::identity(1);
  const auto O = LaurentMatrixFunction::zero(1, 1);
  const auto mm = measure_A_lambda_E(U, V, Wb, Ws, O, rho, certified_outer_radius(rho), 401);
  CHECK(mm.meas.N1 == 0);
  CHECK(mm.meas.N2 == 2);
  CHECK(mm.B == doctest::Approx(2.5).epsilon(1e-9));
  const auto bounds = theorem_bounds(mm.meas, mm.B, 1, rho, delta);
  CHECK(bounds.large.lambda0 == doctest::Approx(3.0));

  const double lambda = 2 * bounds.bounded.lambda0;
  auto family = [&](double lam) {
    return [&, lam](double e) { return build_A_lambda_E(U, V, Wb, Ws, O, lam, e); };
  };
  EstimatorConfig cfg;
  cfg.n = 1000;
  cfg.samples = 4;
  const auto E = theorem_E_grid(mm.B);
  const auto rep = verify_theorem(family(lambda), bounds, lambda, E, cfg);
  CHECK(rep.rows.size() == 37);
  CHECK(rep.all_pass);
  CHECK(rep.above_threshold);
  for (const auto& r : rep.rows) {
    CHECK(r.estimate >= std::log(lambda) - 1e-2);
    CHECK(r.regime == (std::abs(r.E) <= 2 * mm.B ? Regime::bounded_E : Regime::large_E));
  }

  try {
    verify_theorem(family(lambda / 4), bounds, lambda / 4, E, cfg);
    FAIL("expected refusal");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::precondition);
  }
  const auto below = verify_theorem(family(lambda / 4), bounds, lambda / 4, E, cfg, false);
  CHECK_FALSE(below.above_threshold);

  nlohmann::json j = rep;
  CHECK(j.at("rows").size() == 37);
  const std::string csv = theorem_csv(rep);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 38);
  CHECK(csv.rfind("E,k,regime,estimate,spread,bound,margin,pass\n", 0) == 0);

  // thread count does not change the report
  cfg.threads = 3;
  CHECK(theorem_csv(verify_theorem(family(lambda), bounds, lambda, E, cfg)) == csv);
}

TEST_CASE("circle convexity") {
  const auto c = build_constant(diagonal({4.0, 0.5}));
  CHECK(std::abs(circle_convexity_check(c, 1, 20, 0.8, 1.0, 1.2).residual) < 1e-14);

  const auto s = build_schrodinger_1d(LaurentScalar::cosine(2.0), 2.0, 0.0);
  const auto r = circle_convexity_check(s, 1, 100, 1.0, 1.05, 1.25, 256);
  CHECK(r.residual >= -1e-6);

  // u = log|z - 1|: circle means are log max(1, r)
  const auto g = build_scalar(LaurentScalar(0, {-1.0, 1.0}));
  const auto cc = circle_convexity_check(g, 1, 5, 0.8, 1.1, 1.25, 512);
  const double alpha = (std::log(1.1) - std::log(0.8)) / (std::log(1.25) - std::log(0.8));
  CHECK(std::abs(cc.m1) < 1e-12);
  CHECK(std::abs(cc.m - std::log(1.1)) < 1e-12);
  CHECK(std::abs(cc.residual - (alpha * std::log(1.25) - std::log(1.1))) < 1e-8);
}
