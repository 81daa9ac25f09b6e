#include "qpc/bounds.hpp"

#include "qpc/error.hpp"
#include "numeric_util.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace qpc {

namespace {

constexpr double kCheckSlack = 1e-12;

double unit(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

Matrix gaussian(std::mt19937_64& gen, int r, int c) {
  std::normal_distribution<double> nd;
  Matrix a(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) a(i, j) = Complex(nd(gen), nd(gen));
  return a;
}

Matrix unitary(std::mt19937_64& gen, int n) {
  Eigen::HouseholderQR<Matrix> qr(gaussian(gen, n, n));
  return qr.householderQ() * Matrix::Identity(n, n);
}

Matrix with_norm(std::mt19937_64& gen, int r, int c, double target) {
  if (r == 0 || c == 0) return Matrix(r, c);
  Matrix a = gaussian(gen, r, c);
  return a * (target / operator_norm(a));
}

void rescale(Matrix& m, double& log_scale) {
  const double s = m.cwiseAbs().maxCoeff();
  if (s > 0x1.0p-10 && s < 0x1.0p10) return;
  int e = 0;
  std::frexp(s, &e);
  m *= std::ldexp(1.0, -e);
  log_scale += e * std::log(2.0);
}

void check_rho_delta(double rho, double delta) {
  require(rho > 0.0 && rho < 1.0, ErrorKind::parameter, "rho must lie in (0, 1)");
  require(delta > 0.0 && delta < max_delta(rho), ErrorKind::parameter,
          "delta must satisfy 0 < delta < (sqrt(1+rho)-1)/2 = " + std::to_string(max_delta(rho)) +
              " so that alpha < 1/2");
}

void check_measurements(const BoundMeasurements& m, double B, int d) {
  require(m.N1 >= 0 && m.N2 >= 0, ErrorKind::parameter, "zero counts must be non-negative");
  require(m.beta1 > 0.0 && m.beta2 > 0.0, ErrorKind::parameter, "beta must be positive");
  require(B > 0.0 && std::isfinite(B), ErrorKind::parameter, "B must be positive");
  require(d >= 1, ErrorKind::parameter, "d must be >= 1");
}

CertifiedBound base_bound(Regime regime, double B, int d, double rho, double delta, int N, double beta) {
  CertifiedBound b;
  b.regime = regime;
  b.B = B;
  b.d = d;
  b.rho = rho;
  b.delta = delta;
  b.N = N;
  b.beta = beta;
  b.eps0 = epsilon0(rho, delta, N, beta);
  b.y0 = 2.0 * delta;
  b.alpha = alpha_from(b.y0, rho);
  return b;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

GrowthHypothesis::GrowthHypothesis(double lambda, double B, int d, std::vector<Matrix> blocks)
    : lambda_(lambda), B_(B), d_(d), blocks_(std::move(blocks)) {
  require(!blocks_.empty(), ErrorKind::precondition, "growth hypothesis: no blocks");
  require(B_ >= 0.0 && lambda_ > 3.0 * B_, ErrorKind::precondition, "growth hypothesis: need lambda > 3B");
  const int m = static_cast<int>(blocks_.front().rows());
  require(d_ >= 1 && d_ <= m, ErrorKind::precondition, "growth hypothesis: need 1 <= d <= m");
  const int r = m - d_;
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    const Matrix& a = blocks_[j];
    const std::string at = "growth hypothesis: block j = " + std::to_string(j + 1);
    require(a.rows() == m && a.cols() == m, ErrorKind::precondition, at + " has the wrong shape");
    if (min_expansion(a.topLeftCorner(d_, d_)) < lambda_ * (1 - kCheckSlack))
      fail(ErrorKind::precondition, at + ": m(L_j) < lambda");
    if (r == 0) continue;
    const double lim = B_ * (1 + kCheckSlack);
    if (operator_norm(a.topRightCorner(d_, r)) > lim) fail(ErrorKind::precondition, at + ": ||Wb_j|| > B");
    if (operator_norm(a.bottomLeftCorner(r, d_)) > lim) fail(ErrorKind::precondition, at + ": ||Ws_j|| > B");
    if (operator_norm(a.bottomRightCorner(r, r)) > lim) fail(ErrorKind::precondition, at + ": ||O_j|| > B");
  }
}

GrowthHypothesis random_growth_hypothesis(std::mt19937_64& gen, double lambda, double B, int n, int d, int m) {
  require(n >= 1 && d >= 1 && d <= m, ErrorKind::invalid_input, "random_growth_hypothesis: bad sizes");
  const int r = m - d;
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd s(d);
    for (int i = 0; i < d; ++i) s(i) = lambda * (1.0 + 1e-9 + unit(gen));
    Matrix a(m, m);
    a.topLeftCorner(d, d) = unitary(gen, d) * s.cast<Complex>().asDiagonal() * unitary(gen, d).adjoint();
    if (r > 0) {
      a.topRightCorner(d, r) = with_norm(gen, d, r, B * (1.0 - unit(gen)));
      a.bottomLeftCorner(r, d) = with_norm(gen, r, d, B * (1.0 - unit(gen)));
      a.bottomRightCorner(r, r) = with_norm(gen, r, r, B * (1.0 - unit(gen)));
    }
    blocks.push_back(std::move(a));
  }
  return GrowthHypothesis(lambda, B, d, std::move(blocks));
}

GrowthCheck verify_growth(const GrowthHypothesis& h, int k) {
  require(k >= 1 && k <= h.d(), ErrorKind::invalid_input, "verify_growth: need 1 <= k <= d");
  const int m = h.m(), d = h.d(), r = m - d;
  GrowthCheck out;
  out.step_invariant = true;
  Matrix M = Matrix::Identity(m, m);
  double log_scale = 0.0;
  for (const Matrix& a : h.blocks()) {
    M = a * M;
    rescale(M, log_scale);
    if (r == 0) continue;
    // T S^{-1} = (S^{-T} T^T)^T
    const Matrix S = M.topLeftCorner(d, d);
    const Matrix T = M.bottomLeftCorner(r, d);
    const Matrix X = S.transpose().fullPivLu().solve(T.transpose()).transpose();
    const double ratio = operator_norm(X);
    out.max_step_ratio = std::max(out.max_step_ratio, ratio);
    if (!(ratio < 1.0)) out.step_invariant = false;
  }
  const auto sv = singular_values(M.topLeftCorner(d, d));  // nonincreasing
  double measured = k * log_scale;
  for (int i = 0; i < k; ++i) measured += std::log(sv.values[static_cast<std::size_t>(d - 1 - i)]);
  out.measured = measured;
  out.bound = k * h.n() * std::log(h.lambda() - h.B());
  out.pass = out.step_invariant && out.measured >= out.bound - 1e-9 * std::abs(out.bound);
  return out;
}

double alpha_from(double y0, double rho) {
  require(rho > 0.0, ErrorKind::parameter, "rho must be positive");
  require(y0 >= 0.0 && y0 < rho, ErrorKind::parameter, "need 0 <= y0 < rho");
  return std::log1p(y0) / std::log1p(rho);
}

double subharmonic_lower_mean(double gamma, double S, double y0, double rho) {
  require(gamma <= S, ErrorKind::parameter, "need gamma <= S");
  const double a = alpha_from(y0, rho);
  return (gamma - a * S) / (1.0 - a);
}

double max_delta(double rho) { return 0.5 * (std::sqrt(1.0 + rho) - 1.0); }
double default_delta(double rho) { return 0.4 * max_delta(rho); }

std::string_view to_string(Regime r) { return r == Regime::bounded_E ? "bounded_E" : "large_E"; }

double CertifiedBound::c(int k) const {
  require(k >= 1 && k <= static_cast<int>(c_per_k.size()), ErrorKind::invalid_input, "c: k out of range");
  return c_per_k[static_cast<std::size_t>(k - 1)];
}

double CertifiedBound::c_hat() const { return c(1); }

double CertifiedBound::lower_bound(int k, double lambda, double E) const {
  if (regime == Regime::bounded_E) return std::log(lambda) - c(k);
  return std::log(lambda * std::abs(E)) - c(k);
}

CertifiedBound threshold_bounded_E(const BoundMeasurements& meas, double B, int d, double rho, double delta) {
  check_rho_delta(rho, delta);
  check_measurements(meas, B, d);
  CertifiedBound b = base_bound(Regime::bounded_E, B, d, rho, delta, meas.N1 + meas.N2, meas.beta1 * meas.beta2);
  b.eps1 = b.eps0 / std::pow(3.0 * B * B, d - 1);
  b.lambda0 = 3.0 * B / b.eps1;
  const double per = std::log(81.0 * std::pow(B, 4) / (4.0 * b.eps1 * b.eps1));
  for (int k = 1; k <= d; ++k) b.c_per_k.push_back(k * per);
  return b;
}

CertifiedBound threshold_large_E(const BoundMeasurements& meas, double B, int d, double rho, double delta) {
  check_rho_delta(rho, delta);
  check_measurements(meas, B, d);
  CertifiedBound b = base_bound(Regime::large_E, B, d, rho, delta, meas.N1, meas.beta1);
  b.eps1 = b.eps0 / std::pow(B, d - 1);
  b.lambda0 = 3.0 / b.eps1;
  const double per = std::log(81.0 * B * B / (4.0 * b.eps1 * b.eps1));
  for (int k = 1; k <= d; ++k) b.c_per_k.push_back(k * per);
  return b;
}

ModelMeasurements measure_A_lambda_E(const LaurentMatrixFunction& U, const LaurentMatrixFunction& V,
                                     const LaurentMatrixFunction& Wb, const LaurentMatrixFunction& Ws,
                                     const LaurentMatrixFunction& O, double rho, double R, int grid, int threads) {
  ModelMeasurements out;
  const auto mu = measure_N_beta(U.det(), rho, R);
  out.meas.N1 = mu.N;
  out.meas.beta1 = mu.beta;
  out.hat = measure_hat(V, rho, R, grid, threads);
  out.meas.N2 = out.hat.N_hat;
  out.meas.beta2 = out.hat.beta_hat;
  for (const auto* f : {&U, &V, &Wb, &Ws, &O}) out.B = std::max(out.B, f->norm_on_annulus(rho));
  return out;
}

ModelMeasurements measure_band_model(const LaurentMatrixFunction& W, const LaurentMatrixFunction& R,
                                     const LaurentMatrixFunction& D, double lambda, double rho, double R_annulus,
                                     const Rotation& rot, int grid, int threads) {
  require(lambda > 0.0, ErrorKind::invalid_input, "measure_band_model: lambda must be positive");
  const int d = W.rows();
  const LaurentScalar g_next = W.det().shifted(rot.omega());
  LaurentScalar detU = LaurentScalar::constant(1.0);
  for (int i = 0; i < d - 1; ++i) detU = detU * g_next;
  ModelMeasurements out;
  const auto mu = measure_N_beta(detU, rho, R_annulus);
  out.meas.N1 = mu.N;
  out.meas.beta1 = mu.beta;
  out.hat = measure_hat(D - R * Complex(1.0 / lambda), rho, R_annulus, grid, threads);
  out.meas.N2 = out.hat.N_hat;
  out.meas.beta2 = out.hat.beta_hat;
  const double w = W.norm_on_annulus(rho);
  out.B = std::max({std::pow(w, d - 1), std::pow(w, d), D.norm_on_annulus(rho) + R.norm_on_annulus(rho)});
  return out;
}

TheoremBounds theorem_bounds(const BoundMeasurements& meas, double B, int d, double rho, double delta) {
  return {threshold_bounded_E(meas, B, d, rho, delta), threshold_large_E(meas, B, d, rho, delta)};
}

std::vector<double> theorem_E_grid(double B) {
  require(B > 0.0, ErrorKind::parameter, "theorem_E_grid: B must be positive");
  std::vector<double> E = {0.0, B, -B, 2 * B, -2 * B};
  const double X = 2 * B * (B + 1);
  for (int i = 0; i <= 32; ++i) E.push_back(-X + i * (2 * X / 32));
  std::sort(E.begin(), E.end());
  E.erase(std::unique(E.begin(), E.end()), E.end());
  return E;
}

TheoremReport verify_theorem(const CocycleFamily& family, const TheoremBounds& bounds, double lambda,
                             std::span<const double> E_values, const EstimatorConfig& cfg, bool enforce_threshold) {
  require(lambda > 0.0, ErrorKind::invalid_input, "verify_theorem: lambda must be positive");
  TheoremReport rep;
  rep.lambda = lambda;
  rep.lambda0_bounded = bounds.bounded.lambda0;
  rep.lambda0_large = bounds.large.lambda0;
  const double B = bounds.bounded.B;
  bool uses_bounded = false, uses_large = false;
  for (double E : E_values) (std::abs(E) <= 2 * B ? uses_bounded : uses_large) = true;
  rep.above_threshold = (!uses_bounded || lambda > rep.lambda0_bounded) && (!uses_large || lambda > rep.lambda0_large);
  if (enforce_threshold && !rep.above_threshold)
    fail(ErrorKind::precondition, "verify_theorem: lambda = " + fmt(lambda) + " does not exceed lambda0 (bounded " +
                                      fmt(rep.lambda0_bounded) + ", large " + fmt(rep.lambda0_large) + ")");

  const int nE = static_cast<int>(E_values.size());
  std::vector<std::vector<TheoremRow>> rows(static_cast<std::size_t>(nE));
  EstimatorConfig inner = cfg;
  inner.threads = 1;
  detail::parallel_for(nE, cfg.threads, [&](int i) {
    const double E = E_values[static_cast<std::size_t>(i)];
    const BlockCocycle c = family(E);
    const auto s = spectrum_qr(c, inner);
    const CertifiedBound& b = std::abs(E) <= 2 * B ? bounds.bounded : bounds.large;
    const int d = std::min(c.d(), b.d);
    for (int k = 1; k <= d; ++k) {
      TheoremRow r;
      r.E = E;
      r.k = k;
      r.regime = b.regime;
      r.estimate = s.exponents[static_cast<std::size_t>(k - 1)];
      r.spread = s.spread[static_cast<std::size_t>(k - 1)];
      r.bound = b.lower_bound(k, lambda, E);
      r.margin = r.estimate + 3 * r.spread - r.bound;
      r.pass = r.margin >= 0.0;
      rows[static_cast<std::size_t>(i)].push_back(r);
    }
  });
  rep.all_pass = true;
  for (auto& v : rows)
    for (auto& r : v) {
      rep.all_pass = rep.all_pass && r.pass;
      rep.rows.push_back(r);
    }
  return rep;
}

ConvexityCheck circle_convexity_check(const BlockCocycle& c, int k, int n, double r1, double r, double r2,
                                      int angles, int threads) {
  require(0.0 < r1 && r1 < r && r < r2, ErrorKind::invalid_input, "circle_convexity_check: need 0 < r1 < r < r2");
  ConvexityCheck out;
  out.alpha = (std::log(r) - std::log(r1)) / (std::log(r2) - std::log(r1));
  out.m1 = circle_mean(c, k, r1, n, angles, threads);
  out.m = circle_mean(c, k, r, n, angles, threads);
  out.m2 = circle_mean(c, k, r2, n, angles, threads);
  out.residual = (1 - out.alpha) * out.m1 + out.alpha * out.m2 - out.m;
  return out;
}

void to_json(nlohmann::json& j, const CertifiedBound& b) {
  j = nlohmann::json{{"regime", to_string(b.regime)},
                     {"B", b.B},
                     {"d", b.d},
                     {"N", b.N},
                     {"beta", b.beta},
                     {"rho", b.rho},
                     {"delta", b.delta},
                     {"eps0", b.eps0},
                     {"eps1", b.eps1},
                     {"lambda0", b.lambda0},
                     {"y0", b.y0},
                     {"alpha", b.alpha},
                     {"c_per_k", b.c_per_k}};
}

void to_json(nlohmann::json& j, const TheoremRow& r) {
  j = nlohmann::json{{"E", r.E},         {"k", r.k},         {"regime", to_string(r.regime)},
                     {"estimate", r.estimate}, {"spread", r.spread}, {"bound", r.bound},
                     {"margin", r.margin},     {"pass", r.pass}};
}

void to_json(nlohmann::json& j, const TheoremReport& r) {
  j = nlohmann::json{{"lambda", r.lambda},
                     {"lambda0_bounded", r.lambda0_bounded},
                     {"lambda0_large", r.lambda0_large},
                     {"above_threshold", r.above_threshold},
                     {"all_pass", r.all_pass},
                     {"rows", r.rows}};
}

void to_json(nlohmann::json& j, const GrowthCheck& g) {
  j = nlohmann::json{{"bound", g.bound},
                     {"measured", g.measured},
                     {"pass", g.pass},
                     {"max_step_ratio", g.max_step_ratio},
                     {"step_invariant", g.step_invariant}};
}

std::string theorem_csv(const TheoremReport& r) {
  std::string out = "E,k,regime,estimate,spread,bound,margin,pass\n";
  for (const auto& row : r.rows) {
    out += fmt(row.E) + "," + std::to_string(row.k) + "," + std::string(to_string(row.regime)) + "," +
           fmt(row.estimate) + "," + fmt(row.spread) + "," + fmt(row.bound) + "," + fmt(row.margin) + "," +
           (row.pass ? "true" : "false") + "\n";
  }
  return out;
}

}  // namespace qpc
