#include "qpc/lyapunov.hpp"

#include "qpc/annulus.hpp"
#include "qpc/error.hpp"
#include "numeric_util.hpp"

#include <Eigen/QR>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace qpc {

double LyapunovSpectrum::sum(int k) const {
  require(k >= 0 && k <= static_cast<int>(exponents.size()), ErrorKind::invalid_input, "sum: k out of range");
  double s = 0.0;
  for (int i = 0; i < k; ++i) s += exponents[static_cast<std::size_t>(i)];
  return s;
}

double LyapunovSpectrum::max_spread() const {
  return spread.empty() ? 0.0 : *std::max_element(spread.begin(), spread.end());
}

std::vector<double> sample_phases(int samples, std::uint64_t seed) {
  require(samples >= 1, ErrorKind::invalid_input, "samples must be >= 1");
  std::mt19937_64 gen(seed);
  // 53 random bits; std::uniform_real_distribution is not portable across libraries
  const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  std::vector<double> x(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) x[static_cast<std::size_t>(s)] = (u + s) / samples;
  return x;
}

std::vector<double> qr_exponents(const BlockCocycle& c, Complex z, int n, int qr_interval) {
  require(n >= 1, ErrorKind::invalid_input, "qr_exponents: n must be positive");
  require(qr_interval >= 1, ErrorKind::invalid_input, "qr_exponents: qr_interval must be positive");
  const int m = c.m();
  Matrix Q = Matrix::Identity(m, m);
  std::vector<double> acc(static_cast<std::size_t>(m), 0.0);
  Eigen::HouseholderQR<Matrix> qr(m, m);
  for (int j = 0; j < n; ++j) {
    Q = c(c.rotation().iterate(z, j)) * Q;
    if ((j + 1) % qr_interval != 0 && j + 1 != n) continue;
    qr.compute(Q);
    const Matrix& R = qr.matrixQR();
    Q = qr.householderQ() * Matrix::Identity(m, m);
    for (int i = 0; i < m; ++i) {
      const double a = std::abs(R(i, i));
      acc[static_cast<std::size_t>(i)] += std::log(a);
      // positive diagonal: R -> D^* R, Q -> Q D
      if (a > 0.0) Q.col(i) *= R(i, i) / a;
    }
  }
  for (auto& v : acc) v /= n;
  return acc;
}

namespace {

LyapunovSpectrum aggregate(std::vector<std::vector<double>> per, const EstimatorConfig& cfg) {
  LyapunovSpectrum s;
  s.n = cfg.n;
  s.samples = cfg.samples;
  s.seed = cfg.seed;
  s.z_modulus = cfg.z_modulus;
  const std::size_t m = per.front().size();
  s.exponents.assign(m, 0.0);
  s.spread.assign(m, 0.0);
  for (auto& v : per) std::sort(v.begin(), v.end(), std::greater<>());
  for (std::size_t i = 0; i < m; ++i) {
    double lo = per[0][i], hi = per[0][i], sum = 0.0;
    for (const auto& v : per) {
      sum += v[i];
      lo = std::min(lo, v[i]);
      hi = std::max(hi, v[i]);
    }
    s.exponents[i] = sum / static_cast<double>(per.size());
    s.spread[i] = hi - lo;
  }
  s.per_sample = std::move(per);
  return s;
}

void check_config(const EstimatorConfig& cfg) {
  require(cfg.n >= 100, ErrorKind::invalid_input, "estimator: n must be >= 100");
  require(cfg.samples >= 1, ErrorKind::invalid_input, "estimator: samples must be >= 1");
  require(cfg.z_modulus > 0.0 && std::isfinite(cfg.z_modulus), ErrorKind::domain,
          "estimator: z_modulus must be positive");
}

BlockCocycle compound_cocycle(const BlockCocycle& c, int k) {
  require(k >= 1 && k <= c.m(), ErrorKind::invalid_input, "exterior power: need 1 <= k <= m");
  const std::uint64_t dim = binomial(c.m(), k);
  if (dim > kMaxCompoundDim)
    fail(ErrorKind::compound_overflow,
         "exterior power: C(" + std::to_string(c.m()) + "," + std::to_string(k) + ") = " + std::to_string(dim) +
             " exceeds " + std::to_string(kMaxCompoundDim));
  return BlockCocycle(CocycleKind::general, static_cast<int>(dim), 1,
                      [c, k](Complex z) { return exterior_power(c(z), k); }, c.rotation());
}

}  // namespace

LyapunovSpectrum spectrum_qr(const BlockCocycle& c, const EstimatorConfig& cfg) {
  check_config(cfg);
  const auto x = sample_phases(cfg.samples, cfg.seed);
  std::vector<std::vector<double>> per(x.size());
  detail::parallel_for(cfg.samples, cfg.threads, [&](int s) {
    const Complex z = cfg.z_modulus * torus_point(x[static_cast<std::size_t>(s)]);
    per[static_cast<std::size_t>(s)] = qr_exponents(c, z, cfg.n, cfg.qr_interval);
  });
  return aggregate(std::move(per), cfg);
}

double exterior_log_norm(const BlockCocycle& c, int k, Complex z, int n) {
  if (k == 1) return transfer(c, z, n).log_norm_rate();
  return transfer(compound_cocycle(c, k), z, n).log_norm_rate();
}

TopKSum topk_sum_via_exterior(const BlockCocycle& c, int k, const EstimatorConfig& cfg) {
  check_config(cfg);
  const BlockCocycle ext = k == 1 ? c : compound_cocycle(c, k);
  const auto x = sample_phases(cfg.samples, cfg.seed);
  TopKSum t;
  t.per_sample.assign(x.size(), 0.0);
  detail::parallel_for(cfg.samples, cfg.threads, [&](int s) {
    const Complex z = cfg.z_modulus * torus_point(x[static_cast<std::size_t>(s)]);
    t.per_sample[static_cast<std::size_t>(s)] = transfer(ext, z, cfg.n).log_norm_rate();
  });
  double sum = 0.0;
  for (double v : t.per_sample) sum += v;
  t.value = sum / cfg.samples;
  const auto [lo, hi] = std::minmax_element(t.per_sample.begin(), t.per_sample.end());
  t.spread = *hi - *lo;
  return t;
}

ScalarLogMean scalar_log_mean(const LaurentScalar& g, double radius) {
  require(radius > 0.0 && std::isfinite(radius), ErrorKind::domain, "scalar_log_mean: radius must be positive");
  const LaurentScalar f = g.trimmed(1e-13);
  require(!f.is_zero(), ErrorKind::invalid_input, "scalar_log_mean: g is identically zero");

  // Jensen: mean of log|z - w| over |z| = r is log max(r, |w|)
  const auto zeros = all_zeros(f);
  const int lo = f.lowest_degree();
  ScalarLogMean out;
  out.value = std::log(std::abs(f.coefficient(f.highest_degree()))) + lo * std::log(radius);
  for (const auto& z : zeros.zeros) out.value += z.multiplicity * std::log(std::max(radius, std::abs(z.location)));

  // quadrature in x on [0, 1), broken at the angles of zeros near the circle
  std::vector<double> breaks;
  for (const auto& z : zeros.zeros)
    if (std::abs(std::abs(z.location) - radius) <= 0.05 * radius) {
      double t = std::arg(z.location) / kTwoPi;
      if (t < 0) t += 1.0;
      breaks.push_back(t);
    }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(), [](double a, double b) { return b - a < 1e-13; }),
               breaks.end());
  if (breaks.empty()) breaks.push_back(0.0);

  auto h = [&](double t) { return std::log(std::abs(f(radius * torus_point(t)))); };
  boost::math::quadrature::tanh_sinh<double> ts;
  double q = 0.0;
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    const double a = breaks[i];
    const double b = i + 1 < breaks.size() ? breaks[i + 1] : breaks[0] + 1.0;
    if (b - a < 1e-14) continue;
    q += ts.integrate(h, a, b, 1e-11);
  }
  out.quadrature = q;
  out.discrepancy = std::abs(out.value - out.quadrature);
  return out;
}

DecomposedSpectrum decomposed_band_spectrum(const LaurentMatrixFunction& W, const LaurentMatrixFunction& R,
                                            const LaurentMatrixFunction& D, double lambda, double E,
                                            const Rotation& rot, const EstimatorConfig& cfg, bool cross_check) {
  DecomposedSpectrum out;
  const auto adj = build_adjugate_regularized(W, R, D, lambda, E, rot);
  out.adjugate = spectrum_qr(adj, cfg);
  out.L_g = scalar_log_mean(W.det(), cfg.z_modulus).value;
  out.exponents = out.adjugate.exponents;
  for (auto& v : out.exponents) v -= out.L_g;
  if (!cross_check) return out;

  const auto band = build_band_jacobi(W, R, D, lambda, E, rot);
  EstimatorConfig dc = cfg;
  // orbits through a singular phase are redrawn from the next seed
  for (int attempt = 0; attempt < 8 && !out.direct; ++attempt) {
    dc.seed = cfg.seed + static_cast<std::uint64_t>(attempt);
    try {
      out.direct = spectrum_qr(band, dc);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::singular_phase) throw;
    }
  }
  if (!out.direct) fail(ErrorKind::singular_phase, "decomposed_band_spectrum: no admissible phases for the direct run");
  out.consistent = true;
  for (std::size_t i = 0; i < out.exponents.size(); ++i) {
    const double diff = std::abs(out.exponents[i] - out.direct->exponents[i]);
    const double tol = std::max(1e-2, 3.0 * std::max(out.adjugate.spread[i], out.direct->spread[i]));
    out.max_discrepancy = std::max(out.max_discrepancy, diff);
    if (!(diff <= tol)) out.consistent = false;
  }
  return out;
}

double circle_mean(const BlockCocycle& c, int k, double r, int n, int angles, int threads) {
  require(r > 0.0 && std::isfinite(r), ErrorKind::domain, "circle_mean: radius must be positive");
  require(angles >= 1, ErrorKind::invalid_input, "circle_mean: angles must be positive");
  const BlockCocycle ext = k == 1 ? c : compound_cocycle(c, k);
  std::vector<double> u(static_cast<std::size_t>(angles));
  detail::parallel_for(angles, threads, [&](int j) {
    const Complex z = r * torus_point((j + 0.5) / angles);
    u[static_cast<std::size_t>(j)] = transfer(ext, z, n).log_norm_rate();
  });
  double sum = 0.0;
  for (double v : u) sum += v;
  return sum / angles;
}

void to_json(nlohmann::json& j, const LyapunovSpectrum& s) {
  j = nlohmann::json{{"exponents", s.exponents}, {"n", s.n},         {"samples", s.samples},
                     {"spread", s.spread},       {"seed", s.seed},   {"z_modulus", s.z_modulus}};
}

}  // namespace qpc
