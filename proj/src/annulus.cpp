#include "qpc/annulus.hpp"

#include "numeric_util.hpp"
#include "qpc/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace qpc {

namespace {

constexpr double kTrimTol = 1e-13;
constexpr double kClusterTol = 1e-7;
constexpr double kMembershipTol = 1e-9;

// Horner for p and p' where p(z) = sum a_j z^j.
std::pair<Complex, Complex> horner_with_derivative(std::span<const Complex> a, Complex z) {
  Complex p{}, dp{};
  for (std::size_t j = a.size(); j-- > 0;) {
    dp = dp * z + p;
    p = p * z + a[j];
  }
  return {p, dp};
}

Complex polish(std::span<const Complex> a, Complex z) {
  auto [p, dp] = horner_with_derivative(a, z);
  for (int it = 0; it < 40 && dp != Complex{}; ++it) {
    const Complex step = p / dp;
    const Complex next = z - step;
    auto [pn, dpn] = horner_with_derivative(a, next);
    if (!(std::abs(pn) < std::abs(p))) break;
    z = next;
    p = pn;
    dp = dpn;
    if (std::abs(step) <= 1e-16 * std::abs(z)) break;
  }
  return z;
}

// Single-linkage clustering; location is the cluster mean.
ZeroDivisor cluster(const std::vector<Complex>& roots) {
  const std::size_t n = roots.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(roots[i] - roots[j]) <= kClusterTol * std::max(std::abs(roots[i]), std::abs(roots[j])))
        parent[find(i)] = find(j);

  ZeroDivisor out;
  std::vector<int> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.zeros.size());
      out.zeros.push_back({Complex{}, 0});
    }
    Zero& z = out.zeros[static_cast<std::size_t>(slot[r])];
    z.location += roots[i];
    ++z.multiplicity;
  }
  for (Zero& z : out.zeros) z.location /= static_cast<double>(z.multiplicity);
  std::sort(out.zeros.begin(), out.zeros.end(), [](const Zero& a, const Zero& b) {
    const double ra = std::abs(a.location), rb = std::abs(b.location);
    if (ra != rb) return ra < rb;
    return std::arg(a.location) < std::arg(b.location);
  });
  return out;
}

bool in_closed_band(Complex z, double r) { return std::abs(std::abs(z) - 1.0) <= r + kMembershipTol; }

// log|g(z)| = log|lead| + lo log|z| + sum_{kept} n log|z - w| + (#divided) log(2(R+1))
struct GFactorization {
  double log_lead = 0.0;
  int lo = 0;
  std::vector<Zero> kept;
  int divided_count = 0;
  double log_norm_factor = 0.0;

  double operator()(Complex z) const {
    double s = log_lead + lo * std::log(std::abs(z)) + divided_count * log_norm_factor;
    for (const Zero& w : kept) s += w.multiplicity * std::log(std::abs(z - w.location));
    return s;
  }
};

}  // namespace

int ZeroDivisor::total() const {
  int n = 0;
  for (const Zero& z : zeros) n += z.multiplicity;
  return n;
}

Complex evaluate(const LaurentScalar& f, Complex z) { return f(z); }

ZeroDivisor all_zeros(const LaurentScalar& f_in) {
  require(!f_in.is_zero(), ErrorKind::invalid_input, "zeros: function is identically zero");
  const LaurentScalar f = f_in.trimmed(kTrimTol);
  const auto a = f.coefficients();
  const int n = static_cast<int>(a.size()) - 1;
  if (n <= 0) return {};

  Matrix companion = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -a[static_cast<std::size_t>(i)] / a[static_cast<std::size_t>(n)];
  Eigen::ComplexEigenSolver<Matrix> es(companion, false);
  require(es.info() == Eigen::Success, ErrorKind::invalid_input, "zeros: companion eigenvalue solver failed");

  std::vector<Complex> roots(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) roots[static_cast<std::size_t>(i)] = polish(a, es.eigenvalues()(i));
  return cluster(roots);
}

ZeroDivisor zeros_in_annulus(const LaurentScalar& f, double r) {
  require(r > 0.0 && r < 1.0, ErrorKind::invalid_input, "zeros_in_annulus: r must lie in (0, 1)");
  ZeroDivisor all = all_zeros(f);
  ZeroDivisor out;
  for (const Zero& z : all.zeros)
    if (in_closed_band(z.location, r)) out.zeros.push_back(z);
  return out;
}

namespace {

// (1 / 2 pi i) \oint_{|z|=r} f'/f dz by the trapezoid rule, doubling the
// sample count until it settles on an integer.
int winding_number(const LaurentScalar& f, const LaurentScalar& df, double r) {
  constexpr int kStart = 256;
  constexpr int kMax = 1 << 20;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int m = kStart; m <= kMax; m *= 2) {
    Complex acc{};
    double fmin = std::numeric_limits<double>::infinity();
    double fmax = 0.0;
    for (int j = 0; j < m; ++j) {
      const Complex z = std::polar(r, kTwoPi * j / m);
      const Complex fz = f(z);
      const double af = std::abs(fz);
      fmin = std::min(fmin, af);
      fmax = std::max(fmax, af);
      if (af == 0.0) break;
      acc += z * df(z) / fz;
    }
    if (fmax == 0.0 || fmin <= 1e-12 * fmax)
      fail(ErrorKind::boundary_degenerate,
           "argument principle: f nearly vanishes on the circle |z| = " + std::to_string(r));
    const double w = acc.real() / m;
    const double nearest = std::round(w);
    if (std::abs(w - nearest) < 0.01 && std::abs(w - prev) < 1e-3) return static_cast<int>(nearest);
    prev = w;
  }
  fail(ErrorKind::boundary_degenerate,
       "argument principle: quadrature did not converge on |z| = " + std::to_string(r));
}

}  // namespace

int count_zeros_by_argument_principle(const LaurentScalar& f, double r_inner, double r_outer) {
  require(!f.is_zero(), ErrorKind::invalid_input, "argument principle: function is identically zero");
  require(r_inner > 0.0 && r_outer > r_inner, ErrorKind::invalid_input,
          "argument principle: need 0 < r_inner < r_outer");
  const LaurentScalar df = f.derivative();
  return winding_number(f, df, r_outer) - winding_number(f, df, r_inner);
}

CircleMin minimize_on_circle(const std::function<double(Complex)>& h, double radius, int angles) {
  require(angles >= 8, ErrorKind::invalid_input, "minimize_on_circle: too few angles");
  std::vector<double> vals(static_cast<std::size_t>(angles));
  for (int j = 0; j < angles; ++j) vals[static_cast<std::size_t>(j)] = h(std::polar(radius, kTwoPi * j / angles));
  std::vector<int> order(static_cast<std::size_t>(angles));
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + 3, order.end(), [&](int a, int b) {
    return vals[static_cast<std::size_t>(a)] < vals[static_cast<std::size_t>(b)];
  });
  CircleMin best{vals[static_cast<std::size_t>(order[0])], std::polar(radius, kTwoPi * order[0] / angles)};
  const double step = kTwoPi / angles;
  for (int t = 0; t < 3; ++t) {
    const double c = step * order[static_cast<std::size_t>(t)];
    auto [theta, v] = detail::golden_minimize([&](double th) { return h(std::polar(radius, th)); }, c - step,
                                              c + step, 1e-13);
    if (v < best.value) best = {v, std::polar(radius, theta)};
  }
  return best;
}

AnnulusMeasurements measure_N_beta(const LaurentScalar& f_in, double rho, double R) {
  require(!f_in.is_zero(), ErrorKind::invalid_input, "measure_N_beta: function is identically zero");
  require(rho > 0.0 && rho < R && R < 1.0, ErrorKind::invalid_input, "measure_N_beta: need 0 < rho < R < 1");
  const LaurentScalar f = f_in.trimmed(kTrimTol);
  const ZeroDivisor all = all_zeros(f);
  const double band = 0.5 * (rho + R);

  AnnulusMeasurements m;
  m.rho = rho;
  m.R = R;
  GFactorization g;
  g.log_lead = std::log(std::abs(f.coefficient(f.highest_degree())));
  g.lo = f.lowest_degree();
  g.log_norm_factor = std::log(2.0 * (R + 1.0));
  for (const Zero& z : all.zeros) {
    if (in_closed_band(z.location, rho)) m.zeros.zeros.push_back(z);
    if (std::abs(std::abs(z.location) - 1.0) < band) {
      m.divided.zeros.push_back(z);
      g.divided_count += z.multiplicity;
    } else {
      g.kept.push_back(z);
    }
  }
  m.N = m.zeros.total();

  // g is holomorphic and zero-free on a neighbourhood of A_rho, so log|g| is
  // harmonic there and its minimum sits on one of the two boundary circles.
  const CircleMin inner = minimize_on_circle(g, 1.0 - rho);
  const CircleMin outer = minimize_on_circle(g, 1.0 + rho);
  const CircleMin& best = inner.value <= outer.value ? inner : outer;
  m.beta = std::exp(best.value);
  m.beta_at = best.at;
  return m;
}

bool det_identically_zero(const LaurentMatrixFunction& V, Complex e) {
  require(V.is_square(), ErrorKind::dimension, "det: matrix function is not square");
  const int d = V.rows();
  double size = 0.0;
  for (int j = 0; j < 16; ++j) {
    Matrix m = V(torus_point(j / 16.0 + 0.01));
    m.diagonal().array() -= e;
    size = std::max(size, m.cwiseAbs().maxCoeff());
  }
  if (size == 0.0) return true;
  const double tol = 1e-9 * std::pow(d * size, d);
  return V.det_minus(e).max_abs_coefficient() <= tol;
}

std::optional<Complex> find_constant_eigenvalue(const LaurentMatrixFunction& V) {
  require(V.is_square(), ErrorKind::dimension, "find_constant_eigenvalue: matrix function is not square");
  Eigen::ComplexEigenSolver<Matrix> es(V(torus_point(0.1234567)), false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (det_identically_zero(V, es.eigenvalues()(i))) return es.eigenvalues()(i);
  return std::nullopt;
}

HatMeasurements measure_hat(const LaurentMatrixFunction& V, double rho, double R, int grid_points, int threads) {
  require(V.is_square(), ErrorKind::dimension, "measure_hat: V must be square");
  require(grid_points >= 3, ErrorKind::invalid_input, "measure_hat: grid needs at least 3 points");
  const double norm = V.norm_on_annulus(rho);
  require(V.is_hermitian_on_torus(1e-12 * std::max(1.0, norm)), ErrorKind::invalid_input,
          "measure_hat: V must be symmetric/Hermitian on the torus");

  if (auto e = find_constant_eigenvalue(V))
    fail(ErrorKind::transversality_violation,
         "measure_hat: V has the constant eigenvalue " + std::to_string(e->real()));

  HatMeasurements h;
  h.V_norm = norm;
  h.E_lo = -2.0 * norm;
  h.E_hi = 2.0 * norm;
  h.grid_points = grid_points;
  std::vector<double> E(static_cast<std::size_t>(grid_points));
  for (int i = 0; i < grid_points; ++i)
    E[static_cast<std::size_t>(i)] = h.E_lo + (h.E_hi - h.E_lo) * i / (grid_points - 1);

  std::vector<AnnulusMeasurements> per(static_cast<std::size_t>(grid_points));
  detail::parallel_for(grid_points, threads, [&](int i) {
    per[static_cast<std::size_t>(i)] = measure_N_beta(V.det_minus(E[static_cast<std::size_t>(i)]), rho, R);
  });

  int imax = 0, imin = 0;
  for (int i = 1; i < grid_points; ++i) {
    if (per[static_cast<std::size_t>(i)].N > per[static_cast<std::size_t>(imax)].N) imax = i;
    if (per[static_cast<std::size_t>(i)].beta < per[static_cast<std::size_t>(imin)].beta) imin = i;
  }
  h.N_hat = per[static_cast<std::size_t>(imax)].N;
  h.E_argmax_N = E[static_cast<std::size_t>(imax)];
  h.beta_hat = per[static_cast<std::size_t>(imin)].beta;
  h.E_argmin_beta = E[static_cast<std::size_t>(imin)];

  const double a = E[static_cast<std::size_t>(std::max(imin - 1, 0))];
  const double b = E[static_cast<std::size_t>(std::min(imin + 1, grid_points - 1))];
  auto [e_ref, beta_ref] = detail::golden_minimize(
      [&](double e) { return measure_N_beta(V.det_minus(e), rho, R).beta; }, a, b, 1e-10, 80);
  if (beta_ref < h.beta_hat) {
    h.beta_hat = beta_ref;
    h.E_argmin_beta = e_ref;
  }
  return h;
}

double epsilon0(double rho, double delta, int N, double beta) {
  require(rho > 0.0 && delta > 0.0 && delta < rho, ErrorKind::invalid_input, "epsilon0: need 0 < delta < rho");
  require(N >= 0, ErrorKind::invalid_input, "epsilon0: N must be nonnegative");
  require(beta > 0.0 && std::isfinite(beta), ErrorKind::invalid_input, "epsilon0: beta must be positive");
  if (N == 0) return beta;
  return beta * std::pow(delta / (2.0 * (rho + 1.0) * N), N);
}

GoodCircle find_good_circle(const LaurentScalar& f, double inner, double width, double rho) {
  require(rho > 0.0 && rho < 1.0, ErrorKind::invalid_input, "find_good_circle: rho must lie in (0, 1)");
  require(width > 0.0 && inner >= -rho - 1e-12 && inner + width <= rho + 1e-12, ErrorKind::invalid_input,
          "find_good_circle: sub-annulus must lie inside A_rho");
  // epsilon0 uses the R -> rho form of the bound, which is only a true lower
  // bound when beta is measured with R close to rho.
  const AnnulusMeasurements m = measure_N_beta(f, rho, certified_outer_radius(rho));
  const double delta = 0.5 * width;

  GoodCircle out;
  out.N = m.N;
  out.beta = m.beta;
  out.guarantee = epsilon0(rho, delta, m.N, m.beta);

  const double lo = inner;
  const double hi = inner + width;
  if (m.N == 0) {
    out.y0 = 0.5 * (lo + hi);
  } else {
    const double eta = delta / m.N;
    std::vector<std::pair<double, double>> banned;
    for (const Zero& z : m.zeros.zeros) {
      const double y = std::abs(z.location) - 1.0;
      banned.emplace_back(y - eta, y + eta);
    }
    std::sort(banned.begin(), banned.end());
    double best_len = 0.0, best_mid = 0.0, cursor = lo;
    auto consider = [&](double a, double b) {
      if (b - a > best_len) {
        best_len = b - a;
        best_mid = 0.5 * (a + b);
      }
    };
    for (const auto& [a, b] : banned) {
      consider(cursor, std::min(a, hi));
      cursor = std::max(cursor, b);
    }
    consider(cursor, hi);
    if (best_len <= 1e-12 * width)
      fail(ErrorKind::no_good_circle, "find_good_circle: every circle meets a zero disk (root finding failure?)");
    out.y0 = best_mid;
  }
  const CircleMin cm = minimize_on_circle([&](Complex z) { return std::log(std::abs(f(z))); }, 1.0 + out.y0);
  out.min_modulus = std::exp(cm.value);
  return out;
}

void to_json(nlohmann::json& j, const ZeroDivisor& z) {
  j = nlohmann::json::array();
  for (const auto& zero : z.zeros)
    j.push_back({{"re", zero.location.real()},
                 {"im", zero.location.imag()},
                 {"modulus", std::abs(zero.location)},
                 {"multiplicity", zero.multiplicity}});
}

void to_json(nlohmann::json& j, const AnnulusMeasurements& m) {
  j = nlohmann::json{{"N", m.N},
                     {"beta", m.beta},
                     {"rho", m.rho},
                     {"R", m.R},
                     {"zeros", m.zeros},
                     {"divided", m.divided},
                     {"beta_at", {m.beta_at.real(), m.beta_at.imag()}}};
}

void to_json(nlohmann::json& j, const HatMeasurements& h) {
  j = nlohmann::json{{"N_hat", h.N_hat},
                     {"beta_hat", h.beta_hat},
                     {"E_argmax_N", h.E_argmax_N},
                     {"E_argmin_beta", h.E_argmin_beta},
                     {"E_range", {h.E_lo, h.E_hi}},
                     {"V_norm", h.V_norm},
                     {"grid_points", h.grid_points},
                     {"grid_certified_only", h.grid_certified_only}};
}

void to_json(nlohmann::json& j, const GoodCircle& g) {
  j = nlohmann::json{{"y0", g.y0},
                     {"radius", 1.0 + g.y0},
                     {"min_modulus", g.min_modulus},
                     {"guarantee", g.guarantee},
                     {"N", g.N},
                     {"beta", g.beta}};
}

}  // namespace qpc
