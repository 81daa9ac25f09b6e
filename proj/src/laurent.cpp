#include "qpc/laurent.hpp"

#include "numeric_util.hpp"
#include "qpc/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qpc {

Complex torus_point(double x, double modulus) { return std::polar(modulus, kTwoPi * x); }

// ---------------------------------------------------------------------------
// LaurentScalar

LaurentScalar::LaurentScalar(int lowest_degree, std::vector<Complex> coefficients)
    : lo_(lowest_degree), c_(std::move(coefficients)) {
  for (const Complex& c : c_)
    require(std::isfinite(c.real()) && std::isfinite(c.imag()), ErrorKind::invalid_input,
            "LaurentScalar: non-finite coefficient");
  normalize();
}

void LaurentScalar::normalize() {
  std::size_t first = 0;
  while (first < c_.size() && c_[first] == Complex{}) ++first;
  std::size_t last = c_.size();
  while (last > first && c_[last - 1] == Complex{}) --last;
  if (first == last) {
    c_.clear();
    lo_ = 0;
    return;
  }
  if (first > 0 || last < c_.size()) {
    c_ = std::vector<Complex>(c_.begin() + static_cast<std::ptrdiff_t>(first),
                              c_.begin() + static_cast<std::ptrdiff_t>(last));
    lo_ += static_cast<int>(first);
  }
}

LaurentScalar LaurentScalar::constant(Complex c) { return LaurentScalar(0, {c}); }

LaurentScalar LaurentScalar::monomial(int degree, Complex c) { return LaurentScalar(degree, {c}); }

LaurentScalar LaurentScalar::cosine(double amplitude, double phase) {
  const Complex w = torus_point(phase);
  return LaurentScalar(-1, {0.5 * amplitude * std::conj(w), 0.0, 0.5 * amplitude * w});
}

LaurentScalar LaurentScalar::sine(double amplitude, double phase) {
  // sin t = (e^{it} - e^{-it}) / (2i)
  const Complex w = torus_point(phase);
  const Complex i2(0.0, 2.0);
  return LaurentScalar(-1, {-amplitude * std::conj(w) / i2, 0.0, amplitude * w / i2});
}

LaurentScalar LaurentScalar::from_roots(Complex lead, int lowest_degree, std::span<const Complex> roots) {
  std::vector<Complex> p{lead};
  for (const Complex& r : roots) {
    std::vector<Complex> q(p.size() + 1, Complex{});
    for (std::size_t i = 0; i < p.size(); ++i) {
      q[i + 1] += p[i];
      q[i] -= r * p[i];
    }
    p = std::move(q);
  }
  return LaurentScalar(lowest_degree, std::move(p));
}

Complex LaurentScalar::coefficient(int degree) const {
  if (c_.empty() || degree < lo_ || degree > highest_degree()) return {};
  return c_[static_cast<std::size_t>(degree - lo_)];
}

double LaurentScalar::max_abs_coefficient() const {
  double m = 0.0;
  for (const Complex& c : c_) m = std::max(m, std::abs(c));
  return m;
}

bool LaurentScalar::is_zero(double tol) const {
  return std::all_of(c_.begin(), c_.end(), [tol](const Complex& c) { return std::abs(c) <= tol; });
}

bool LaurentScalar::is_real_on_torus(double tol) const {
  if (c_.empty()) return true;
  const int top = std::max(std::abs(lo_), std::abs(highest_degree()));
  for (int k = 0; k <= top; ++k) {
    if (std::abs(coefficient(-k) - std::conj(coefficient(k))) > tol) return false;
  }
  return true;
}

Complex LaurentScalar::operator()(Complex z) const {
  require(z != Complex{}, ErrorKind::domain, "LaurentScalar: evaluation at z = 0");
  if (c_.empty()) return {};
  const int hi = highest_degree();
  Complex pos{};
  for (int k = hi; k >= std::max(lo_, 0); --k) pos = pos * z + coefficient(k);
  if (lo_ > 0) pos *= std::pow(z, lo_);
  Complex neg{};
  if (lo_ < 0) {
    const Complex w = 1.0 / z;
    for (int k = lo_; k <= std::min(hi, -1); ++k) neg = neg * w + coefficient(k);
    neg *= w;
    if (hi < -1) neg *= std::pow(w, -hi - 1);
  }
  return pos + neg;
}

LaurentScalar LaurentScalar::derivative() const {
  if (c_.empty()) return {};
  std::vector<Complex> d(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) d[i] = static_cast<double>(lo_ + static_cast<int>(i)) * c_[i];
  return LaurentScalar(lo_ - 1, std::move(d));
}

Complex LaurentScalar::torus_derivative(double x, int order) const {
  require(order >= 0, ErrorKind::invalid_input, "torus_derivative: negative order");
  Complex sum{};
  for (std::size_t i = 0; i < c_.size(); ++i) {
    const int k = lo_ + static_cast<int>(i);
    const Complex factor = std::pow(Complex(0.0, kTwoPi * k), order);
    sum += c_[i] * factor * torus_point(k * x);
  }
  return sum;
}

LaurentScalar LaurentScalar::shifted(double omega) const {
  std::vector<Complex> s(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) s[i] = c_[i] * torus_point((lo_ + static_cast<int>(i)) * omega);
  return LaurentScalar(lo_, std::move(s));
}

LaurentScalar LaurentScalar::trimmed(double rel_tol) const {
  const double cut = rel_tol * max_abs_coefficient();
  std::size_t first = 0;
  while (first < c_.size() && std::abs(c_[first]) <= cut) ++first;
  std::size_t last = c_.size();
  while (last > first && std::abs(c_[last - 1]) <= cut) --last;
  if (first == last) return {};
  return LaurentScalar(lo_ + static_cast<int>(first),
                       std::vector<Complex>(c_.begin() + static_cast<std::ptrdiff_t>(first),
                                            c_.begin() + static_cast<std::ptrdiff_t>(last)));
}

LaurentScalar& LaurentScalar::operator+=(const LaurentScalar& other) {
  if (other.c_.empty()) return *this;
  if (c_.empty()) return *this = other;
  const int lo = std::min(lo_, other.lo_);
  const int hi = std::max(highest_degree(), other.highest_degree());
  std::vector<Complex> s(static_cast<std::size_t>(hi - lo + 1), Complex{});
  for (int k = lo; k <= hi; ++k) s[static_cast<std::size_t>(k - lo)] = coefficient(k) + other.coefficient(k);
  lo_ = lo;
  c_ = std::move(s);
  normalize();
  return *this;
}

LaurentScalar& LaurentScalar::operator-=(const LaurentScalar& other) { return *this += other * Complex(-1.0); }

LaurentScalar& LaurentScalar::operator*=(Complex s) {
  for (Complex& c : c_) c *= s;
  normalize();
  return *this;
}

LaurentScalar operator*(const LaurentScalar& a, const LaurentScalar& b) {
  if (a.c_.empty() || b.c_.empty()) return {};
  std::vector<Complex> p(a.c_.size() + b.c_.size() - 1, Complex{});
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) p[i + j] += a.c_[i] * b.c_[j];
  return LaurentScalar(a.lo_ + b.lo_, std::move(p));
}

LaurentScalar interpolate_laurent(const std::function<Complex(Complex)>& f, int lo, int hi, double trim_tol) {
  require(hi >= lo, ErrorKind::invalid_input, "interpolate_laurent: empty degree range");
  const int m = hi - lo + 1;
  std::vector<Complex> samples(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) samples[static_cast<std::size_t>(j)] = f(torus_point(static_cast<double>(j) / m));
  std::vector<Complex> coeffs(static_cast<std::size_t>(m));
  for (int k = lo; k <= hi; ++k) {
    Complex acc{};
    for (int j = 0; j < m; ++j) {
      // z_j^{-k} with the exponent reduced mod m to keep the angle small.
      const long long e = (static_cast<long long>(-k) * j) % m;
      acc += samples[static_cast<std::size_t>(j)] * torus_point(static_cast<double>(e) / m);
    }
    coeffs[static_cast<std::size_t>(k - lo)] = acc / static_cast<double>(m);
  }
  return LaurentScalar(lo, std::move(coeffs)).trimmed(trim_tol);
}

// ---------------------------------------------------------------------------
// LaurentMatrixFunction

LaurentMatrixFunction::LaurentMatrixFunction(int rows, int cols, double rho)
    : rows_(rows), cols_(cols), rho_(rho), e_(static_cast<std::size_t>(rows * cols)) {
  require(rows > 0 && cols > 0, ErrorKind::dimension, "LaurentMatrixFunction: dimensions must be positive");
}

LaurentMatrixFunction::LaurentMatrixFunction(int rows, int cols, std::vector<LaurentScalar> entries, double rho)
    : rows_(rows), cols_(cols), rho_(rho), e_(std::move(entries)) {
  require(rows > 0 && cols > 0, ErrorKind::dimension, "LaurentMatrixFunction: dimensions must be positive");
  require(e_.size() == static_cast<std::size_t>(rows * cols), ErrorKind::dimension,
          "LaurentMatrixFunction: entry count != rows * cols");
}

LaurentMatrixFunction LaurentMatrixFunction::constant(const Matrix& m, double rho) {
  LaurentMatrixFunction v(static_cast<int>(m.rows()), static_cast<int>(m.cols()), rho);
  for (int i = 0; i < v.rows_; ++i)
    for (int j = 0; j < v.cols_; ++j) v.at(i, j) = LaurentScalar::constant(m(i, j));
  return v;
}

LaurentMatrixFunction LaurentMatrixFunction::identity(int d, double rho) { return constant(Matrix::Identity(d, d), rho); }

LaurentMatrixFunction LaurentMatrixFunction::zero(int rows, int cols, double rho) {
  return LaurentMatrixFunction(rows, cols, rho);
}

LaurentMatrixFunction LaurentMatrixFunction::diagonal(const std::vector<LaurentScalar>& diag, double rho) {
  const int d = static_cast<int>(diag.size());
  LaurentMatrixFunction v(d, d, rho);
  for (int i = 0; i < d; ++i) v.at(i, i) = diag[static_cast<std::size_t>(i)];
  return v;
}

LaurentMatrixFunction LaurentMatrixFunction::scalar(const LaurentScalar& f, double rho) {
  return LaurentMatrixFunction(1, 1, {f}, rho);
}

LaurentScalar& LaurentMatrixFunction::at(int i, int j) {
  require(i >= 0 && i < rows_ && j >= 0 && j < cols_, ErrorKind::dimension, "LaurentMatrixFunction: index");
  return e_[static_cast<std::size_t>(i * cols_ + j)];
}

const LaurentScalar& LaurentMatrixFunction::at(int i, int j) const {
  require(i >= 0 && i < rows_ && j >= 0 && j < cols_, ErrorKind::dimension, "LaurentMatrixFunction: index");
  return e_[static_cast<std::size_t>(i * cols_ + j)];
}

Matrix LaurentMatrixFunction::operator()(Complex z) const {
  Matrix m(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(i, j) = e_[static_cast<std::size_t>(i * cols_ + j)](z);
  return m;
}

Matrix LaurentMatrixFunction::torus_derivative(double x, int order) const {
  Matrix m(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(i, j) = at(i, j).torus_derivative(x, order);
  return m;
}

int LaurentMatrixFunction::lowest_degree() const {
  int lo = 0;
  for (const auto& f : e_)
    if (!f.is_zero()) lo = std::min(lo, f.lowest_degree());
  return lo;
}

int LaurentMatrixFunction::highest_degree() const {
  int hi = 0;
  for (const auto& f : e_)
    if (!f.is_zero()) hi = std::max(hi, f.highest_degree());
  return hi;
}

double LaurentMatrixFunction::norm_on_annulus(double r) const {
  require(r >= 0.0 && r < 1.0, ErrorKind::parameter, "norm_on_annulus: r must lie in [0, 1)");
  constexpr int kAngles = 512;
  double best = 0.0;
  const double radii[2] = {1.0 - r, 1.0 + r};
  for (double radius : radii) {
    auto neg_norm = [&](double theta) { return -operator_norm((*this)(std::polar(radius, theta))); };
    std::vector<double> vals(kAngles);
    for (int j = 0; j < kAngles; ++j) vals[static_cast<std::size_t>(j)] = neg_norm(kTwoPi * j / kAngles);
    // Refine around the three best grid cells.
    std::vector<int> order(kAngles);
    for (int j = 0; j < kAngles; ++j) order[static_cast<std::size_t>(j)] = j;
    std::partial_sort(order.begin(), order.begin() + 3, order.end(),
                      [&](int a, int b) { return vals[static_cast<std::size_t>(a)] < vals[static_cast<std::size_t>(b)]; });
    double local = -vals[static_cast<std::size_t>(order[0])];
    for (int t = 0; t < 3; ++t) {
      const double h = kTwoPi / kAngles;
      const double c = kTwoPi * order[static_cast<std::size_t>(t)] / kAngles;
      auto [arg, val] = detail::golden_minimize(neg_norm, c - h, c + h, 1e-10);
      local = std::max(local, -val);
    }
    best = std::max(best, local);
    if (r == 0.0) break;
  }
  return best;
}

LaurentScalar LaurentMatrixFunction::det() const { return det_minus(Complex{}); }

LaurentScalar LaurentMatrixFunction::det_minus(Complex e) const {
  require(is_square(), ErrorKind::dimension, "det: matrix function is not square");
  const int d = rows_;
  const int lo = d * lowest_degree();
  const int hi = d * highest_degree();
  return interpolate_laurent(
      [&](Complex z) {
        Matrix m = (*this)(z);
        m.diagonal().array() -= e;
        return determinant(m);
      },
      lo, hi);
}

LaurentMatrixFunction LaurentMatrixFunction::shifted(double omega) const {
  LaurentMatrixFunction out = *this;
  for (auto& f : out.e_) f = f.shifted(omega);
  return out;
}

LaurentMatrixFunction LaurentMatrixFunction::transpose() const {
  LaurentMatrixFunction out(cols_, rows_, rho_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
  return out;
}

bool LaurentMatrixFunction::is_symmetric(double tol) const {
  if (!is_square()) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j)
      if (!(at(i, j) - at(j, i)).is_zero(tol)) return false;
  return true;
}

bool LaurentMatrixFunction::is_hermitian_on_torus(double tol) const {
  if (!is_square()) return false;
  // On |z| = 1, conj(f(z)) has coefficients conj(c_{-k}).
  for (int i = 0; i < rows_; ++i) {
    for (int j = i; j < cols_; ++j) {
      const LaurentScalar& a = at(i, j);
      const LaurentScalar& b = at(j, i);
      const int top = std::max({std::abs(a.lowest_degree()), std::abs(a.highest_degree()),
                                std::abs(b.lowest_degree()), std::abs(b.highest_degree())});
      for (int k = -top; k <= top; ++k)
        if (std::abs(a.coefficient(k) - std::conj(b.coefficient(-k))) > tol) return false;
    }
  }
  return true;
}

LaurentMatrixFunction& LaurentMatrixFunction::operator+=(const LaurentMatrixFunction& other) {
  require(rows_ == other.rows_ && cols_ == other.cols_, ErrorKind::dimension, "LaurentMatrixFunction: shape mismatch");
  for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += other.e_[i];
  return *this;
}

LaurentMatrixFunction& LaurentMatrixFunction::operator-=(const LaurentMatrixFunction& other) {
  require(rows_ == other.rows_ && cols_ == other.cols_, ErrorKind::dimension, "LaurentMatrixFunction: shape mismatch");
  for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= other.e_[i];
  return *this;
}

LaurentMatrixFunction& LaurentMatrixFunction::operator*=(Complex s) {
  for (auto& f : e_) f *= s;
  return *this;
}

// ---------------------------------------------------------------------------
// JSON: {rows, cols, rho, entries: [[{k, re, im}, ...], ...]} with entries
// listed row-major.

void to_json(nlohmann::json& j, const LaurentScalar& f) {
  j = nlohmann::json::array();
  for (int k = f.lowest_degree(); k <= f.highest_degree() && !f.coefficients().empty(); ++k) {
    const Complex c = f.coefficient(k);
    if (c == Complex{}) continue;
    j.push_back({{"k", k}, {"re", c.real()}, {"im", c.imag()}});
  }
}

void from_json(const nlohmann::json& j, LaurentScalar& f) {
  if (j.is_number()) {
    f = LaurentScalar::constant(j.get<double>());
    return;
  }
  // shorthand {"const": c, "cos": a, "sin": b, "phase": p}
  if (j.is_object()) {
    for (const auto& [key, _] : j.items())
      require(key == "const" || key == "cos" || key == "sin" || key == "phase", ErrorKind::parse,
              "unknown key '" + key + "' in trigonometric shorthand");
    const double phase = j.value("phase", 0.0);
    f = LaurentScalar::constant(j.value("const", 0.0));
    if (j.contains("cos")) f += LaurentScalar::cosine(j.at("cos").get<double>(), phase);
    if (j.contains("sin")) f += LaurentScalar::sine(j.at("sin").get<double>(), phase);
    return;
  }
  require(j.is_array(), ErrorKind::parse, "Laurent entry must be a number, an array of {k, re, im}, or a cos/sin object");
  if (j.empty()) {
    f = LaurentScalar{};
    return;
  }
  int lo = 0, hi = 0;
  bool first = true;
  for (const auto& t : j) {
    require(t.is_object() && t.contains("k"), ErrorKind::parse, "Laurent term must be an object with key k");
    const int k = t.at("k").get<int>();
    lo = first ? k : std::min(lo, k);
    hi = first ? k : std::max(hi, k);
    first = false;
  }
  require(hi - lo <= 100000, ErrorKind::parse, "Laurent degree range too large");
  std::vector<Complex> c(static_cast<std::size_t>(hi - lo + 1), Complex{});
  for (const auto& t : j) {
    const double re = t.value("re", 0.0);
    const double im = t.value("im", 0.0);
    c[static_cast<std::size_t>(t.at("k").get<int>() - lo)] += Complex(re, im);
  }
  f = LaurentScalar(lo, std::move(c));
}

void to_json(nlohmann::json& j, const LaurentMatrixFunction& v) {
  nlohmann::json entries = nlohmann::json::array();
  for (int r = 0; r < v.rows(); ++r)
    for (int c = 0; c < v.cols(); ++c) entries.push_back(v.at(r, c));
  j = {{"rows", v.rows()}, {"cols", v.cols()}, {"rho", v.rho()}, {"entries", entries}};
}

void from_json(const nlohmann::json& j, LaurentMatrixFunction& v) {
  // nested rows: [[e00, e01], [e10, e11]]
  if (j.is_array()) {
    require(!j.empty() && j.front().is_array() && !j.front().empty(), ErrorKind::parse,
            "matrix function given as rows must be a non-empty array of non-empty arrays");
    const auto cols = j.front().size();
    std::vector<LaurentScalar> e;
    for (const auto& row : j) {
      require(row.is_array() && row.size() == cols, ErrorKind::parse, "matrix function rows must have equal length");
      for (const auto& t : row) e.push_back(t.get<LaurentScalar>());
    }
    v = LaurentMatrixFunction(static_cast<int>(j.size()), static_cast<int>(cols), std::move(e));
    return;
  }
  require(j.is_object(), ErrorKind::parse, "matrix function must be a JSON object or an array of rows");
  for (const char* key : {"rows", "cols", "entries"})
    require(j.contains(key), ErrorKind::parse, std::string("matrix function is missing key '") + key + "'");
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  require(rows > 0 && cols > 0, ErrorKind::parse, "matrix function dimensions must be positive");
  const auto& entries = j.at("entries");
  require(entries.is_array() && entries.size() == static_cast<std::size_t>(rows * cols), ErrorKind::parse,
          "matrix function 'entries' must hold rows*cols term lists");
  std::vector<LaurentScalar> e;
  e.reserve(entries.size());
  for (const auto& t : entries) e.push_back(t.get<LaurentScalar>());
  v = LaurentMatrixFunction(rows, cols, std::move(e), j.value("rho", 0.5));
}

}  // namespace qpc
