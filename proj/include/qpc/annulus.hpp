#pragma once

// Zero counting and minimum-modulus measurements of Laurent polynomials on
// annuli A_r = {1-r <= |z| <= 1+r}.

#include "qpc/laurent.hpp"

#include <optional>
#include <vector>

namespace qpc {

struct Zero {
  Complex location;
  int multiplicity = 1;
};

struct ZeroDivisor {
  std::vector<Zero> zeros;

  int total() const;
  bool empty() const { return zeros.empty(); }
};

inline double default_outer_radius(double rho) { return 0.5 * (1.0 + rho); }
/// R slightly above rho: the R used whenever beta feeds epsilon0.
inline double certified_outer_radius(double rho) { return rho + 1e-6 * (1.0 - rho); }

Complex evaluate(const LaurentScalar& f, Complex z);

/// All zeros of f in C \ {0}: companion-matrix eigenvalues of z^{-lo} f(z),
/// Newton-polished, then clustered within 1e-7 relative distance.
ZeroDivisor all_zeros(const LaurentScalar& f);

/// Zeros with | |z| - 1 | <= r (closed, tolerance 1e-9).
ZeroDivisor zeros_in_annulus(const LaurentScalar& f, double r);

/// Number of zeros with r_inner < |z| < r_outer from the winding numbers of f
/// on the two circles. Throws boundary_degenerate when f nearly vanishes on
/// a boundary circle or the quadrature does not settle on an integer.
int count_zeros_by_argument_principle(const LaurentScalar& f, double r_inner, double r_outer);

struct AnnulusMeasurements {
  int N = 0;
  double beta = 0.0;
  double rho = 0.0;
  double R = 0.0;
  ZeroDivisor zeros;    // zeros counted in N
  ZeroDivisor divided;  // zeros factored out of g (| |z|-1 | < (rho+R)/2)
  Complex beta_at{};    // where min |g| was found
};

/// N_rho(f) and beta_rho(f) = min over A_rho of |g|, where g is f with the
/// factors ((z - z_j) / (2(R+1)))^{n_j} of the nearby zeros removed.
AnnulusMeasurements measure_N_beta(const LaurentScalar& f, double rho, double R);

/// det(V(z) - e I) vanishes identically (all Laurent coefficients below
/// 1e-9 relative to the size of V - e I on the torus).
bool det_identically_zero(const LaurentMatrixFunction& V, Complex e = 0.0);

/// An eigenvalue E of V(z) that does not depend on z, if there is one.
/// Candidates are the eigenvalues of V at one torus point.
std::optional<Complex> find_constant_eigenvalue(const LaurentMatrixFunction& V);

struct HatMeasurements {
  int N_hat = 0;
  double beta_hat = 0.0;
  double E_argmax_N = 0.0;
  double E_argmin_beta = 0.0;
  double E_lo = 0.0;
  double E_hi = 0.0;
  double V_norm = 0.0;
  int grid_points = 0;
  // The E-extrema are taken over a finite grid (plus local refinement of
  // beta), so these values are certified only up to grid resolution.
  bool grid_certified_only = true;
};

/// Worst case of N_rho and beta_rho of det(V(z) - E I) over real E, scanned
/// on [-2 ||V||_rho, 2 ||V||_rho]. V must not have constant eigenvalues.
HatMeasurements measure_hat(const LaurentMatrixFunction& V, double rho, double R, int grid_points = 2001,
                            int threads = 1);

/// beta (delta / (2 (rho+1) N))^N; beta when N = 0.
double epsilon0(double rho, double delta, int N, double beta);

struct GoodCircle {
  double y0 = 0.0;           // circle is |z| = 1 + y0
  double min_modulus = 0.0;  // measured min |f| on the circle
  double guarantee = 0.0;    // epsilon0(rho, width/2, N, beta)
  int N = 0;
  double beta = 0.0;
};

/// A circle inside {1+inner < |z| < 1+inner+width} that stays (width/2)/N
/// away from every zero of f in A_rho.
GoodCircle find_good_circle(const LaurentScalar& f, double inner, double width, double rho);

struct CircleMin {
  double value = 0.0;
  Complex at{};
};

/// min of h over the circle |z| = radius: uniform angle scan, then golden
/// refinement around the three best grid cells.
CircleMin minimize_on_circle(const std::function<double(Complex)>& h, double radius, int angles = 4096);

void to_json(nlohmann::json& j, const ZeroDivisor& z);
void to_json(nlohmann::json& j, const AnnulusMeasurements& m);
void to_json(nlohmann::json& j, const HatMeasurements& h);
void to_json(nlohmann::json& j, const GoodCircle& g);

}  // namespace qpc
