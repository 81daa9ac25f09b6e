#pragma once

// Quantitative side: the block growth lemma, the subharmonic mean estimate,
// explicit thresholds lambda_0 and lower-bound constants, and end-to-end
// checks of estimated exponents against them.

#include "qpc/annulus.hpp"
#include "qpc/lyapunov.hpp"

#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace qpc {

/// Blocks [[L_j, Wb_j], [Ws_j, O_j]] with d x d corners L_j. Construction
/// checks m(L_j) >= lambda, all off-block norms <= B, and lambda > 3B.
class GrowthHypothesis {
 public:
  GrowthHypothesis(double lambda, double B, int d, std::vector<Matrix> blocks);

  double lambda() const { return lambda_; }
  double B() const { return B_; }
  int d() const { return d_; }
  int m() const { return static_cast<int>(blocks_.front().rows()); }
  int n() const { return static_cast<int>(blocks_.size()); }
  const std::vector<Matrix>& blocks() const { return blocks_; }

 private:
  double lambda_;
  double B_;
  int d_;
  std::vector<Matrix> blocks_;
};

/// Corners U diag(s) V^* with s in [lambda, 2 lambda], off-blocks with norms
/// uniform in (0, B].
GrowthHypothesis random_growth_hypothesis(std::mt19937_64& gen, double lambda, double B, int n, int d, int m);

struct GrowthCheck {
  double bound = 0.0;     // k n log(lambda - B)
  double measured = 0.0;  // log m(wedge^k S_n)
  bool pass = false;
  double max_step_ratio = 0.0;  // max_j ||T_j S_j^{-1}||
  bool step_invariant = false;
};

GrowthCheck verify_growth(const GrowthHypothesis& h, int k);

/// log(1 + y0) / log(1 + rho)
double alpha_from(double y0, double rho);
/// (gamma - alpha S) / (1 - alpha)
double subharmonic_lower_mean(double gamma, double S, double y0, double rho);

/// (sqrt(1 + rho) - 1) / 2; delta must stay strictly below it.
double max_delta(double rho);
double default_delta(double rho);

enum class Regime { bounded_E, large_E };
std::string_view to_string(Regime r);

struct BoundMeasurements {
  int N1 = 0;
  int N2 = 0;
  double beta1 = 1.0;
  double beta2 = 1.0;
};

struct CertifiedBound {
  Regime regime = Regime::bounded_E;
  double B = 0.0;
  int d = 0;
  int N = 0;
  double beta = 0.0;
  double rho = 0.0;
  double delta = 0.0;
  double eps0 = 0.0;
  double eps1 = 0.0;
  double lambda0 = 0.0;
  double y0 = 0.0;     // 2 delta, the outermost admissible circle
  double alpha = 0.0;  // alpha_from(y0, rho)
  std::vector<double> c_per_k;  // index k - 1

  double c(int k) const;
  /// Per-exponent constant: c(k) / k.
  double c_hat() const;
  /// log lambda - c(k), or log(lambda |E|) - c(k) for large E.
  double lower_bound(int k, double lambda, double E) const;
};

/// N = N1 + N2, beta = beta1 beta2, eps1 = eps0 / (3 B^2)^(d-1),
/// lambda0 = 3 B / eps1, c(k) = k log(81 B^4 / (4 eps1^2)).
CertifiedBound threshold_bounded_E(const BoundMeasurements& meas, double B, int d, double rho, double delta);
/// eps0 from (N1, beta1) only, eps1 = eps0 / B^(d-1), lambda0 = 3 / eps1,
/// c(k) = k log(81 B^2 / (4 eps1^2)).
CertifiedBound threshold_large_E(const BoundMeasurements& meas, double B, int d, double rho, double delta);

struct ModelMeasurements {
  BoundMeasurements meas;
  double B = 0.0;
  HatMeasurements hat;
};

/// U, V and the off-blocks of A_lambda_E: N1, beta1 from det U, N2, beta2
/// from the hat measurements of V, B from the rho-norms of all blocks.
ModelMeasurements measure_A_lambda_E(const LaurentMatrixFunction& U, const LaurentMatrixFunction& V,
                                     const LaurentMatrixFunction& Wb, const LaurentMatrixFunction& Ws,
                                     const LaurentMatrixFunction& O, double rho, double R, int grid = 2001,
                                     int threads = 1);

/// Adjugate form of the band model: U = adj W(z + w), V = D - R / lambda,
/// det U = g(z + w)^(d-1), B = max(||W||^(d-1), ||W||^d, ||D|| + ||R||).
ModelMeasurements measure_band_model(const LaurentMatrixFunction& W, const LaurentMatrixFunction& R,
                                     const LaurentMatrixFunction& D, double lambda, double rho, double R_annulus,
                                     const Rotation& rot = {}, int grid = 2001, int threads = 1);

struct TheoremBounds {
  CertifiedBound bounded;
  CertifiedBound large;
};

TheoremBounds theorem_bounds(const BoundMeasurements& meas, double B, int d, double rho, double delta);

/// {0, +-B, +-2B} and 33 uniform points on [-2B(B+1), 2B(B+1)], sorted.
std::vector<double> theorem_E_grid(double B);

struct TheoremRow {
  double E = 0.0;
  int k = 0;
  Regime regime = Regime::bounded_E;
  double estimate = 0.0;
  double spread = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // estimate + 3 spread - bound
  bool pass = false;
};

struct TheoremReport {
  double lambda = 0.0;
  double lambda0_bounded = 0.0;
  double lambda0_large = 0.0;
  bool above_threshold = false;
  std::vector<TheoremRow> rows;
  bool all_pass = false;
};

/// Maps an energy (in the units of the corner block) to the cocycle.
using CocycleFamily = std::function<BlockCocycle(double E)>;

/// Estimates L^(k), k <= d, for every E and compares with the certified
/// bound of the matching regime (|E| <= 2B bounded). Refuses with a
/// precondition error when lambda <= lambda0 of a regime in use, unless
/// enforce_threshold is false.
TheoremReport verify_theorem(const CocycleFamily& family, const TheoremBounds& bounds, double lambda,
                             std::span<const double> E_values, const EstimatorConfig& cfg,
                             bool enforce_threshold = true);

struct ConvexityCheck {
  double alpha = 0.0;
  double m1 = 0.0;
  double m = 0.0;
  double m2 = 0.0;
  double residual = 0.0;  // (1 - alpha) m1 + alpha m2 - m
};

ConvexityCheck circle_convexity_check(const BlockCocycle& c, int k, int n, double r1, double r, double r2,
                                      int angles = 512, int threads = 1);

void to_json(nlohmann::json& j, const CertifiedBound& b);
void to_json(nlohmann::json& j, const TheoremRow& r);
void to_json(nlohmann::json& j, const TheoremReport& r);
void to_json(nlohmann::json& j, const GrowthCheck& g);
std::string theorem_csv(const TheoremReport& r);

}  // namespace qpc
