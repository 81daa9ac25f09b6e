#pragma once

// Finite-n estimates of Lyapunov exponents: discrete QR, exterior-power
// partial sums, Birkhoff means of scalar log-cocycles, and circle means.

#include "qpc/cocycle.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace qpc {

struct EstimatorConfig {
  int n = 10000;
  int samples = 8;
  std::uint64_t seed = 1;
  double z_modulus = 1.0;
  int threads = 1;
  /// QR re-orthonormalization period. 1 is the only safe choice when the
  /// exponents are separated by more than ~3.5 per step.
  int qr_interval = 1;
};

struct LyapunovSpectrum {
  std::vector<double> exponents;  // nonincreasing, averaged over samples
  std::vector<double> spread;     // max - min over samples, per exponent
  std::vector<std::vector<double>> per_sample;
  int n = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  double z_modulus = 1.0;

  double sum(int k) const;  // L^(1) + ... + L^(k)
  double max_spread() const;
};

/// x_s = x0 + s / samples with x0 in [0, 1/samples) drawn from the seed.
std::vector<double> sample_phases(int samples, std::uint64_t seed);

LyapunovSpectrum spectrum_qr(const BlockCocycle& c, const EstimatorConfig& cfg = {});

/// Exponents of one orbit starting at z, unsorted (diagonal order of R).
std::vector<double> qr_exponents(const BlockCocycle& c, Complex z, int n, int qr_interval = 1);

/// (1/n) log ||wedge^k M_n(z)||, products of compounds with rescaling.
double exterior_log_norm(const BlockCocycle& c, int k, Complex z, int n);

struct TopKSum {
  double value = 0.0;
  double spread = 0.0;
  std::vector<double> per_sample;
};

/// Sample average of exterior_log_norm; estimates L^(1) + ... + L^(k).
TopKSum topk_sum_via_exterior(const BlockCocycle& c, int k, const EstimatorConfig& cfg = {});

struct ScalarLogMean {
  double value = 0.0;       // Jensen formula on the factored Laurent polynomial
  double quadrature = 0.0;  // tanh-sinh between near-circle zeros
  double discrepancy = 0.0;
};

/// Mean of log|g| over |z| = radius.
ScalarLogMean scalar_log_mean(const LaurentScalar& g, double radius = 1.0);

struct DecomposedSpectrum {
  LyapunovSpectrum adjugate;     // spectrum of g(z+w) A(z), g = det W
  double L_g = 0.0;
  std::vector<double> exponents;  // adjugate exponents minus L_g
  std::optional<LyapunovSpectrum> direct;
  double max_discrepancy = 0.0;  // against direct, per exponent
  bool consistent = true;
};

/// Spectrum of the band cocycle through its singularity-free adjugate form.
/// With cross_check the band cocycle itself is run on phases that avoid the
/// singular set; agreement is required within max(1e-2, 3 spread).
DecomposedSpectrum decomposed_band_spectrum(const LaurentMatrixFunction& W, const LaurentMatrixFunction& R,
                                            const LaurentMatrixFunction& D, double lambda, double E,
                                            const Rotation& rot, const EstimatorConfig& cfg = {},
                                            bool cross_check = true);

/// Mean of exterior_log_norm over |z| = r at angles 2 pi (j + 1/2) / angles.
double circle_mean(const BlockCocycle& c, int k, double r, int n, int angles, int threads = 1);

void to_json(nlohmann::json& j, const LyapunovSpectrum& s);

}  // namespace qpc
