#pragma once

// Laurent polynomials with known zeros, and brute-force oracles that only use
// the planted data and the coefficients.

#include "support.hpp"

#include <cmath>
#include <vector>

namespace qpc::test {

struct PlantedRoot {
  Complex z;
  int multiplicity = 1;
};

struct Planted {
  LaurentScalar f;
  Complex lead;
  int lo = 0;
  std::vector<PlantedRoot> roots;
};

inline Complex random_point_with_modulus(double a, double b) {
  return std::polar(uniform(a, b), uniform(0.0, kTwoPi));
}

/// For rho = 0.5, R = 0.75: counted roots lie in | |z|-1 | <= 0.45, some
/// divided-but-not-counted roots in 0.55..0.6, and far roots in |z| <= 0.3 or
/// |z| >= 2. Nothing sits near the band edges.
inline Planted planted_instance(int max_in = 4) {
  Planted p;
  p.lead = std::polar(uniform(0.5, 3.0), uniform(0.0, kTwoPi));
  p.lo = static_cast<int>(uniform(-3.0, 0.999));
  const int n_in = static_cast<int>(uniform(0.0, max_in + 0.999));
  for (int i = 0; i < n_in; ++i) {
    const double s = uniform(-0.45, 0.45);
    const int mult = uniform(0.0, 1.0) < 0.15 ? 2 : 1;
    p.roots.push_back({std::polar(1.0 + s, uniform(0.0, kTwoPi)), mult});
  }
  if (uniform(0.0, 1.0) < 0.5) {
    const double s = uniform(0.55, 0.6);
    p.roots.push_back({std::polar(uniform(0.0, 1.0) < 0.5 ? 1.0 + s : 1.0 - s, uniform(0.0, kTwoPi)), 1});
  }
  const int n_far = static_cast<int>(uniform(0.0, 3.999));
  for (int i = 0; i < n_far; ++i) {
    const bool outside = uniform(0.0, 1.0) < 0.5;
    p.roots.push_back({outside ? random_point_with_modulus(2.0, 3.0) : random_point_with_modulus(0.1, 0.3), 1});
  }
  std::vector<Complex> flat;
  for (const auto& r : p.roots)
    for (int m = 0; m < r.multiplicity; ++m) flat.push_back(r.z);
  p.f = LaurentScalar::from_roots(p.lead, p.lo, flat);
  return p;
}

inline int planted_count(const Planted& p, double rho) {
  int n = 0;
  for (const auto& r : p.roots)
    if (std::abs(std::abs(r.z) - 1.0) <= rho) n += r.multiplicity;
  return n;
}

/// min |g| over a radii x angles grid of A_rho; g is f evaluated from its
/// coefficients divided by the planted normalized factors.
inline double brute_force_beta(const Planted& p, double rho, double R, int radii = 10, int angles = 10000) {
  const double band = 0.5 * (rho + R);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < radii; ++i) {
    const double r = 1.0 - rho + 2.0 * rho * i / (radii - 1);
    for (int j = 0; j < angles; ++j) {
      const Complex z = std::polar(r, kTwoPi * j / angles);
      Complex v = p.f(z);
      for (const auto& w : p.roots)
        if (std::abs(std::abs(w.z) - 1.0) < band)
          v /= std::pow((z - w.z) / (2.0 * (R + 1.0)), w.multiplicity);
      best = std::min(best, std::abs(v));
    }
  }
  return best;
}

}  // namespace qpc::test
