// params.hpp — physical parameter record; single source of truth for unit
// conventions (lattice period d = 1, hbar = 1, energies in units where J ~ 1).
#pragma once

#include <cmath>
#include <optional>

#include "blochsim/common.hpp"

namespace blochsim {

// J: hopping, g: macroscopic interaction g = W*nbar, F: static force,
// L: lattice sites (odd), W/N only for the many-particle description.
struct LatticeParams {
  double J = 1.0;
  double g = 0.0;
  double F = 0.0;
  int L = 0;
  std::optional<double> W;
  std::optional<int> N;

  double filling() const {
    if (!N || L <= 0) throw ValidationError("filling requires N and L");
    return static_cast<double>(*N) / L;
  }
  double bloch_period() const {
    if (F <= 0.0) throw ValidationError("Bloch period requires F > 0");
    return kTwoPi / F;
  }
  double tunneling_period() const {
    if (J <= 0.0) throw ValidationError("tunneling period requires J > 0");
    return kTwoPi / J;
  }
  double revival_period() const {
    if (!W || *W <= 0.0) throw ValidationError("revival period requires W > 0");
    return kTwoPi / *W;
  }

  void validate(bool many_body = false) const {
    if (L <= 0 || L % 2 == 0) throw ValidationError("L must be an odd positive integer");
    if (J < 0.0 || g < 0.0) throw ValidationError("J and g must be nonnegative");
    if (W && *W < 0.0) throw ValidationError("W must be nonnegative");
    if (N && *N <= 0) throw ValidationError("N must be positive");
    if (many_body && (!W || !N)) throw ValidationError("many-body runs require W and N");
    if (W && N) {
      const double g_wn = *W * static_cast<double>(*N) / L;
      const double scale = std::max({std::abs(g), std::abs(g_wn), 1e-300});
      if (std::abs(g - g_wn) > 1e-12 * scale)
        throw ValidationError("inconsistent parameters: g != W*N/L");
    }
  }

  // Many-body constructor: fixes g = W*N/L.
  static LatticeParams many_body(double J, double W, int N, int L, double F) {
    LatticeParams p;
    p.J = J;
    p.W = W;
    p.N = N;
    p.L = L;
    p.F = F;
    p.g = W * static_cast<double>(N) / L;
    p.validate(true);
    return p;
  }
};

}  // namespace blochsim
