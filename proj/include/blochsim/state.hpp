// state.hpp — mean-field state representations, the Bloch-wave transform and
// the basic observables shared by every other module.
//
// Conventions (fixed project-wide):
//   - All dynamics live in the gauge-rotating frame where the static tilt
//     appears as periodic hopping phases e^{+-iFt}; periodic boundaries apply.
//   - BEC norm convention: sum_l |a_l|^2 = L (not 1).
//   - Mode transform b_k = L^{-1/2} sum_{l=1..L} exp(+i kappa l) a_l with
//     kappa = 2 pi k / L positioned at k = -(L-1)/2 .. +(L-1)/2.
//   - Momentum is reported normalized by L, so the unperturbed Bloch
//     oscillation stays within [-1, 1]; it follows -sin(Ft) with these signs.
#pragma once

#include <vector>

#include "blochsim/common.hpp"
#include "blochsim/params.hpp"

namespace blochsim {

enum class Frame { GaugeRotating };

struct MeanFieldState {
  CVec amps;  // a_l, l = 1..L stored at index l-1
  double t = 0.0;
  Frame frame = Frame::GaugeRotating;

  int sites() const { return static_cast<int>(amps.size()); }
  double norm2() const;  // sum |a_l|^2
};

struct ModeState {
  CVec modes;  // b_k, k = -(L-1)/2 .. (L-1)/2 stored at index k + (L-1)/2
  double t = 0.0;

  int sites() const { return static_cast<int>(modes.size()); }
  double norm2() const;
};

inline int mode_index(int k, int L) { return k + (L - 1) / 2; }
inline int mode_k(int index, int L) { return index - (L - 1) / 2; }
inline double quasimomentum(int k, int L) { return kTwoPi * k / L; }

ModeState to_modes(const MeanFieldState& state);
MeanFieldState to_sites(const ModeState& modes);

// p(t)/L; the site form Im(sum_l a*_{l+1} a_l e^{-iFt})/L and the mode form
// sum_k |b_k|^2 sin(kappa - Ft)/L agree identically.
double momentum(const MeanFieldState& state, const LatticeParams& p);
double momentum(const ModeState& state, const LatticeParams& p);

// |b_k|^2 / L, so equipartition reads 1/L per mode and a BEC-normalized
// state sums to 1.
std::vector<double> mode_populations(const ModeState& state);

std::vector<double> site_populations(const MeanFieldState& state);  // |a_l|^2

// Gauge-frame Hamiltonian function; explicitly time-dependent, diagnostic only.
double energy(const MeanFieldState& state, const LatticeParams& p);

// Uniform condensate a_l = 1 (the exact Bloch-oscillation initial state).
MeanFieldState uniform_state(int L);

// Analytic solution for the uniform initial state: a_l(t) = exp(i (J/F) sin Ft).
MeanFieldState exact_bloch_oscillation(const LatticeParams& p, double t);

}  // namespace blochsim
