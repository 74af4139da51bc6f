#include "blochsim/state.hpp"

#include <cmath>

namespace blochsim {

double MeanFieldState::norm2() const {
  double s = 0.0;
  for (const auto& a : amps) s += std::norm(a);
  return s;
}

double ModeState::norm2() const {
  double s = 0.0;
  for (const auto& b : modes) s += std::norm(b);
  return s;
}

ModeState to_modes(const MeanFieldState& state) {
  const int L = state.sites();
  ModeState out;
  out.modes.assign(L, Complex{0.0, 0.0});
  out.t = state.t;
  const double inv_sqrt_l = 1.0 / std::sqrt(static_cast<double>(L));
  for (int k = -(L - 1) / 2; k <= (L - 1) / 2; ++k) {
    const double kappa = quasimomentum(k, L);
    Complex acc{0.0, 0.0};
    for (int l = 1; l <= L; ++l)
      acc += std::exp(Complex{0.0, kappa * l}) * state.amps[l - 1];
    out.modes[mode_index(k, L)] = inv_sqrt_l * acc;
  }
  return out;
}

MeanFieldState to_sites(const ModeState& modes) {
  const int L = modes.sites();
  MeanFieldState out;
  out.amps.assign(L, Complex{0.0, 0.0});
  out.t = modes.t;
  const double inv_sqrt_l = 1.0 / std::sqrt(static_cast<double>(L));
  for (int l = 1; l <= L; ++l) {
    Complex acc{0.0, 0.0};
    for (int k = -(L - 1) / 2; k <= (L - 1) / 2; ++k) {
      const double kappa = quasimomentum(k, L);
      acc += std::exp(Complex{0.0, -kappa * l}) * modes.modes[mode_index(k, L)];
    }
    out.amps[l - 1] = inv_sqrt_l * acc;
  }
  return out;
}

double momentum(const MeanFieldState& state, const LatticeParams& p) {
  const int L = state.sites();
  Complex acc{0.0, 0.0};
  for (int l = 0; l < L; ++l) acc += std::conj(state.amps[(l + 1) % L]) * state.amps[l];
  acc *= std::exp(Complex{0.0, -p.F * state.t});
  return acc.imag() / L;
}

double momentum(const ModeState& state, const LatticeParams& p) {
  const int L = state.sites();
  double acc = 0.0;
  for (int k = -(L - 1) / 2; k <= (L - 1) / 2; ++k) {
    const double kappa = quasimomentum(k, L);
    acc += std::norm(state.modes[mode_index(k, L)]) * std::sin(kappa - p.F * state.t);
  }
  return acc / L;
}

std::vector<double> mode_populations(const ModeState& state) {
  const int L = state.sites();
  std::vector<double> pops(L);
  for (int i = 0; i < L; ++i) pops[i] = std::norm(state.modes[i]) / L;
  return pops;
}

std::vector<double> site_populations(const MeanFieldState& state) {
  std::vector<double> pops(state.sites());
  for (int i = 0; i < state.sites(); ++i) pops[i] = std::norm(state.amps[i]);
  return pops;
}

double energy(const MeanFieldState& state, const LatticeParams& p) {
  const int L = state.sites();
  Complex hop{0.0, 0.0};
  double inter = 0.0;
  for (int l = 0; l < L; ++l) {
    hop += std::conj(state.amps[(l + 1) % L]) * state.amps[l];
    const double n = std::norm(state.amps[l]);
    inter += n * (n - 2.0);
  }
  hop *= std::exp(Complex{0.0, p.F * state.t});
  return -p.J * hop.real() + 0.5 * p.g * inter;
}

MeanFieldState uniform_state(int L) {
  MeanFieldState s;
  s.amps.assign(L, Complex{1.0, 0.0});
  return s;
}

MeanFieldState exact_bloch_oscillation(const LatticeParams& p, double t) {
  MeanFieldState s;
  const Complex a = std::exp(Complex{0.0, (p.J / p.F) * std::sin(p.F * t)});
  s.amps.assign(p.L, a);
  s.t = t;
  return s;
}

}  // namespace blochsim
