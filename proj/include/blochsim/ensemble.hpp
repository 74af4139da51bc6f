// ensemble.hpp — phase-space ensembles representing the condensed initial
// many-particle state, trajectory-averaged observables and decay-law fits.
#pragma once

#include <cstdint>
#include <vector>

#include "blochsim/fit.hpp"
#include "blochsim/meanfield.hpp"
#include "blochsim/params.hpp"
#include "blochsim/state.hpp"

namespace blochsim {

class StarvationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EnsembleSpec {
  enum class Method { PaperRejection, HaarRejection };

  int N = 0;      // particle number; distribution width ~ (N/L)^{-1/2}
  int L = 0;

  int count = 1;  // trajectories
  std::uint64_t seed = 0;
  Method method = Method::PaperRejection;

  void validate() const {
    if (N < 1 || L < 1) throw ValidationError("ensemble requires N >= 1, L >= 1");
    if (count < 1) throw ValidationError("ensemble count must be >= 1");
  }
};

// Rejection sampling of the phase-space density Q(b) ~ |b_0|^{2N} on the
// sphere sum_k |b_k|^2 = L.
//   paper-rejection: L magnitudes r_k uniform in [0,1) with uniform phases,
//     normalize z, accept iff v < |z_0|^{2N}, then b = sqrt(L) z.
//   haar-rejection: complex-normal components instead of uniform magnitudes
//     (uniform on the sphere after normalization), same acceptance test.
// Reproducible bit-exactly from (seed, trajectory index).
std::vector<ModeState> sample_husimi(const EnsembleSpec& spec);

struct EnsembleSeries {
  std::vector<double> times;
  std::vector<double> mean_p, se_p;      // size nt
  std::vector<double> mean_pop, se_pop;  // nt x L row-major
  int L = 0;
  int trajectories = 0;
  int dropped = 0;

  double pop(std::size_t it, int ki) const { return mean_pop[it * L + ki]; }
};

// Propagates every member, samples momentum and mode populations on t_grid and
// returns mean +- standard error. Per-trajectory integration failures are
// dropped and counted; more than 1% failures aborts.
EnsembleSeries ensemble_average(const std::vector<ModeState>& members,
                                const std::vector<double>& t_grid, const LatticeParams& p,
                                const IntegratorConfig& cfg = {}, int threads = 0);

// Large-F limit: site populations frozen, amplitudes rotate with their own
// density, a_l(t) = a_l(0) exp(-i g (|a_l(0)|^2 - 1) t).
MeanFieldState frozen_evolution(const MeanFieldState& s0, double t, const LatticeParams& p);

}  // namespace blochsim
