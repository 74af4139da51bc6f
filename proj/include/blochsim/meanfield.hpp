// meanfield.hpp — gauge-frame DNLSE propagation, tangent-space dynamics and
// finite-time Lyapunov exponents.
#pragma once

#include <utility>
#include <vector>

#include "blochsim/integrate.hpp"
#include "blochsim/params.hpp"
#include "blochsim/state.hpp"

namespace blochsim {

// da_l/dt = -i [ -(J/2)(e^{-iFt} a_{l+1} + e^{+iFt} a_{l-1}) + g(|a_l|^2 - 1) a_l ]
// with periodic wraparound a_0 == a_L.
CVec dnlse_rhs(const MeanFieldState& state, double t, const LatticeParams& p);

MeanFieldState propagate(const MeanFieldState& state, double t0, double t1,
                         const LatticeParams& p, const IntegratorConfig& cfg = {});

// Propagates and samples observables at the given times (t0 = state time).
// observer(state_at_t) is called once per entry of times.
void propagate_observed(const MeanFieldState& state, const std::vector<double>& times,
                        const LatticeParams& p, const IntegratorConfig& cfg,
                        const std::function<void(const MeanFieldState&)>& observer);

// Tangent-space deviation (da_1..da_L, da*_1..da*_L). The lower half starts as
// the conjugate of the upper half and the linearized flow preserves that
// pairing. log_norm_accum collects the log of every renormalization factor so
// growth rates survive the rescaling.
struct TangentVector {
  CVec delta;  // size 2L
  double log_norm_accum = 0.0;
  std::vector<double> renorm_log;  // bookkeeping: one entry per rescale

  static TangentVector from_perturbation(const CVec& d);
  double norm() const;
  // ln(|delta(t)| / reference) including accumulated renormalizations
  double log_growth(double reference_norm) const;
};

inline constexpr double kTangentRenormThreshold = 1e6;

std::pair<MeanFieldState, TangentVector> propagate_with_tangent(
    const MeanFieldState& state, const TangentVector& tangent, double t0, double t1,
    const LatticeParams& p, const IntegratorConfig& cfg = {});

// Finite-time Lyapunov exponent lambda(t) = ln(|delta a(t)|/|delta a(0)|)/t
// sampled at n_samples uniformly spaced times in (0, T].
std::vector<std::pair<double, double>> lyapunov(const MeanFieldState& state0,
                                                const TangentVector& delta0, double T,
                                                int n_samples, const LatticeParams& p,
                                                const IntegratorConfig& cfg = {});

// Transient estimate t_nu = ln(1/eps)/nu_rate with eps = nbar^{-1/2}; reported
// as a diagnostic only (the growth-onset time before mode populations become
// non-negligible).
double transient_time(double nu_rate, double filling);

}  // namespace blochsim
