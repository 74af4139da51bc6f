// fit.hpp — damped-oscillation envelope fits p(t) = A exp(-gamma t^m) sin(w t + phi)
// with m = 1 (exponential) or m = 2 (gaussian), via Levenberg-Marquardt.
#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include "blochsim/common.hpp"

namespace blochsim {

enum class DecayModel { Exponential, Gaussian };

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DecayFit {
  double gamma = 0.0;
  double omega = 0.0;      // fitted oscillation frequency
  double amplitude = 0.0;
  double phase = 0.0;
  double residual_rms = 0.0;
  int iterations = 0;
  DecayModel model = DecayModel::Exponential;
};

// omega_hint seeds the frequency and defines the Bloch period used for the
// coverage precondition (the series must span >= 5 periods).
DecayFit fit_decay(std::span<const double> t, std::span<const double> p, DecayModel model,
                   double omega_hint);

struct ModelSelection {
  DecayFit exponential, gaussian;
  DecayModel better = DecayModel::Exponential;
};

ModelSelection select_decay_model(std::span<const double> t, std::span<const double> p,
                                  double omega_hint);

}  // namespace blochsim
