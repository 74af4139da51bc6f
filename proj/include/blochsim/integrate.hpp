// integrate.hpp — thin wrapper around an adaptive embedded Runge-Kutta pair
// (Fehlberg 7(8) from odeint) adding a max-step clamp, exact endpoint landing,
// step-size-underflow detection and an after-step hook used for tangent-vector
// renormalization.
#pragma once

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <functional>
#include <limits>

#include "blochsim/common.hpp"

namespace blochsim {

struct IntegratorConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-9;
  double max_step = std::numeric_limits<double>::infinity();
  std::string method = "rkf78";  // metadata; the family is fixed project-wide

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ValidationError("tolerances must be > 0");
    if (!(max_step > 0.0)) throw ValidationError("max_step must be > 0");
  }
};

namespace detail {
struct NoAfterStep {
  template <class State>
  void operator()(State&, double) const {}
};

template <class State>
bool all_finite(const State& x) {
  for (const auto& c : x)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}
}  // namespace detail

// Integrates x from t0 to t1 (either direction). after_step(x, t) runs after
// every accepted step and may rescale x in place.
template <class System, class State, class AfterStep = detail::NoAfterStep>
void integrate_adaptive(System sys, State& x, double t0, double t1,
                        const IntegratorConfig& cfg, AfterStep after_step = {}) {
  namespace ode = boost::numeric::odeint;
  if (t1 == t0) return;
  cfg.validate();

  using Stepper = ode::runge_kutta_fehlberg78<State>;
  auto controlled = ode::make_controlled<Stepper>(cfg.abs_tol, cfg.rel_tol);

  const double dir = (t1 > t0) ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  double t = t0;
  double dt = dir * std::min({span, cfg.max_step, span / 16.0 + 1e-30});

  int consecutive_rejects = 0;
  State before = x;  // restore point: a wild trial step can overflow to NaN,
                     // which the error controller would otherwise accept
  while (dir * (t1 - t) > 0.0) {
    if (std::abs(dt) > cfg.max_step) dt = dir * cfg.max_step;
    if (dir * (t + dt) > dir * t1) dt = t1 - t;
    const double t_before = t;
    const double dt_attempted = dt;
    before = x;
    auto result = controlled.try_step(sys, x, t, dt);
    if (result == ode::success && !detail::all_finite(x)) {
      x = before;
      t = t_before;
      dt = 0.25 * dt_attempted;
      result = ode::fail;
    }
    if (!std::isfinite(dt)) dt = 0.25 * dt_attempted;  // overflowed error estimate
    if (result == ode::fail) {
      if (std::abs(dt) < 1e-14 * std::max(1.0, std::abs(t)) || ++consecutive_rejects > 400)
        throw IntegrationError("adaptive step size underflow", t);
      continue;
    }
    consecutive_rejects = 0;
    after_step(x, t);
  }
}

// Integrates through an increasing (or decreasing) sequence of sample times,
// invoking observer(x, t) at each one. times[0] may equal t0.
template <class System, class State, class Observer,
          class AfterStep = detail::NoAfterStep>
void integrate_times(System sys, State& x, double t0, const std::vector<double>& times,
                     const IntegratorConfig& cfg, Observer observer,
                     AfterStep after_step = {}) {
  double t = t0;
  for (double target : times) {
    if (target != t) integrate_adaptive(sys, x, t, target, cfg, after_step);
    t = target;
    observer(x, t);
  }
}

}  // namespace blochsim
