#include "blochsim/meanfield.hpp"

#include <cmath>

namespace blochsim {

namespace {

// Hopping part of Eq.-of-motion inside i da/dt = ...; linear, so it is its own
// Jacobian block.
inline void apply_hopping(const Complex* x, Complex* out, int L, double J, Complex e_minus,
                          Complex e_plus) {
  for (int l = 0; l < L; ++l) {
    const Complex xp = x[(l + 1) % L];
    const Complex xm = x[(l + L - 1) % L];
    out[l] = -0.5 * J * (e_minus * xp + e_plus * xm);
  }
}

struct DnlseSystem {
  const LatticeParams* p;
  void operator()(const CVec& a, CVec& dadt, double t) const {
    const int L = static_cast<int>(a.size());
    const Complex em = std::exp(Complex{0.0, -p->F * t});
    const Complex ep = std::conj(em);
    apply_hopping(a.data(), dadt.data(), L, p->J, em, ep);
    for (int l = 0; l < L; ++l) {
      dadt[l] += p->g * (std::norm(a[l]) - 1.0) * a[l];
      dadt[l] *= -kI;
    }
  }
};

// Joint trajectory + tangent flow. Layout: [a(0..L), du(0..L), dv(0..L)].
// The tangent Jacobian uses the derivative of the full nonlinear right-hand
// side: d(g(|a|^2-1)a)/da = g(2|a|^2-1), d/da* = g a^2. On the uniform
// Bloch-oscillation trajectory (|a_l| = 1) this reduces to the block form
// with diagonal coupling g a_l^2 used in the monodromy analysis.
struct TangentSystem {
  const LatticeParams* p;
  void operator()(const CVec& x, CVec& dxdt, double t) const {
    const int L = static_cast<int>(x.size()) / 3;
    const Complex* a = x.data();
    const Complex* du = a + L;
    const Complex* dv = du + L;
    Complex* da_out = dxdt.data();
    Complex* du_out = da_out + L;
    Complex* dv_out = du_out + L;

    const Complex em = std::exp(Complex{0.0, -p->F * t});
    const Complex ep = std::conj(em);

    apply_hopping(a, da_out, L, p->J, em, ep);
    apply_hopping(du, du_out, L, p->J, em, ep);
    apply_hopping(dv, dv_out, L, p->J, ep, em);  // conjugated hopping phases

    for (int l = 0; l < L; ++l) {
      const double n = std::norm(a[l]);
      const Complex a2 = a[l] * a[l];
      da_out[l] = -kI * (da_out[l] + p->g * (n - 1.0) * a[l]);
      const Complex pu = du_out[l] + p->g * (2.0 * n - 1.0) * du[l] + p->g * a2 * dv[l];
      const Complex pv = dv_out[l] + p->g * (2.0 * n - 1.0) * dv[l] + std::conj(a2) * p->g * du[l];
      du_out[l] = -kI * pu;
      dv_out[l] = kI * pv;
    }
  }
};

double tangent_norm(const CVec& x, int L) {
  double s = 0.0;
  for (int i = L; i < 3 * L; ++i) s += std::norm(x[i]);
  return std::sqrt(s);
}

}  // namespace

CVec dnlse_rhs(const MeanFieldState& state, double t, const LatticeParams& p) {
  CVec out(state.amps.size());
  DnlseSystem sys{&p};
  sys(state.amps, out, t);
  return out;
}

MeanFieldState propagate(const MeanFieldState& state, double t0, double t1,
                         const LatticeParams& p, const IntegratorConfig& cfg) {
  MeanFieldState out = state;
  out.t = t1;
  integrate_adaptive(DnlseSystem{&p}, out.amps, t0, t1, cfg);
  return out;
}

void propagate_observed(const MeanFieldState& state, const std::vector<double>& times,
                        const LatticeParams& p, const IntegratorConfig& cfg,
                        const std::function<void(const MeanFieldState&)>& observer) {
  MeanFieldState work = state;
  integrate_times(DnlseSystem{&p}, work.amps, state.t, times, cfg,
                  [&](const CVec&, double t) {
                    work.t = t;
                    observer(work);
                  });
}

TangentVector TangentVector::from_perturbation(const CVec& d) {
  TangentVector tv;
  tv.delta.resize(2 * d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    tv.delta[i] = d[i];
    tv.delta[d.size() + i] = std::conj(d[i]);
  }
  return tv;
}

double TangentVector::norm() const {
  double s = 0.0;
  for (const auto& c : delta) s += std::norm(c);
  return std::sqrt(s);
}

double TangentVector::log_growth(double reference_norm) const {
  return log_norm_accum + std::log(norm() / reference_norm);
}

std::pair<MeanFieldState, TangentVector> propagate_with_tangent(
    const MeanFieldState& state, const TangentVector& tangent, double t0, double t1,
    const LatticeParams& p, const IntegratorConfig& cfg) {
  const int L = state.sites();
  if (static_cast<int>(tangent.delta.size()) != 2 * L)
    throw ValidationError("tangent vector dimension mismatch");

  CVec x(3 * L);
  std::copy(state.amps.begin(), state.amps.end(), x.begin());
  std::copy(tangent.delta.begin(), tangent.delta.end(), x.begin() + L);

  TangentVector out_tangent = tangent;
  auto renorm = [&](CVec& y, double) {
    const double n = tangent_norm(y, L);
    if (n > kTangentRenormThreshold) {
      const double inv = 1.0 / n;
      for (int i = L; i < 3 * L; ++i) y[i] *= inv;
      out_tangent.log_norm_accum += std::log(n);
      out_tangent.renorm_log.push_back(std::log(n));
    }
  };

  integrate_adaptive(TangentSystem{&p}, x, t0, t1, cfg, renorm);

  MeanFieldState out_state;
  out_state.amps.assign(x.begin(), x.begin() + L);
  out_state.t = t1;
  out_tangent.delta.assign(x.begin() + L, x.end());
  return {std::move(out_state), std::move(out_tangent)};
}

std::vector<std::pair<double, double>> lyapunov(const MeanFieldState& state0,
                                                const TangentVector& delta0, double T,
                                                int n_samples, const LatticeParams& p,
                                                const IntegratorConfig& cfg) {
  if (T <= 0.0) throw ValidationError("lyapunov requires T > 0");
  if (n_samples < 1) throw ValidationError("lyapunov requires n_samples >= 1");

  const double ref = delta0.norm();
  std::vector<std::pair<double, double>> out;
  out.reserve(n_samples);

  MeanFieldState s = state0;
  TangentVector tv = delta0;
  double t = 0.0;
  for (int i = 1; i <= n_samples; ++i) {
    const double target = T * i / n_samples;
    std::tie(s, tv) = propagate_with_tangent(s, tv, t, target, p, cfg);
    t = target;
    out.emplace_back(t, tv.log_growth(ref) / t);
  }
  return out;
}

double transient_time(double nu_rate, double filling) {
  if (nu_rate <= 0.0 || filling <= 0.0) return std::numeric_limits<double>::infinity();
  const double eps = 1.0 / std::sqrt(filling);  // initial deviation scale
  return std::max(0.0, std::log(1.0 / eps)) / nu_rate;
}

}  // namespace blochsim
