#include "blochsim/fit.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace blochsim {

namespace {

double envelope_power(DecayModel model) { return model == DecayModel::Exponential ? 1.0 : 2.0; }

struct Params {
  double A, gamma, omega, phi;
};

double rms(std::span<const double> t, std::span<const double> p, const Params& q, double m) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double model = q.A * std::exp(-q.gamma * std::pow(t[i], m)) * std::sin(q.omega * t[i] + q.phi);
    s += (p[i] - model) * (p[i] - model);
  }
  return std::sqrt(s / t.size());
}

// Linear LSQ of the first oscillation against sin/cos for amplitude and phase.
Params initial_guess(std::span<const double> t, std::span<const double> p, DecayModel model,
                     double omega) {
  const double period = kTwoPi / omega;
  double sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < t.size() && t[i] <= t.front() + period; ++i) {
    const double s = std::sin(omega * t[i]);
    const double c = std::cos(omega * t[i]);
    saa += s * s;
    sbb += c * c;
    sab += s * c;
    sa += s * p[i];
    sb += c * p[i];
  }
  const double det = saa * sbb - sab * sab;
  double a = 0.0, b = 0.0;
  if (std::abs(det) > 1e-12) {
    a = (sbb * sa - sab * sb) / det;
    b = (saa * sb - sab * sa) / det;
  }
  Params q;
  q.omega = omega;
  q.A = std::sqrt(a * a + b * b);
  if (q.A < 1e-12) q.A = 1e-3;
  q.phi = std::atan2(b, a);

  // envelope slope from |p| peaks: ln|peak| against t^m
  const double m = envelope_power(model);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    const double ai = std::abs(p[i]);
    if (ai > std::abs(p[i - 1]) && ai >= std::abs(p[i + 1]) && ai > 1e-6) {
      const double x = std::pow(t[i], m);
      const double y = std::log(ai);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
  }
  q.gamma = 0.0;
  if (n >= 3) {
    const double slope = (n * sxy - sx * sy) / std::max(n * sxx - sx * sx, 1e-30);
    q.gamma = std::max(0.0, -slope);
  }
  return q;
}

}  // namespace

DecayFit fit_decay(std::span<const double> t, std::span<const double> p, DecayModel model,
                   double omega_hint) {
  if (t.size() != p.size() || t.size() < 16) throw FitError("series too short");
  if (omega_hint <= 0.0) throw FitError("omega_hint must be > 0");
  const double span = t.back() - t.front();
  if (span < 5.0 * kTwoPi / omega_hint)
    throw FitError("series must cover at least 5 oscillation periods");

  const double m = envelope_power(model);
  Params q = initial_guess(t, p, model, omega_hint);

  // Levenberg-Marquardt on (A, gamma, omega, phi)
  double lambda = 1e-3;
  double prev = rms(t, p, q, m);
  int iter = 0;
  for (; iter < 200; ++iter) {
    Eigen::Matrix4d JtJ = Eigen::Matrix4d::Zero();
    Eigen::Vector4d Jtr = Eigen::Vector4d::Zero();
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double tm = std::pow(t[i], m);
      const double env = std::exp(-q.gamma * tm);
      const double s = std::sin(q.omega * t[i] + q.phi);
      const double c = std::cos(q.omega * t[i] + q.phi);
      const double model_v = q.A * env * s;
      const double r = p[i] - model_v;
      Eigen::Vector4d grad;  // d(model)/d(A, gamma, omega, phi)
      grad << env * s, -q.A * tm * env * s, q.A * env * c * t[i], q.A * env * c;
      JtJ += grad * grad.transpose();
      Jtr += grad * r;
    }
    Eigen::Matrix4d damped = JtJ;
    damped.diagonal() += lambda * JtJ.diagonal();
    const Eigen::Vector4d step = damped.ldlt().solve(Jtr);
    Params trial = q;
    trial.A += step(0);
    trial.gamma += step(1);
    trial.omega += step(2);
    trial.phi += step(3);
    const double now = rms(t, p, trial, m);
    if (now < prev) {
      q = trial;
      lambda = std::max(lambda * 0.3, 1e-12);
      if (prev - now < 1e-14 + 1e-10 * prev) {
        prev = now;
        break;
      }
      prev = now;
    } else {
      lambda *= 10.0;
      if (lambda > 1e12)
        throw FitError("decay fit did not converge (residual " + std::to_string(prev) + ")");
    }
  }

  DecayFit out;
  out.model = model;
  out.gamma = q.gamma;
  out.omega = std::abs(q.omega);
  out.amplitude = q.A;
  out.phase = q.phi;
  out.residual_rms = prev;
  out.iterations = iter;
  return out;
}

ModelSelection select_decay_model(std::span<const double> t, std::span<const double> p,
                                  double omega_hint) {
  ModelSelection sel;
  sel.exponential = fit_decay(t, p, DecayModel::Exponential, omega_hint);
  sel.gaussian = fit_decay(t, p, DecayModel::Gaussian, omega_hint);
  sel.better = sel.gaussian.residual_rms < sel.exponential.residual_rms
                   ? DecayModel::Gaussian
                   : DecayModel::Exponential;
  return sel;
}

}  // namespace blochsim
