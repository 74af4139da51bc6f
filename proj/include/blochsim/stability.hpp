// stability.hpp — per-quasimomentum Floquet stability blocks of the uniform
// Bloch oscillation, the full 2L x 2L monodromy cross-check, the critical
// boundary and stability diagrams over (F/J, g/J).
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "blochsim/integrate.hpp"
#include "blochsim/params.hpp"
#include "blochsim/sweep.hpp"

namespace blochsim {

// One-period stability matrix of mode pair (+k, -k):
//   dU/dt = -i g [[1, f(t)], [-f*(t), -1]] U,   U(0) = I,
//   f(t) = exp(i (2J/F)(1 - cos kappa) sin(Ft)),
// integrated over one Bloch period. U is symplectic (det U = 1); its
// eigenvalues lie either on the unit circle (stable) or on the real axis
// (unstable, lambda_2 = 1/lambda_1).
struct MonodromyBlock {
  int k = 0;
  Eigen::Matrix2cd U;
  Complex lambda1, lambda2;     // |lambda1| >= |lambda2|
  double raw_log_lambda = 0.0;  // ln|lambda1| before clamping (diagnostic)
  double nu = 0.0;              // max(0, ln|lambda1|), per Bloch period
  double nu_rate = 0.0;         // nu / T_B, per unit time (Lyapunov scale)
  double det_residual = 0.0;    // |det U - 1|
};

inline IntegratorConfig stability_integrator() {
  IntegratorConfig cfg;
  cfg.rel_tol = cfg.abs_tol = 1e-10;
  return cfg;
}

MonodromyBlock stability_block(int k, const LatticeParams& p,
                               const IntegratorConfig& cfg = stability_integrator());

// max over k = 1..(L-1)/2 of nu^(k), per Bloch period; 0 iff all blocks stable.
double increment(const LatticeParams& p,
                 const IntegratorConfig& cfg = stability_integrator());

// Critical force boundary: 3g when that lies below 2.9 J, else 2.96 sqrt(gJ).
// The branch condition is expressed in F, so for g/J > 29/30 the selection is
// formally ambiguous; the rule above is applied as stated.
double critical_force(double g, double J);

// Full 2L x 2L tangent monodromy around the exact Bloch oscillation, plus the
// Bloch-wave transform that factorizes it into 2x2 blocks. Serves as an
// independent cross-check of stability_block (different code path).
struct FullMonodromy {
  Eigen::MatrixXcd U;            // site-basis monodromy
  Eigen::MatrixXcd transformed;  // V U V^dagger, block-diagonal in (k, -k) pairs
  double off_block_residual = 0.0;
  std::vector<Eigen::Matrix2cd> blocks;         // index mode_index(k, L)
  std::vector<std::pair<double, double>> moduli;  // per block: (|l1|, |l2|), |l1|>=|l2|
};

FullMonodromy full_monodromy(const LatticeParams& p,
                             const IntegratorConfig& cfg = stability_integrator());

struct GridAxis {
  double lo = 0.0, hi = 1.0;
  int n = 2;
  double value(int i) const { return n == 1 ? hi : lo + (hi - lo) * i / (n - 1); }
};

struct StabilityDiagram {
  GridAxis F_axis, g_axis;  // in units of F/J and g/J
  int L = 0;
  double tol = 0.0;
  std::vector<double> nu;  // row-major: [gi * F_axis.n + fi]; NaN = failed cell
  SweepStats stats;

  double at(int fi, int gi) const { return nu[static_cast<std::size_t>(gi) * F_axis.n + fi]; }
};

StabilityDiagram stability_diagram(const GridAxis& F_axis, const GridAxis& g_axis,
                                   const LatticeParams& base,
                                   const IntegratorConfig& cfg = stability_integrator(),
                                   const SweepOptions& opt = {});

}  // namespace blochsim
