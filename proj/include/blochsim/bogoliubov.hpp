// bogoliubov.hpp — static and Floquet pair-excitation ladders: tridiagonal
// generators per quasimomentum pair, one-Bloch-period propagators, depletion
// and quasienergy spectra, and depletion diagrams.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "blochsim/integrate.hpp"
#include "blochsim/params.hpp"
#include "blochsim/stability.hpp"
#include "blochsim/sweep.hpp"

namespace blochsim {

// One (+k, -k) excitation ladder: n pairs moved out of the condensate mode.
// delta = J (1 - cos kappa) >= 0.
struct BogoliubovProblem {
  double delta = 0.0;
  double g = 0.0;
  double F = 0.0;  // 0 -> static problem
  int n_max = 64;

  static BogoliubovProblem for_mode(int k, const LatticeParams& p, int n_max = 64);
};

struct Tridiagonal {
  std::vector<double> diag, off;  // off[i] couples i and i+1
};

// A_{n,n} = 2 (g + delta) n, A_{n,n+1} = g (n + 1); real symmetric.
Tridiagonal static_matrix(const BogoliubovProblem& prob);

// Level spacing of the (infinite) static ladder.
inline double bogoliubov_frequency(double g, double delta) {
  return 2.0 * std::sqrt(2.0 * g * delta + delta * delta);
}

struct BogoliubovSolution {
  CVec c;              // ladder coefficients c_n
  double energy = 0.0; // static eigenvalue, or quasienergy folded to [0, F)
  double depletion = 0.0;  // sum_n 2 n |c_n|^2 (single (+k,-k) pair)
  double tail_mass = 0.0;  // |c|^2 over the last 10% of the ladder
};

// Ascending eigenvalues of the truncated static ladder.
std::vector<double> static_spectrum(const BogoliubovProblem& prob);

// Eigenpairs of the truncated static ladder, ordered by increasing depletion.
std::vector<BogoliubovSolution> static_bogoliubov(const BogoliubovProblem& prob);

class TruncationError : public std::runtime_error {
 public:
  TruncationError(std::string what, std::vector<double> tail_trace,
                  std::vector<double> depletion_trace, int n_max_last)
      : std::runtime_error(std::move(what)),
        tail_trace(std::move(tail_trace)),
        depletion_trace(std::move(depletion_trace)),
        n_max_last(n_max_last) {}
  std::vector<double> tail_trace;       // max tail mass per escalation step
  std::vector<double> depletion_trace;  // minimal depletion per escalation step
  int n_max_last = 0;
};

struct BogoliubovConfig {
  int n_start = 64;
  int n_cap = 4096;
  double tail_tol = 1e-8;
  int n_select = 3;  // states that must converge (lowest depletion)
  IntegratorConfig integ = stability_integrator();
  // Sweep heuristic: if the minimal depletion keeps growing by this factor
  // when the ladder doubles (and is already large), escalation is hopeless
  // and the cell is reported saturated early. 0 disables.
  double divergence_growth = 1.25;
};

struct FloquetBogoliubovResult {
  std::vector<BogoliubovSolution> solutions;  // ordered by increasing depletion
  int n_max_used = 0;
  std::vector<double> tail_trace;
  std::vector<double> depletion_trace;
};

// Fixed-truncation one-period eigenproblem (no escalation, never throws on
// convergence grounds). integrate_printed_generator selects the direct
// integration of the time-dependent tridiagonal generator instead of the
// exactly gauge-reparametrized one (both yield the same propagator; the
// direct form exists for cross-checks and is slower).
FloquetBogoliubovResult floquet_bogoliubov_fixed(const BogoliubovProblem& prob,
                                                 const IntegratorConfig& integ,
                                                 bool integrate_printed_generator = false);

// Auto-escalating version; throws TruncationError when the tail never falls
// below tail_tol (depletion divergence region).
FloquetBogoliubovResult floquet_bogoliubov(const BogoliubovProblem& prob,
                                           const BogoliubovConfig& cfg = {});

struct DepletionResult {
  double total = 0.0;  // sum over k > 0 of the minimal per-pair depletion
  bool saturated = false;
  std::vector<double> per_k;  // index k-1
};

// N_D across k = 1..(L-1)/2; ground state selected by minimum depletion.
DepletionResult depletion(const LatticeParams& p, const BogoliubovConfig& cfg = {});

struct DepletionCell {
  double nd = std::numeric_limits<double>::quiet_NaN();
  bool saturated = false;
};

struct DepletionDiagram {
  GridAxis F_axis, g_axis;
  int L = 0;
  std::vector<DepletionCell> cells;  // row-major [gi * F_axis.n + fi]
  SweepStats stats;
  const DepletionCell& at(int fi, int gi) const {
    return cells[static_cast<std::size_t>(gi) * F_axis.n + fi];
  }
};

DepletionDiagram depletion_diagram(const GridAxis& F_axis, const GridAxis& g_axis,
                                   const LatticeParams& base,
                                   const BogoliubovConfig& cfg = {},
                                   const SweepOptions& opt = {});

struct QuasienergyPoint {
  double F = 0.0;
  bool saturated = false;
  std::vector<double> E;   // folded to [0, F), lowest-depletion states first
  std::vector<double> nd;  // matching depletions
  double gap_variance = 0.0;  // relative spread of consecutive level spacings
};

std::vector<QuasienergyPoint> quasienergy_spectrum(const LatticeParams& p, int count,
                                                   const std::vector<double>& F_values,
                                                   const BogoliubovConfig& cfg = {});

}  // namespace blochsim
