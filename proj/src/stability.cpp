#include "blochsim/stability.hpp"

#include <cmath>

#include "blochsim/io.hpp"
#include "blochsim/state.hpp"

namespace blochsim {

namespace {

// Closed-form eigenvalues of a 2x2 complex matrix, |l1| >= |l2|.
std::pair<Complex, Complex> eigen2(const Eigen::Matrix2cd& m) {
  const Complex tr = m(0, 0) + m(1, 1);
  const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const Complex disc = std::sqrt(tr * tr - 4.0 * det);
  Complex l1 = 0.5 * (tr + disc);
  Complex l2 = 0.5 * (tr - disc);
  if (std::abs(l2) > std::abs(l1)) std::swap(l1, l2);
  return {l1, l2};
}

MonodromyBlock finish_block(int k, const Eigen::Matrix2cd& U, double T_B) {
  MonodromyBlock b;
  b.k = k;
  b.U = U;
  std::tie(b.lambda1, b.lambda2) = eigen2(U);
  b.raw_log_lambda = std::log(std::abs(b.lambda1));
  b.nu = std::max(0.0, b.raw_log_lambda);
  b.nu_rate = b.nu / T_B;
  const Complex det = U(0, 0) * U(1, 1) - U(0, 1) * U(1, 0);
  b.det_residual = std::abs(det - Complex{1.0, 0.0});
  return b;
}

}  // namespace

MonodromyBlock stability_block(int k, const LatticeParams& p, const IntegratorConfig& cfg) {
  p.validate();
  if (p.F <= 0.0) throw ValidationError("stability_block requires F > 0");
  if (k < 1 || k > (p.L - 1) / 2) throw ValidationError("stability_block requires 1 <= k <= (L-1)/2");

  const double kappa = quasimomentum(k, p.L);
  const double c = (2.0 * p.J / p.F) * (1.0 - std::cos(kappa));
  const double g = p.g;
  const double F = p.F;

  // Row-major [u00, u01, u10, u11]; dU/dt = -i g [[1, f], [-f*, -1]] U.
  auto sys = [c, g, F](const CVec& u, CVec& du, double t) {
    const Complex f = std::exp(Complex{0.0, c * std::sin(F * t)});
    const Complex fc = std::conj(f);
    du[0] = -kI * g * (u[0] + f * u[2]);
    du[1] = -kI * g * (u[1] + f * u[3]);
    du[2] = -kI * g * (-fc * u[0] - u[2]);
    du[3] = -kI * g * (-fc * u[1] - u[3]);
  };

  CVec u = {1.0, 0.0, 0.0, 1.0};
  const double T_B = p.bloch_period();
  integrate_adaptive(sys, u, 0.0, T_B, cfg);

  Eigen::Matrix2cd U;
  U << u[0], u[1], u[2], u[3];
  return finish_block(k, U, T_B);
}

double increment(const LatticeParams& p, const IntegratorConfig& cfg) {
  double nu = 0.0;
  for (int k = 1; k <= (p.L - 1) / 2; ++k) nu = std::max(nu, stability_block(k, p, cfg).nu);
  return nu;
}

double critical_force(double g, double J) {
  const double f = 3.0 * g;
  return (f < 2.9 * J) ? f : 2.96 * std::sqrt(g * J);
}

FullMonodromy full_monodromy(const LatticeParams& p, const IntegratorConfig& cfg) {
  p.validate();
  if (p.F <= 0.0) throw ValidationError("full_monodromy requires F > 0");
  const int L = p.L;
  const int n = 2 * L;
  const double J = p.J, g = p.g, F = p.F;

  // Tangent generator on the exact Bloch oscillation a_l(t) = e^{i theta(t)}:
  // upper-left hopping + g, coupling g e^{2 i theta} (diagonal). Column-major
  // storage, 2L columns of the evolving monodromy matrix.
  auto sys = [L, J, g, F](const CVec& w, CVec& dw, double t) {
    const Complex em = std::exp(Complex{0.0, -F * t});
    const Complex ep = std::conj(em);
    const double theta = (J / F) * std::sin(F * t);
    const Complex a2 = std::exp(Complex{0.0, 2.0 * theta});
    const Complex a2c = std::conj(a2);
    const int n = 2 * L;
    for (int col = 0; col < n; ++col) {
      const Complex* u = w.data() + static_cast<std::size_t>(col) * n;
      const Complex* v = u + L;
      Complex* du = dw.data() + static_cast<std::size_t>(col) * n;
      Complex* dv = du + L;
      for (int l = 0; l < L; ++l) {
        const Complex hop_u =
            -0.5 * J * (em * u[(l + 1) % L] + ep * u[(l + L - 1) % L]);
        const Complex hop_v =
            -0.5 * J * (ep * v[(l + 1) % L] + em * v[(l + L - 1) % L]);
        du[l] = -kI * (hop_u + g * u[l] + g * a2 * v[l]);
        dv[l] = kI * (hop_v + g * v[l] + g * a2c * u[l]);
      }
    }
  };

  CVec w(static_cast<std::size_t>(n) * n, Complex{0.0, 0.0});
  for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i) * n + i] = 1.0;
  integrate_adaptive(sys, w, 0.0, p.bloch_period(), cfg);

  FullMonodromy out;
  out.U = Eigen::Map<const Eigen::MatrixXcd>(w.data(), n, n);

  // V = diag(T, T), T_{k,l} = L^{-1/2} exp(i kappa l), l = 1..L. In the
  // transformed frame row k of the lower half carries conj(delta b_{-k}), so
  // each mode pairs indices (k, L + k).
  Eigen::MatrixXcd T(L, L);
  const double s = 1.0 / std::sqrt(static_cast<double>(L));
  for (int ki = 0; ki < L; ++ki) {
    const double kappa = quasimomentum(mode_k(ki, L), L);
    for (int l = 1; l <= L; ++l) T(ki, l - 1) = s * std::exp(Complex{0.0, kappa * l});
  }
  Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(n, n);
  V.topLeftCorner(L, L) = T;
  V.bottomRightCorner(L, L) = T;
  out.transformed = V * out.U * V.adjoint();

  out.blocks.resize(L);
  out.moduli.resize(L);
  double resid = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const bool in_block = (i % L) == (j % L);
      if (!in_block) resid = std::max(resid, std::abs(out.transformed(i, j)));
    }
  out.off_block_residual = resid;

  for (int ki = 0; ki < L; ++ki) {
    Eigen::Matrix2cd B;
    B << out.transformed(ki, ki), out.transformed(ki, L + ki),
        out.transformed(L + ki, ki), out.transformed(L + ki, L + ki);
    out.blocks[ki] = B;
    auto [l1, l2] = eigen2(B);
    out.moduli[ki] = {std::abs(l1), std::abs(l2)};
  }
  return out;
}

StabilityDiagram stability_diagram(const GridAxis& F_axis, const GridAxis& g_axis,
                                   const LatticeParams& base, const IntegratorConfig& cfg,
                                   const SweepOptions& opt) {
  if (F_axis.n < 2 || g_axis.n < 2) throw ValidationError("diagram needs >= 2 cells per axis");
  if (F_axis.lo <= 0.0) throw ValidationError("stability diagram requires F > 0");

  StabilityDiagram d;
  d.F_axis = F_axis;
  d.g_axis = g_axis;
  d.L = base.L;
  d.tol = cfg.rel_tol;

  const std::size_t n_cells = static_cast<std::size_t>(F_axis.n) * g_axis.n;
  auto cell_params = [&](std::size_t i) {
    LatticeParams p = base;
    p.W.reset();
    p.N.reset();
    p.F = base.J * F_axis.value(static_cast<int>(i % F_axis.n));
    p.g = base.J * g_axis.value(static_cast<int>(i / F_axis.n));
    return p;
  };
  auto key = [&](std::size_t i) {
    const LatticeParams p = cell_params(i);
    return "stab|" + version_string() + "|L=" + std::to_string(p.L) + "|J=" +
           format_double(p.J) + "|F=" + format_double(p.F) + "|g=" + format_double(p.g) +
           "|tol=" + format_double(cfg.rel_tol);
  };
  auto compute = [&](std::size_t i) { return increment(cell_params(i), cfg); };

  SweepOptions sweep_opt = opt;
  if (sweep_opt.tag.empty()) sweep_opt.tag = "stability-diagram";
  d.nu = run_sweep<double>(
      n_cells, key, compute, [](const double& v) { return nlohmann::json(v); },
      [](const nlohmann::json& j) { return j.get<double>(); },
      std::numeric_limits<double>::quiet_NaN(), sweep_opt, d.stats);
  return d;
}

}  // namespace blochsim
