#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "blochsim/meanfield.hpp"
#include "blochsim/stability.hpp"

using namespace blochsim;

namespace {

LatticeParams params(double F, double g = 0.1, int L = 5) {
  LatticeParams p;
  p.J = 1.0;
  p.g = g;
  p.F = F;
  p.L = L;
  return p;
}

MeanFieldState noisy_uniform(int L, double eps, std::uint64_t seed) {
  Rng rng(seed);
  MeanFieldState s = uniform_state(L);
  for (auto& a : s.amps)
    a += eps * Complex{2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
  return s;
}

}  // namespace

TEST_CASE("right-hand side on the uniform state is iJ everywhere") {
  const LatticeParams p = params(0.4);
  const CVec rhs = dnlse_rhs(uniform_state(5), 0.0, p);
  for (const auto& v : rhs) CHECK(std::abs(v - Complex{0.0, 1.0} * p.J) < 1e-14);
}

TEST_CASE("right-hand side couples only nearest neighbours") {
  LatticeParams p = params(0.3, 0.0);
  MeanFieldState s;
  s.amps.assign(5, Complex{0.0, 0.0});
  s.amps[0] = 1.0;
  const CVec rhs = dnlse_rhs(s, 0.7, p);
  CHECK(std::abs(rhs[0]) < 1e-15);  // no self term at g = 0
  CHECK(std::abs(rhs[1]) > 0.1);
  CHECK(std::abs(rhs[4]) > 0.1);
  CHECK(std::abs(rhs[2]) < 1e-15);
  CHECK(std::abs(rhs[3]) < 1e-15);
}

TEST_CASE("right-hand side matches a finite difference of propagate") {
  const LatticeParams p = params(0.4);
  const MeanFieldState s = noisy_uniform(5, 0.3, 11);
  const CVec rhs = dnlse_rhs(s, 0.0, p);
  const double dt = 1e-6;
  const MeanFieldState fwd = propagate(s, 0.0, dt, p);
  for (int l = 0; l < 5; ++l) {
    const Complex fd = (fwd.amps[l] - s.amps[l]) / dt;
    CHECK(std::abs(fd - rhs[l]) < 1e-5);
  }
}

TEST_CASE("uniform initial data reproduces the analytic Bloch oscillation") {
  const LatticeParams p = params(0.4);
  const double T_B = p.bloch_period();
  MeanFieldState s = uniform_state(5);

  SUBCASE("one period returns to the initial state") {
    const MeanFieldState out = propagate(s, 0.0, T_B, p);
    for (const auto& a : out.amps) CHECK(std::abs(a - Complex{1.0, 0.0}) < 1e-6);
  }
  SUBCASE("ten periods track the closed form to 1e-6") {
    double max_err = 0.0;
    MeanFieldState cur = s;
    for (int n = 1; n <= 10; ++n) {
      cur = propagate(cur, (n - 1) * T_B, n * T_B - 0.37, p);
      const MeanFieldState ref = exact_bloch_oscillation(p, cur.t);
      for (int l = 0; l < 5; ++l) max_err = std::max(max_err, std::abs(cur.amps[l] - ref.amps[l]));
      cur = propagate(cur, cur.t, n * T_B, p);
    }
    CHECK(max_err < 1e-6);
  }
}

TEST_CASE("norm is conserved within the stated bound") {
  IntegratorConfig cfg;
  SUBCASE("chaotic trajectory over a Bloch period") {
    const LatticeParams p = params(0.1);
    const MeanFieldState s = noisy_uniform(5, 0.2, 3);
    const MeanFieldState out = propagate(s, 0.0, p.bloch_period(), p, cfg);
    CHECK(std::abs(out.norm2() - s.norm2()) < 10.0 * cfg.rel_tol * 5);
  }
  SUBCASE("stable trajectory over ten Bloch periods") {
    const LatticeParams p = params(0.4);
    const MeanFieldState s = noisy_uniform(5, 0.2, 4);
    const MeanFieldState out = propagate(s, 0.0, 10.0 * p.bloch_period(), p, cfg);
    CHECK(std::abs(out.norm2() - s.norm2()) < 10.0 * cfg.rel_tol * 5);
  }
}

TEST_CASE("propagation is linear at g = 0") {
  LatticeParams p = params(0.4, 0.0);
  const MeanFieldState a = noisy_uniform(5, 0.5, 21);
  const MeanFieldState b = noisy_uniform(5, 0.5, 22);
  MeanFieldState sum = a;
  for (int l = 0; l < 5; ++l) sum.amps[l] = 0.3 * a.amps[l] + 0.7 * b.amps[l];

  const double T = 2.0 * p.bloch_period();
  const MeanFieldState pa = propagate(a, 0.0, T, p);
  const MeanFieldState pb = propagate(b, 0.0, T, p);
  const MeanFieldState ps = propagate(sum, 0.0, T, p);
  for (int l = 0; l < 5; ++l)
    CHECK(std::abs(ps.amps[l] - (0.3 * pa.amps[l] + 0.7 * pb.amps[l])) < 1e-8);
}

TEST_CASE("forward-backward propagation returns the initial state") {
  const LatticeParams p = params(0.1);
  IntegratorConfig cfg;
  const MeanFieldState s = noisy_uniform(5, 0.3, 9);
  const MeanFieldState there = propagate(s, 0.0, 10.0, p, cfg);
  const MeanFieldState back = propagate(there, 10.0, 0.0, p, cfg);
  for (int l = 0; l < 5; ++l) CHECK(std::abs(back.amps[l] - s.amps[l]) < 10.0 * cfg.rel_tol);
}

TEST_CASE("unstable run develops erratic mode populations after a transient") {
  const LatticeParams p = params(0.1);  // inside the unstable region
  // deviation of the scale set by the phase-space width, nbar^{-1/2} for N=15
  MeanFieldState s = noisy_uniform(5, 1.0 / std::sqrt(3.0), 5);
  double off_condensate = 0.0;
  std::vector<double> times;
  for (int i = 1; i <= 10; ++i) times.push_back(5.0 * i * p.tunneling_period());
  propagate_observed(s, times, p, {}, [&](const MeanFieldState& st) {
    const auto pops = mode_populations(to_modes(st));
    double off = 0.0;
    for (int k = -2; k <= 2; ++k)
      if (k != 0) off += pops[mode_index(k, 5)];
    off_condensate = std::max(off_condensate, off / (st.norm2() / 5.0));
  });
  CHECK(off_condensate > 0.1);  // macroscopic redistribution out of k = 0
}

TEST_CASE("tangent norm is constant for g = 0") {
  LatticeParams p = params(0.4, 0.0);
  const MeanFieldState s = uniform_state(5);
  Rng rng(17);
  CVec d(5);
  for (auto& v : d) v = Complex{rng.uniform() - 0.5, rng.uniform() - 0.5};
  const TangentVector tv = TangentVector::from_perturbation(d);
  const double n0 = tv.norm();
  auto [s1, tv1] = propagate_with_tangent(s, tv, 0.0, 3.0 * p.bloch_period(), p);
  CHECK(tv1.log_norm_accum == 0.0);
  CHECK(std::abs(tv1.norm() - n0) < 1e-8 * n0);
}

TEST_CASE("tangent flow preserves the conjugate pairing") {
  const LatticeParams p = params(0.25, 0.2);
  const MeanFieldState s = noisy_uniform(5, 0.1, 57);
  Rng rng(58);
  CVec d(5);
  for (auto& v : d) v = Complex{rng.uniform() - 0.5, rng.uniform() - 0.5};
  auto [s1, tv1] =
      propagate_with_tangent(s, TangentVector::from_perturbation(d), 0.0, 10.0, p);
  for (int l = 0; l < 5; ++l)
    CHECK(std::abs(tv1.delta[5 + l] - std::conj(tv1.delta[l])) < 1e-8);
}

TEST_CASE("tangent propagation is linear in the deviation") {
  const LatticeParams p = params(0.4);
  const MeanFieldState s = noisy_uniform(5, 0.2, 31);
  CVec d1(5), d2(5);
  Rng rng(32);
  for (auto& v : d1) v = Complex{rng.uniform() - 0.5, rng.uniform() - 0.5};
  for (auto& v : d2) v = Complex{rng.uniform() - 0.5, rng.uniform() - 0.5};
  CVec mix(5);
  for (int l = 0; l < 5; ++l) mix[l] = 0.4 * d1[l] + 0.6 * d2[l];

  const double T = p.bloch_period();
  auto [_, t1] = propagate_with_tangent(s, TangentVector::from_perturbation(d1), 0.0, T, p);
  auto [__, t2] = propagate_with_tangent(s, TangentVector::from_perturbation(d2), 0.0, T, p);
  auto [___, tm] = propagate_with_tangent(s, TangentVector::from_perturbation(mix), 0.0, T, p);
  for (int i = 0; i < 10; ++i)
    CHECK(std::abs(tm.delta[i] - (0.4 * t1.delta[i] + 0.6 * t2.delta[i])) < 1e-8);
}

TEST_CASE("tangent flow matches finite differences of nearby trajectories") {
  // generic state (|a_l| != 1), so the full Jacobian of the nonlinearity enters
  const LatticeParams p = params(0.3, 0.15);
  const MeanFieldState base = noisy_uniform(5, 0.4, 77);
  Rng rng(78);
  CVec d(5);
  for (auto& v : d) v = Complex{rng.uniform() - 0.5, rng.uniform() - 0.5};

  const double eps = 1e-7;
  MeanFieldState shifted = base;
  for (int l = 0; l < 5; ++l) shifted.amps[l] += eps * d[l];

  const double T = p.bloch_period();
  const MeanFieldState f0 = propagate(base, 0.0, T, p);
  const MeanFieldState f1 = propagate(shifted, 0.0, T, p);
  auto [_, tv] = propagate_with_tangent(base, TangentVector::from_perturbation(d), 0.0, T, p);

  double num = 0.0, den = 0.0;
  for (int l = 0; l < 5; ++l) {
    const Complex fd = (f1.amps[l] - f0.amps[l]) / eps;
    num += std::norm(fd - tv.delta[l]);
    den += std::norm(fd);
  }
  CHECK(std::sqrt(num / den) < 1e-3);
}

TEST_CASE("tangent growth along the unstable eigenvector follows the increment") {
  const LatticeParams p = params(0.1);  // unstable at these parameters
  // most unstable block and its eigenvector
  MonodromyBlock worst;
  double best = -1.0;
  for (int k = 1; k <= 2; ++k) {
    const MonodromyBlock b = stability_block(k, p);
    if (b.nu > best) {
      best = b.nu;
      worst = b;
    }
  }
  REQUIRE(worst.nu > 0.0);

  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(worst.U);
  const int which = std::abs(es.eigenvalues()(0)) > std::abs(es.eigenvalues()(1)) ? 0 : 1;
  const Eigen::Vector2cd vec = es.eigenvectors().col(which);

  // embed (delta b_k, delta b*_{-k}) into the site basis
  const int L = p.L;
  ModeState db;
  db.modes.assign(L, Complex{0.0, 0.0});
  db.modes[mode_index(worst.k, L)] = vec(0);
  db.modes[mode_index(-worst.k, L)] = std::conj(vec(1));
  const MeanFieldState da = to_sites(db);

  TangentVector tv;
  tv.delta.resize(2 * L);
  for (int l = 0; l < L; ++l) {
    tv.delta[l] = da.amps[l];
    tv.delta[L + l] = std::conj(da.amps[l]);
  }

  const double T = 10.0 * p.bloch_period();
  const double n0 = tv.norm();
  auto [_, out] = propagate_with_tangent(exact_bloch_oscillation(p, 0.0), tv, 0.0, T, p);
  const double rate = out.log_growth(n0) / T;
  CHECK(rate == doctest::Approx(worst.nu_rate).epsilon(0.2));
}

TEST_CASE("Lyapunov exponent diagnostics") {
  const int L = 5;
  Rng rng(91);
  CVec d(L);
  for (auto& v : d) v = Complex{rng.uniform() - 0.5, rng.uniform() - 0.5};
  const TangentVector tv = TangentVector::from_perturbation(d);

  SUBCASE("stable parameters give a vanishing exponent") {
    const LatticeParams p = params(0.4);
    const auto lam = lyapunov(exact_bloch_oscillation(p, 0.0), tv, 100.0 * p.tunneling_period(),
                              10, p);
    CHECK(std::abs(lam.back().second) < 0.01);
  }
  SUBCASE("unstable parameters approach the maximal increment rate") {
    const LatticeParams p = params(0.1);
    double nu_rate = 0.0;
    for (int k = 1; k <= 2; ++k) nu_rate = std::max(nu_rate, stability_block(k, p).nu_rate);
    const auto lam = lyapunov(exact_bloch_oscillation(p, 0.0), tv, 40.0 * p.bloch_period(),
                              8, p);
    const double l = lam.back().second;
    CHECK(l > 0.5 * nu_rate);
    CHECK(l < 2.0 * nu_rate);
  }
  SUBCASE("g = 0 dynamics is neutrally stable") {
    const LatticeParams p = params(0.4, 0.0);
    const auto lam = lyapunov(noisy_uniform(L, 0.3, 93), tv, 200.0, 5, p);
    CHECK(std::abs(lam.back().second) < 1e-3);
  }
}

TEST_CASE("transient-time diagnostic") {
  CHECK(transient_time(0.05, 9.0) == doctest::Approx(std::log(3.0) / 0.05));
  CHECK(std::isinf(transient_time(0.0, 9.0)));
}
