#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "blochsim/stability.hpp"
#include "blochsim/state.hpp"

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

}  // namespace

TEST_CASE("g = 0 blocks are the identity") {
  const LatticeParams p = params(0.4, 0.0, 5);
  for (int k = 1; k <= 2; ++k) {
    const MonodromyBlock b = stability_block(k, p);
    CHECK((b.U - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(b.nu == 0.0);
  }
}

TEST_CASE("stability dichotomy at L = 5, g = 0.1") {
  SUBCASE("F = 0.4 is stable for every k") {
    const LatticeParams p = params(0.4);
    for (int k = 1; k <= 2; ++k) CHECK(stability_block(k, p).nu < 1e-6);
  }
  SUBCASE("F = 0.1 is unstable") {
    CHECK(increment(params(0.1)) > 1e-6);
  }
}

TEST_CASE("block invariants: determinant, eigenvalue dichotomy, k -> -k symmetry") {
  // |det - 1| is conditioned like e^{2 nu T_B}; draws deep in the unstable
  // region (|lambda1| beyond ~20) cannot represent a unit determinant in
  // double precision, so those are redrawn. The retained domain still covers
  // strongly hyperbolic blocks.
  IntegratorConfig tight;
  tight.rel_tol = tight.abs_tol = 1e-12;
  Rng rng(2024);
  int kept = 0;
  while (kept < 60) {
    const int L = 3 + 2 * static_cast<int>(rng.uniform() * 4);  // 3,5,7,9
    const int k_max = (L - 1) / 2;
    const int k = std::min(1 + static_cast<int>(rng.uniform() * k_max), k_max);
    LatticeParams p = params(0.05 + 3.95 * rng.uniform(), rng.uniform(), L);
    const MonodromyBlock b = stability_block(k, p, tight);
    if (std::abs(b.lambda1) > 20.0) continue;
    ++kept;

    CHECK(b.det_residual < 1e-9);
    // either unit circle (lambda2 = conj) or real axis (lambda2 = 1/lambda1)
    const double on_circle = std::abs(std::abs(b.lambda1) - 1.0);
    const double on_axis = std::abs(b.lambda1.imag());
    CHECK(std::min(on_circle, on_axis) < 1e-6);
    if (on_circle < on_axis)
      CHECK(std::abs(b.lambda2 - std::conj(b.lambda1)) < 1e-6);
    else
      CHECK(std::abs(b.lambda2 - 1.0 / b.lambda1) < 1e-6 * std::max(std::abs(b.lambda2), 0.05));
  }
}

TEST_CASE("increment vanishes identically at g = 0") {
  CHECK(increment(params(0.7, 0.0, 7)) == 0.0);
}

TEST_CASE("critical boundary for L = 63") {
  SUBCASE("above the boundary") { CHECK(increment(params(0.5, 0.1, 63)) < 1e-6); }
  SUBCASE("below the boundary") { CHECK(increment(params(0.2, 0.1, 63)) > 1e-6); }
}

TEST_CASE("critical force rule") {
  CHECK(critical_force(0.1, 1.0) == doctest::Approx(0.3));
  CHECK(critical_force(1.0, 1.0) == doctest::Approx(2.96));
  CHECK(critical_force(0.0, 1.0) == 0.0);
}

TEST_CASE("full monodromy factorizes and matches the per-mode blocks") {
  for (const LatticeParams& p : {params(0.4, 0.1, 3), params(0.25, 0.15, 5)}) {
    const FullMonodromy fm = full_monodromy(p);
    CHECK(fm.off_block_residual < 1e-6);

    // k = 0 block stays on the unit circle; it is parabolic (a Jordan block
    // from the neutral phase/norm pair), so its numerical eigenvalues split
    // like sqrt(integration error)
    const auto& [m0a, m0b] = fm.moduli[mode_index(0, p.L)];
    CHECK(std::abs(m0a - 1.0) < 1e-4);
    CHECK(std::abs(m0b - 1.0) < 1e-4);

    for (int k = 1; k <= (p.L - 1) / 2; ++k) {
      const MonodromyBlock b = stability_block(k, p);
      const auto& [m1, m2] = fm.moduli[mode_index(k, p.L)];
      CHECK(m1 == doctest::Approx(std::abs(b.lambda1)).epsilon(1e-6));
      CHECK(m2 == doctest::Approx(std::abs(b.lambda2)).epsilon(1e-6));
      // nu is symmetric under k -> -k
      const auto& [n1, n2] = fm.moduli[mode_index(-k, p.L)];
      CHECK(m1 == doctest::Approx(n1).epsilon(1e-8));
      CHECK(m2 == doctest::Approx(n2).epsilon(1e-8));
    }
  }
}

TEST_CASE("full monodromy at g = 0 is the identity") {
  const FullMonodromy fm = full_monodromy(params(0.4, 0.0, 3));
  CHECK((fm.U - Eigen::MatrixXcd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("monodromy eigenvalues come in (lambda, 1/lambda*) pairs") {
  const FullMonodromy fm = full_monodromy(params(0.1, 0.1, 5));  // unstable case
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(fm.U);
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const Complex target = 1.0 / std::conj(es.eigenvalues()(i));
    double closest = 1e9;
    for (int j = 0; j < es.eigenvalues().size(); ++j)
      closest = std::min(closest, std::abs(es.eigenvalues()(j) - target));
    CHECK(closest < 1e-8);
  }
}

TEST_CASE("stability diagram structure for L = 3") {
  // coarse but fast grid; the right side must be entirely stable and the
  // small-F corner keeps a web of stability islands
  GridAxis F_axis{0.1, 4.0, 14};
  GridAxis g_axis{0.05, 1.0, 8};
  const StabilityDiagram d = stability_diagram(F_axis, g_axis, params(1.0, 1.0, 3));

  CHECK(d.stats.failed == 0);
  for (int gi = 0; gi < d.g_axis.n; ++gi) {
    CHECK(d.at(d.F_axis.n - 1, gi) < 1e-6);  // F/J = 4 column
  }
  // instability exists somewhere left of the critical line
  int unstable = 0;
  for (int gi = 0; gi < d.g_axis.n; ++gi)
    for (int fi = 0; fi < d.F_axis.n; ++fi)
      if (d.at(fi, gi) > 1e-6) ++unstable;
  CHECK(unstable > 0);
}

TEST_CASE("small-F web: stability islands exist for L = 3 and shrink for L = 5") {
  // cut through the lower-left corner, strictly left of the critical line
  int islands_l3 = 0, islands_l5 = 0;
  for (double g : {0.2, 0.3, 0.4}) {
    for (int i = 0; i < 5; ++i) {
      const double F = 0.14 + 0.03 * i;  // F < 3g throughout
      if (increment(params(F, g, 3)) < 1e-6) ++islands_l3;
      if (increment(params(F, g, 5)) < 1e-6) ++islands_l5;
    }
  }
  CHECK(islands_l3 > 0);
  CHECK(islands_l5 <= islands_l3);
}
