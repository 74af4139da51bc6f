// manybody.hpp — exact propagation of the driven Bose-Hubbard model in the
// number-conserving Fock space, coherent initial states, many-particle
// observables, the one-Bloch-period Floquet operator and revivals.
//
// H(t) = -(J/2) sum_l (e^{iFt} adag_{l+1} a_l + h.c.) + (W/2) sum_l n_l(n_l-2)
// with periodic wraparound. The gauge-shifted interaction n(n-2) differs from
// n(n-1) by the conserved total number, i.e. by a global phase only.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>

#include "blochsim/fock.hpp"
#include "blochsim/integrate.hpp"
#include "blochsim/params.hpp"

namespace blochsim {

struct MPState {
  CVec coeff;
  double t = 0.0;
  const FockBasis* basis = nullptr;

  double norm2() const;
};

// Precomputed sparse action of T+ = sum_l adag_{l+1} a_l (apply transposed for
// the conjugate), plus the interaction diagonal (W/2) sum_l n_l (n_l - 2).
struct HoppingStencil {
  std::vector<std::uint32_t> src, dst;
  std::vector<double> amp;  // sqrt(n_l (n_{l+1} + 1))
  std::vector<double> diag;
};

HoppingStencil build_stencil(const FockBasis& basis, const LatticeParams& p);

// SU(L) coherent state: every particle in the uniform zero-quasimomentum
// orbital; c_n = sqrt(N! / (L^N n_1! ... n_L!)).
MPState coherent_state(const FockBasis& basis);

// General fully condensed state with single-particle amplitudes phi (|phi|=1).
MPState product_state(const FockBasis& basis, std::span<const Complex> phi);

// H(t) |psi>
CVec apply_hamiltonian(const CVec& psi, double t, const LatticeParams& p,
                       const FockBasis& basis, const HoppingStencil& stencil);

MPState propagate_mp(const MPState& state, double t0, double t1, const LatticeParams& p,
                     const HoppingStencil& stencil, const IntegratorConfig& cfg = {});

void propagate_mp_observed(const MPState& state, const std::vector<double>& times,
                           const LatticeParams& p, const HoppingStencil& stencil,
                           const IntegratorConfig& cfg,
                           const std::function<void(const MPState&)>& observer);

// (1/2iN) < sum_l adag_{l+1} a_l e^{-iFt} - h.c. >; real up to rounding.
double momentum_mp(const MPState& state, const LatticeParams& p,
                   const HoppingStencil& stencil);

// <adag_l a_m> one-body density matrix (L x L, hermitian).
Eigen::MatrixXcd one_body_density(const MPState& state);

// <bdag_k b_k>/N ordered k = -(L-1)/2..(L-1)/2; sums to 1.
std::vector<double> mode_populations_mp(const MPState& state);

// Columns are basis states propagated over one Bloch period.
Eigen::MatrixXcd floquet_operator(const FockBasis& basis, const LatticeParams& p,
                                  const IntegratorConfig& cfg = {},
                                  std::size_t dim_cap = 5000);

// |<psi0|psi(t)>|^2 by full propagation.
double revival_fidelity(const MPState& initial, double t, const LatticeParams& p,
                        const HoppingStencil& stencil, const IntegratorConfig& cfg = {});

// Frozen-hopping limit of Eq. of motion at large F: phases
// exp(-i (W t / 2) sum_l n_l (n_l - 1)) only. Exactly 1 at multiples of
// T_W = 2 pi / W because n(n-1) is even.
double frozen_revival_fidelity(const FockBasis& basis, const CVec& c0, double t, double W);

}  // namespace blochsim
