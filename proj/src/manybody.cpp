#include "blochsim/manybody.hpp"

#include <cmath>

namespace blochsim {

double MPState::norm2() const {
  double s = 0.0;
  for (const auto& c : coeff) s += std::norm(c);
  return s;
}

HoppingStencil build_stencil(const FockBasis& basis, const LatticeParams& p) {
  if (!p.W) throw ValidationError("stencil requires W");
  const int L = basis.sites();
  const double W = *p.W;

  HoppingStencil st;
  st.diag.resize(basis.dim());
  std::vector<std::uint16_t> work(L);

  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const auto n = basis.occ(i);
    double d = 0.0;
    for (int l = 0; l < L; ++l) d += static_cast<double>(n[l]) * (n[l] - 2.0);
    st.diag[i] = 0.5 * W * d;

    for (int l = 0; l < L; ++l) {
      if (n[l] == 0) continue;
      const int lp = (l + 1) % L;
      std::copy(n.begin(), n.end(), work.begin());
      --work[l];
      ++work[lp];
      const std::size_t j = basis.index_of(work);
      st.src.push_back(static_cast<std::uint32_t>(i));
      st.dst.push_back(static_cast<std::uint32_t>(j));
      st.amp.push_back(std::sqrt(static_cast<double>(n[l]) * (n[lp] + 1.0)));
    }
  }
  return st;
}

MPState product_state(const FockBasis& basis, std::span<const Complex> phi) {
  if (static_cast<int>(phi.size()) != basis.sites())
    throw ValidationError("product_state: orbital length mismatch");
  const int N = basis.particles();
  const int L = basis.sites();

  std::vector<double> log_mag(L);
  std::vector<double> arg(L);
  for (int l = 0; l < L; ++l) {
    log_mag[l] = std::log(std::max(std::abs(phi[l]), 1e-300));
    arg[l] = std::arg(phi[l]);
  }

  MPState s;
  s.basis = &basis;
  s.coeff.resize(basis.dim());
  const double lg_nfact = std::lgamma(N + 1.0);
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const auto n = basis.occ(i);
    double lg = 0.5 * lg_nfact;
    double ph = 0.0;
    bool zero = false;
    for (int l = 0; l < L; ++l) {
      lg -= 0.5 * std::lgamma(n[l] + 1.0);
      if (n[l] > 0 && std::abs(phi[l]) == 0.0) zero = true;
      lg += n[l] * log_mag[l];
      ph += n[l] * arg[l];
    }
    s.coeff[i] = zero ? Complex{0.0, 0.0} : std::exp(lg) * std::exp(Complex{0.0, ph});
  }
  return s;
}

MPState coherent_state(const FockBasis& basis) {
  const int L = basis.sites();
  CVec phi(L, Complex{1.0 / std::sqrt(static_cast<double>(L)), 0.0});
  return product_state(basis, phi);
}

namespace {

struct MpSystem {
  const LatticeParams* p;
  const HoppingStencil* st;
  void operator()(const CVec& c, CVec& dc, double t) const {
    const Complex ehop = -0.5 * p->J * std::exp(Complex{0.0, p->F * t});
    const Complex ehop_c = std::conj(ehop);
    const std::size_t dim = c.size();
    for (std::size_t i = 0; i < dim; ++i) dc[i] = st->diag[i] * c[i];
    const std::size_t nnz = st->amp.size();
    for (std::size_t e = 0; e < nnz; ++e) {
      const double a = st->amp[e];
      dc[st->dst[e]] += ehop * a * c[st->src[e]];
      dc[st->src[e]] += ehop_c * a * c[st->dst[e]];
    }
    for (std::size_t i = 0; i < dim; ++i) dc[i] *= -kI;
  }
};

}  // namespace

CVec apply_hamiltonian(const CVec& psi, double t, const LatticeParams& p,
                       const FockBasis& basis, const HoppingStencil& stencil) {
  if (psi.size() != basis.dim()) throw ValidationError("state/basis dimension mismatch");
  CVec out(psi.size());
  MpSystem sys{&p, &stencil};
  sys(psi, out, t);
  for (auto& c : out) c *= kI;  // undo the -i of the Schroedinger right-hand side
  return out;
}

MPState propagate_mp(const MPState& state, double t0, double t1, const LatticeParams& p,
                     const HoppingStencil& stencil, const IntegratorConfig& cfg) {
  MPState out = state;
  out.t = t1;
  integrate_adaptive(MpSystem{&p, &stencil}, out.coeff, t0, t1, cfg);
  return out;
}

void propagate_mp_observed(const MPState& state, const std::vector<double>& times,
                           const LatticeParams& p, const HoppingStencil& stencil,
                           const IntegratorConfig& cfg,
                           const std::function<void(const MPState&)>& observer) {
  MPState work = state;
  integrate_times(MpSystem{&p, &stencil}, work.coeff, state.t, times, cfg,
                  [&](const CVec&, double t) {
                    work.t = t;
                    observer(work);
                  });
}

double momentum_mp(const MPState& state, const LatticeParams& p,
                   const HoppingStencil& stencil) {
  // <T+> with T+ = sum_l adag_{l+1} a_l via the stencil, then the 1/(2iN)
  // combination reduces to Im(<T+> e^{-iFt})/N.
  Complex acc{0.0, 0.0};
  const std::size_t nnz = stencil.amp.size();
  for (std::size_t e = 0; e < nnz; ++e)
    acc += std::conj(state.coeff[stencil.dst[e]]) * stencil.amp[e] * state.coeff[stencil.src[e]];
  acc *= std::exp(Complex{0.0, -p.F * state.t});
  if (!p.N) throw ValidationError("momentum_mp requires N");
  return acc.imag() / static_cast<double>(*p.N);
}

Eigen::MatrixXcd one_body_density(const MPState& state) {
  const FockBasis& basis = *state.basis;
  const int L = basis.sites();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(L, L);
  std::vector<std::uint16_t> work(L);

  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const Complex ci = state.coeff[i];
    if (ci == Complex{0.0, 0.0}) continue;
    const auto n = basis.occ(i);
    for (int m = 0; m < L; ++m) {
      if (n[m] == 0) continue;
      rho(m, m) += std::norm(ci) * static_cast<double>(n[m]);
      for (int l = 0; l < L; ++l) {
        if (l == m) continue;
        std::copy(n.begin(), n.end(), work.begin());
        --work[m];
        ++work[l];
        const std::size_t j = basis.index_of(work);
        const double amp = std::sqrt(static_cast<double>(n[m]) * (n[l] + 1.0));
        rho(l, m) += std::conj(state.coeff[j]) * ci * amp;
      }
    }
  }
  return rho;
}

std::vector<double> mode_populations_mp(const MPState& state) {
  const FockBasis& basis = *state.basis;
  const int L = basis.sites();
  const int N = basis.particles();
  const Eigen::MatrixXcd rho = one_body_density(state);

  std::vector<double> pops(L);
  for (int ki = 0; ki < L; ++ki) {
    const double kappa = kTwoPi * (ki - (L - 1) / 2) / L;
    Complex acc{0.0, 0.0};
    for (int l = 0; l < L; ++l)
      for (int m = 0; m < L; ++m)
        acc += std::exp(Complex{0.0, kappa * (m - l)}) * rho(l, m);
    pops[ki] = acc.real() / (static_cast<double>(N) * L);
  }
  return pops;
}

Eigen::MatrixXcd floquet_operator(const FockBasis& basis, const LatticeParams& p,
                                  const IntegratorConfig& cfg, std::size_t dim_cap) {
  if (basis.dim() > dim_cap)
    throw ValidationError("floquet_operator: basis dimension exceeds cap");
  const HoppingStencil st = build_stencil(basis, p);
  const double T_B = p.bloch_period();

  Eigen::MatrixXcd U(basis.dim(), basis.dim());
  for (std::size_t j = 0; j < basis.dim(); ++j) {
    CVec col(basis.dim(), Complex{0.0, 0.0});
    col[j] = 1.0;
    integrate_adaptive(MpSystem{&p, &st}, col, 0.0, T_B, cfg);
    for (std::size_t i = 0; i < basis.dim(); ++i) U(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
  }
  return U;
}

double revival_fidelity(const MPState& initial, double t, const LatticeParams& p,
                        const HoppingStencil& stencil, const IntegratorConfig& cfg) {
  const MPState evolved = propagate_mp(initial, initial.t, t, p, stencil, cfg);
  Complex overlap{0.0, 0.0};
  for (std::size_t i = 0; i < initial.coeff.size(); ++i)
    overlap += std::conj(initial.coeff[i]) * evolved.coeff[i];
  return std::norm(overlap);
}

double frozen_revival_fidelity(const FockBasis& basis, const CVec& c0, double t, double W) {
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const auto n = basis.occ(i);
    double phase = 0.0;
    for (int l = 0; l < basis.sites(); ++l)
      phase += static_cast<double>(n[l]) * (n[l] - 1.0);
    acc += std::norm(c0[i]) * std::exp(Complex{0.0, -0.5 * W * t * phase});
  }
  return std::norm(acc);
}

}  // namespace blochsim
