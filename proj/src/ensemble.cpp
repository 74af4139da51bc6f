#include "blochsim/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "blochsim/sweep.hpp"

namespace blochsim {

namespace {

ModeState sample_one(const EnsembleSpec& spec, std::uint64_t trajectory_index) {
  Rng rng(stream_seed(spec.seed, trajectory_index));
  const int L = spec.L;
  const int center = (L - 1) / 2;

  CVec z(L);
  std::uint64_t attempts = 0, since_accept = 0;
  for (;;) {
    ++attempts;
    ++since_accept;
    double norm2 = 0.0;
    for (int k = 0; k < L; ++k) {
      if (spec.method == EnsembleSpec::Method::PaperRejection) {
        const double mag = rng.uniform();
        const double phi = kTwoPi * rng.uniform();
        z[k] = mag * std::exp(Complex{0.0, phi});
      } else {
        z[k] = Complex{rng.normal(), rng.normal()};
      }
      norm2 += std::norm(z[k]);
    }
    if (norm2 <= 0.0) continue;
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& c : z) c *= inv;

    const double v = rng.uniform();
    if (v < std::pow(std::norm(z[center]), static_cast<double>(spec.N))) break;

    if (since_accept >= 10'000'000ULL) {
      throw StarvationError(
          "rejection acceptance rate below 1e-6 over 1e7 attempts; "
          "reduce N*L or switch sampling method");
    }
  }

  ModeState s;
  s.modes.resize(L);
  const double scale = std::sqrt(static_cast<double>(L));
  for (int k = 0; k < L; ++k) s.modes[k] = scale * z[k];
  s.t = 0.0;
  return s;
}

}  // namespace

std::vector<ModeState> sample_husimi(const EnsembleSpec& spec) {
  spec.validate();
  std::vector<ModeState> out;
  out.reserve(spec.count);
  for (int i = 0; i < spec.count; ++i) out.push_back(sample_one(spec, i));
  return out;
}

EnsembleSeries ensemble_average(const std::vector<ModeState>& members,
                                const std::vector<double>& t_grid, const LatticeParams& p,
                                const IntegratorConfig& cfg, int threads) {
  if (members.empty()) throw ValidationError("empty ensemble");
  if (t_grid.empty()) throw ValidationError("empty time grid");
  const int L = members.front().sites();
  for (const auto& m : members)
    if (m.sites() != L) throw ValidationError("ensemble members disagree on L");

  const std::size_t nt = t_grid.size();
  const std::size_t n_members = members.size();

  // per-trajectory observable records; merged in index order afterwards
  struct Track {
    std::vector<double> p;    // nt
    std::vector<double> pop;  // nt x L
    bool ok = false;
  };
  std::vector<Track> tracks(n_members);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_members) return;
      Track& tr = tracks[i];
      tr.p.resize(nt);
      tr.pop.resize(nt * L);
      try {
        std::size_t it = 0;
        propagate_observed(to_sites(members[i]), t_grid, p, cfg,
                           [&](const MeanFieldState& s) {
                             const ModeState ms = to_modes(s);
                             tr.p[it] = momentum(ms, p);
                             const auto pops = mode_populations(ms);
                             std::copy(pops.begin(), pops.end(), tr.pop.begin() + it * L);
                             ++it;
                           });
        tr.ok = true;
      } catch (const IntegrationError&) {
        tr.ok = false;  // dropped and counted below
      }
    }
  };

  const int n_threads = resolve_threads(threads);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  EnsembleSeries out;
  out.times = t_grid;
  out.L = L;
  out.mean_p.assign(nt, 0.0);
  out.se_p.assign(nt, 0.0);
  out.mean_pop.assign(nt * L, 0.0);
  out.se_pop.assign(nt * L, 0.0);

  std::size_t ok_count = 0;
  for (const auto& tr : tracks)
    if (tr.ok) ++ok_count;
  out.dropped = static_cast<int>(n_members - ok_count);
  out.trajectories = static_cast<int>(ok_count);
  if (out.dropped > 0 && out.dropped * 100 > static_cast<int>(n_members))
    throw IntegrationError("more than 1% of ensemble trajectories failed", 0.0);
  if (ok_count == 0) throw IntegrationError("all ensemble trajectories failed", 0.0);

  // two passes (mean, then spread), deterministic summation order
  for (const auto& tr : tracks) {
    if (!tr.ok) continue;
    for (std::size_t it = 0; it < nt; ++it) {
      out.mean_p[it] += tr.p[it];
      for (int k = 0; k < L; ++k) out.mean_pop[it * L + k] += tr.pop[it * L + k];
    }
  }
  const double inv = 1.0 / static_cast<double>(ok_count);
  for (auto& v : out.mean_p) v *= inv;
  for (auto& v : out.mean_pop) v *= inv;

  if (ok_count > 1) {
    for (const auto& tr : tracks) {
      if (!tr.ok) continue;
      for (std::size_t it = 0; it < nt; ++it) {
        const double dp = tr.p[it] - out.mean_p[it];
        out.se_p[it] += dp * dp;
        for (int k = 0; k < L; ++k) {
          const double dq = tr.pop[it * L + k] - out.mean_pop[it * L + k];
          out.se_pop[it * L + k] += dq * dq;
        }
      }
    }
    const double f = 1.0 / (static_cast<double>(ok_count) * (ok_count - 1));
    for (auto& v : out.se_p) v = std::sqrt(v * f);
    for (auto& v : out.se_pop) v = std::sqrt(v * f);
  }
  return out;
}

MeanFieldState frozen_evolution(const MeanFieldState& s0, double t, const LatticeParams& p) {
  MeanFieldState out = s0;
  out.t = s0.t + t;
  for (auto& a : out.amps) a *= std::exp(Complex{0.0, -p.g * (std::norm(a) - 1.0) * t});
  return out;
}

}  // namespace blochsim
