#include "blochsim/fock.hpp"

namespace blochsim {

FockBasis::FockBasis(int N, int L) : n_(N), l_(L) {
  if (N < 0 || L < 1) throw ValidationError("FockBasis requires N >= 0, L >= 1");
  if (N > 60000) throw ValidationError("FockBasis occupation storage is 16-bit");

  binom_cols_ = L + 1;
  binom_.assign(static_cast<std::size_t>(N + L + 1) * binom_cols_, 0ULL);
  for (int n = 0; n <= N + L; ++n)
    for (int k = 0; k <= std::min(n, L); ++k)
      binom_[static_cast<std::size_t>(n) * binom_cols_ + k] =
          (k == 0 || k == n) ? 1ULL
                             : binom_[static_cast<std::size_t>(n - 1) * binom_cols_ + k - 1] +
                                   binom_[static_cast<std::size_t>(n - 1) * binom_cols_ + k];

  dim_ = static_cast<std::size_t>(binom(N + L - 1, L - 1));
  occ_.reserve(dim_ * L);

  // descending lexicographic enumeration
  std::vector<std::uint16_t> v(L, 0);
  v[0] = static_cast<std::uint16_t>(N);
  for (;;) {
    occ_.insert(occ_.end(), v.begin(), v.end());
    // find rightmost position (excluding last site) with a particle to move
    int j = L - 2;
    while (j >= 0 && v[j] == 0) --j;
    if (j < 0) break;
    --v[j];
    // everything right of j collapses into position j+1
    std::uint16_t rest = static_cast<std::uint16_t>(v[L - 1] + 1);
    v[L - 1] = 0;
    for (int i = j + 1; i < L - 1; ++i) {
      rest = static_cast<std::uint16_t>(rest + v[i]);
      v[i] = 0;
    }
    v[j + 1] = rest;
  }
  if (occ_.size() != dim_ * static_cast<std::size_t>(L))
    throw std::logic_error("Fock enumeration / dimension mismatch");
}

unsigned long long FockBasis::binom(int n, int k) const {
  if (k < 0 || n < 0 || k > l_ || n > n_ + l_) return 0ULL;
  if (k > n) return 0ULL;
  return binom_[static_cast<std::size_t>(n) * binom_cols_ + k];
}

std::size_t FockBasis::index_of(std::span<const std::uint16_t> occupation) const {
  if (static_cast<int>(occupation.size()) != l_) throw ValidationError("occupation length mismatch");
  std::size_t rank = 0;
  int remaining = n_;
  for (int j = 0; j < l_ - 1; ++j) {
    const int nj = occupation[j];
    const int sites_right = l_ - 1 - j;
    // states whose j-th entry exceeds nj (they precede in descending lex order)
    if (remaining - nj - 1 >= 0)
      rank += binom(remaining - nj - 1 + sites_right, sites_right);
    remaining -= nj;
  }
  return rank;
}

std::size_t FockBasis::dimension(int N, int L) {
  // overflow-safe product form for sanity checks
  long double v = 1.0L;
  for (int i = 1; i <= L - 1; ++i) v *= static_cast<long double>(N + i) / i;
  return static_cast<std::size_t>(v + 0.5L);
}

}  // namespace blochsim
