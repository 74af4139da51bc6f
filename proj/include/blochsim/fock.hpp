// fock.hpp — enumerated occupation-number basis at fixed particle number with
// a combinatorial (perfect-hash) index map.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "blochsim/common.hpp"

namespace blochsim {

// Occupation vectors (n_1..n_L), sum = N, enumerated in descending
// lexicographic order: (N,0,..,0) first, (0,..,0,N) last.
// dim = (N+L-1)! / (N! (L-1)!).
class FockBasis {
 public:
  FockBasis(int N, int L);

  int particles() const { return n_; }
  int sites() const { return l_; }
  std::size_t dim() const { return dim_; }

  std::span<const std::uint16_t> occ(std::size_t index) const {
    return {occ_.data() + index * l_, static_cast<std::size_t>(l_)};
  }

  // Combinatorial rank; bijective with occ(). O(L).
  std::size_t index_of(std::span<const std::uint16_t> occupation) const;

  static std::size_t dimension(int N, int L);

 private:
  unsigned long long binom(int n, int k) const;
  int n_, l_;
  std::size_t dim_;
  std::vector<std::uint16_t> occ_;                 // dim * L
  std::vector<unsigned long long> binom_;          // (N+L+1) x (L+1) table
  int binom_cols_;
};

inline FockBasis build_basis(int N, int L) { return FockBasis(N, L); }

}  // namespace blochsim
