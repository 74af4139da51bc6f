// common.hpp — shared aliases, errors, deterministic RNG, small hash utilities
#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace blochsim {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adaptive step-size underflow; carries how far the integration got.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t_reached)
      : std::runtime_error(what + " (t reached = " + std::to_string(t_reached) + ")"),
        t_reached_(t_reached) {}
  double t_reached() const noexcept { return t_reached_; }

 private:
  double t_reached_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream per (seed, index); results do not depend on scheduling.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 1));
}

// mt19937_64 output is standardized, and the uniform below uses raw bits,
// so sampled ensembles are bit-exact across platforms and compilers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }  // [0,1)

  double normal() {  // Box-Muller, deterministic
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }

  std::uint64_t bits() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace blochsim
