#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace conclab {

// splitmix64 finalizer. Derives independent per-task seeds from a master
// seed so parallel work reproduces the sequential result bit-for-bit.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (stream + 1ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Seeded generator. Uniform/Gaussian draws are implemented by hand (u64
// mantissa mapping, Box-Muller) instead of the standard <random>
// distributions, whose sequences are implementation-defined; mt19937_64
// itself is specified exactly, so results are portable across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t raw() { return engine_(); }

  double uniform() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform_pos() {  // (0, 1], safe as a log argument
    return static_cast<double>((engine_() >> 11) + 1ull) * 0x1.0p-53;
  }

  int below(int n) {  // {0, ..., n-1}, n >= 1
    return static_cast<int>(
        (static_cast<unsigned __int128>(engine_()) *
         static_cast<unsigned __int128>(n)) >> 64);
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double t = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  std::complex<double> complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re, im};
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace conclab
