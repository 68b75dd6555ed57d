#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace heatlab {

// Seeded RNG with hand-rolled distributions. std::uniform_real_distribution
// is implementation-defined, which would break byte-reproducibility of CSV
// output across toolchains; the mt19937_64 stream itself is pinned by the
// standard.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  // Derive an independent stream for sub-task `index` of a seeded run.
  // Trial i always sees the same stream no matter how many trials run,
  // so enlarging a trial family keeps the old trials intact.
  static Rng substream(uint64_t seed, uint64_t index) {
    // splitmix64 of the pair
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
  }

  uint64_t next_u64() { return eng_(); }

  // uniform in [0,1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // integer in [0, n)
  uint64_t below(uint64_t n) { return eng_() % n; }

  // standard normal via Box-Muller on the pinned uniform stream
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace heatlab
