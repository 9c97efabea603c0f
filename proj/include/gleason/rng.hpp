#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace gleason {

// Seeded RNG with a fixed uint64 -> double mapping. std::mt19937_64's raw
// stream is pinned by the standard, but the distribution classes are not;
// mapping the bits ourselves keeps runs byte-identical across toolchains.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform on the complex unit disc
  std::complex<double> unit_disc() {
    const double r = std::sqrt(uniform());
    const double th = 2.0 * M_PI * uniform();
    return {r * std::cos(th), r * std::sin(th)};
  }

  // uniform direction on the real unit sphere in R^m (Gaussian + normalize)
  std::vector<double> sphere(std::size_t m) {
    std::vector<double> v(m);
    double n2 = 0.0;
    do {
      n2 = 0.0;
      for (auto& x : v) {
        x = gaussian();
        n2 += x * x;
      }
    } while (n2 < 1e-24);
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& x : v) x *= inv;
    return v;
  }

  double gaussian() {
    // Box-Muller on our own uniforms (spare value cached)
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double m = std::sqrt(-2.0 * std::log(u1));
    spare_ = m * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return m * std::cos(2.0 * M_PI * u2);
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }

private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace gleason
