#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace matchlab {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream for replicate `index` under `master`; the value depends
/// only on the pair, never on how many streams were drawn before.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

inline Rng make_rng(std::uint64_t master, std::uint64_t index = 0) { return Rng(stream_seed(master, index)); }

/// Uniform on the open interval (0, 1).
inline double uniform_open(Rng& rng) {
  for (;;) {
    const double u = std::generate_canonical<double, 53>(rng);
    if (u > 0.0) return u;
  }
}

inline double standard_normal(Rng& rng) {
  std::normal_distribution<double> g;
  return g(rng);
}

/// Uniform direction on S^{d-1}, written to out (size d).
inline void random_direction(Rng& rng, std::span<double> out) {
  for (;;) {
    double s = 0.0;
    for (auto& v : out) {
      v = standard_normal(rng);
      s += v * v;
    }
    if (s > 1e-300) {
      const double inv = 1.0 / std::sqrt(s);
      for (auto& v : out) v *= inv;
      return;
    }
  }
}

}  // namespace matchlab
