#pragma once

#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>

namespace convexsym {

inline constexpr double kPi = std::numbers::pi;

/// All tolerances, sample budgets and seeds flow from one of these; no
/// hidden globals. Default-constructed contexts are the library defaults.
struct Context {
  double tol = 1e-8;        // master relative tolerance for verdicts
  double flat_tol = 1e-9;   // flat comparison / dedup
  double ortho_tol = 1e-12; // orthonormality of bases and isometries

  // Quasi-uniform direction sample sizes per ambient dimension.
  int samples_dim2 = 512;
  int samples_dim3 = 4096;
  int samples_dim4 = 16384;

  int flat_samples = 64;    // sampled flats per k-axis / revolution test
  int section_samples = 64; // chart directions per section sweep

  long busemann_grid = 100000;
  double busemann_cutoff = 30.0;

  long star_max_iter = 200000; // dense-detection orbit budget
  int star_q_max = 64;
  double star_rational_tol = 1e-9;
  double star_dense_gap = kPi / 1024;

  std::uint64_t seed = 42;
  int threads = 1;

  int direction_samples(int dim) const {
    switch (dim) {
      case 1: return 2;
      case 2: return samples_dim2;
      case 3: return samples_dim3;
      case 4: return samples_dim4;
      default:
        if (dim < 1) throw std::invalid_argument("direction_samples: dim < 1");
        return samples_dim4;
    }
  }
};

/// splitmix64; used to derive independent stream seeds from the master seed.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_label(const char* s) {
  std::uint64_t h = 1469598103934665603ull;
  for (; *s; ++s) h = (h ^ std::uint64_t(*s)) * 1099511628211ull;
  return h;
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return std::mt19937_64(split_seed(seed, stream));
}

} // namespace convexsym
