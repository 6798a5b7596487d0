#pragma once

#include <cstdint>

namespace cspstream {

// Keyed deterministic randomness source. Every draw is a pure function of
// (seed, namespace, structural key), so two computations that read the same
// key observe the same value no matter when or in which order they read it.
// This is what lets the offline estimator and the streaming sketch share
// their randomness draw-for-draw.
//
// Key layouts by namespace:
//   HashSeed:   (coefficient index)
//   G, Gtilde:  (constraint index i, copy l, position t)
//   CopySample: (variable v, copy index j)
//   CopyAssign: (constraint index i, copy l, position t, salt)
//   Resample:   (constraint index i, copy l, position t)
//   Reservoir:  (arrival index, salt)   -- the one sequential namespace
//   Subsample:  (constraint index)
class RandomTape {
 public:
  enum class Ns : uint64_t {
    HashSeed = 1,
    G = 2,
    Gtilde = 3,
    CopySample = 4,
    CopyAssign = 5,
    Resample = 6,
    Reservoir = 7,
    Subsample = 8,
  };

  explicit RandomTape(uint64_t seed) : seed_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  // Independent tape for parallel runs (m-guessing copies, trial batches).
  RandomTape fork(uint64_t stream) const {
    RandomTape t(0);
    t.seed_ = mix(seed_ ^ mix(stream ^ 0xbb67ae8584caa73bULL));
    return t;
  }

  uint64_t seed() const { return seed_; }

  uint64_t u64(Ns ns, uint64_t k0, uint64_t k1 = 0, uint64_t k2 = 0,
               uint64_t k3 = 0) const {
    uint64_t h = seed_;
    h = mix(h ^ static_cast<uint64_t>(ns));
    h = mix(h ^ k0);
    h = mix(h ^ k1);
    h = mix(h ^ k2);
    h = mix(h ^ k3);
    return mix(h);
  }

  // Uniform in [0,1) with 53 random bits.
  double uniform01(Ns ns, uint64_t k0, uint64_t k1 = 0, uint64_t k2 = 0,
                   uint64_t k3 = 0) const {
    return static_cast<double>(u64(ns, k0, k1, k2, k3) >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p, Ns ns, uint64_t k0, uint64_t k1 = 0, uint64_t k2 = 0,
                 uint64_t k3 = 0) const {
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return uniform01(ns, k0, k1, k2, k3) < p;
  }

  // Uniform in [0, bound). Multiply-shift; bias is bound/2^64.
  uint64_t uniform_int(uint64_t bound, Ns ns, uint64_t k0, uint64_t k1 = 0,
                       uint64_t k2 = 0, uint64_t k3 = 0) const {
    unsigned __int128 prod =
        static_cast<unsigned __int128>(u64(ns, k0, k1, k2, k3)) * bound;
    return static_cast<uint64_t>(prod >> 64);
  }

 private:
  static uint64_t mix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  uint64_t seed_;
};

}  // namespace cspstream
