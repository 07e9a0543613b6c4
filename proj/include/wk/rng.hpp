#pragma once

#include <cstdint>

#include "wk/matrix.hpp"

namespace wk {

// Deterministic splitmix64 stream; identical output on every platform, so
// seeded suites and reports are reproducible byte for byte.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  uint64_t below(uint64_t n) { return n ? next() % n : 0; }
  long long range(long long lo, long long hi) {  // inclusive
    return lo + (long long)below(uint64_t(hi - lo + 1));
  }
  // Independent child stream for sample i; keeps parallel suite loops
  // deterministic regardless of scheduling.
  Rng child(uint64_t i) const {
    Rng r(state ^ (0x632be59bd9b4e019ULL + i * 0x9e3779b97f4a7c15ULL));
    r.next();
    return r;
  }
};

inline Rat random_scalar(Rng& rng, const Ring& R, long long bound = 9) {
  long long v = R.is_modular() ? (long long)rng.below(uint64_t(R.modulus)) : rng.range(-bound, bound);
  return R.reduce(Rat(v));
}

inline Matrix random_matrix(Rng& rng, const Ring& R, int rows, int cols, long long bound = 9) {
  Matrix M(R, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      long long v = R.is_modular() ? (long long)rng.below(uint64_t(R.modulus))
                                   : rng.range(-bound, bound);
      M.at(i, j) = R.reduce(Rat(v));
    }
  return M;
}

}  // namespace wk
