#pragma once

#include <cstdint>
#include <vector>

#include "tape.hpp"

namespace cspstream {

bool is_prime_u64(uint64_t x);
uint64_t next_prime_at_least(uint64_t x);

// w-wise independent hash h(v) = ((sum_j a_j v^j mod p) mod R) + 1, with
// coefficients drawn uniformly from F_p. Distinct inputs below p are
// distinct field points, so any w of them get jointly uniform polynomial
// values; the final mod-R step adds bias at most R/p per point.
class KWiseHash {
 public:
  // Picks p as the first prime >= max(n^2, R^2, 2^31-1); the large floor
  // keeps the reduction bias negligible even for tiny n.
  KWiseHash(const RandomTape& tape, uint64_t n, uint64_t range, int w);

  // Explicit parameters, used by the exhaustive independence tests.
  KWiseHash(uint64_t prime, uint64_t range, std::vector<uint64_t> coeffs);

  uint64_t operator()(uint64_t v) const;

  uint64_t prime() const { return p_; }
  uint64_t range() const { return range_; }
  int wise() const { return static_cast<int>(coeffs_.size()); }

 private:
  uint64_t p_;
  uint64_t range_;
  std::vector<uint64_t> coeffs_;
};

}  // namespace cspstream
