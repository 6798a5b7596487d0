#include "cspstream/hashing.hpp"

#include <stdexcept>

namespace cspstream {

namespace {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(uint64_t x) {
  if (x < 2) return false;
  for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (x % p == 0) return x == p;
  }
  uint64_t d = x - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic Miller-Rabin witness set for 64-bit inputs.
  for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    uint64_t y = powmod(a, d, x);
    if (y == 1 || y == x - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      y = mulmod(y, y, x);
      if (y == x - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

uint64_t next_prime_at_least(uint64_t x) {
  if (x <= 2) return 2;
  if ((x & 1) == 0) ++x;
  while (!is_prime_u64(x)) x += 2;
  return x;
}

KWiseHash::KWiseHash(const RandomTape& tape, uint64_t n, uint64_t range, int w) : range_(range) {
  if (range_ < 1) throw std::invalid_argument("hash range must be positive");
  if (w < 1) throw std::invalid_argument("hash independence degree must be positive");
  if (n > (1ULL << 31) || range > (1ULL << 31))
    throw std::invalid_argument("hash domain too large for squared modulus floor");
  uint64_t want = 2147483647ULL;  // 2^31 - 1 floor keeps the mod-R bias tiny
  if (n * n > want) want = n * n;
  if (range * range > want) want = range * range;
  p_ = next_prime_at_least(want);

  coeffs_.resize(static_cast<size_t>(w));
  for (int j = 0; j < w; ++j)
    coeffs_[static_cast<size_t>(j)] =
        tape.uniform_int(p_, RandomTape::Ns::HashSeed, static_cast<uint64_t>(j));
}

KWiseHash::KWiseHash(uint64_t prime, uint64_t range, std::vector<uint64_t> coeffs)
    : p_(prime), range_(range), coeffs_(std::move(coeffs)) {
  if (!is_prime_u64(p_)) throw std::invalid_argument("hash modulus must be prime");
  if (coeffs_.empty()) throw std::invalid_argument("hash needs at least one coefficient");
  for (uint64_t c : coeffs_)
    if (c >= p_) throw std::invalid_argument("hash coefficient not reduced mod p");
}

uint64_t KWiseHash::operator()(uint64_t v) const {
  uint64_t x = v % p_;
  uint64_t acc = 0;
  for (size_t j = coeffs_.size(); j-- > 0;) {
    acc = mulmod(acc, x, p_);
    acc += coeffs_[j];
    if (acc >= p_) acc -= p_;
  }
  return acc % range_ + 1;
}

}  // namespace cspstream
