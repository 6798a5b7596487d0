#pragma once

#include <string>

#include "instance.hpp"

namespace cspstream {

// Built-in instance families. maxcut: binary XOR pairs. maxdicut: binary
// predicate satisfied exactly by (1,0) on directed pairs. ksat: k-ary
// disjunctions with random negations. random: uniform nontrivial truth
// tables. Unless allow_isolated is set, instances are resampled until no
// variable is isolated, so local neighborhoods are nontrivial.
struct GenSpec {
  std::string family = "maxcut";
  int32_t n = 8;
  int64_t m = 16;
  int k = 2;
  int sigma = 2;
  uint64_t seed = 1;
  bool allow_isolated = false;
};

Instance generate(const GenSpec& spec);

// The predicates a family can emit, for integrality-gap sampling.
std::vector<Predicate> family_predicates(const std::string& family, int k, int sigma);

}  // namespace cspstream
