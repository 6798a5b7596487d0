#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "instance.hpp"

namespace cspstream {

// Estimator knobs. Zero/negative sentinel values resolve to derived
// defaults at run time (see resolve_params).
struct EstimatorConfig {
  double epsilon = 0.5;
  double delta = 0.05;
  double eps_adv = -1.0;   // < 0: defaults to epsilon
  int64_t B = 0;           // 0: ceil(sigma^(2k) / epsilon)
  double rho = 0.0;        // 0: epsilon / (2k)
  int radius = 1;
  int64_t T_max = 0;       // 0: min(64, (k * floor(B/rho))^(radius+1))
  double c_exp = 0.25;     // hash range R = round(n^c_exp), min 2; c_exp = 0 gives R = 1
  double q_exp = -1.0;     // high/low degree threshold n^q; < 0: defaults to epsilon
  uint64_t seed = 1;
  double alpha = -1.0;     // integrality gap; required by the estimators
  int64_t cset_capacity = 0;  // 0: round(n / R), clamped to mB offline
  int64_t space_cap = 0;      // 0: 64*k*B*n^(1-c/3); CSPSTREAM_SPACE_CAP env overrides
};

// Concrete parameters for one instance shape (n, m, k, sigma).
struct ResolvedParams {
  int32_t n = 0;
  int64_t m = 0;
  int k = 0;
  int sigma = 0;

  int64_t B = 0;
  double rho = 0;
  int64_t degree_cap = 0;  // floor(B / rho)
  int radius = 1;
  int64_t T_max = 0;
  int hash_wise = 0;       // 10 * T_max

  int64_t hash_range = 2;  // R, the integer standing in for n^c
  double inv_range = 0.5;  // n^{-c} = 1/R
  double g_prob = 1.0;     // min(1, 2/R): the oversampling rate for G
  double nq = 0;           // n^q
  double low_threshold = 0;  // n^{q+c}/B, compared against dtilde
  int64_t cset_capacity = 0;
  int64_t space_cap = 0;
  double epsilon = 0;
  double delta = 0;
  double eps_adv = 0;
  double alpha = -1.0;
  uint64_t seed = 0;

  double scale_factor() const;  // alpha / (1 + 2 sigma^k epsilon)
  double sigma_pow_k() const;
};

ResolvedParams resolve_params(const EstimatorConfig& cfg, int32_t n, int64_t m, int k, int sigma);
ResolvedParams resolve_params(const EstimatorConfig& cfg, const Instance& I);

enum class Tier : uint8_t { Low, High };

// How the reduction picks dtilde(v) in (1 +- eps_adv) * deg(v).
struct AdversaryPolicy {
  enum class Kind {
    Exact,            // dtilde = deg
    CoupledGtilde,    // dtilde = deg_Gtilde(v) * R / B from the shared tape
    WorstCaseRandom,  // uniform integer in the permitted band
    Custom,
  };
  Kind kind = Kind::Exact;
  // Custom hook; must return a positive integer (band checked by caller).
  std::function<int64_t(int32_t v, int64_t deg)> custom;

  static AdversaryPolicy exact() { return {Kind::Exact, nullptr}; }
  static AdversaryPolicy coupled_gtilde() { return {Kind::CoupledGtilde, nullptr}; }
  static AdversaryPolicy worst_case_random() { return {Kind::WorstCaseRandom, nullptr}; }
  static AdversaryPolicy custom_fn(std::function<int64_t(int32_t, int64_t)> f) {
    return {Kind::Custom, std::move(f)};
  }
};

}  // namespace cspstream
