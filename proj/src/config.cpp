#include "cspstream/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace cspstream {

double ResolvedParams::sigma_pow_k() const {
  return std::pow(static_cast<double>(sigma), static_cast<double>(k));
}

double ResolvedParams::scale_factor() const {
  return alpha / (1.0 + 2.0 * sigma_pow_k() * epsilon);
}

ResolvedParams resolve_params(const EstimatorConfig& cfg, int32_t n, int64_t m, int k, int sigma) {
  if (n < 1) throw std::invalid_argument("resolve_params: need at least one variable");
  if (k < 1 || sigma < 2) throw std::invalid_argument("resolve_params: bad arity or alphabet");
  if (!(cfg.epsilon > 0)) throw std::invalid_argument("resolve_params: epsilon must be positive");

  ResolvedParams P;
  P.n = n;
  P.m = m;
  P.k = k;
  P.sigma = sigma;
  P.epsilon = cfg.epsilon;
  P.delta = cfg.delta;
  P.eps_adv = cfg.eps_adv < 0 ? cfg.epsilon : cfg.eps_adv;
  P.alpha = cfg.alpha;
  P.seed = cfg.seed;
  P.radius = cfg.radius;

  double spk = std::pow(static_cast<double>(sigma), static_cast<double>(k));
  P.B = cfg.B > 0 ? cfg.B : static_cast<int64_t>(std::ceil(spk * spk / cfg.epsilon));
  P.rho = cfg.rho > 0 ? cfg.rho : cfg.epsilon / (2.0 * k);
  P.degree_cap = static_cast<int64_t>(std::floor(static_cast<double>(P.B) / P.rho));
  if (P.degree_cap < 1) P.degree_cap = 1;

  if (cfg.T_max > 0) {
    P.T_max = cfg.T_max;
  } else {
    double t = std::pow(static_cast<double>(k) * static_cast<double>(P.degree_cap),
                        static_cast<double>(P.radius + 1));
    P.T_max = t > 64.0 ? 64 : std::max<int64_t>(1, static_cast<int64_t>(t));
  }
  P.hash_wise = static_cast<int>(std::min<int64_t>(10 * P.T_max, 4096));

  if (cfg.c_exp <= 0.0) {
    P.hash_range = 1;  // degenerate: sample everything
  } else {
    P.hash_range = std::max<int64_t>(
        2, static_cast<int64_t>(std::llround(std::pow(static_cast<double>(n), cfg.c_exp))));
  }
  P.inv_range = 1.0 / static_cast<double>(P.hash_range);
  P.g_prob = std::min(1.0, 2.0 * P.inv_range);

  double q_exp = cfg.q_exp < 0 ? cfg.epsilon : cfg.q_exp;
  P.nq = std::pow(static_cast<double>(n), q_exp);
  P.low_threshold = P.nq * static_cast<double>(P.hash_range) / static_cast<double>(P.B);

  P.cset_capacity = cfg.cset_capacity > 0
                        ? cfg.cset_capacity
                        : std::max<int64_t>(1, std::llround(static_cast<double>(n) /
                                                            static_cast<double>(P.hash_range)));

  if (const char* env = std::getenv("CSPSTREAM_SPACE_CAP"); env != nullptr && *env != '\0') {
    P.space_cap = std::strtoll(env, nullptr, 10);
  } else if (cfg.space_cap > 0) {
    P.space_cap = cfg.space_cap;
  } else {
    double c_eff = P.hash_range > 1
                       ? std::log(static_cast<double>(P.hash_range)) / std::log(static_cast<double>(std::max<int32_t>(2, n)))
                       : 0.0;
    double cap = 64.0 * k * static_cast<double>(P.B) *
                 std::pow(static_cast<double>(n), 1.0 - c_eff / 3.0);
    P.space_cap = static_cast<int64_t>(cap);
  }
  return P;
}

ResolvedParams resolve_params(const EstimatorConfig& cfg, const Instance& I) {
  return resolve_params(cfg, I.n, I.m(), std::max(1, I.max_arity()), I.alphabet.size);
}

}  // namespace cspstream
