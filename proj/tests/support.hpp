#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cspstream/generators.hpp"
#include "cspstream/instance.hpp"
#include "cspstream/offline.hpp"
#include "cspstream/text_io.hpp"

namespace cspstream::testing {

inline Predicate xor2() { return Predicate(2, 2, {0, 1, 1, 0}); }
inline Predicate dicut2() { return Predicate(2, 2, {0, 0, 1, 0}); }
inline Predicate always_true(int k = 2, int sigma = 2) {
  uint64_t cells = 1;
  for (int j = 0; j < k; ++j) cells *= static_cast<uint64_t>(sigma);
  return Predicate(k, sigma, std::vector<uint8_t>(cells, 1));
}
inline Predicate always_false(int k = 2, int sigma = 2) {
  uint64_t cells = 1;
  for (int j = 0; j < k; ++j) cells *= static_cast<uint64_t>(sigma);
  return Predicate(k, sigma, std::vector<uint8_t>(cells, 0));
}

inline Instance make_instance(int32_t n, int sigma,
                              const std::vector<std::pair<Predicate, std::vector<int32_t>>>& cs) {
  Instance I;
  I.n = n;
  I.alphabet.size = sigma;
  for (const auto& [p, vars] : cs) {
    Constraint c;
    c.pred = I.preds.add(p);
    c.vars = vars;
    I.constraints.push_back(std::move(c));
  }
  I.validate();
  return I;
}

// The classic gap instance: 3 XOR constraints on a triangle, value 2/3,
// relaxation value 1.
inline Instance triangle_maxcut() {
  return make_instance(3, 2, {{xor2(), {0, 1}}, {xor2(), {1, 2}}, {xor2(), {2, 0}}});
}

inline Instance directed_triangle_dicut() {
  return make_instance(3, 2, {{dicut2(), {0, 1}}, {dicut2(), {1, 2}}, {dicut2(), {2, 0}}});
}

// Three standard errors of a frequency estimate from `trials` samples.
inline double three_se(double p, double trials) {
  return 3.0 * std::sqrt(std::max(p * (1 - p), 1e-12) / trials);
}

inline double mean_of(const std::vector<double>& xs) {
  double s = 0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

inline double stderr_of(const std::vector<double>& xs) {
  double m = mean_of(xs);
  double ss = 0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / (static_cast<double>(xs.size()) - 1) /
                   static_cast<double>(xs.size()));
}

// One full sampling + aggregation pass over a fixed reduced instance:
// fresh hash, fresh copy sample, fresh center set, one Out.
inline double sample_out_once(const ReducedInstance& R, const ResolvedParams& P,
                              const ALocMap& aloc, uint64_t seed, int64_t cset_size) {
  RandomTape tape(seed);
  KWiseHash H = make_sampling_hash(P, tape);
  auto in = offline_sample(R, P, H, tape);
  auto cset = cset_fisher_yates(R.m_orig, R.B, cset_size, tape);
  SubInstance sub = induce_sample(R, in);
  return aggregate(std::move(sub), cset, P, aloc).out;
}

// The exhaustive side of the unbiasedness identity: the plain average of
// a_loc over every ball of the degree-bounded reduction.
inline double exhaustive_mean_aloc(const ReducedInstance& R, const ResolvedParams& P,
                                   const ALocMap& aloc) {
  SubInstance sub = full_view(R);
  apply_degree_bound(sub, P.degree_cap);
  Adjacency adj = build_adjacency(sub);
  double total = 0;
  for (int32_t cc = 0; cc < static_cast<int32_t>(sub.ccopies.size()); ++cc) {
    if (sub.preds.at(sub.ccopies[static_cast<size_t>(cc)].pred).trivially_false()) continue;
    NeighborhoodBall ball = extract_ball(sub, adj, cc, P.radius);
    auto [inst, center] = ball_to_instance(sub, ball);
    total += aloc(inst, center);
  }
  return total / static_cast<double>(sub.ccopies.size());
}

// Caches a deterministic ball map by the ball's canonical serialization,
// so Monte-Carlo loops over a fixed reduced instance pay for each distinct
// ball once.
inline ALocMap memoized(ALocMap inner) {
  auto cache = std::make_shared<std::map<std::string, double>>();
  return [inner = std::move(inner), cache](const Instance& ball, int64_t center) {
    std::string key = to_text(ball);
    if (auto it = cache->find(key); it != cache->end()) return it->second;
    double v = inner(ball, center);
    cache->emplace(std::move(key), v);
    return v;
  };
}

// Tier decision with everything fixed by hand, for building reduced
// instances with prescribed structure.
inline TierDecision manual_tiers(const Instance& I, std::vector<int64_t> dtilde,
                                 std::vector<Tier> tier) {
  TierDecision d;
  d.deg = degree_profile(I);
  d.dtilde = std::move(dtilde);
  d.tier = std::move(tier);
  return d;
}

// Hand-built stored sub-instances for neighborhood tests.
struct SubBuilder {
  SubInstance sub;

  explicit SubBuilder(int sigma = 2, int64_t B = 1) {
    sub.sigma = sigma;
    sub.B = B;
  }
  int32_t copy(int32_t parent, int64_t index, Tier tier, int64_t deg_record) {
    return sub.add_copy(parent, index, tier, deg_record);
  }
  int32_t cc(int64_t i, int64_t l, const Predicate& p, std::vector<int32_t> pos) {
    SubInstance::CC c;
    c.i = i;
    c.l = l;
    c.pred = sub.preds.add(p);
    c.pos = std::move(pos);
    int32_t id = static_cast<int32_t>(sub.ccopies.size());
    sub.ccopy_lookup.emplace(SubInstance::cc_key(i, l), id);
    sub.ccopies.push_back(std::move(c));
    ++sub.m_orig;
    return id;
  }
};

}  // namespace cspstream::testing
