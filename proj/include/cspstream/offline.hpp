#pragma once

#include <utility>
#include <vector>

#include "hashing.hpp"
#include "local.hpp"

namespace cspstream {

// The two-tier copy sample: a low-degree variable contributes all of its
// copies iff H(v) = 1; a high-degree copy (v,j) is kept iff its own
// Bernoulli(1/R) draw keyed (v,j) succeeds. Returns inclusion flags over
// global copy ids.
std::vector<char> offline_sample(const ReducedInstance& R, const ResolvedParams& P,
                                 const KWiseHash& H, const RandomTape& tape);

KWiseHash make_sampling_hash(const ResolvedParams& P, const RandomTape& tape);

// Uniform without-replacement samples of `size` constraint copies out of
// m*B, as (i,l) pairs. Fisher-Yates is the offline path; the reservoir
// replay consumes exactly the draws the streaming sketch makes, so a
// coupled offline run lands on the same set.
std::vector<std::pair<int64_t, int64_t>> cset_fisher_yates(int64_t m, int64_t B, int64_t size,
                                                           const RandomTape& tape);
std::vector<std::pair<int64_t, int64_t>> cset_reservoir_replay(int64_t m, int64_t B, int64_t size,
                                                               const RandomTape& tape);

struct AggregateResult {
  double out = 0.0;
  int64_t centers = 0;       // |Cset|
  int64_t contributing = 0;  // fully sampled, non-dummy centers
};

// Bounds degrees, then averages a_loc over the fully sampled centers of the
// Cset scaled by R^T each; centers that fail the check contribute 0.
// Centers are processed in canonical (i,l) order so the float sum does not
// depend on Cset arrival order.
AggregateResult aggregate(SubInstance sub, std::vector<std::pair<int64_t, int64_t>> cset,
                          const ResolvedParams& P, const ALocMap& aloc);

struct OfflineResult {
  double vtilde = 0.0;
  double out = 0.0;
  TierDecision tiers;
  ReducedInstance reduced;
  std::vector<char> in_sample;
  std::vector<std::pair<int64_t, int64_t>> cset;
  bool cset_clamped = false;
  AggregateResult agg;
};

// The full offline estimator: tier decision, reduction, two-tier sampling,
// Cset selection, aggregation, and the final alpha / (1 + 2 sigma^k eps)
// scaling. The coupled policy draws everything from the namespaces the
// streaming sketch reads, including the reservoir-replayed Cset.
OfflineResult offline_estimate(const Instance& I, const EstimatorConfig& cfg,
                               const AdversaryPolicy& policy, const ALocMap& aloc);

}  // namespace cspstream
