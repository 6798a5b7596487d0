#pragma once

#include <functional>
#include <string>
#include <vector>

#include "config.hpp"
#include "instance.hpp"
#include "tape.hpp"

namespace cspstream {

// Per-variable outcome of the adversary + high/low split that precedes the
// reduction: final copy counts dtilde (low-degree variables are reset to
// their exact degree) and the tier marking.
struct TierDecision {
  std::vector<int64_t> deg;     // deg_I(v)
  std::vector<int64_t> dtilde;  // >= 1
  std::vector<Tier> tier;
  std::vector<int64_t> deg_gt;          // only for the coupled policy
  std::vector<int32_t> band_violations; // vars whose coupled dtilde left the band (clamped)
  bool coupled = false;
};

TierDecision decide_tiers(const Instance& I, const ResolvedParams& P,
                          const AdversaryPolicy& policy, const RandomTape& tape);

// Chooses the copy for position (i,l,t); returns a 0-based index < dtilde.
using CopyAssigner =
    std::function<int64_t(int64_t i, int64_t l, int t, int32_t parent, int64_t dtilde)>;

CopyAssigner default_copy_assigner(const RandomTape& tape);

// The reduced instance: dtilde(v) copies per variable, B constraint copies
// per constraint, each position wired to a uniformly chosen copy of its
// parent. Copies are indexed 1..dtilde(v); (v,j) has global id
// copy_offset[v] + j - 1.
struct ReducedInstance {
  int32_t n_orig = 0;
  int64_t m_orig = 0;
  int64_t B = 0;
  Alphabet alphabet;
  PredicateRegistry preds;
  std::vector<int64_t> dtilde;
  std::vector<Tier> tier;
  std::vector<int64_t> copy_offset;
  int64_t total_copies = 0;

  struct CCopy {
    int64_t i = 0;
    int64_t l = 0;
    int pred = 0;
    std::vector<int32_t> parents;
    std::vector<int64_t> copy_idx;  // 1-based
  };
  std::vector<CCopy> ccopies;  // canonical order: i-major, l-minor

  int64_t global_copy(int32_t v, int64_t j) const {
    return copy_offset[static_cast<size_t>(v)] + j - 1;
  }
};

ReducedInstance trevisan_reduce(const Instance& I, int64_t B, const TierDecision& dec,
                                const CopyAssigner& assign);

// Convenience overload: derives the tier decision from the policy at the
// given parameters, then reduces.
ReducedInstance trevisan_reduce(const Instance& I, const ResolvedParams& P,
                                const AdversaryPolicy& policy, const RandomTape& tape);

// Incidence degree of every copy: number of (constraint copy, position)
// pairs wired to it. Constraint copies with a repeated parent can hit the
// same copy twice; both incidences count.
std::vector<int64_t> copy_degrees(const ReducedInstance& R);

struct BoundResult {
  ReducedInstance bounded;        // offending constraint copies replaced by always-false
  std::vector<int64_t> degs_bdd;  // incidence degrees among surviving copies
  int64_t replaced = 0;
};

// Replaces every constraint copy adjacent to a copy of degree > cap with a
// dummy that always fails, on the same positions. Degrees of all copies
// adjacent to replaced constraints drop accordingly.
BoundResult bound_degree(const ReducedInstance& R, int64_t cap);

// Flattens the reduced instance into a plain Instance over the global copy
// ids, for brute-force value comparisons.
Instance reduced_to_instance(const ReducedInstance& R);

// Text dump in the instance format with copy ids rendered v<parent>.<copy>.
std::string dump_reduced_text(const ReducedInstance& R);

}  // namespace cspstream
