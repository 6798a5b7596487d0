#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "reduced.hpp"

namespace cspstream {

// A stored portion of a reduced instance together with the recorded degree
// of every present variable copy. Both the offline estimator (the induced
// instance on sampled copies) and the streaming reduction produce this
// shape, and aggregation consumes it.
struct SubInstance {
  int sigma = 2;
  int64_t B = 0;
  int64_t m_orig = 0;
  PredicateRegistry preds;

  struct Copy {
    int32_t parent = 0;
    int64_t index = 0;  // 1-based copy index
    Tier tier = Tier::Low;
  };
  std::vector<Copy> copies;
  std::unordered_map<uint64_t, int32_t> copy_lookup;

  struct CC {
    int64_t i = 0;
    int64_t l = 0;
    int pred = 0;
    std::vector<int32_t> pos;  // local copy ids, one per position
  };
  std::vector<CC> ccopies;  // canonical order: (i, l) ascending
  std::unordered_map<uint64_t, int32_t> ccopy_lookup;

  // Recorded degree per local copy: the pre-sampling incidence count in the
  // full reduced instance (the degs' map of the estimators).
  std::vector<int64_t> degs;

  static uint64_t copy_key(int32_t parent, int64_t index) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(parent)) << 32) ^
           static_cast<uint64_t>(index);
  }
  static uint64_t cc_key(int64_t i, int64_t l) {
    return (static_cast<uint64_t>(i) << 24) ^ static_cast<uint64_t>(l);
  }

  int32_t add_copy(int32_t parent, int64_t index, Tier tier, int64_t deg_record) {
    int32_t id = static_cast<int32_t>(copies.size());
    copies.push_back({parent, index, tier});
    degs.push_back(deg_record);
    copy_lookup.emplace(copy_key(parent, index), id);
    return id;
  }

  int32_t find_copy(int32_t parent, int64_t index) const {
    auto it = copy_lookup.find(copy_key(parent, index));
    return it == copy_lookup.end() ? -1 : it->second;
  }
  int32_t find_ccopy(int64_t i, int64_t l) const {
    auto it = ccopy_lookup.find(cc_key(i, l));
    return it == ccopy_lookup.end() ? -1 : it->second;
  }
};

// The induced instance on the sampled copy set: constraint copies all of
// whose positions are sampled, with recorded degrees taken from the full
// reduction.
SubInstance induce_sample(const ReducedInstance& R, const std::vector<char>& in_sample);

// Everything sampled; recorded degrees are the true incidence degrees.
SubInstance full_view(const ReducedInstance& R);

// The degree-bounding step of aggregation: constraint copies adjacent to a
// copy with recorded degree > cap become always-false dummies, and the
// recorded degrees of copies adjacent to replaced constraints drop by the
// lost incidences. Returns the number of replaced constraint copies.
int64_t apply_degree_bound(SubInstance& sub, int64_t cap);

}  // namespace cspstream
