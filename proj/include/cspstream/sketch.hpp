#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hashing.hpp"
#include "offline.hpp"
#include "reservoir.hpp"

namespace cspstream {

// One stream element: the constraint plus its identity in the instance.
// Identities make the sketch's structural keying (and therefore its
// order-invariance) testable under stream permutations.
struct StreamItem {
  int64_t id = 0;
  const Constraint* c = nullptr;
  const Predicate* pred = nullptr;
};

std::vector<StreamItem> stream_of(const Instance& I);
std::vector<StreamItem> permuted_stream(const Instance& I, const std::vector<int64_t>& order);

// Everything the single pass keeps: hash-sampled variables S with their
// per-copy-position degree counters, stored constraint copies F, the
// position samples G (rate 2/R) and Gtilde (rate 1/R), and the reservoir C.
struct Sketch {
  std::optional<KWiseHash> H;
  std::unordered_set<int32_t> S;
  std::unordered_map<int32_t, int64_t> degs;  // B * (adjacent positions), per Alg-style per-copy counting

  PredicateRegistry preds;
  std::map<int64_t, Constraint> stored;  // constraint data for ids referenced by F

  std::vector<std::pair<int64_t, int64_t>> F;  // stored copies (i,l), insertion order
  std::set<std::pair<int64_t, int64_t>> F_set;

  struct PosRec {
    int64_t i = 0;
    int64_t l = 0;
    int t = 0;
    int32_t v = 0;
  };
  std::vector<PosRec> G;
  std::vector<PosRec> Gt;

  Reservoir<std::pair<int64_t, int64_t>> C{1};

  int64_t m_seen = 0;
  int64_t peak_entries = 0;
  bool cap_exceeded = false;

  int64_t live_entries() const {
    return static_cast<int64_t>(S.size()) + static_cast<int64_t>(degs.size()) +
           static_cast<int64_t>(F.size()) + static_cast<int64_t>(G.size()) +
           static_cast<int64_t>(Gt.size()) + static_cast<int64_t>(C.filled());
  }
};

// The single forward pass. With enforce_cap the sketch throws when the
// live-entry meter exceeds P.space_cap; otherwise it sets cap_exceeded and
// keeps going (the m-guessing wrapper terminates such copies itself).
Sketch sketch_stream(const std::vector<StreamItem>& stream, const ResolvedParams& P,
                     const RandomTape& tape, bool enforce_cap = true);

struct StreamingReductionResult {
  SubInstance sub;
  bool terminated = false;               // a retention probability exceeded 1
  std::vector<int32_t> high_vars;        // parents handled through G
  std::unordered_map<int32_t, int64_t> dtilde_on;  // per variable seen by the reduction
  std::unordered_map<int32_t, int64_t> jv;         // sampled copy count per high variable
};

// Rebuilds the sampled portion of the reduced instance from the sketch:
// low-degree variables in S get all their copies with every stored adjacent
// position assigned uniformly; high-degree variables get simulated copy
// samples with their G positions re-sampled at rate jv/(dtilde * gprob).
StreamingReductionResult streaming_reduction(const Sketch& sk, const ResolvedParams& P,
                                             const RandomTape& tape);

struct StreamingResult {
  enum class Status { Ok, Terminated, CapExceeded };
  Status status = Status::Ok;
  double vtilde = 0.0;
  double out = 0.0;
  int64_t peak_entries = 0;
  AggregateResult agg;
  StreamingReductionResult reduction;
  std::vector<std::pair<int64_t, int64_t>> cset;
  std::unordered_set<int32_t> hash_sampled;  // the sketch's S
};

StreamingResult streaming_estimate(const std::vector<StreamItem>& stream, int32_t n,
                                   const EstimatorConfig& cfg, const ALocMap& aloc,
                                   bool enforce_cap = true);
StreamingResult streaming_estimate(const Instance& I, const EstimatorConfig& cfg,
                                   const ALocMap& aloc, bool enforce_cap = true);

struct MGuessResult {
  double vtilde = 0.0;
  int chosen_copy = -1;
  int64_t true_m = 0;
  std::vector<int64_t> copy_peaks;      // live-entry peaks of surviving copies
  std::vector<char> copy_terminated;    // cap violations / terminations per copy
};

// Runs log-many sketch copies, copy i assuming m in [2^i, 2^{i+1}); copies
// whose guess is far too small thin the stream and get capped, and the copy
// whose interval contains the true m reports the estimate.
MGuessResult m_guess_wrapper(const Instance& I, const EstimatorConfig& cfg, const ALocMap& aloc,
                             int max_log = 24);

}  // namespace cspstream
