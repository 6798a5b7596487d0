#pragma once

#include "offline.hpp"
#include "sketch.hpp"

namespace cspstream {

// Per-claim agreement report for one paired run. The first block mirrors
// the coupling construction (claims that hold by shared randomness unless
// a failure event fires); the second block records the failure events
// themselves. A mismatch is data, not an error.
struct CouplingDiagnostics {
  bool hash_agree = true;
  bool reservoir_agree = true;
  bool tier_agree = true;
  bool dtilde_agree = true;
  bool copysample_agree = true;
  bool assignment_isomorphic = true;
  bool degs_agree = true;

  bool band_violation = false;  // coupled dtilde left the (1 +- eps_adv) band
  bool terminated = false;      // streaming retention probability exceeded 1
  bool cap_exceeded = false;    // streaming sketch hit its space cap
  bool degs_mismatch = false;   // per-position counts vs count-once degrees (repeated vars)

  bool any_claim_failure() const {
    return band_violation || terminated || cap_exceeded || degs_mismatch;
  }
};

struct CoupledResult {
  double off_out = 0.0;
  double on_out = 0.0;
  double off_vtilde = 0.0;
  double on_vtilde = 0.0;
  bool matched = false;  // bit-exact Out equality with both sides completing
  CouplingDiagnostics diag;
};

// Runs the offline estimator (coupled-Gtilde adversary, reservoir-replayed
// center set) and the streaming estimator on the same instance and tape
// seed, then compares outputs and checks each coupling claim.
CoupledResult coupled_run(const Instance& I, const EstimatorConfig& cfg, uint64_t seed,
                          const ALocMap& aloc);

}  // namespace cspstream
