#include "cspstream/coupling.hpp"

#include <algorithm>
#include <set>

namespace cspstream {

CoupledResult coupled_run(const Instance& I, const EstimatorConfig& cfg, uint64_t seed,
                          const ALocMap& aloc) {
  EstimatorConfig run_cfg = cfg;
  run_cfg.seed = seed;
  ResolvedParams P = resolve_params(run_cfg, I);
  RandomTape tape(seed);

  CoupledResult res;
  OfflineResult off = offline_estimate(I, run_cfg, AdversaryPolicy::coupled_gtilde(), aloc);
  StreamingResult on = streaming_estimate(I, run_cfg, aloc, /*enforce_cap=*/false);

  res.off_out = off.out;
  res.off_vtilde = off.vtilde;
  res.diag.band_violation = !off.tiers.band_violations.empty();
  res.diag.terminated = on.status == StreamingResult::Status::Terminated;
  res.diag.cap_exceeded = on.status == StreamingResult::Status::CapExceeded;

  // Low-degree variables have dtilde = deg(v) offline but per-position
  // counts online; both sides can only agree when those coincide.
  for (int32_t v = 0; v < I.n; ++v) {
    int64_t positions = 0;
    for (const auto& c : I.constraints)
      positions += static_cast<int64_t>(std::count(c.vars.begin(), c.vars.end(), v));
    if (positions != off.tiers.deg[static_cast<size_t>(v)]) {
      res.diag.degs_mismatch = true;
      break;
    }
  }

  if (on.status != StreamingResult::Status::Ok) {
    res.matched = false;
    return res;
  }
  res.on_out = on.out;
  res.on_vtilde = on.vtilde;

  // Hash agreement: the offline-side H against the sketch's sampled set,
  // over the variables that actually appear in the stream.
  KWiseHash h_off = make_sampling_hash(P, tape);
  for (int32_t v = 0; v < I.n && res.diag.hash_agree; ++v) {
    if (off.tiers.deg[static_cast<size_t>(v)] == 0) continue;
    bool off_hit = h_off(static_cast<uint64_t>(v)) == 1;
    bool on_hit = on.hash_sampled.count(v) != 0;
    if (off_hit != on_hit) res.diag.hash_agree = false;
  }

  // Reservoir agreement: the offline replay against the sketch's reservoir.
  {
    std::set<std::pair<int64_t, int64_t>> off_set(off.cset.begin(), off.cset.end());
    std::set<std::pair<int64_t, int64_t>> on_set(on.cset.begin(), on.cset.end());
    res.diag.reservoir_agree = off_set == on_set;
  }

  // Tier and dtilde agreement over the variables the reduction touched.
  const auto& tiers = off.tiers;
  std::set<int32_t> on_high(on.reduction.high_vars.begin(), on.reduction.high_vars.end());
  for (const auto& [v, dt_on] : on.reduction.dtilde_on) {
    Tier t_off = tiers.tier[static_cast<size_t>(v)];
    bool high_on = on_high.count(v) != 0;
    if ((t_off == Tier::High) != high_on) res.diag.tier_agree = false;
    if (tiers.dtilde[static_cast<size_t>(v)] != dt_on) res.diag.dtilde_agree = false;
  }

  // Copy-sample agreement: the simulated per-copy draws, replayed.
  for (int32_t v : on.reduction.high_vars) {
    int64_t dt = tiers.dtilde[static_cast<size_t>(v)];
    if (on.reduction.dtilde_on.at(v) != dt) continue;  // already flagged above
    int64_t jv = 0;
    for (int64_t j = 1; j <= dt; ++j)
      if (tape.bernoulli(P.inv_range, RandomTape::Ns::CopySample, static_cast<uint64_t>(v),
                         static_cast<uint64_t>(j)))
        ++jv;
    if (jv != on.reduction.jv.at(v)) res.diag.copysample_agree = false;
  }

  // Assignment isomorphism: map online copies to offline copies (identity
  // for low tier, rank -> sampled index for high tier) and compare the two
  // stored sub-instances constraint copy by constraint copy.
  {
    const SubInstance& sub_on = on.reduction.sub;
    SubInstance sub_off = induce_sample(off.reduced, off.in_sample);

    std::map<int32_t, std::vector<int64_t>> sampled_of;  // high var -> rank -> offline index
    for (int32_t v : on.reduction.high_vars) {
      int64_t dt = tiers.dtilde[static_cast<size_t>(v)];
      auto& lst = sampled_of[v];
      for (int64_t j = 1; j <= dt; ++j)
        if (tape.bernoulli(P.inv_range, RandomTape::Ns::CopySample, static_cast<uint64_t>(v),
                           static_cast<uint64_t>(j)))
          lst.push_back(j);
    }
    auto map_copy = [&](int32_t local_on) -> std::pair<int32_t, int64_t> {
      const auto& c = sub_on.copies[static_cast<size_t>(local_on)];
      if (c.tier == Tier::Low) return {c.parent, c.index};
      const auto& lst = sampled_of.at(c.parent);
      if (c.index < 1 || c.index > static_cast<int64_t>(lst.size())) return {c.parent, -1};
      return {c.parent, lst[static_cast<size_t>(c.index - 1)]};
    };

    if (sub_on.ccopies.size() != sub_off.ccopies.size()) res.diag.assignment_isomorphic = false;
    for (const auto& cc : sub_on.ccopies) {
      int32_t off_id = sub_off.find_ccopy(cc.i, cc.l);
      if (off_id < 0) {
        res.diag.assignment_isomorphic = false;
        break;
      }
      const auto& occ = sub_off.ccopies[static_cast<size_t>(off_id)];
      if (occ.pos.size() != cc.pos.size()) {
        res.diag.assignment_isomorphic = false;
        break;
      }
      for (size_t t = 0; t < cc.pos.size(); ++t) {
        auto [pv, pj] = map_copy(cc.pos[t]);
        const auto& oc = sub_off.copies[static_cast<size_t>(occ.pos[t])];
        if (oc.parent != pv || oc.index != pj) {
          res.diag.assignment_isomorphic = false;
          break;
        }
        int64_t deg_on = sub_on.degs[static_cast<size_t>(cc.pos[t])];
        int64_t deg_off = sub_off.degs[static_cast<size_t>(occ.pos[t])];
        if (deg_on != deg_off) res.diag.degs_agree = false;
      }
      if (!res.diag.assignment_isomorphic) break;
    }
  }

  res.matched = res.off_out == res.on_out;
  return res;
}

}  // namespace cspstream
