#include "cspstream/offline.hpp"

#include <algorithm>

#include "cspstream/reservoir.hpp"

namespace cspstream {

KWiseHash make_sampling_hash(const ResolvedParams& P, const RandomTape& tape) {
  return KWiseHash(tape, static_cast<uint64_t>(P.n), static_cast<uint64_t>(P.hash_range),
                   P.hash_wise);
}

std::vector<char> offline_sample(const ReducedInstance& R, const ResolvedParams& P,
                                 const KWiseHash& H, const RandomTape& tape) {
  std::vector<char> in(static_cast<size_t>(R.total_copies), 0);
  for (int32_t v = 0; v < R.n_orig; ++v) {
    int64_t dt = R.dtilde[static_cast<size_t>(v)];
    if (R.tier[static_cast<size_t>(v)] == Tier::Low) {
      if (H(static_cast<uint64_t>(v)) != 1) continue;
      for (int64_t j = 1; j <= dt; ++j)
        in[static_cast<size_t>(R.global_copy(v, j))] = 1;
    } else {
      for (int64_t j = 1; j <= dt; ++j)
        if (tape.bernoulli(P.inv_range, RandomTape::Ns::CopySample, static_cast<uint64_t>(v),
                           static_cast<uint64_t>(j)))
          in[static_cast<size_t>(R.global_copy(v, j))] = 1;
    }
  }
  return in;
}

std::vector<std::pair<int64_t, int64_t>> cset_fisher_yates(int64_t m, int64_t B, int64_t size,
                                                           const RandomTape& tape) {
  int64_t total = m * B;
  size = std::min(size, total);
  std::vector<int64_t> idx(static_cast<size_t>(total));
  for (int64_t t = 0; t < total; ++t) idx[static_cast<size_t>(t)] = t;
  std::vector<std::pair<int64_t, int64_t>> out;
  out.reserve(static_cast<size_t>(size));
  for (int64_t t = 0; t < size; ++t) {
    int64_t r = t + static_cast<int64_t>(tape.uniform_int(static_cast<uint64_t>(total - t),
                                                          RandomTape::Ns::Reservoir, 0xf15e,
                                                          static_cast<uint64_t>(t)));
    std::swap(idx[static_cast<size_t>(t)], idx[static_cast<size_t>(r)]);
    out.emplace_back(idx[static_cast<size_t>(t)] / B, idx[static_cast<size_t>(t)] % B);
  }
  return out;
}

std::vector<std::pair<int64_t, int64_t>> cset_reservoir_replay(int64_t m, int64_t B, int64_t size,
                                                               const RandomTape& tape) {
  Reservoir<std::pair<int64_t, int64_t>> res(static_cast<uint64_t>(std::min(size, m * B)));
  for (int64_t i = 0; i < m; ++i)
    for (int64_t l = 0; l < B; ++l) res.update({i, l}, tape);
  return res.slots();
}

AggregateResult aggregate(SubInstance sub, std::vector<std::pair<int64_t, int64_t>> cset,
                          const ResolvedParams& P, const ALocMap& aloc) {
  if (cset.empty()) throw std::invalid_argument("aggregate needs a nonempty center set");
  if (sub.degs.size() != sub.copies.size())
    throw std::invalid_argument("degree record missing for a stored copy");

  apply_degree_bound(sub, P.degree_cap);
  Adjacency adj = build_adjacency(sub);

  std::sort(cset.begin(), cset.end());

  AggregateResult res;
  res.centers = static_cast<int64_t>(cset.size());
  double total = 0.0;
  for (const auto& [i, l] : cset) {
    int32_t cc = sub.find_ccopy(i, l);
    if (cc < 0) continue;  // center not stored: contributes 0
    if (sub.preds.at(sub.ccopies[static_cast<size_t>(cc)].pred).trivially_false())
      continue;  // dummy centers always fail
    if (!ball_is_fully_sampled(sub, adj, cc, P.radius)) continue;
    NeighborhoodBall ball = extract_ball(sub, adj, cc, P.radius);
    int64_t T = count_dependencies(sub, ball);
    auto [ball_inst, center_idx] = ball_to_instance(sub, ball);
    double value = aloc(ball_inst, center_idx);
    double scale = 1.0;
    for (int64_t t = 0; t < T; ++t) scale *= static_cast<double>(P.hash_range);
    total += value * scale;
    ++res.contributing;
  }
  res.out = total / static_cast<double>(res.centers);
  return res;
}

OfflineResult offline_estimate(const Instance& I, const EstimatorConfig& cfg,
                               const AdversaryPolicy& policy, const ALocMap& aloc) {
  if (cfg.alpha < 0)
    throw std::invalid_argument("estimator needs an explicit integrality gap alpha");
  ResolvedParams P = resolve_params(cfg, I);
  RandomTape tape(cfg.seed);

  OfflineResult res;
  res.tiers = decide_tiers(I, P, policy, tape);

  CopyAssigner assigner = default_copy_assigner(tape);
  std::vector<std::vector<int64_t>> sampled_of;   // per high var: sorted sampled copy indices
  std::vector<std::vector<int64_t>> missed_of;    // complements
  if (res.tiers.coupled) {
    // Realize the shared randomness the same way the streaming reduction
    // does, so that surviving positions and their copies coincide whenever
    // the coupling claims hold.
    sampled_of.resize(static_cast<size_t>(I.n));
    missed_of.resize(static_cast<size_t>(I.n));
    for (int32_t v = 0; v < I.n; ++v) {
      if (res.tiers.tier[static_cast<size_t>(v)] != Tier::High) continue;
      int64_t dt = res.tiers.dtilde[static_cast<size_t>(v)];
      for (int64_t j = 1; j <= dt; ++j) {
        if (tape.bernoulli(P.inv_range, RandomTape::Ns::CopySample, static_cast<uint64_t>(v),
                           static_cast<uint64_t>(j)))
          sampled_of[static_cast<size_t>(v)].push_back(j);
        else
          missed_of[static_cast<size_t>(v)].push_back(j);
      }
    }
    assigner = [&tape, &P, &res, &sampled_of, &missed_of](int64_t i, int64_t l, int t,
                                                          int32_t parent, int64_t dt) -> int64_t {
      if (res.tiers.tier[static_cast<size_t>(parent)] == Tier::Low)
        return static_cast<int64_t>(
            tape.uniform_int(static_cast<uint64_t>(dt), RandomTape::Ns::CopyAssign,
                             static_cast<uint64_t>(i), static_cast<uint64_t>(l),
                             static_cast<uint64_t>(t), 0));
      const auto& S = sampled_of[static_cast<size_t>(parent)];
      const auto& M = missed_of[static_cast<size_t>(parent)];
      int64_t jv = static_cast<int64_t>(S.size());
      double p_keep = jv == 0 ? 0.0
                              : static_cast<double>(jv) /
                                    (static_cast<double>(dt) * P.g_prob);
      if (p_keep > 1.0) {
        // The streaming side terminates here; fall back to a plain uniform
        // draw so the offline law stays intact.
        return static_cast<int64_t>(
            tape.uniform_int(static_cast<uint64_t>(dt), RandomTape::Ns::CopyAssign,
                             static_cast<uint64_t>(i), static_cast<uint64_t>(l),
                             static_cast<uint64_t>(t), 2));
      }
      bool g2 = tape.bernoulli(P.g_prob, RandomTape::Ns::G, static_cast<uint64_t>(i),
                               static_cast<uint64_t>(l), static_cast<uint64_t>(t));
      bool keep = g2 && tape.bernoulli(p_keep, RandomTape::Ns::Resample, static_cast<uint64_t>(i),
                                       static_cast<uint64_t>(l), static_cast<uint64_t>(t));
      if (keep) {
        uint64_t cr = tape.uniform_int(static_cast<uint64_t>(jv), RandomTape::Ns::CopyAssign,
                                       static_cast<uint64_t>(i), static_cast<uint64_t>(l),
                                       static_cast<uint64_t>(t), 0);
        return S[static_cast<size_t>(cr)] - 1;
      }
      uint64_t miss = tape.uniform_int(static_cast<uint64_t>(M.size()), RandomTape::Ns::CopyAssign,
                                       static_cast<uint64_t>(i), static_cast<uint64_t>(l),
                                       static_cast<uint64_t>(t), 1);
      return M[static_cast<size_t>(miss)] - 1;
    };
  }

  res.reduced = trevisan_reduce(I, P.B, res.tiers, assigner);

  KWiseHash H = make_sampling_hash(P, tape);
  res.in_sample = offline_sample(res.reduced, P, H, tape);

  int64_t want = P.cset_capacity;
  int64_t total = res.reduced.m_orig * res.reduced.B;
  res.cset_clamped = want > total;
  res.cset = res.tiers.coupled
                 ? cset_reservoir_replay(res.reduced.m_orig, res.reduced.B, want, tape)
                 : cset_fisher_yates(res.reduced.m_orig, res.reduced.B, want, tape);

  SubInstance sub = induce_sample(res.reduced, res.in_sample);
  res.agg = aggregate(std::move(sub), res.cset, P, aloc);
  res.out = res.agg.out;
  res.vtilde = P.scale_factor() * res.out;
  return res;
}

}  // namespace cspstream
