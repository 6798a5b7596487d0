#include "cspstream/sketch.hpp"

#include <algorithm>
#include <cmath>

namespace cspstream {

std::vector<StreamItem> stream_of(const Instance& I) {
  std::vector<StreamItem> s;
  s.reserve(I.constraints.size());
  for (size_t i = 0; i < I.constraints.size(); ++i)
    s.push_back({static_cast<int64_t>(i), &I.constraints[i], &I.preds.at(I.constraints[i].pred)});
  return s;
}

std::vector<StreamItem> permuted_stream(const Instance& I, const std::vector<int64_t>& order) {
  if (order.size() != I.constraints.size())
    throw std::invalid_argument("permutation length does not match constraint count");
  std::vector<StreamItem> s;
  s.reserve(order.size());
  for (int64_t id : order) {
    const Constraint& c = I.constraints[static_cast<size_t>(id)];
    s.push_back({id, &c, &I.preds.at(c.pred)});
  }
  return s;
}

Sketch sketch_stream(const std::vector<StreamItem>& stream, const ResolvedParams& P,
                     const RandomTape& tape, bool enforce_cap) {
  Sketch sk;
  sk.H.emplace(make_sampling_hash(P, tape));
  sk.C = Reservoir<std::pair<int64_t, int64_t>>(static_cast<uint64_t>(P.cset_capacity));

  for (const StreamItem& item : stream) {
    ++sk.m_seen;
    const Constraint& c = *item.c;
    const int64_t i = item.id;
    const int k = static_cast<int>(c.vars.size());

    for (int t = 0; t < k; ++t) {
      int32_t v = c.vars[static_cast<size_t>(t)];
      if ((*sk.H)(static_cast<uint64_t>(v)) == 1 && !sk.S.count(v)) {
        sk.S.insert(v);
        sk.degs[v] = 0;
      }
    }

    bool referenced = false;
    for (int64_t l = 0; l < P.B; ++l) {
      sk.C.update({i, l}, tape);
      bool keep = false;
      for (int t = 0; t < k; ++t) {
        int32_t v = c.vars[static_cast<size_t>(t)];
        if (tape.bernoulli(P.g_prob, RandomTape::Ns::G, static_cast<uint64_t>(i),
                           static_cast<uint64_t>(l), static_cast<uint64_t>(t))) {
          sk.G.push_back({i, l, t, v});
          keep = true;
        }
        if (tape.bernoulli(P.inv_range, RandomTape::Ns::Gtilde, static_cast<uint64_t>(i),
                           static_cast<uint64_t>(l), static_cast<uint64_t>(t)))
          sk.Gt.push_back({i, l, t, v});
        if (auto it = sk.degs.find(v); it != sk.degs.end()) {
          ++it->second;
          keep = true;
        }
      }
      if (keep) {
        sk.F.emplace_back(i, l);
        sk.F_set.emplace(i, l);
        referenced = true;
      }
    }
    if (referenced && !sk.stored.count(i)) {
      Constraint copy = c;
      copy.pred = sk.preds.add(*item.pred);
      sk.stored.emplace(i, std::move(copy));
    }

    sk.peak_entries = std::max(sk.peak_entries, sk.live_entries());
    if (sk.peak_entries > P.space_cap) {
      sk.cap_exceeded = true;
      if (enforce_cap) throw std::runtime_error("sketch exceeded its space cap");
    }
  }
  return sk;
}

StreamingReductionResult streaming_reduction(const Sketch& sk, const ResolvedParams& P,
                                             const RandomTape& tape) {
  StreamingReductionResult res;
  SubInstance& sub = res.sub;
  sub.sigma = 0;
  sub.B = P.B;
  sub.m_orig = sk.m_seen;

  std::unordered_map<int32_t, int64_t> deg_gt;
  for (const auto& rec : sk.Gt) ++deg_gt[rec.v];
  auto gt_of = [&deg_gt](int32_t v) {
    auto it = deg_gt.find(v);
    return it == deg_gt.end() ? int64_t{0} : it->second;
  };

  // Low-degree variables: everything adjacent is stored, so all copies are
  // materialized and each stored position gets a uniform copy.
  std::vector<int32_t> low_vars;
  for (int32_t v : sk.S)
    if (static_cast<double>(gt_of(v)) <= P.nq) low_vars.push_back(v);
  std::sort(low_vars.begin(), low_vars.end());
  for (int32_t v : low_vars) {
    int64_t counted = sk.degs.at(v);
    if (counted % P.B != 0)
      throw std::logic_error("per-copy degree counter is not a multiple of B");
    int64_t ncopies = counted / P.B;
    res.dtilde_on[v] = ncopies;
    for (int64_t j = 1; j <= ncopies; ++j) sub.add_copy(v, j, Tier::Low, 0);
  }

  // High-degree variables: simulate the 1/R copy sampling, then thin the G
  // positions at rate jv / (dtilde * gprob) and spread them uniformly.
  std::unordered_map<int32_t, std::vector<int64_t>> g_by_var;  // v -> indices into sk.G
  for (size_t gi = 0; gi < sk.G.size(); ++gi) {
    int32_t v = sk.G[gi].v;
    if (static_cast<double>(gt_of(v)) > P.nq) g_by_var[v].push_back(static_cast<int64_t>(gi));
  }
  std::vector<int32_t> high_vars;
  high_vars.reserve(g_by_var.size());
  for (const auto& [v, _] : g_by_var) high_vars.push_back(v);
  std::sort(high_vars.begin(), high_vars.end());
  res.high_vars = high_vars;

  struct PendingAssign {
    int64_t i, l;
    int t;
    int32_t copy_local;
  };
  std::vector<PendingAssign> assigned;

  for (int32_t v : high_vars) {
    int64_t dt = std::max<int64_t>(
        1, std::llround(static_cast<double>(gt_of(v)) * static_cast<double>(P.hash_range) /
                        static_cast<double>(P.B)));
    res.dtilde_on[v] = dt;
    int64_t jv = 0;
    std::vector<int32_t> online_copies;  // local ids, creation order
    for (int64_t j = 1; j <= dt; ++j) {
      if (tape.bernoulli(P.inv_range, RandomTape::Ns::CopySample, static_cast<uint64_t>(v),
                         static_cast<uint64_t>(j))) {
        ++jv;
        online_copies.push_back(sub.add_copy(v, jv, Tier::High, 0));
      }
    }
    res.jv[v] = jv;

    double p_keep = jv == 0 ? 0.0
                            : static_cast<double>(jv) / (static_cast<double>(dt) * P.g_prob);
    if (p_keep > 1.0) {
      res.terminated = true;
      return res;
    }
    for (int64_t gi : g_by_var[v]) {
      const auto& rec = sk.G[static_cast<size_t>(gi)];
      if (!tape.bernoulli(p_keep, RandomTape::Ns::Resample, static_cast<uint64_t>(rec.i),
                          static_cast<uint64_t>(rec.l), static_cast<uint64_t>(rec.t)))
        continue;
      uint64_t cr = tape.uniform_int(static_cast<uint64_t>(jv), RandomTape::Ns::CopyAssign,
                                     static_cast<uint64_t>(rec.i), static_cast<uint64_t>(rec.l),
                                     static_cast<uint64_t>(rec.t), 0);
      int32_t local = online_copies[static_cast<size_t>(cr)];
      ++sub.degs[static_cast<size_t>(local)];
      assigned.push_back({rec.i, rec.l, rec.t, local});
    }
  }

  std::map<std::pair<std::pair<int64_t, int64_t>, int>, int32_t> high_assign;
  for (const auto& a : assigned) high_assign[{{a.i, a.l}, a.t}] = a.copy_local;

  std::unordered_map<int32_t, char> low_in_s;
  for (int32_t v : low_vars) low_in_s[v] = 1;

  // Assemble the surviving constraint copies from F, in canonical order.
  std::vector<std::pair<int64_t, int64_t>> f_sorted(sk.F_set.begin(), sk.F_set.end());
  for (const auto& [i, l] : f_sorted) {
    const Constraint& c = sk.stored.at(i);
    const Predicate& pred = sk.preds.at(c.pred);
    if (sub.sigma == 0) sub.sigma = pred.alphabet_size();
    const int k = static_cast<int>(c.vars.size());
    std::vector<int32_t> pos(static_cast<size_t>(k), -1);
    for (int t = 0; t < k; ++t) {
      int32_t v = c.vars[static_cast<size_t>(t)];
      if (low_in_s.count(v)) {
        int64_t ncopies = res.dtilde_on.at(v);
        uint64_t j = tape.uniform_int(static_cast<uint64_t>(ncopies), RandomTape::Ns::CopyAssign,
                                      static_cast<uint64_t>(i), static_cast<uint64_t>(l),
                                      static_cast<uint64_t>(t), 0);
        int32_t local = sub.find_copy(v, static_cast<int64_t>(j) + 1);
        pos[static_cast<size_t>(t)] = local;
        ++sub.degs[static_cast<size_t>(local)];
      } else if (auto it = high_assign.find({{i, l}, t}); it != high_assign.end()) {
        pos[static_cast<size_t>(t)] = it->second;
      }
    }
    if (std::any_of(pos.begin(), pos.end(), [](int32_t p) { return p < 0; })) continue;
    SubInstance::CC scc;
    scc.i = i;
    scc.l = l;
    scc.pred = sub.preds.add(pred);
    scc.pos = std::move(pos);
    sub.ccopy_lookup.emplace(SubInstance::cc_key(i, l), static_cast<int32_t>(sub.ccopies.size()));
    sub.ccopies.push_back(std::move(scc));
  }
  if (sub.sigma == 0) sub.sigma = 2;
  return res;
}

StreamingResult streaming_estimate(const std::vector<StreamItem>& stream, int32_t n,
                                   const EstimatorConfig& cfg, const ALocMap& aloc,
                                   bool enforce_cap) {
  if (cfg.alpha < 0)
    throw std::invalid_argument("estimator needs an explicit integrality gap alpha");
  int k = 1, sigma = 2;
  for (const auto& item : stream) {
    k = std::max(k, item.pred->arity());
    sigma = item.pred->alphabet_size();
  }
  ResolvedParams P = resolve_params(cfg, n, static_cast<int64_t>(stream.size()), k, sigma);
  RandomTape tape(cfg.seed);

  StreamingResult res;
  Sketch sk = sketch_stream(stream, P, tape, enforce_cap);
  res.peak_entries = sk.peak_entries;
  if (sk.cap_exceeded) {
    res.status = StreamingResult::Status::CapExceeded;
    return res;
  }
  res.hash_sampled = sk.S;
  res.reduction = streaming_reduction(sk, P, tape);
  if (res.reduction.terminated) {
    res.status = StreamingResult::Status::Terminated;
    return res;
  }
  res.cset = sk.C.slots();
  res.agg = aggregate(res.reduction.sub, res.cset, P, aloc);
  res.out = res.agg.out;
  res.vtilde = P.scale_factor() * res.out;
  return res;
}

StreamingResult streaming_estimate(const Instance& I, const EstimatorConfig& cfg,
                                   const ALocMap& aloc, bool enforce_cap) {
  return streaming_estimate(stream_of(I), I.n, cfg, aloc, enforce_cap);
}

MGuessResult m_guess_wrapper(const Instance& I, const EstimatorConfig& cfg, const ALocMap& aloc,
                             int max_log) {
  MGuessResult res;
  res.true_m = I.m();
  if (res.true_m < 1) throw std::invalid_argument("m-guessing needs a nonempty stream");

  int chosen = 0;
  while ((int64_t{1} << (chosen + 1)) <= res.true_m) ++chosen;
  res.chosen_copy = chosen;

  // A guess far above the linear regime thins the stream to keep the
  // constraint count proportional to n.
  double linear_cap = std::max<double>(static_cast<double>(I.n),
                                       4.0 * static_cast<double>(I.n) /
                                           (cfg.epsilon * cfg.epsilon));

  res.copy_peaks.assign(static_cast<size_t>(max_log) + 1, 0);
  res.copy_terminated.assign(static_cast<size_t>(max_log) + 1, 0);

  double vtilde = 0.0;
  bool have = false;
  for (int i = 0; i <= max_log; ++i) {
    EstimatorConfig copy_cfg = cfg;
    RandomTape base(cfg.seed);
    copy_cfg.seed = base.fork(static_cast<uint64_t>(i)).seed();
    double guess = std::pow(2.0, i);
    double p = std::min(1.0, linear_cap / guess);
    Instance thinned = p < 1.0
                           ? subsample_constraints(I, p, RandomTape(copy_cfg.seed))
                           : I;
    if (thinned.m() == 0) {
      res.copy_terminated[static_cast<size_t>(i)] = 1;
      continue;
    }
    StreamingResult r = streaming_estimate(thinned, copy_cfg, aloc, /*enforce_cap=*/false);
    res.copy_peaks[static_cast<size_t>(i)] = r.peak_entries;
    if (r.status != StreamingResult::Status::Ok) {
      res.copy_terminated[static_cast<size_t>(i)] = 1;
      continue;
    }
    if (i == chosen) {
      vtilde = r.vtilde;
      have = true;
    }
  }
  if (!have)
    throw std::runtime_error(
        "the m-guess copy covering the true stream length was terminated: cap misconfiguration");
  res.vtilde = vtilde;
  return res;
}

}  // namespace cspstream
