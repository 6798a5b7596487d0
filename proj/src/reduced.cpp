#include "cspstream/reduced.hpp"

#include <cmath>
#include <sstream>

namespace cspstream {

TierDecision decide_tiers(const Instance& I, const ResolvedParams& P,
                          const AdversaryPolicy& policy, const RandomTape& tape) {
  TierDecision d;
  d.deg = degree_profile(I);
  d.dtilde.assign(static_cast<size_t>(I.n), 1);
  d.tier.assign(static_cast<size_t>(I.n), Tier::Low);
  d.coupled = policy.kind == AdversaryPolicy::Kind::CoupledGtilde;

  if (d.coupled) {
    // Replay the Gtilde draws over every (i,l,t) position, exactly the
    // draws the sketch makes.
    d.deg_gt.assign(static_cast<size_t>(I.n), 0);
    for (size_t i = 0; i < I.constraints.size(); ++i) {
      const auto& c = I.constraints[i];
      for (int64_t l = 0; l < P.B; ++l)
        for (size_t t = 0; t < c.vars.size(); ++t)
          if (tape.bernoulli(P.inv_range, RandomTape::Ns::Gtilde, static_cast<uint64_t>(i),
                             static_cast<uint64_t>(l), t))
            ++d.deg_gt[static_cast<size_t>(c.vars[t])];
    }
  }

  for (int32_t v = 0; v < I.n; ++v) {
    const int64_t deg = d.deg[static_cast<size_t>(v)];
    if (deg == 0) continue;  // no adjacent constraints; the copy is never referenced

    int64_t raw = 0;
    bool low = true;
    switch (policy.kind) {
      case AdversaryPolicy::Kind::Exact:
        raw = deg;
        low = static_cast<double>(raw) <= P.low_threshold;
        break;
      case AdversaryPolicy::Kind::CoupledGtilde: {
        int64_t dg = d.deg_gt[static_cast<size_t>(v)];
        raw = std::max<int64_t>(
            1, std::llround(static_cast<double>(dg) * static_cast<double>(P.hash_range) /
                            static_cast<double>(P.B)));
        // Same comparison the streaming reduction makes, so the two sides
        // can never disagree on the tier.
        low = static_cast<double>(dg) <= P.nq;
        break;
      }
      case AdversaryPolicy::Kind::WorstCaseRandom: {
        int64_t lo = std::max<int64_t>(
            1, static_cast<int64_t>(std::ceil((1.0 - P.eps_adv) * static_cast<double>(deg))));
        int64_t hi = std::max<int64_t>(
            lo, static_cast<int64_t>(std::floor((1.0 + P.eps_adv) * static_cast<double>(deg))));
        raw = lo + static_cast<int64_t>(tape.uniform_int(
                       static_cast<uint64_t>(hi - lo + 1), RandomTape::Ns::CopySample,
                       static_cast<uint64_t>(v), 0));
        low = static_cast<double>(raw) <= P.low_threshold;
        break;
      }
      case AdversaryPolicy::Kind::Custom:
        raw = policy.custom(v, deg);
        low = static_cast<double>(raw) <= P.low_threshold;
        break;
    }

    double band_lo = (1.0 - P.eps_adv) * static_cast<double>(deg);
    double band_hi = (1.0 + P.eps_adv) * static_cast<double>(deg);
    bool in_band = static_cast<double>(raw) >= band_lo && static_cast<double>(raw) <= band_hi;
    if (!in_band && !d.coupled)
      throw std::invalid_argument("adversary policy output outside the permitted band");

    if (low) {
      // The pick is discarded for low-degree variables, so a coupled
      // estimate drifting out of band here is harmless.
      d.tier[static_cast<size_t>(v)] = Tier::Low;
      d.dtilde[static_cast<size_t>(v)] = deg;
    } else {
      if (!in_band) {
        d.band_violations.push_back(v);
        // Any in-band value is a legal adversary; clamp and continue.
        int64_t clamped = raw;
        if (static_cast<double>(clamped) < band_lo)
          clamped = static_cast<int64_t>(std::ceil(band_lo));
        if (static_cast<double>(clamped) > band_hi)
          clamped = static_cast<int64_t>(std::floor(band_hi));
        raw = std::max<int64_t>(1, clamped);
      }
      d.tier[static_cast<size_t>(v)] = Tier::High;
      d.dtilde[static_cast<size_t>(v)] = raw;
    }
  }
  return d;
}

CopyAssigner default_copy_assigner(const RandomTape& tape) {
  return [&tape](int64_t i, int64_t l, int t, int32_t /*parent*/, int64_t dtilde) {
    return static_cast<int64_t>(tape.uniform_int(static_cast<uint64_t>(dtilde),
                                                 RandomTape::Ns::CopyAssign,
                                                 static_cast<uint64_t>(i),
                                                 static_cast<uint64_t>(l),
                                                 static_cast<uint64_t>(t), 0));
  };
}

ReducedInstance trevisan_reduce(const Instance& I, int64_t B, const TierDecision& dec,
                                const CopyAssigner& assign) {
  if (B < 1) throw std::invalid_argument("reduction needs B >= 1");
  ReducedInstance R;
  R.n_orig = I.n;
  R.m_orig = I.m();
  R.B = B;
  R.alphabet = I.alphabet;
  R.dtilde = dec.dtilde;
  R.tier = dec.tier;
  R.copy_offset.resize(static_cast<size_t>(I.n));
  int64_t off = 0;
  for (int32_t v = 0; v < I.n; ++v) {
    if (dec.deg[static_cast<size_t>(v)] >= 1 && R.dtilde[static_cast<size_t>(v)] < 1)
      throw std::invalid_argument("dtilde must be >= 1 for variables with positive degree");
    R.copy_offset[static_cast<size_t>(v)] = off;
    off += R.dtilde[static_cast<size_t>(v)];
  }
  R.total_copies = off;

  R.ccopies.reserve(static_cast<size_t>(I.m() * B));
  for (size_t i = 0; i < I.constraints.size(); ++i) {
    const auto& c = I.constraints[i];
    int pred = R.preds.add(I.preds.at(c.pred));
    for (int64_t l = 0; l < B; ++l) {
      ReducedInstance::CCopy cc;
      cc.i = static_cast<int64_t>(i);
      cc.l = l;
      cc.pred = pred;
      cc.parents = c.vars;
      cc.copy_idx.resize(c.vars.size());
      for (size_t t = 0; t < c.vars.size(); ++t) {
        int32_t v = c.vars[t];
        int64_t dt = R.dtilde[static_cast<size_t>(v)];
        int64_t j = assign(static_cast<int64_t>(i), l, static_cast<int>(t), v, dt);
        if (j < 0 || j >= dt) throw std::logic_error("copy assigner out of range");
        cc.copy_idx[t] = j + 1;
      }
      R.ccopies.push_back(std::move(cc));
    }
  }
  return R;
}

ReducedInstance trevisan_reduce(const Instance& I, const ResolvedParams& P,
                                const AdversaryPolicy& policy, const RandomTape& tape) {
  TierDecision dec = decide_tiers(I, P, policy, tape);
  return trevisan_reduce(I, P.B, dec, default_copy_assigner(tape));
}

std::vector<int64_t> copy_degrees(const ReducedInstance& R) {
  std::vector<int64_t> deg(static_cast<size_t>(R.total_copies), 0);
  for (const auto& cc : R.ccopies)
    for (size_t t = 0; t < cc.parents.size(); ++t)
      ++deg[static_cast<size_t>(R.global_copy(cc.parents[t], cc.copy_idx[t]))];
  return deg;
}

BoundResult bound_degree(const ReducedInstance& R, int64_t cap) {
  BoundResult res;
  res.bounded = R;
  // Always-false constraints count as already removed, so re-bounding a
  // bounded instance is a no-op.
  std::vector<int64_t> deg(static_cast<size_t>(R.total_copies), 0);
  for (const auto& cc : R.ccopies) {
    if (R.preds.at(cc.pred).trivially_false()) continue;
    for (size_t t = 0; t < cc.parents.size(); ++t)
      ++deg[static_cast<size_t>(R.global_copy(cc.parents[t], cc.copy_idx[t]))];
  }
  std::vector<char> bad(static_cast<size_t>(R.total_copies), 0);
  for (int64_t c = 0; c < R.total_copies; ++c)
    if (deg[static_cast<size_t>(c)] > cap) bad[static_cast<size_t>(c)] = 1;

  int dummy_pred = -1;
  for (auto& cc : res.bounded.ccopies) {
    if (res.bounded.preds.at(cc.pred).trivially_false()) continue;
    bool replace = false;
    for (size_t t = 0; t < cc.parents.size(); ++t)
      if (bad[static_cast<size_t>(R.global_copy(cc.parents[t], cc.copy_idx[t]))]) replace = true;
    if (!replace) continue;
    if (dummy_pred < 0 || res.bounded.preds.at(dummy_pred).arity() != static_cast<int>(cc.parents.size())) {
      std::vector<uint8_t> zeros(R.preds.at(cc.pred).table_size(), 0);
      dummy_pred = res.bounded.preds.add(
          Predicate(static_cast<int>(cc.parents.size()), R.alphabet.size, std::move(zeros)));
    }
    cc.pred = dummy_pred;
    ++res.replaced;
  }

  res.degs_bdd.assign(static_cast<size_t>(R.total_copies), 0);
  for (const auto& cc : res.bounded.ccopies) {
    if (res.bounded.preds.at(cc.pred).trivially_false()) continue;
    for (size_t t = 0; t < cc.parents.size(); ++t)
      ++res.degs_bdd[static_cast<size_t>(R.global_copy(cc.parents[t], cc.copy_idx[t]))];
  }
  return res;
}

Instance reduced_to_instance(const ReducedInstance& R) {
  Instance I;
  I.n = static_cast<int32_t>(R.total_copies);
  I.alphabet = R.alphabet;
  for (const auto& cc : R.ccopies) {
    Constraint c;
    c.pred = I.preds.add(R.preds.at(cc.pred));
    c.vars.resize(cc.parents.size());
    for (size_t t = 0; t < cc.parents.size(); ++t)
      c.vars[t] = static_cast<int32_t>(R.global_copy(cc.parents[t], cc.copy_idx[t]));
    I.constraints.push_back(std::move(c));
  }
  return I;
}

std::string dump_reduced_text(const ReducedInstance& R) {
  std::ostringstream os;
  int k = 0;
  for (int id = 0; id < R.preds.size(); ++id) k = std::max(k, R.preds.at(id).arity());
  os << "csp " << R.total_copies << ' ' << R.ccopies.size() << ' ' << R.alphabet.size << ' ' << k
     << '\n';
  for (int id = 0; id < R.preds.size(); ++id) {
    os << "pred " << id << ' ';
    for (uint8_t b : R.preds.at(id).table()) os << (b ? '1' : '0');
    os << '\n';
  }
  for (const auto& cc : R.ccopies) {
    os << "c " << cc.pred;
    for (size_t t = 0; t < cc.parents.size(); ++t)
      os << " v" << cc.parents[t] << '.' << cc.copy_idx[t];
    os << '\n';
  }
  for (int32_t v = 0; v < R.n_orig; ++v)
    for (int64_t j = 1; j <= R.dtilde[static_cast<size_t>(v)]; ++j)
      os << "tier v" << v << '.' << j << ' '
         << (R.tier[static_cast<size_t>(v)] == Tier::Low ? "low" : "high") << '\n';
  return os.str();
}

}  // namespace cspstream
