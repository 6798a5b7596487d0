#include "cspstream/local.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace cspstream {

SubInstance induce_sample(const ReducedInstance& R, const std::vector<char>& in_sample) {
  if (in_sample.size() != static_cast<size_t>(R.total_copies))
    throw std::invalid_argument("sample flags do not cover the reduced instance");
  std::vector<int64_t> full_deg = copy_degrees(R);

  SubInstance sub;
  sub.sigma = R.alphabet.size;
  sub.B = R.B;
  sub.m_orig = R.m_orig;
  for (int32_t v = 0; v < R.n_orig; ++v) {
    for (int64_t j = 1; j <= R.dtilde[static_cast<size_t>(v)]; ++j) {
      int64_t g = R.global_copy(v, j);
      if (!in_sample[static_cast<size_t>(g)]) continue;
      sub.add_copy(v, j, R.tier[static_cast<size_t>(v)], full_deg[static_cast<size_t>(g)]);
    }
  }
  for (const auto& cc : R.ccopies) {
    bool all = true;
    for (size_t t = 0; t < cc.parents.size() && all; ++t)
      if (!in_sample[static_cast<size_t>(R.global_copy(cc.parents[t], cc.copy_idx[t]))])
        all = false;
    if (!all) continue;
    SubInstance::CC scc;
    scc.i = cc.i;
    scc.l = cc.l;
    scc.pred = sub.preds.add(R.preds.at(cc.pred));
    scc.pos.resize(cc.parents.size());
    for (size_t t = 0; t < cc.parents.size(); ++t)
      scc.pos[t] = sub.find_copy(cc.parents[t], cc.copy_idx[t]);
    sub.ccopy_lookup.emplace(SubInstance::cc_key(cc.i, cc.l),
                             static_cast<int32_t>(sub.ccopies.size()));
    sub.ccopies.push_back(std::move(scc));
  }
  return sub;
}

SubInstance full_view(const ReducedInstance& R) {
  return induce_sample(R, std::vector<char>(static_cast<size_t>(R.total_copies), 1));
}

int64_t apply_degree_bound(SubInstance& sub, int64_t cap) {
  std::vector<char> bad(sub.copies.size(), 0);
  for (size_t c = 0; c < sub.copies.size(); ++c)
    if (sub.degs[c] > cap) bad[c] = 1;

  int64_t replaced = 0;
  std::map<int, int> dummy_by_arity;
  for (auto& cc : sub.ccopies) {
    bool hit = false;
    for (int32_t p : cc.pos)
      if (bad[static_cast<size_t>(p)]) hit = true;
    if (!hit) continue;
    const Predicate& pr = sub.preds.at(cc.pred);
    if (pr.trivially_false()) continue;  // already a dummy
    int arity = pr.arity();
    auto it = dummy_by_arity.find(arity);
    if (it == dummy_by_arity.end()) {
      std::vector<uint8_t> zeros(pr.table_size(), 0);
      it = dummy_by_arity.emplace(arity, sub.preds.add(Predicate(arity, sub.sigma, std::move(zeros))))
               .first;
    }
    cc.pred = it->second;
    for (int32_t p : cc.pos) --sub.degs[static_cast<size_t>(p)];
    ++replaced;
  }
  return replaced;
}

Adjacency build_adjacency(const SubInstance& sub) {
  Adjacency adj(sub.copies.size());
  for (size_t cc = 0; cc < sub.ccopies.size(); ++cc) {
    if (sub.preds.at(sub.ccopies[cc].pred).trivially_false()) continue;
    const auto& pos = sub.ccopies[cc].pos;
    for (size_t t = 0; t < pos.size(); ++t)
      adj[static_cast<size_t>(pos[t])].emplace_back(static_cast<int32_t>(cc),
                                                    static_cast<int>(t));
  }
  // ccopies are stored in canonical (i,l) order, so ids sort correctly.
  for (auto& lst : adj) std::sort(lst.begin(), lst.end());
  return adj;
}

NeighborhoodBall extract_ball(const SubInstance& sub, const Adjacency& adj, int32_t center,
                              int radius) {
  if (center < 0 || center >= static_cast<int32_t>(sub.ccopies.size()))
    throw std::invalid_argument("unknown ball center");
  NeighborhoodBall ball;
  ball.center = center;
  ball.radius = radius;

  std::vector<char> copy_in(sub.copies.size(), 0);
  std::vector<char> cc_in(sub.ccopies.size(), 0);

  auto add_ccopy = [&](int32_t cc, int depth, std::vector<int32_t>* frontier) {
    cc_in[static_cast<size_t>(cc)] = 1;
    ball.ccopies.push_back(cc);
    for (int32_t p : sub.ccopies[static_cast<size_t>(cc)].pos) {
      if (copy_in[static_cast<size_t>(p)]) continue;
      copy_in[static_cast<size_t>(p)] = 1;
      ball.copies.push_back(p);
      ball.copy_depth.push_back(depth);
      if (frontier) frontier->push_back(p);
    }
  };

  std::vector<int32_t> frontier;
  add_ccopy(center, 0, &frontier);
  for (int step = 1; step <= radius; ++step) {
    std::vector<int32_t> next;
    for (int32_t c : frontier)
      for (auto [cc, t] : adj[static_cast<size_t>(c)])
        if (!cc_in[static_cast<size_t>(cc)]) add_ccopy(cc, step, &next);
    frontier = std::move(next);
  }
  return ball;
}

bool ball_is_fully_sampled(const SubInstance& sub, const Adjacency& adj, int32_t center,
                           int radius) {
  if (center < 0 || center >= static_cast<int32_t>(sub.ccopies.size())) return false;
  if (sub.degs.size() != sub.copies.size())
    throw std::invalid_argument("degree record missing for a stored copy");
  // The degree comparison covers copies within radius-1 hops; at radius 0
  // the ball is the center alone and presence is the whole check.
  if (radius == 0) return true;
  NeighborhoodBall inner = extract_ball(sub, adj, center, radius - 1);
  for (size_t idx = 0; idx < inner.copies.size(); ++idx) {
    int32_t c = inner.copies[idx];
    if (static_cast<int64_t>(adj[static_cast<size_t>(c)].size()) != sub.degs[static_cast<size_t>(c)])
      return false;
  }
  return true;
}

int64_t count_dependencies(const SubInstance& sub, const NeighborhoodBall& ball) {
  if (ball.copies.empty()) throw std::invalid_argument("dependency count of an empty ball");
  int64_t high = 0;
  std::set<int32_t> low_parents;
  for (int32_t c : ball.copies) {
    const auto& copy = sub.copies[static_cast<size_t>(c)];
    if (copy.tier == Tier::High)
      ++high;
    else
      low_parents.insert(copy.parent);
  }
  return high + static_cast<int64_t>(low_parents.size());
}

std::pair<Instance, int64_t> ball_to_instance(const SubInstance& sub,
                                              const NeighborhoodBall& ball) {
  Instance I;
  I.alphabet.size = sub.sigma;
  I.n = static_cast<int32_t>(ball.copies.size());
  std::vector<int32_t> local(sub.copies.size(), -1);
  for (size_t idx = 0; idx < ball.copies.size(); ++idx)
    local[static_cast<size_t>(ball.copies[idx])] = static_cast<int32_t>(idx);
  for (int32_t cc : ball.ccopies) {
    const auto& scc = sub.ccopies[static_cast<size_t>(cc)];
    Constraint c;
    c.pred = I.preds.add(sub.preds.at(scc.pred));
    c.vars.resize(scc.pos.size());
    for (size_t t = 0; t < scc.pos.size(); ++t) c.vars[t] = local[static_cast<size_t>(scc.pos[t])];
    I.constraints.push_back(std::move(c));
  }
  return {std::move(I), 0};
}

ALocMap aloc_lp_default(int64_t dimension_cap) {
  return [dimension_cap](const Instance& ball, int64_t center) {
    return to_double(lp_center_contribution(ball, center, dimension_cap));
  };
}

ALocMap aloc_exact_val_oracle() {
  return [](const Instance& ball, int64_t /*center*/) {
    // Group identical (predicate, variables) constraints so the parallel
    // copies the reduction produces cost one evaluation, not B.
    std::map<std::pair<int, std::vector<int32_t>>, int64_t> groups;
    for (const auto& c : ball.constraints) ++groups[{c.pred, c.vars}];

    const uint64_t sigma = static_cast<uint64_t>(ball.alphabet.size);
    double space = 1;
    for (int32_t v = 0; v < ball.n; ++v) space *= static_cast<double>(sigma);
    if (space > static_cast<double>(brute_force_guard()))
      throw std::invalid_argument("ball too large for the exact-value oracle");

    Assignment tau(static_cast<size_t>(ball.n), 0);
    int64_t best = -1;
    const int64_t total_weight = ball.m();
    uint64_t count = 1;
    for (int32_t v = 0; v < ball.n; ++v) count *= sigma;
    for (uint64_t a = 0;; ++a) {
      int64_t sat = 0;
      for (const auto& [key, w] : groups) {
        const Predicate& p = ball.preds.at(key.first);
        uint64_t idx = 0;
        for (int32_t v : key.second) idx = idx * sigma + static_cast<uint64_t>(tau[static_cast<size_t>(v)]);
        if (p.eval_index(idx)) sat += w;
      }
      if (sat > best) best = sat;
      if (a + 1 == count) break;
      for (int32_t v = ball.n - 1; v >= 0; --v) {
        if (++tau[static_cast<size_t>(v)] < ball.alphabet.size) break;
        tau[static_cast<size_t>(v)] = 0;
      }
    }
    return static_cast<double>(best) / static_cast<double>(total_weight);
  };
}

std::string serialize_ball(const SubInstance& sub, const NeighborhoodBall& ball) {
  std::ostringstream os;
  int k = 0;
  std::map<int, int> pred_ids;  // sub pred id -> dense ball id
  for (int32_t cc : ball.ccopies) {
    const Predicate& p = sub.preds.at(sub.ccopies[static_cast<size_t>(cc)].pred);
    k = std::max(k, p.arity());
    pred_ids.emplace(sub.ccopies[static_cast<size_t>(cc)].pred,
                     static_cast<int>(pred_ids.size()));
  }
  os << "csp " << ball.copies.size() << ' ' << ball.ccopies.size() << ' ' << sub.sigma << ' '
     << k << '\n';
  std::vector<int> order(pred_ids.size());
  for (const auto& [sid, bid] : pred_ids) order[static_cast<size_t>(bid)] = sid;
  for (size_t bid = 0; bid < order.size(); ++bid) {
    os << "pred " << bid << ' ';
    for (uint8_t b : sub.preds.at(order[bid]).table()) os << (b ? '1' : '0');
    os << '\n';
  }
  for (int32_t cc : ball.ccopies) {
    const auto& scc = sub.ccopies[static_cast<size_t>(cc)];
    os << "c " << pred_ids.at(scc.pred);
    for (int32_t p : scc.pos) {
      const auto& copy = sub.copies[static_cast<size_t>(p)];
      os << " v" << copy.parent << '.' << copy.index;
    }
    os << '\n';
  }
  for (int32_t c : ball.copies) {
    const auto& copy = sub.copies[static_cast<size_t>(c)];
    os << "tier v" << copy.parent << '.' << copy.index << ' '
       << (copy.tier == Tier::Low ? "low" : "high") << '\n';
  }
  return os.str();
}

}  // namespace cspstream
