#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cspstream/coupling.hpp"
#include "support.hpp"

using namespace cspstream;
using namespace cspstream::testing;

namespace {

// Disjoint triangles with parallel edges; components stay small so local
// neighborhoods actually get collected at modest sampling rates.
Instance triangles(int count, int parallels) {
  std::vector<std::pair<Predicate, std::vector<int32_t>>> cs;
  for (int t = 0; t < count; ++t) {
    int32_t a = 3 * t, b = 3 * t + 1, c = 3 * t + 2;
    for (int p = 0; p < parallels; ++p) {
      cs.push_back({xor2(), {a, b}});
      cs.push_back({xor2(), {b, c}});
      cs.push_back({xor2(), {c, a}});
    }
  }
  return make_instance(3 * count, 2, std::move(cs));
}

}  // namespace

TEST_CASE("degenerate parameters couple bit-exactly") {
  GenSpec gs;
  gs.family = "maxcut";
  gs.n = 6;
  gs.m = 12;
  gs.seed = 8;
  Instance I = generate(gs);

  EstimatorConfig cfg;
  cfg.epsilon = 0.5;
  cfg.alpha = 1.0;
  cfg.B = 4;
  cfg.c_exp = 0.0;  // R = 1: no sampling randomness anywhere
  cfg.q_exp = 3.0;  // all variables low-degree
  cfg.cset_capacity = I.m() * cfg.B;  // reservoir holds every copy

  for (uint64_t seed : {1ULL, 2ULL, 3ULL, 17ULL, 99ULL}) {
    CoupledResult r = coupled_run(I, cfg, seed, aloc_lp_default());
    CHECK(r.matched);
    CHECK(r.off_out == r.on_out);
    CHECK(r.off_vtilde == r.on_vtilde);
    CHECK_FALSE(r.diag.any_claim_failure());
    CHECK(r.diag.hash_agree);
    CHECK(r.diag.reservoir_agree);
    CHECK(r.diag.tier_agree);
    CHECK(r.diag.dtilde_agree);
    CHECK(r.diag.copysample_agree);
    CHECK(r.diag.assignment_isomorphic);
    CHECK(r.diag.degs_agree);
    CHECK(r.off_out > 0.0);  // everything sampled: the estimate is live
  }
}

TEST_CASE("coupled runs agree whenever no claim fails") {
  Instance I = triangles(4, 4);  // n = 12, m = 48
  EstimatorConfig cfg;
  cfg.epsilon = 2.0;
  cfg.alpha = 1.0;
  cfg.eps_adv = 0.5;
  cfg.B = 8;
  cfg.c_exp = 0.5579;  // 12^0.5579 = 4.0 -> R = 4
  cfg.q_exp = 1.08;    // 12^1.08 = 14.7: high tier within reach of busy vars
  cfg.radius = 1;

  int matched = 0, clean = 0, clean_matched = 0, terminated = 0;
  const int seeds = 120;
  for (int s = 0; s < seeds; ++s) {
    CoupledResult r = coupled_run(I, cfg, static_cast<uint64_t>(s) + 1, aloc_lp_default());
    if (r.matched) ++matched;
    if (r.diag.terminated) ++terminated;
    if (!r.diag.any_claim_failure()) {
      ++clean;
      if (r.matched) ++clean_matched;
      CHECK(r.diag.tier_agree);
      CHECK(r.diag.dtilde_agree);
      CHECK(r.diag.copysample_agree);
      CHECK(r.diag.assignment_isomorphic);
      CHECK(r.diag.degs_agree);
      CHECK(r.diag.reservoir_agree);
      CHECK(r.diag.hash_agree);
    }
  }
  // Every clean run is bit-exact; failures are confined to claim events.
  CHECK(clean_matched == clean);
  CHECK(clean >= seeds * 2 / 3);
  CHECK(matched >= clean);
  INFO("matched ", matched, " of ", seeds, ", terminated ", terminated);
}

TEST_CASE("ternary constraints couple the same way") {
  // Small 3SAT components: three positions per constraint exercise the
  // per-position loops on both sides.
  std::vector<std::pair<Predicate, std::vector<int32_t>>> cs;
  GenSpec gs;
  gs.family = "ksat";
  gs.n = 3;
  gs.m = 1;
  gs.k = 3;
  for (int comp = 0; comp < 5; ++comp) {
    int32_t base = 3 * comp;
    gs.seed = static_cast<uint64_t>(comp) + 11;
    Instance block = generate(gs);
    for (int rep = 0; rep < 6; ++rep)
      for (const auto& c : block.constraints) {
        std::vector<int32_t> vars;
        for (int32_t v : c.vars) vars.push_back(base + v);
        cs.push_back({block.preds.at(c.pred), vars});
      }
  }
  Instance I = make_instance(15, 2, std::move(cs));  // m = 30, components of 3 vars

  EstimatorConfig cfg;
  cfg.epsilon = 2.0;
  cfg.alpha = 1.0;
  cfg.eps_adv = 0.5;
  cfg.B = 4;
  cfg.c_exp = 0.2560;  // 15^0.256 = 2.0
  cfg.q_exp = 0.95;    // 15^0.95 = 13.1: busy variables go high
  cfg.radius = 1;

  int clean = 0, clean_matched = 0;
  for (int s = 0; s < 80; ++s) {
    CoupledResult r = coupled_run(I, cfg, static_cast<uint64_t>(s) + 77, aloc_lp_default());
    if (!r.diag.any_claim_failure()) {
      ++clean;
      if (r.matched) ++clean_matched;
    }
  }
  CHECK(clean > 20);
  CHECK(clean_matched == clean);
}

TEST_CASE("a repeated variable inside one constraint is flagged") {
  Instance rep = make_instance(3, 2,
                               {{xor2(), {0, 0}},
                                {xor2(), {0, 1}},
                                {xor2(), {1, 2}},
                                {xor2(), {2, 0}}});
  EstimatorConfig cfg;
  cfg.epsilon = 0.5;
  cfg.alpha = 1.0;
  cfg.B = 2;
  cfg.c_exp = 0.0;
  cfg.q_exp = 3.0;
  cfg.cset_capacity = rep.m() * cfg.B;
  CoupledResult r = coupled_run(rep, cfg, 5, aloc_lp_default());
  CHECK(r.diag.degs_mismatch);  // per-position counts disagree with count-once degrees
}

TEST_CASE("termination is detected and reported") {
  Instance I = triangles(3, 4);  // busy enough for spurious high-tier vars
  EstimatorConfig cfg;
  cfg.epsilon = 2.0;
  cfg.alpha = 1.0;
  cfg.eps_adv = 2.0;
  cfg.B = 8;
  cfg.c_exp = 0.631;  // 9^0.631 = 4.0 -> R = 4
  cfg.q_exp = 1.05;
  cfg.radius = 1;

  bool found = false;
  for (int s = 0; s < 600 && !found; ++s) {
    CoupledResult r = coupled_run(I, cfg, static_cast<uint64_t>(s) + 5000, aloc_lp_default());
    if (r.diag.terminated) {
      found = true;
      CHECK_FALSE(r.matched);
      CHECK(r.diag.any_claim_failure());
    }
  }
  CHECK(found);
}

TEST_CASE("band violations are named when the degree estimate drifts") {
  Instance I = triangles(3, 4);
  EstimatorConfig cfg;
  cfg.epsilon = 2.0;
  cfg.alpha = 1.0;
  cfg.eps_adv = 0.02;  // razor-thin band: estimates drift out constantly
  cfg.B = 8;
  cfg.c_exp = 0.631;
  cfg.q_exp = 1.05;
  cfg.radius = 1;

  bool found = false;
  for (int s = 0; s < 200 && !found; ++s) {
    CoupledResult r = coupled_run(I, cfg, static_cast<uint64_t>(s) + 31, aloc_lp_default());
    if (r.diag.band_violation) found = true;
  }
  CHECK(found);
}
