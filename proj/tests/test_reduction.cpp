#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <memory>

#include "support.hpp"

using namespace cspstream;
using namespace cspstream::testing;

namespace {

EstimatorConfig base_cfg() {
  EstimatorConfig cfg;
  cfg.epsilon = 0.5;
  cfg.alpha = 1.0;
  return cfg;
}

}  // namespace

TEST_CASE("degree-1 variables force copy 1") {
  Instance I = make_instance(2, 2, {{xor2(), {0, 1}}});
  EstimatorConfig cfg = base_cfg();
  cfg.B = 2;
  ResolvedParams P = resolve_params(cfg, I);
  RandomTape tape(17);
  ReducedInstance R = trevisan_reduce(I, P, AdversaryPolicy::exact(), tape);

  CHECK(R.total_copies == 2);  // one copy per variable
  REQUIRE(R.ccopies.size() == 2);
  for (const auto& cc : R.ccopies) {
    CHECK(cc.copy_idx[0] == 1);
    CHECK(cc.copy_idx[1] == 1);
  }
}

TEST_CASE("copies have expected degree B") {
  GenSpec gs;
  gs.family = "maxcut";
  gs.n = 6;
  gs.m = 12;
  gs.seed = 2;
  Instance I = generate(gs);
  EstimatorConfig cfg = base_cfg();
  cfg.B = 8;
  ResolvedParams P = resolve_params(cfg, I);

  // Average incidence of copy (0,1) over many reduction tapes.
  const int trials = 4000;
  std::vector<double> degs;
  degs.reserve(trials);
  for (int t = 0; t < trials; ++t) {
    RandomTape tape(static_cast<uint64_t>(t) + 31);
    ReducedInstance R = trevisan_reduce(I, P, AdversaryPolicy::exact(), tape);
    auto deg = copy_degrees(R);
    degs.push_back(static_cast<double>(deg[static_cast<size_t>(R.global_copy(0, 1))]));
  }
  double mean = mean_of(degs);
  CHECK(std::abs(mean - 8.0) <= 3.0 * stderr_of(degs) + 1e-9);
}

TEST_CASE("reduction preserves the optimum within the sandwich") {
  GenSpec gs;
  gs.family = "maxcut";
  gs.n = 4;
  gs.m = 4;
  gs.seed = 9;
  Instance I = generate(gs);
  Rational val = brute_force_val(I);
  EstimatorConfig cfg = base_cfg();  // epsilon = 0.5
  cfg.B = 8;
  ResolvedParams P = resolve_params(cfg, I);

  int upper_ok = 0;
  const int seeds = 100;
  for (int s = 0; s < seeds; ++s) {
    RandomTape tape(static_cast<uint64_t>(s) * 13 + 5);
    ReducedInstance R = trevisan_reduce(I, P, AdversaryPolicy::exact(), tape);
    Rational rval = brute_force_val(reduced_to_instance(R));
    CHECK(rval >= val);  // the constructive direction holds always
    if (to_double(rval) <= (1.0 + cfg.epsilon) * to_double(val) + 1e-12) ++upper_ok;
  }
  CHECK(upper_ok >= 95);
}

TEST_CASE("bound_degree replaces exactly the offending neighborhoods") {
  // Star: variable 0 sits in 5 constraints; with B = 1 and exact tiers the
  // reduction is the instance itself.
  Instance star = make_instance(6, 2,
                                {{xor2(), {0, 1}},
                                 {xor2(), {0, 2}},
                                 {xor2(), {0, 3}},
                                 {xor2(), {0, 4}},
                                 {xor2(), {0, 5}}});
  TierDecision dec = manual_tiers(star, {1, 1, 1, 1, 1, 1},
                                  std::vector<Tier>(6, Tier::Low));
  RandomTape tape(3);
  ReducedInstance R = trevisan_reduce(star, 1, dec, default_copy_assigner(tape));

  SUBCASE("cap above the degree changes nothing") {
    BoundResult b = bound_degree(R, 5);
    CHECK(b.replaced == 0);
    CHECK(b.degs_bdd == copy_degrees(R));
  }
  SUBCASE("cap below the degree clears the star") {
    BoundResult b = bound_degree(R, 4);
    CHECK(b.replaced == 5);
    CHECK(b.degs_bdd[static_cast<size_t>(R.global_copy(0, 1))] == 0);
    for (const auto& cc : b.bounded.ccopies)
      CHECK(b.bounded.preds.at(cc.pred).trivially_false());
  }
  SUBCASE("bounding is idempotent") {
    BoundResult once = bound_degree(R, 4);
    BoundResult twice = bound_degree(once.bounded, 4);
    CHECK(twice.replaced == 0);
    CHECK(twice.degs_bdd == once.degs_bdd);
  }
}

TEST_CASE("replaced mass stays within epsilon * m * B") {
  GenSpec gs;
  gs.family = "maxcut";
  gs.n = 8;
  gs.m = 24;
  gs.seed = 77;
  Instance I = generate(gs);
  EstimatorConfig cfg = base_cfg();
  cfg.B = 8;
  ResolvedParams P = resolve_params(cfg, I);
  int ok = 0;
  for (int s = 0; s < 100; ++s) {
    RandomTape tape(static_cast<uint64_t>(s) + 1234);
    ReducedInstance R = trevisan_reduce(I, P, AdversaryPolicy::exact(), tape);
    BoundResult b = bound_degree(R, P.degree_cap);
    if (static_cast<double>(b.replaced) <=
        cfg.epsilon * static_cast<double>(I.m()) * static_cast<double>(P.B))
      ++ok;
  }
  CHECK(ok >= 95);
}

TEST_CASE("tier decisions follow the threshold and the band") {
  Instance I = make_instance(3, 2, {{xor2(), {0, 1}}, {xor2(), {1, 2}}, {xor2(), {2, 0}}});
  EstimatorConfig cfg = base_cfg();
  cfg.B = 4;
  cfg.q_exp = 0.01;  // threshold below every degree: everything high
  ResolvedParams P = resolve_params(cfg, I);
  RandomTape tape(8);

  TierDecision d = decide_tiers(I, P, AdversaryPolicy::exact(), tape);
  for (int32_t v = 0; v < 3; ++v) {
    CHECK(d.tier[static_cast<size_t>(v)] == Tier::High);
    CHECK(d.dtilde[static_cast<size_t>(v)] == 2);
  }

  cfg.q_exp = 3.0;  // threshold above every degree: everything low
  P = resolve_params(cfg, I);
  d = decide_tiers(I, P, AdversaryPolicy::exact(), tape);
  for (int32_t v = 0; v < 3; ++v) {
    CHECK(d.tier[static_cast<size_t>(v)] == Tier::Low);
    CHECK(d.dtilde[static_cast<size_t>(v)] == 2);
  }

  // Worst-case-random stays in the band.
  cfg.q_exp = 0.01;
  cfg.eps_adv = 0.5;
  P = resolve_params(cfg, I);
  for (int s = 0; s < 50; ++s) {
    RandomTape t2(static_cast<uint64_t>(s));
    TierDecision w = decide_tiers(I, P, AdversaryPolicy::worst_case_random(), t2);
    for (int32_t v = 0; v < 3; ++v) {
      CHECK(w.dtilde[static_cast<size_t>(v)] >= 1);
      CHECK(static_cast<double>(w.dtilde[static_cast<size_t>(v)]) >= 0.5 * 2 - 1e-9);
      CHECK(static_cast<double>(w.dtilde[static_cast<size_t>(v)]) <= 1.5 * 2 + 1e-9);
    }
  }

  // A custom policy outside the band is rejected.
  AdversaryPolicy bad = AdversaryPolicy::custom_fn([](int32_t, int64_t deg) { return 10 * deg; });
  CHECK_THROWS(decide_tiers(I, P, bad, tape));
}

TEST_CASE("offline_sample marginals") {
  GenSpec gs;
  gs.family = "maxcut";
  gs.n = 6;
  gs.m = 9;
  gs.seed = 4;
  Instance I = generate(gs);
  EstimatorConfig cfg = base_cfg();
  cfg.B = 2;

  SUBCASE("degenerate range keeps everything, both tiers") {
    cfg.c_exp = 0.0;  // R = 1
    for (double q : {3.0, 0.01}) {
      cfg.q_exp = q;
      ResolvedParams P = resolve_params(cfg, I);
      RandomTape tape(6);
      ReducedInstance R = trevisan_reduce(I, P, AdversaryPolicy::exact(), tape);
      KWiseHash H = make_sampling_hash(P, tape);
      auto in = offline_sample(R, P, H, tape);
      for (char f : in) CHECK(f == 1);
    }
  }

  SUBCASE("each copy appears with probability 1/R") {
    cfg.c_exp = 0.3868;  // 6^0.3868 = 2.0007 -> R = 2
    for (double q : {3.0, 0.01}) {
      cfg.q_exp = q;
      ResolvedParams P = resolve_params(cfg, I);
      REQUIRE(P.hash_range == 2);
      const int trials = 10000;
      RandomTape red_tape(1);
      ReducedInstance R = trevisan_reduce(I, P, AdversaryPolicy::exact(), red_tape);
      int64_t probe = R.global_copy(2, 1);
      int hits = 0;
      for (int s = 0; s < trials; ++s) {
        RandomTape tape(static_cast<uint64_t>(s) + 5000);
        KWiseHash H = make_sampling_hash(P, tape);
        auto in = offline_sample(R, P, H, tape);
        if (in[static_cast<size_t>(probe)]) ++hits;
      }
      double freq = static_cast<double>(hits) / trials;
      CHECK(std::abs(freq - 0.5) <= three_se(0.5, trials));
    }
  }
}

TEST_CASE("aggregate degenerate forms") {
  Instance I = make_instance(4, 2, {{xor2(), {0, 1}}, {xor2(), {1, 2}}, {xor2(), {2, 3}}});
  EstimatorConfig cfg = base_cfg();
  cfg.B = 2;
  cfg.c_exp = 0.0;
  cfg.q_exp = 3.0;
  ResolvedParams P = resolve_params(cfg, I);
  RandomTape tape(12);
  ReducedInstance R = trevisan_reduce(I, P, AdversaryPolicy::exact(), tape);

  SUBCASE("nothing stored gives zero") {
    SubInstance sub = induce_sample(R, std::vector<char>(static_cast<size_t>(R.total_copies), 0));
    auto res = aggregate(std::move(sub), {{0, 0}, {1, 1}}, P, aloc_lp_default());
    CHECK(res.out == 0.0);
    CHECK(res.contributing == 0);
  }

  SUBCASE("everything stored gives the plain mean with unit scale factors") {
    std::vector<std::pair<int64_t, int64_t>> cset;
    for (int64_t i = 0; i < R.m_orig; ++i)
      for (int64_t l = 0; l < R.B; ++l) cset.emplace_back(i, l);
    auto res = aggregate(full_view(R), cset, P, aloc_lp_default());
    CHECK(res.contributing == static_cast<int64_t>(cset.size()));
    double want = exhaustive_mean_aloc(R, P, aloc_lp_default());
    CHECK(res.out == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("offline estimate on dead instances is zero") {
  Instance dead = make_instance(2, 2, {{always_false(), {0, 1}}, {always_false(), {1, 0}}});
  EstimatorConfig cfg = base_cfg();
  cfg.B = 2;
  cfg.c_exp = 0.0;
  OfflineResult r = offline_estimate(dead, cfg, AdversaryPolicy::exact(), aloc_lp_default());
  CHECK(r.out == 0.0);
  CHECK(r.vtilde == 0.0);
}

TEST_CASE("degenerate offline estimate is deterministic and fully scaled") {
  Instance tri = triangle_maxcut();
  EstimatorConfig cfg = base_cfg();
  cfg.B = 4;
  cfg.c_exp = 0.0;   // R = 1: everything sampled, scale factors 1
  cfg.q_exp = 3.0;   // all low
  cfg.cset_capacity = 12;  // the whole copy set
  ResolvedParams P = resolve_params(cfg, tri);

  OfflineResult r = offline_estimate(tri, cfg, AdversaryPolicy::exact(), aloc_lp_default());
  RandomTape tape(cfg.seed);
  ReducedInstance R = trevisan_reduce(tri, P, AdversaryPolicy::exact(), tape);
  double want_out = exhaustive_mean_aloc(R, P, aloc_lp_default());
  CHECK(r.out == doctest::Approx(want_out).epsilon(1e-12));
  CHECK(r.vtilde == doctest::Approx(P.scale_factor() * want_out).epsilon(1e-12));

  OfflineResult again = offline_estimate(tri, cfg, AdversaryPolicy::exact(), aloc_lp_default());
  CHECK(again.out == r.out);
}

TEST_CASE("estimators refuse to run without alpha") {
  Instance tri = triangle_maxcut();
  EstimatorConfig cfg = base_cfg();
  cfg.alpha = -1.0;
  CHECK_THROWS(offline_estimate(tri, cfg, AdversaryPolicy::exact(), aloc_lp_default()));
}

TEST_CASE("sampled aggregation is unbiased for any deterministic map") {
  // Mixed predicates so the probe map is not constant.
  Instance I = make_instance(5, 2,
                             {{xor2(), {0, 1}},
                              {dicut2(), {1, 2}},
                              {xor2(), {2, 3}},
                              {dicut2(), {3, 4}},
                              {xor2(), {4, 0}}});
  EstimatorConfig cfg = base_cfg();
  cfg.B = 4;
  cfg.c_exp = 0.3104;  // 5^0.3104 = 1.648 -> rounds to 2
  cfg.q_exp = 3.0;     // all low
  cfg.radius = 1;
  ResolvedParams P = resolve_params(cfg, I);
  REQUIRE(P.hash_range == 2);

  RandomTape red_tape(99);
  ReducedInstance R = trevisan_reduce(I, P, AdversaryPolicy::exact(), red_tape);

  ALocMap probe = [](const Instance& ball, int64_t center) {
    return to_double(ball.preds.at(ball.constraints[static_cast<size_t>(center)].pred)
                         .satisfying_fraction());
  };

  double want = exhaustive_mean_aloc(R, P, probe);
  const int trials = 20000;
  std::vector<double> outs;
  outs.reserve(trials);
  for (int s = 0; s < trials; ++s)
    outs.push_back(sample_out_once(R, P, probe, static_cast<uint64_t>(s) + 42, 6));
  double mean = mean_of(outs);
  double se = stderr_of(outs);
  CHECK(std::abs(mean - want) <= 3.0 * se);
}

TEST_CASE("empirical variance respects the covariance-counting bound") {
  Instance I = make_instance(5, 2,
                             {{xor2(), {0, 1}},
                              {xor2(), {1, 2}},
                              {xor2(), {2, 3}},
                              {xor2(), {3, 4}},
                              {xor2(), {4, 0}}});
  EstimatorConfig cfg = base_cfg();
  cfg.B = 4;
  cfg.c_exp = 0.3104;
  cfg.q_exp = 3.0;
  cfg.radius = 1;
  ResolvedParams P = resolve_params(cfg, I);
  REQUIRE(P.hash_range == 2);

  RandomTape red_tape(7);
  ReducedInstance R = trevisan_reduce(I, P, AdversaryPolicy::exact(), red_tape);

  // Tighten T_max to the instance's actual maximum dependency count so the
  // bound carries information.
  SubInstance sub = full_view(R);
  apply_degree_bound(sub, P.degree_cap);
  Adjacency adj = build_adjacency(sub);
  int64_t t_max_actual = 1;
  for (int32_t cc = 0; cc < static_cast<int32_t>(sub.ccopies.size()); ++cc) {
    NeighborhoodBall ball = extract_ball(sub, adj, cc, P.radius);
    t_max_actual = std::max(t_max_actual, count_dependencies(sub, ball));
  }

  ALocMap probe = [](const Instance&, int64_t) { return 1.0; };
  const int trials = 4000;
  const int64_t cset_size = 6;
  std::vector<double> outs;
  for (int s = 0; s < trials; ++s)
    outs.push_back(sample_out_once(R, P, probe, static_cast<uint64_t>(s) + 9000, cset_size));
  double mean = mean_of(outs);
  double var = 0;
  for (double o : outs) var += (o - mean) * (o - mean);
  var /= static_cast<double>(trials - 1);

  double nqc = P.nq * static_cast<double>(P.hash_range);
  double bound = 2.0 * static_cast<double>(t_max_actual * t_max_actual) * nqc *
                 std::pow(static_cast<double>(P.hash_range), 2.0 * static_cast<double>(t_max_actual)) /
                 static_cast<double>(cset_size);
  CHECK(var <= 5.0 * bound);
}

TEST_CASE("reduced instance dump names copies") {
  Instance I = make_instance(2, 2, {{xor2(), {0, 1}}});
  TierDecision dec = manual_tiers(I, {2, 1}, {Tier::High, Tier::Low});
  RandomTape tape(5);
  ReducedInstance R = trevisan_reduce(I, 3, dec, default_copy_assigner(tape));
  std::string dump = dump_reduced_text(R);
  CHECK(dump.find("csp 3 3 2 2") == 0);
  CHECK(dump.find("v0.") != std::string::npos);
  CHECK(dump.find("tier v0.1 high") != std::string::npos);
  CHECK(dump.find("tier v1.1 low") != std::string::npos);
}
