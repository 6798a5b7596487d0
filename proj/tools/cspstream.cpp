#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cspstream/experiment.hpp"
#include "cspstream/text_io.hpp"

using namespace cspstream;

namespace {

double parse_alpha(const std::string& text, const Instance& I, uint64_t seed) {
  if (text == "empirical") {
    std::vector<Predicate> fam;
    for (int id = 0; id < I.preds.size(); ++id) fam.push_back(I.preds.at(id));
    RandomTape tape(seed ^ 0xa1f4);
    IntegralityGapEstimate est = empirical_alpha(fam, 50, 6, tape);
    std::cerr << "empirical alpha lower bound: " << to_frac_string(est.alpha) << "\n";
    return to_double(est.alpha);
  }
  if (text.rfind("known:", 0) == 0) {
    Rational a;
    if (!known_alpha(text.substr(6), &a))
      throw CLI::ValidationError("--alpha", "no known integrality gap for " + text.substr(6));
    return to_double(a);
  }
  try {
    size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size() || v <= 0 || v > 1) throw std::invalid_argument("range");
    return v;
  } catch (...) {
    throw CLI::ValidationError("--alpha", "expected VALUE in (0,1], known:<family>, or empirical");
  }
}

std::string summary_path(const std::string& records_path) {
  auto dot = records_path.find_last_of('.');
  std::string stem = dot == std::string::npos ? records_path : records_path.substr(0, dot);
  return stem + ".summary.json";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"streaming Max-CSP value estimation"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate an instance file");
  GenSpec gs;
  std::string gen_out;
  gen->add_option("--family", gs.family, "maxcut|maxdicut|ksat|random")->required();
  gen->add_option("--n", gs.n, "variable count")->required();
  gen->add_option("--m", gs.m, "constraint count")->required();
  gen->add_option("--k", gs.k, "arity (ksat/random)");
  gen->add_option("--sigma", gs.sigma, "alphabet size (random)");
  gen->add_option("--seed", gs.seed, "generator seed");
  gen->add_flag("--allow-isolated", gs.allow_isolated, "skip the isolated-variable rejection");
  gen->add_option("--out", gen_out, "output instance file")->required();

  // estimate
  auto* est = app.add_subcommand("estimate", "estimate the value of an instance");
  std::string input, mode = "exact", alpha_text, json_out;
  EstimatorConfig cfg;
  int trials = 1;
  bool guess_m = false;
  est->add_option("--input", input, "instance file")->required();
  est->add_option("--mode", mode, "exact|lp|offline|stream|coupled")->required();
  est->add_option("--epsilon", cfg.epsilon, "accuracy parameter");
  est->add_option("--delta", cfg.delta, "failure probability parameter");
  est->add_option("--eps-adv", cfg.eps_adv, "adversary band (defaults to epsilon)");
  est->add_option("--B", cfg.B, "constraint copies per constraint (0 = default)");
  est->add_option("--rho", cfg.rho, "degree bound factor (0 = default)");
  est->add_option("--radius", cfg.radius, "local neighborhood radius");
  est->add_option("--T-max", cfg.T_max, "dependency cap (0 = default)");
  est->add_option("--c-exp", cfg.c_exp, "sampling exponent; hash range = round(n^c)");
  est->add_option("--q-exp", cfg.q_exp, "high-degree threshold exponent (default: epsilon)");
  est->add_option("--alpha", alpha_text, "VALUE | known:<family> | empirical");
  std::string local_map = "lp";
  est->add_option("--local-map", local_map,
                  "neighborhood map: lp (relaxation of the ball) | value (exact ball optimum)");
  std::string policy = "exact";
  est->add_option("--policy", policy,
                  "offline adversary: exact | worst-case-random (coupled mode picks its own)");
  est->add_option("--seed", cfg.seed, "base seed; trial t uses seed + t");
  est->add_option("--trials", trials, "trial count");
  est->add_option("--cset-capacity", cfg.cset_capacity, "center sample size override");
  est->add_option("--space-cap", cfg.space_cap, "sketch entry cap override");
  est->add_flag("--guess-m", guess_m, "run the m-guessing wrapper (stream mode)");
  est->add_option("--json", json_out, "write JSONL records here and a .summary.json next to it");

  // space-curve
  auto* sc = app.add_subcommand("space-curve", "measure peak sketch size against n");
  std::string grid_text = "1024,2048,4096,8192,16384,32768,65536";
  std::string sc_json;
  int64_t m_per_n = 4;
  EstimatorConfig sc_cfg;
  sc->add_option("--n-grid", grid_text, "comma-separated n values (sorted)");
  sc->add_option("--m-per-n", m_per_n, "constraints per variable");
  sc->add_option("--epsilon", sc_cfg.epsilon, "accuracy parameter");
  sc->add_option("--c-exp", sc_cfg.c_exp, "sampling exponent");
  sc->add_option("--q-exp", sc_cfg.q_exp, "high-degree threshold exponent");
  sc->add_option("--seed", sc_cfg.seed, "seed");
  sc->add_option("--json", sc_json, "output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      Instance I = generate(gs);
      write_instance_file(gen_out, I);
      std::cout << "wrote " << gen_out << " (n=" << I.n << ", m=" << I.m() << ")\n";
      return 0;
    }

    if (*est) {
      Instance I = read_instance_file(input);
      if (mode == "offline" || mode == "stream" || mode == "coupled") {
        if (alpha_text.empty())
          throw CLI::ValidationError("--alpha", "estimator modes need an explicit alpha");
        cfg.alpha = parse_alpha(alpha_text, I, cfg.seed);
      }
      if (local_map != "lp" && local_map != "value")
        throw CLI::ValidationError("--local-map", "expected lp or value");
      ALocMap aloc = local_map == "lp" ? aloc_lp_default() : aloc_exact_val_oracle();
      if (guess_m && mode == "stream") {
        MGuessResult r = m_guess_wrapper(I, cfg, aloc);
        std::cout << "vtilde=" << r.vtilde << " chosen_copy=" << r.chosen_copy << "\n";
        return 0;
      }
      ExperimentSpec spec;
      spec.mode = mode;
      spec.cfg = cfg;
      spec.trials = trials;
      if (policy == "worst-case-random")
        spec.policy = AdversaryPolicy::worst_case_random();
      else if (policy != "exact")
        throw CLI::ValidationError("--policy", "expected exact or worst-case-random");
      ExperimentResult res = run_experiment(I, spec, aloc);
      if (!json_out.empty()) {
        std::ofstream records(json_out);
        if (!records) throw std::runtime_error("cannot open " + json_out);
        for (const auto& rec : res.records) records << rec.to_json() << '\n';
        std::ofstream summary(summary_path(json_out));
        summary << res.summary.to_json() << '\n';
        std::cout << "wrote " << json_out << " and " << summary_path(json_out) << "\n";
      } else {
        std::cout << res.summary.to_json() << "\n";
      }
      int failures = 0;
      for (const auto& rec : res.records)
        if (!rec.error.empty()) ++failures;
      if (failures) std::cerr << failures << " trial(s) recorded errors\n";
      return 0;
    }

    if (*sc) {
      std::vector<int32_t> grid;
      std::stringstream ss(grid_text);
      std::string tok;
      while (std::getline(ss, tok, ',')) grid.push_back(std::stoi(tok));
      SpaceCurve curve = space_curve(grid, sc_cfg, m_per_n);
      if (!sc_json.empty()) {
        std::ofstream os(sc_json);
        os << curve.to_json() << '\n';
        std::cout << "wrote " << sc_json << "\n";
      } else {
        std::cout << curve.to_json() << "\n";
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
