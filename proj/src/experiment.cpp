#include "cspstream/experiment.hpp"

#include <chrono>
#include <cmath>

#include "json.hpp"

namespace cspstream {

using nlohmann::json;

std::string TrialRecord::to_json() const {
  json j;
  j["seed"] = seed;
  if (exact_val) j["exact"] = *exact_val;
  if (lp_val) j["lp"] = *lp_val;
  if (offline_out) j["offline_out"] = *offline_out;
  if (offline_vtilde) j["offline"] = *offline_vtilde;
  if (stream_out) j["stream_out"] = *stream_out;
  if (stream_vtilde) j["stream"] = *stream_vtilde;
  if (coupled) {
    j["coupled"] = {{"off_out", coupled->off_out},
                    {"on_out", coupled->on_out},
                    {"off_vtilde", coupled->off_vtilde},
                    {"on_vtilde", coupled->on_vtilde},
                    {"matched", coupled->matched},
                    {"claim_failure", coupled->diag.any_claim_failure()},
                    {"band_violation", coupled->diag.band_violation},
                    {"terminated", coupled->diag.terminated},
                    {"cap_exceeded", coupled->diag.cap_exceeded}};
  }
  j["space_peak"] = space_peak;
  j["wall_ms"] = wall_ms;
  if (!error.empty()) j["error"] = error;
  return j.dump();
}

std::string ExperimentSummary::to_json() const {
  json j;
  j["mode"] = mode;
  j["trials"] = trials;
  j["mean"] = mean;
  j["stderr"] = stderr_;
  if (match_rate >= 0) j["match_rate"] = match_rate;
  j["max_space_peak"] = max_space_peak;
  j["params"] = json::parse(params_json);
  return j.dump(2);
}

std::string config_params_json(const EstimatorConfig& cfg, const ResolvedParams& P) {
  json j;
  j["epsilon"] = cfg.epsilon;
  j["delta"] = cfg.delta;
  j["eps_adv"] = P.eps_adv;
  j["B"] = P.B;
  j["rho"] = P.rho;
  j["degree_cap"] = P.degree_cap;
  j["radius"] = P.radius;
  j["T_max"] = P.T_max;
  j["c_exp"] = cfg.c_exp;
  j["q_exp"] = cfg.q_exp;
  j["hash_range"] = P.hash_range;
  j["cset_capacity"] = P.cset_capacity;
  j["space_cap"] = P.space_cap;
  j["alpha"] = P.alpha;
  j["seed"] = cfg.seed;
  j["n"] = P.n;
  j["m"] = P.m;
  j["k"] = P.k;
  j["sigma"] = P.sigma;
  return j.dump();
}

ExperimentResult run_experiment(const Instance& I, const ExperimentSpec& spec,
                                const ALocMap& aloc) {
  if (spec.trials < 1) throw std::invalid_argument("experiment needs at least one trial");
  ExperimentResult res;
  ResolvedParams P = resolve_params(spec.cfg, I);
  res.summary.mode = spec.mode;
  res.summary.trials = spec.trials;
  res.summary.params_json = config_params_json(spec.cfg, P);

  double sigma_n = static_cast<double>(I.alphabet.size);
  bool small_enough =
      std::pow(sigma_n, static_cast<double>(I.n)) <= static_cast<double>(brute_force_guard());

  double sum = 0.0, sum_sq = 0.0;
  int value_count = 0;
  int matched = 0, coupled_count = 0;

  for (int t = 0; t < spec.trials; ++t) {
    TrialRecord rec;
    rec.seed = spec.cfg.seed + static_cast<uint64_t>(t);
    auto start = std::chrono::steady_clock::now();
    double value = std::numeric_limits<double>::quiet_NaN();
    try {
      EstimatorConfig cfg = spec.cfg;
      cfg.seed = rec.seed;
      if (spec.mode == "exact") {
        rec.exact_val = to_double(brute_force_val(I));
        value = *rec.exact_val;
      } else if (spec.mode == "lp") {
        rec.lp_val = to_double(solve_basic_lp(I).objective);
        if (small_enough) rec.exact_val = to_double(brute_force_val(I));
        value = *rec.lp_val;
      } else if (spec.mode == "offline") {
        OfflineResult r = offline_estimate(I, cfg, spec.policy, aloc);
        rec.offline_out = r.out;
        rec.offline_vtilde = r.vtilde;
        value = r.vtilde;
      } else if (spec.mode == "stream") {
        StreamingResult r = streaming_estimate(I, cfg, aloc);
        if (r.status != StreamingResult::Status::Ok)
          throw std::runtime_error(r.status == StreamingResult::Status::Terminated
                                       ? "streaming reduction terminated"
                                       : "space cap exceeded");
        rec.stream_out = r.out;
        rec.stream_vtilde = r.vtilde;
        rec.space_peak = r.peak_entries;
        value = r.vtilde;
      } else if (spec.mode == "coupled") {
        CoupledResult r = coupled_run(I, cfg, rec.seed, aloc);
        rec.coupled = r;
        ++coupled_count;
        if (r.matched) ++matched;
        value = r.on_vtilde;
      } else {
        throw std::invalid_argument("unknown mode: " + spec.mode);
      }
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
    // Hard invariant across all recorded trials, never downgraded to a
    // per-trial error: the relaxation dominates the exact optimum.
    if (rec.exact_val && rec.lp_val && *rec.exact_val > *rec.lp_val + 1e-12)
      throw std::logic_error("relaxation violated: exact value above LP value");
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            start)
                      .count();
    if (rec.error.empty() && !std::isnan(value)) {
      sum += value;
      sum_sq += value * value;
      ++value_count;
    }
    res.summary.max_space_peak = std::max(res.summary.max_space_peak, rec.space_peak);
    res.records.push_back(std::move(rec));
  }

  if (value_count > 0) {
    res.summary.mean = sum / value_count;
    if (value_count > 1) {
      double var = (sum_sq - sum * sum / value_count) / (value_count - 1);
      res.summary.stderr_ = std::sqrt(std::max(0.0, var) / value_count);
    }
  }
  if (coupled_count > 0)
    res.summary.match_rate = static_cast<double>(matched) / coupled_count;
  return res;
}

std::string SpaceCurve::to_json() const {
  json j;
  j["slope"] = slope;
  if (!params_json.empty()) j["params"] = json::parse(params_json);
  j["points"] = json::array();
  for (const auto& p : points)
    j["points"].push_back({{"n", p.n}, {"m", p.m}, {"peak", p.peak}});
  return j.dump(2);
}

SpaceCurve space_curve(const std::vector<int32_t>& n_grid, const EstimatorConfig& cfg,
                       int64_t m_per_n) {
  SpaceCurve curve;
  for (size_t idx = 0; idx < n_grid.size(); ++idx) {
    if (idx > 0 && n_grid[idx] < n_grid[idx - 1])
      throw std::invalid_argument("space-curve grid must be sorted");
  }
  for (int32_t n : n_grid) {
    GenSpec gs;
    gs.family = "maxcut";
    gs.n = n;
    gs.m = m_per_n * n;
    gs.seed = cfg.seed ^ static_cast<uint64_t>(n);
    gs.allow_isolated = true;  // a few isolated vertices are expected at this density
    Instance I = generate(gs);
    ResolvedParams P = resolve_params(cfg, I);
    if (curve.params_json.empty()) curve.params_json = config_params_json(cfg, P);
    RandomTape tape(cfg.seed ^ (static_cast<uint64_t>(n) << 20));
    Sketch sk = sketch_stream(stream_of(I), P, tape, /*enforce_cap=*/false);
    curve.points.push_back({n, I.m(), sk.peak_entries});
  }
  // least squares on (log n, log peak)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (const auto& p : curve.points) {
    if (p.peak <= 0) continue;
    double x = std::log(static_cast<double>(p.n));
    double y = std::log(static_cast<double>(p.peak));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  double denom = cnt * sxx - sx * sx;
  if (cnt >= 2 && denom > 1e-12) curve.slope = (cnt * sxy - sx * sy) / denom;
  return curve;
}

}  // namespace cspstream
