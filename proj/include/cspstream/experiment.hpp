#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coupling.hpp"
#include "generators.hpp"

namespace cspstream {

struct ExperimentSpec {
  std::string mode = "exact";  // exact | lp | offline | stream | coupled
  EstimatorConfig cfg;
  int trials = 1;
  AdversaryPolicy policy = AdversaryPolicy::exact();  // offline mode only
};

struct TrialRecord {
  uint64_t seed = 0;
  std::optional<double> exact_val;
  std::optional<double> lp_val;
  std::optional<double> offline_out;
  std::optional<double> offline_vtilde;
  std::optional<double> stream_out;
  std::optional<double> stream_vtilde;
  std::optional<CoupledResult> coupled;
  int64_t space_peak = 0;
  double wall_ms = 0.0;
  std::string error;  // per-trial failures are recorded, not fatal

  std::string to_json() const;
};

struct ExperimentSummary {
  std::string mode;
  int trials = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
  double match_rate = -1.0;  // coupled mode only
  int64_t max_space_peak = 0;
  std::string params_json;

  std::string to_json() const;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;
  ExperimentSummary summary;
};

// Runs `trials` independent trials (seed + t), each recording the outputs
// of the requested mode. Exact and LP values are attached when the
// instance is small enough; records always satisfy exact <= lp.
ExperimentResult run_experiment(const Instance& I, const ExperimentSpec& spec,
                                const ALocMap& aloc);

std::string config_params_json(const EstimatorConfig& cfg, const ResolvedParams& P);

struct SpaceCurvePoint {
  int32_t n = 0;
  int64_t m = 0;
  int64_t peak = 0;
};

struct SpaceCurve {
  std::vector<SpaceCurvePoint> points;
  double slope = 0.0;  // least-squares fit of log(peak) against log(n)
  std::string params_json;
  std::string to_json() const;
};

// Peak sketch size over generated maxcut streams with m = m_per_n * n.
SpaceCurve space_curve(const std::vector<int32_t>& n_grid, const EstimatorConfig& cfg,
                       int64_t m_per_n = 4);

}  // namespace cspstream
