// Experiment runner: JSON run configuration, preset catalog, trajectory
// execution for all three models, CSV/JSON rendering, sweeps, comparisons.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "entbus/bloch.hpp"
#include "entbus/core.hpp"
#include "entbus/lindblad.hpp"
#include "entbus/metrics.hpp"
#include "entbus/postselect.hpp"

namespace entbus {

using json = nlohmann::json;

struct RunConfig {
  std::string model = "bloch";  // bloch | reduced | full
  DickeState initial{1.0, 0.0, 0.0, 0.0, {0.0, 0.0}};
  std::string initial_name = "up";
  DetuningSchedule schedule = Zero{};
  std::optional<DetuningSchedule> schedule2;  // second-qubit detuning (reduced)
  SystemParams params;
  double tau_end = 25.0;
  double dtau = 1e-3;
  long sample_stride = 100;
  bool do_postselect = false;
  int nmax = 8;  // Fock cutoff, full model only
};

json schedule_to_json(const DetuningSchedule& s);
DetuningSchedule schedule_from_json(const json& j);

RunConfig parse_run_config(const json& j);
json run_config_to_json(const RunConfig& c);

struct RunResult {
  std::vector<MetricRecord> records;
  std::vector<PostselectSample> post;  // parallel to records when postselect on
  OperatorTrajectory traj;             // two-qubit states at every sample
};

RunResult run(const RunConfig& c);

std::string render_csv(const RunResult& r, bool with_postselect);
json render_json(const RunResult& r, bool with_postselect);

// ---------------------------------------------------------------------------
struct Preset {
  std::string name;
  std::string description;
  json config;
};

const std::vector<Preset>& preset_catalog();
RunConfig preset_config(const std::string& name);

// ---------------------------------------------------------------------------
struct SweepAxis {
  std::string field;  // dotted path into the run config, e.g. "schedule.tau0"
  std::vector<json> values;
};

struct SweepConfig {
  json base;  // run config document
  std::vector<SweepAxis> axes;
  double steady_window = 5.0;
  double steady_tol = 1e-3;
  std::size_t max_points = 10000;
};

SweepConfig parse_sweep_config(const json& j);

// One row per grid point (row-major over the axes in order); returns CSV.
std::string run_sweep(const SweepConfig& c);

// ---------------------------------------------------------------------------
struct CompareReport {
  std::map<std::string, double> max_diff;  // per metric, over tau >= tau_min
  double threshold_metric_diff = 0.0;
  bool pass = true;
  std::string text;
};

CompareReport compare_runs(const RunConfig& a, const RunConfig& b,
                           const std::string& metric, double threshold,
                           double tau_min);

}  // namespace entbus
