#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "diskf/metrics.hpp"
#include "diskf/model.hpp"
#include "diskf/scenario.hpp"

namespace diskf {

// One agent-step of output. The oracle writes a single row per step under
// agent id -1.
struct StepRecord {
    int step = 0;
    int agent = 0;
    bool had_observation = false;
    // Staleness counter the estimator saw when the step ran (pre-advance).
    int gap_at_call = 0;
    bool local_input_valid = false;
    Eigen::VectorXd local_input;
    bool fused_input_valid = false;
    Eigen::VectorXd input_est;  // fused input, zero vector when invalid
    Eigen::VectorXd state_est;  // belief mean after fusion (and compensation)
    double compensation_norm = 0.0;
    int n_neighbors = 0;  // agents heard from this step, excluding self
};

struct SeedResult {
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    GroundTruth truth;
    std::vector<StepRecord> records;  // ordered by (step, agent)
    std::map<int, SeriesMetrics> per_agent;
    SeriesMetrics averaged;
};

struct ScenarioResult {
    EstimatorKind estimator = EstimatorKind::diskf;
    std::vector<SeedResult> seeds;
    SeriesMetrics seed_mean;  // averaged metrics, mean over successful seeds
    bool all_ok = false;
};

// Runs every seed of the config through the chosen estimator. local_only is
// the fusion pipeline over an edgeless network, so each agent keeps its own
// counsel. Per-seed failures are captured in SeedResult rather than thrown.
ScenarioResult run_scenario(const ScenarioConfig& config, EstimatorKind kind);

struct RadiusSweepRow {
    double radius = 0.0;
    SeriesMetrics seed_mean;
    bool all_ok = false;
};

// Re-runs the scenario with a range topology at each radius. Noise draws
// depend only on the seed, so rows differ purely through connectivity.
std::vector<RadiusSweepRow> sweep_radius(const ScenarioConfig& config,
                                         EstimatorKind kind,
                                         const std::vector<double>& radii);

// Per-step trace, one row per agent-step:
//   run_id,seed,step,agent_id,truth_x,truth_y,truth_d,
//   est_x,est_y,est_d,input_valid,n_neighbors
// Doubles are printed as shortest round-trip decimals, so identical runs
// produce byte-identical files. Requires state_dim 2 and input_dim 1.
void write_trace_csv(std::ostream& out, const ScenarioConfig& config,
                     const ScenarioResult& result,
                     const std::string& topology_name);

struct AggregateRow {
    std::string estimator;
    std::string topology;
    std::optional<double> radius;
    SeriesMetrics metrics;
};

// Summary table: estimator,topology,radius,metric,value with one row per
// metric in {mae_state, rmse_state, mae_input, rmse_input}.
void write_aggregate_csv(std::ostream& out,
                         const std::vector<AggregateRow>& rows);

std::vector<AggregateRow> aggregate_rows(const ScenarioConfig& config,
                                         const ScenarioResult& result,
                                         const std::string& topology_name);

}  // namespace diskf
