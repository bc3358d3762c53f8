#pragma once

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "diskf/model.hpp"

namespace diskf {

struct SeriesMetrics {
    double mae_state = 0.0;
    double rmse_state = 0.0;
    double mae_input = 0.0;
    double rmse_input = 0.0;
};

// One agent's estimate trajectory: entry t covers timestep t+1, so
// state_est[t] estimates truth.states[t+1] and input_est[t] estimates
// truth.inputs[t] (the input applied going into that step).
struct AgentTrace {
    std::vector<Eigen::VectorXd> state_est;
    std::vector<Eigen::VectorXd> input_est;
};

// Componentwise absolute errors averaged over all steps and components.
SeriesMetrics compute_metrics(const AgentTrace& trace,
                              const GroundTruth& truth);

// Per-agent metrics averaged with equal weight per agent.
SeriesMetrics average_metrics(const std::map<int, SeriesMetrics>& per_agent);

}  // namespace diskf
