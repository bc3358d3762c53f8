#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "diskf/model.hpp"
#include "diskf/network.hpp"

namespace diskf {

enum class ObsAxis { x, y, both };

struct AgentSpec {
    int id = 0;
    // Static agents use `position`; mobile agents follow `waypoints` at
    // constant `speed` (waypoints non-empty marks the agent as mobile).
    Eigen::Vector2d position = Eigen::Vector2d::Zero();
    std::vector<Eigen::Vector2d> waypoints;
    double speed = 0.0;
    ObsAxis obs_axis = ObsAxis::x;

    bool mobile() const { return !waypoints.empty(); }
    AgentPose pose() const;
};

enum class EstimatorKind { diskf, oracle, local_only };

struct ScenarioConfig {
    std::string name = "custom";
    int horizon = 200;
    std::vector<std::uint64_t> seeds;  // empty means 1..20

    // Plant: planar rotation with a scalar input along (1, 1).
    double omega = 0.35;
    double theta0 = 0.0;
    Eigen::Vector2d x0{100.0, 0.0};
    double prior_cov_scale = 10.0;  // P0 = scale * I
    Eigen::Vector2d q_diag{0.2, 0.2};
    double r_var = 2.0;
    // (step, value) pairs; the input holds the latest value, zero initially.
    std::vector<std::pair<int, double>> input_breakpoints{{10, 10.0}};

    TopologySpec topology;
    int window = 5;
    double epsilon = 0.05;
    bool compensation = true;
    bool time_window = true;
    bool input_fusion = true;

    std::vector<AgentSpec> agents;

    std::vector<std::uint64_t> effective_seeds() const;
    void validate() const;

    SystemModel system() const;
    InputSignal input() const;
    std::map<int, AgentPose> poses() const;
    std::map<int, ObservationModel> observation_models() const;
};

// Four static agents, one per quadrant, alternating x / y sensors, linked by
// a communication-range topology.
ScenarioConfig stationary_4agent();

// The four static agents plus five mobile relays on waypoint loops; links
// appear and disappear as the relays move.
ScenarioConfig dynamic_9agent();

// Named built-in scenario, or the custom defaults for anything else YAML
// might describe from scratch.
ScenarioConfig named_scenario(const std::string& name);

// YAML file: starts from `scenario:` (a built-in name, default custom) and
// overrides whatever keys are present. Throws ConfigError on malformed input.
ScenarioConfig load_config(const std::string& path);

const char* to_string(EstimatorKind kind);
EstimatorKind estimator_from_string(const std::string& s);
std::string topology_label(const TopologySpec& topo);

}  // namespace diskf
