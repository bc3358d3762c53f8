#include "diskf/scenario.hpp"

#include <set>
#include <utility>

#include <yaml-cpp/yaml.h>

#include "diskf/errors.hpp"

namespace diskf {

AgentPose AgentSpec::pose() const {
    if (mobile()) return AgentPose::waypoint_loop(waypoints, speed);
    return AgentPose::fixed(position);
}

std::vector<std::uint64_t> ScenarioConfig::effective_seeds() const {
    if (!seeds.empty()) return seeds;
    std::vector<std::uint64_t> out(20);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = i + 1;
    return out;
}

void ScenarioConfig::validate() const {
    if (horizon < 1) throw ConfigError("config: horizon must be >= 1");
    if (window < 0) throw ConfigError("config: window must be >= 0");
    if (!(epsilon >= 0.0)) throw ConfigError("config: epsilon must be >= 0");
    if (!(prior_cov_scale > 0.0)) {
        throw ConfigError("config: prior covariance scale must be > 0");
    }
    if (q_diag.minCoeff() < 0.0) throw ConfigError("config: negative q_diag");
    if (r_var < 0.0) throw ConfigError("config: negative r_var");
    if (agents.empty()) throw ConfigError("config: no agents");
    std::set<int> ids;
    for (const auto& a : agents) {
        if (!ids.insert(a.id).second) {
            throw ConfigError("config: duplicate agent id " +
                              std::to_string(a.id));
        }
        if (a.mobile() && !(a.speed > 0.0)) {
            throw ConfigError("config: mobile agent needs positive speed");
        }
    }
    system().validate();
    const auto obs = observation_models();
    for (const auto& [id, om] : obs) {
        (void)id;
        om.validate(2);
    }
}

SystemModel ScenarioConfig::system() const {
    return rotation_dynamics(omega, theta0,
                             Eigen::Matrix2d(q_diag.asDiagonal()));
}

InputSignal ScenarioConfig::input() const {
    std::vector<std::pair<int, Eigen::VectorXd>> bps;
    bps.reserve(input_breakpoints.size());
    for (const auto& [step, v] : input_breakpoints) {
        bps.emplace_back(step, Eigen::VectorXd::Constant(1, v));
    }
    return InputSignal::piecewise(std::move(bps), 1);
}

std::map<int, AgentPose> ScenarioConfig::poses() const {
    std::map<int, AgentPose> out;
    for (const auto& a : agents) out[a.id] = a.pose();
    return out;
}

std::map<int, ObservationModel> ScenarioConfig::observation_models() const {
    std::map<int, ObservationModel> out;
    for (const auto& a : agents) {
        ObservationModel om;
        om.agent_id = a.id;
        switch (a.obs_axis) {
            case ObsAxis::x:
                om.H = Eigen::MatrixXd(1, 2);
                om.H << 1.0, 0.0;
                break;
            case ObsAxis::y:
                om.H = Eigen::MatrixXd(1, 2);
                om.H << 0.0, 1.0;
                break;
            case ObsAxis::both:
                om.H = Eigen::MatrixXd::Identity(2, 2);
                break;
        }
        om.R = r_var *
               Eigen::MatrixXd::Identity(om.H.rows(), om.H.rows());
        om.visibility = same_quadrant_visibility();
        out[a.id] = std::move(om);
    }
    return out;
}

namespace {

std::vector<AgentSpec> static_quartet() {
    // One agent per quadrant; x and y sensors alternate around the circle so
    // no single quadrant ever pins down both coordinates alone.
    std::vector<AgentSpec> agents(4);
    agents[0] = {0, {150.0, 150.0}, {}, 0.0, ObsAxis::x};
    agents[1] = {1, {-150.0, 150.0}, {}, 0.0, ObsAxis::y};
    agents[2] = {2, {-150.0, -150.0}, {}, 0.0, ObsAxis::x};
    agents[3] = {3, {150.0, -150.0}, {}, 0.0, ObsAxis::y};
    return agents;
}

}  // namespace

ScenarioConfig stationary_4agent() {
    ScenarioConfig cfg;
    cfg.name = "stationary_4agent";
    cfg.agents = static_quartet();
    // The corner agents are 300+ apart, so a range topology would leave them
    // isolated; the static scenario defaults to full connectivity instead.
    cfg.topology.kind = TopologyKind::all_to_all;
    return cfg;
}

ScenarioConfig dynamic_9agent() {
    ScenarioConfig cfg = stationary_4agent();
    cfg.name = "dynamic_9agent";
    cfg.topology.kind = TopologyKind::range_based;
    cfg.topology.radius = 120.0;
    cfg.topology.rule = RangeRule::ranges_intersect;
    // Mobile relays: a diamond loop around the origin plus four shuttles.
    // Their paths pass close enough to the corner agents to form transient
    // links, while the corner agents (300+ apart) never link directly.
    AgentSpec m1{4, {}, {{200.0, 0.0}, {0.0, 200.0}, {-200.0, 0.0}, {0.0, -200.0}},
                 15.0, ObsAxis::x};
    AgentSpec m2{5, {}, {{250.0, 250.0}, {250.0, -250.0}}, 20.0, ObsAxis::y};
    AgentSpec m3{6, {}, {{-250.0, 250.0}, {-250.0, -250.0}}, 20.0, ObsAxis::x};
    AgentSpec m4{7, {}, {{0.0, 300.0}, {0.0, -300.0}}, 25.0, ObsAxis::y};
    AgentSpec m5{8, {}, {{300.0, 0.0}, {-300.0, 0.0}}, 25.0, ObsAxis::x};
    cfg.agents.insert(cfg.agents.end(), {m1, m2, m3, m4, m5});
    return cfg;
}

ScenarioConfig named_scenario(const std::string& name) {
    if (name == "stationary_4agent") return stationary_4agent();
    if (name == "dynamic_9agent") return dynamic_9agent();
    if (name == "custom") return ScenarioConfig{};
    throw ConfigError("unknown scenario: " + name);
}

namespace {

Eigen::Vector2d parse_vec2(const YAML::Node& node, const std::string& key) {
    if (!node.IsSequence() || node.size() != 2) {
        throw ConfigError("config: " + key + " must be a 2-element sequence");
    }
    return {node[0].as<double>(), node[1].as<double>()};
}

ObsAxis parse_axis(const std::string& s) {
    if (s == "x") return ObsAxis::x;
    if (s == "y") return ObsAxis::y;
    if (s == "both") return ObsAxis::both;
    throw ConfigError("config: obs axis must be x, y, or both");
}

TopologySpec parse_topology(const YAML::Node& node, TopologySpec base) {
    if (node["kind"]) {
        const auto kind = node["kind"].as<std::string>();
        if (kind == "all_to_all") {
            base.kind = TopologyKind::all_to_all;
        } else if (kind == "static_adjacency") {
            base.kind = TopologyKind::static_adjacency;
        } else if (kind == "range_based") {
            base.kind = TopologyKind::range_based;
        } else {
            throw ConfigError("config: unknown topology kind " + kind);
        }
    }
    if (node["radius"]) base.radius = node["radius"].as<double>();
    if (node["rule"]) {
        const auto rule = node["rule"].as<std::string>();
        if (rule == "ranges_intersect") {
            base.rule = RangeRule::ranges_intersect;
        } else if (rule == "within_radius") {
            base.rule = RangeRule::within_radius;
        } else {
            throw ConfigError("config: unknown range rule " + rule);
        }
    }
    if (node["edges"]) {
        base.edges.clear();
        for (const auto& e : node["edges"]) {
            if (!e.IsSequence() || e.size() != 2) {
                throw ConfigError("config: each edge must be a pair");
            }
            base.edges.emplace_back(e[0].as<int>(), e[1].as<int>());
        }
    }
    return base;
}

AgentSpec parse_agent(const YAML::Node& node) {
    AgentSpec a;
    if (!node["id"]) throw ConfigError("config: agent without id");
    a.id = node["id"].as<int>();
    if (node["position"]) a.position = parse_vec2(node["position"], "position");
    if (node["waypoints"]) {
        for (const auto& w : node["waypoints"]) {
            a.waypoints.push_back(parse_vec2(w, "waypoint"));
        }
    }
    if (node["speed"]) a.speed = node["speed"].as<double>();
    if (node["obs"]) a.obs_axis = parse_axis(node["obs"].as<std::string>());
    return a;
}

}  // namespace

ScenarioConfig load_config(const std::string& path) {
    YAML::Node root;
    try {
        root = YAML::LoadFile(path);
    } catch (const YAML::Exception& e) {
        throw ConfigError("config: cannot load " + path + ": " + e.what());
    }
    if (!root.IsMap()) throw ConfigError("config: top level must be a map");

    ScenarioConfig cfg;
    try {
        if (root["scenario"]) {
            cfg = named_scenario(root["scenario"].as<std::string>());
        }
        if (root["horizon"]) cfg.horizon = root["horizon"].as<int>();
        if (root["seeds"]) {
            cfg.seeds.clear();
            for (const auto& s : root["seeds"]) {
                cfg.seeds.push_back(s.as<std::uint64_t>());
            }
        }
        if (root["omega"]) cfg.omega = root["omega"].as<double>();
        if (root["theta0"]) cfg.theta0 = root["theta0"].as<double>();
        if (root["x0"]) cfg.x0 = parse_vec2(root["x0"], "x0");
        if (root["p0"]) cfg.prior_cov_scale = root["p0"].as<double>();
        if (root["q_diag"]) cfg.q_diag = parse_vec2(root["q_diag"], "q_diag");
        if (root["r_var"]) cfg.r_var = root["r_var"].as<double>();
        if (root["input_breakpoints"]) {
            cfg.input_breakpoints.clear();
            for (const auto& bp : root["input_breakpoints"]) {
                if (!bp.IsSequence() || bp.size() != 2) {
                    throw ConfigError(
                        "config: input breakpoint must be [step, value]");
                }
                cfg.input_breakpoints.emplace_back(bp[0].as<int>(),
                                                  bp[1].as<double>());
            }
        }
        if (root["topology"]) {
            cfg.topology = parse_topology(root["topology"], cfg.topology);
        }
        if (root["window"]) cfg.window = root["window"].as<int>();
        if (root["epsilon"]) cfg.epsilon = root["epsilon"].as<double>();
        if (root["compensation"]) {
            cfg.compensation = root["compensation"].as<bool>();
        }
        if (root["time_window"]) {
            cfg.time_window = root["time_window"].as<bool>();
        }
        if (root["input_fusion"]) {
            cfg.input_fusion = root["input_fusion"].as<bool>();
        }
        if (root["agents"]) {
            cfg.agents.clear();
            for (const auto& a : root["agents"]) {
                cfg.agents.push_back(parse_agent(a));
            }
        }
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config: bad value: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

const char* to_string(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::diskf: return "diskf";
        case EstimatorKind::oracle: return "oracle";
        case EstimatorKind::local_only: return "local_only";
    }
    return "unknown";
}

EstimatorKind estimator_from_string(const std::string& s) {
    if (s == "diskf") return EstimatorKind::diskf;
    if (s == "oracle") return EstimatorKind::oracle;
    if (s == "local_only") return EstimatorKind::local_only;
    throw ConfigError("unknown estimator: " + s);
}

std::string topology_label(const TopologySpec& topo) {
    switch (topo.kind) {
        case TopologyKind::all_to_all: return "all_to_all";
        case TopologyKind::static_adjacency: return "static_adjacency";
        case TopologyKind::range_based: return "range_based";
    }
    return "unknown";
}

}  // namespace diskf
