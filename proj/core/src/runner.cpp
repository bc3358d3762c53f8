#include "diskf/runner.hpp"

#include <charconv>
#include <ostream>

#include "diskf/errors.hpp"
#include "diskf/fusion.hpp"
#include "diskf/local_estimator.hpp"
#include "diskf/network.hpp"
#include "diskf/oracle.hpp"
#include "diskf/packet.hpp"

namespace diskf {

namespace {

struct NodeState {
    LocalBelief belief;
    TimeWindow tw;
    FusedInput prev_fused;
};

SeedResult run_seed_decentralized(const ScenarioConfig& cfg,
                                  std::uint64_t seed, bool edgeless) {
    const SystemModel model = cfg.system();
    const auto obs_models = cfg.observation_models();
    const auto poses = cfg.poses();
    const int n = model.state_dim;
    const int m = model.input_dim;

    TopologySpec topo = cfg.topology;
    if (edgeless) {
        topo.kind = TopologyKind::static_adjacency;
        topo.edges.clear();
    }

    SeedResult res;
    res.seed = seed;
    NoiseSource noise(seed);
    res.truth = simulate_truth(model, cfg.input(), cfg.x0, cfg.horizon, noise);

    std::map<int, NodeState> nodes;
    for (const auto& a : cfg.agents) {
        NodeState ns;
        ns.belief = {Eigen::VectorXd(cfg.x0),
                     cfg.prior_cov_scale * Eigen::MatrixXd::Identity(n, n)};
        ns.tw = TimeWindow{0, cfg.window};
        ns.prev_fused = {Eigen::VectorXd::Zero(m),
                         Eigen::MatrixXd::Zero(m, m), false};
        nodes[a.id] = std::move(ns);
    }

    SingleRoundGuard guard;
    for (int k = 1; k <= cfg.horizon; ++k) {
        const auto nbrs = neighborhoods(topo, poses, k);
        guard.begin(k);

        std::map<int, LocalStepOutput> outputs;
        std::map<int, ExchangePacket> outgoing;
        std::map<int, int> gap_at_call;
        const Eigen::MatrixXd g = model.input_matrix_at(k - 1);
        for (auto& [id, node] : nodes) {
            const auto y = observe(res.truth.states[k], obs_models.at(id),
                                   poses.at(id).at(k), k, noise);
            gap_at_call[id] = node.tw.steps_since_obs;
            LocalStepOutput out = local_step(node.belief, model,
                                             obs_models.at(id), y, node.tw, k,
                                             cfg.time_window);
            ExchangePacket pkt;
            pkt.sender = id;
            pkt.input = out.input;
            pkt.state_pred = out.pred.mean;
            pkt.cov_pred = out.pred.cov;
            pkt.state_upd = out.upd.mean;
            pkt.cov_upd = out.upd.cov;
            pkt.state_pred_injected = out.pred.mean;
            if (node.prev_fused.any_valid) {
                pkt.state_pred_injected += g * node.prev_fused.mean;
            }
            outgoing[id] = std::move(pkt);
            outputs[id] = std::move(out);
        }

        const auto received = exchange_packets(outgoing, nbrs);

        for (auto& [id, node] : nodes) {
            const auto& inbox = received.at(id);
            const auto& own_out = outputs.at(id);

            FusedInput fused;
            if (cfg.input_fusion) {
                fused = fuse_inputs(inbox, ci_weights(inbox), m);
            } else {
                fused = {own_out.input.mean, own_out.input.cov,
                         own_out.input.valid};
            }

            LocalBelief next = fuse_states(inbox, own_out, fused, model, k);

            double comp_norm = 0.0;
            if (cfg.compensation) {
                std::vector<Eigen::VectorXd> others;
                others.reserve(inbox.size());
                for (const auto& p : inbox) {
                    others.push_back(p.state_pred_injected);
                }
                const Compensation comp = compensate_state(
                    next.mean, next.cov,
                    outgoing.at(id).state_pred_injected, others, cfg.epsilon);
                next.mean = comp.mean;
                comp_norm = comp.adjustment_norm;
            }

            bool any_packet_valid = false;
            for (const auto& p : inbox) {
                if (p.input.valid) any_packet_valid = true;
            }

            node.belief = std::move(next);
            node.tw = advance_time_window(node.tw, own_out.had_observation,
                                          any_packet_valid);
            node.prev_fused = fused;

            StepRecord rec;
            rec.step = k;
            rec.agent = id;
            rec.had_observation = own_out.had_observation;
            rec.gap_at_call = gap_at_call.at(id);
            rec.local_input_valid = own_out.input.valid;
            rec.local_input = own_out.input.valid
                                  ? own_out.input.mean
                                  : Eigen::VectorXd(Eigen::VectorXd::Zero(m));
            rec.fused_input_valid = fused.any_valid;
            rec.input_est = fused.any_valid
                                ? fused.mean
                                : Eigen::VectorXd(Eigen::VectorXd::Zero(m));
            rec.state_est = node.belief.mean;
            rec.compensation_norm = comp_norm;
            rec.n_neighbors = static_cast<int>(inbox.size()) - 1;
            res.records.push_back(std::move(rec));
        }
    }

    for (const auto& a : cfg.agents) {
        AgentTrace trace;
        for (const auto& rec : res.records) {
            if (rec.agent != a.id) continue;
            trace.state_est.push_back(rec.state_est);
            trace.input_est.push_back(rec.input_est);
        }
        res.per_agent[a.id] = compute_metrics(trace, res.truth);
    }
    res.averaged = average_metrics(res.per_agent);
    res.ok = true;
    return res;
}

SeedResult run_seed_oracle(const ScenarioConfig& cfg, std::uint64_t seed) {
    const SystemModel model = cfg.system();
    const auto obs_models = cfg.observation_models();
    const auto poses = cfg.poses();
    const int n = model.state_dim;
    const int m = model.input_dim;

    SeedResult res;
    res.seed = seed;
    NoiseSource noise(seed);
    res.truth = simulate_truth(model, cfg.input(), cfg.x0, cfg.horizon, noise);

    CentralizedState central;
    central.mean = cfg.x0;
    central.cov = cfg.prior_cov_scale * Eigen::MatrixXd::Identity(n, n);
    central.input = {Eigen::VectorXd::Zero(m), Eigen::MatrixXd::Zero(m, m),
                     false};

    for (int k = 1; k <= cfg.horizon; ++k) {
        std::map<int, std::pair<Eigen::VectorXd, const ObservationModel*>>
            measurements;
        for (const auto& [id, om] : obs_models) {
            const auto y =
                observe(res.truth.states[k], om, poses.at(id).at(k), k, noise);
            if (y.has_value()) measurements[id] = {*y, &om};
        }
        const StackedObservation stacked = stack_observations(measurements);
        central = centralized_step(central, stacked, model, k);

        StepRecord rec;
        rec.step = k;
        rec.agent = -1;
        rec.had_observation = !stacked.empty();
        rec.local_input_valid = central.input.valid;
        rec.local_input = central.input.valid
                              ? central.input.mean
                              : Eigen::VectorXd(Eigen::VectorXd::Zero(m));
        rec.fused_input_valid = central.input.valid;
        rec.input_est = rec.local_input;
        rec.state_est = central.mean;
        rec.n_neighbors = static_cast<int>(stacked.contributors.size());
        res.records.push_back(std::move(rec));
    }

    AgentTrace trace;
    for (const auto& rec : res.records) {
        trace.state_est.push_back(rec.state_est);
        trace.input_est.push_back(rec.input_est);
    }
    res.per_agent[-1] = compute_metrics(trace, res.truth);
    res.averaged = res.per_agent.at(-1);
    res.ok = true;
    return res;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config, EstimatorKind kind) {
    config.validate();
    ScenarioResult out;
    out.estimator = kind;
    out.all_ok = true;

    SeriesMetrics sum;
    int ok_count = 0;
    for (std::uint64_t seed : config.effective_seeds()) {
        SeedResult res;
        try {
            switch (kind) {
                case EstimatorKind::diskf:
                    res = run_seed_decentralized(config, seed, false);
                    break;
                case EstimatorKind::local_only:
                    res = run_seed_decentralized(config, seed, true);
                    break;
                case EstimatorKind::oracle:
                    res = run_seed_oracle(config, seed);
                    break;
            }
        } catch (const std::exception& e) {
            res = SeedResult{};
            res.seed = seed;
            res.ok = false;
            res.error = e.what();
        }
        if (res.ok) {
            sum.mae_state += res.averaged.mae_state;
            sum.rmse_state += res.averaged.rmse_state;
            sum.mae_input += res.averaged.mae_input;
            sum.rmse_input += res.averaged.rmse_input;
            ++ok_count;
        } else {
            out.all_ok = false;
        }
        out.seeds.push_back(std::move(res));
    }
    if (ok_count > 0) {
        const double c = static_cast<double>(ok_count);
        out.seed_mean = {sum.mae_state / c, sum.rmse_state / c,
                         sum.mae_input / c, sum.rmse_input / c};
    }
    return out;
}

std::vector<RadiusSweepRow> sweep_radius(const ScenarioConfig& config,
                                         EstimatorKind kind,
                                         const std::vector<double>& radii) {
    std::vector<RadiusSweepRow> rows;
    for (double r : radii) {
        ScenarioConfig cfg = config;
        cfg.topology.kind = TopologyKind::range_based;
        cfg.topology.radius = r;
        const ScenarioResult res = run_scenario(cfg, kind);
        rows.push_back({r, res.seed_mean, res.all_ok});
    }
    return rows;
}

namespace {

std::string csv_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw ConfigError("csv_double: conversion failed");
    return std::string(buf, ptr);
}

}  // namespace

void write_trace_csv(std::ostream& out, const ScenarioConfig& config,
                     const ScenarioResult& result,
                     const std::string& topology_name) {
    const SystemModel model = config.system();
    if (model.state_dim != 2 || model.input_dim != 1) {
        throw ConfigError("write_trace_csv: expects a planar scalar-input plant");
    }
    out << "run_id,seed,step,agent_id,truth_x,truth_y,truth_d,"
           "est_x,est_y,est_d,input_valid,n_neighbors\n";
    for (const auto& seed_res : result.seeds) {
        if (!seed_res.ok) continue;
        const std::string run_id = config.name + "_" +
                                   to_string(result.estimator) + "_" +
                                   topology_name + "_s" +
                                   std::to_string(seed_res.seed);
        for (const auto& rec : seed_res.records) {
            const auto& xt = seed_res.truth.states[static_cast<std::size_t>(rec.step)];
            const auto& dt =
                seed_res.truth.inputs[static_cast<std::size_t>(rec.step) - 1];
            out << run_id << ',' << seed_res.seed << ',' << rec.step << ','
                << rec.agent << ',' << csv_double(xt(0)) << ','
                << csv_double(xt(1)) << ',' << csv_double(dt(0)) << ','
                << csv_double(rec.state_est(0)) << ','
                << csv_double(rec.state_est(1)) << ','
                << csv_double(rec.input_est(0)) << ','
                << (rec.fused_input_valid ? 1 : 0) << ',' << rec.n_neighbors
                << '\n';
        }
    }
}

void write_aggregate_csv(std::ostream& out,
                         const std::vector<AggregateRow>& rows) {
    out << "estimator,topology,radius,metric,value\n";
    for (const auto& row : rows) {
        const std::string radius =
            row.radius.has_value() ? csv_double(*row.radius) : std::string();
        const std::pair<const char*, double> metrics[] = {
            {"mae_state", row.metrics.mae_state},
            {"rmse_state", row.metrics.rmse_state},
            {"mae_input", row.metrics.mae_input},
            {"rmse_input", row.metrics.rmse_input},
        };
        for (const auto& [name, value] : metrics) {
            out << row.estimator << ',' << row.topology << ',' << radius << ','
                << name << ',' << csv_double(value) << '\n';
        }
    }
}

std::vector<AggregateRow> aggregate_rows(const ScenarioConfig& config,
                                         const ScenarioResult& result,
                                         const std::string& topology_name) {
    AggregateRow row;
    row.estimator = to_string(result.estimator);
    row.topology = topology_name;
    if (config.topology.kind == TopologyKind::range_based &&
        result.estimator != EstimatorKind::local_only) {
        row.radius = config.topology.radius;
    }
    row.metrics = result.seed_mean;
    return {row};
}

}  // namespace diskf
