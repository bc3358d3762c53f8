#include <benchmark/benchmark.h>

#include <vector>

#include "diskf/fusion.hpp"
#include "diskf/local_estimator.hpp"
#include "diskf/packet.hpp"
#include "diskf/runner.hpp"
#include "diskf/scenario.hpp"

namespace {

diskf::ScenarioConfig small_config(const char* name, int horizon,
                                   std::uint64_t seed) {
    diskf::ScenarioConfig cfg = diskf::named_scenario(name);
    cfg.horizon = horizon;
    cfg.seeds = {seed};
    return cfg;
}

void BM_LocalStep(benchmark::State& state) {
    const auto cfg = diskf::stationary_4agent();
    const auto model = cfg.system();
    const auto obs = cfg.observation_models().at(0);
    diskf::LocalBelief belief{Eigen::VectorXd::Zero(2),
                              10.0 * Eigen::MatrixXd::Identity(2, 2)};
    const Eigen::VectorXd y = Eigen::VectorXd::Constant(1, 3.0);
    diskf::TimeWindow tw{0, 5};
    for (auto _ : state) {
        auto out = diskf::local_step(belief, model, obs, y, tw, 1);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_LocalStep);

void BM_FuseInputs(benchmark::State& state) {
    const int count = static_cast<int>(state.range(0));
    std::vector<diskf::ExchangePacket> packets(count);
    for (int i = 0; i < count; ++i) {
        auto& p = packets[i];
        p.sender = i;
        p.input.valid = true;
        p.input.mean = Eigen::VectorXd::Constant(1, 10.0 + i);
        p.input.cov = Eigen::MatrixXd::Constant(1, 1, 1.0 + i);
    }
    for (auto _ : state) {
        auto w = diskf::ci_weights(packets);
        auto fused = diskf::fuse_inputs(packets, w, 1);
        benchmark::DoNotOptimize(fused);
    }
}
BENCHMARK(BM_FuseInputs)->Arg(4)->Arg(9)->Arg(32);

void BM_PacketRoundTrip(benchmark::State& state) {
    diskf::ExchangePacket p;
    p.sender = 3;
    p.input.valid = true;
    p.input.mean = Eigen::VectorXd::Constant(1, 9.5);
    p.input.cov = Eigen::MatrixXd::Constant(1, 1, 2.0);
    p.state_pred = Eigen::VectorXd::LinSpaced(2, 1.0, 2.0);
    p.cov_pred = 4.0 * Eigen::MatrixXd::Identity(2, 2);
    p.state_upd = p.state_pred;
    p.cov_upd = 2.0 * Eigen::MatrixXd::Identity(2, 2);
    p.state_pred_injected = p.state_pred;
    for (auto _ : state) {
        auto bytes = diskf::serialize(p);
        auto back = diskf::deserialize(bytes, 2, 1);
        benchmark::DoNotOptimize(back);
    }
}
BENCHMARK(BM_PacketRoundTrip);

void BM_StationaryScenarioSeed(benchmark::State& state) {
    const auto cfg = small_config("stationary_4agent",
                                  static_cast<int>(state.range(0)), 7);
    for (auto _ : state) {
        auto res = diskf::run_scenario(cfg, diskf::EstimatorKind::diskf);
        benchmark::DoNotOptimize(res);
    }
}
BENCHMARK(BM_StationaryScenarioSeed)->Arg(50)->Arg(200);

void BM_DynamicScenarioSeed(benchmark::State& state) {
    const auto cfg = small_config("dynamic_9agent",
                                  static_cast<int>(state.range(0)), 7);
    for (auto _ : state) {
        auto res = diskf::run_scenario(cfg, diskf::EstimatorKind::diskf);
        benchmark::DoNotOptimize(res);
    }
}
BENCHMARK(BM_DynamicScenarioSeed)->Arg(50)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
