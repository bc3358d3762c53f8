#include "diskf/metrics.hpp"

#include <cmath>

#include "diskf/errors.hpp"

namespace diskf {

namespace {

struct Accum {
    double abs_sum = 0.0;
    double sq_sum = 0.0;
    long count = 0;

    void add(const Eigen::VectorXd& err) {
        for (Eigen::Index i = 0; i < err.size(); ++i) {
            abs_sum += std::abs(err(i));
            sq_sum += err(i) * err(i);
            ++count;
        }
    }
    double mae() const { return count ? abs_sum / static_cast<double>(count) : 0.0; }
    double rmse() const {
        return count ? std::sqrt(sq_sum / static_cast<double>(count)) : 0.0;
    }
};

}  // namespace

SeriesMetrics compute_metrics(const AgentTrace& trace,
                              const GroundTruth& truth) {
    const std::size_t steps = trace.state_est.size();
    if (trace.input_est.size() != steps) {
        throw ConfigError("compute_metrics: trace length mismatch");
    }
    if (truth.states.size() < steps + 1 || truth.inputs.size() < steps) {
        throw ConfigError("compute_metrics: truth shorter than trace");
    }
    Accum state, input;
    for (std::size_t t = 0; t < steps; ++t) {
        state.add(trace.state_est[t] - truth.states[t + 1]);
        input.add(trace.input_est[t] - truth.inputs[t]);
    }
    return {state.mae(), state.rmse(), input.mae(), input.rmse()};
}

SeriesMetrics average_metrics(const std::map<int, SeriesMetrics>& per_agent) {
    SeriesMetrics out;
    if (per_agent.empty()) return out;
    for (const auto& [id, m] : per_agent) {
        (void)id;
        out.mae_state += m.mae_state;
        out.rmse_state += m.rmse_state;
        out.mae_input += m.mae_input;
        out.rmse_input += m.rmse_input;
    }
    const double n = static_cast<double>(per_agent.size());
    out.mae_state /= n;
    out.rmse_state /= n;
    out.mae_input /= n;
    out.rmse_input /= n;
    return out;
}

}  // namespace diskf
