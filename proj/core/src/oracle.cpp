#include "diskf/oracle.hpp"

#include <limits>

#include "diskf/errors.hpp"
#include "diskf/linalg.hpp"

namespace diskf {

StackedObservation stack_observations(
    const std::map<int, std::pair<Eigen::VectorXd, const ObservationModel*>>&
        measurements) {
    StackedObservation out;
    int rows = 0;
    int state_dim = -1;
    for (const auto& [id, m] : measurements) {
        (void)id;
        const auto* obs = m.second;
        if (obs == nullptr) throw ConfigError("stack_observations: null model");
        if (m.first.size() != obs->obs_dim()) {
            throw ConfigError("stack_observations: measurement size mismatch");
        }
        if (state_dim < 0) {
            state_dim = static_cast<int>(obs->H.cols());
        } else if (obs->H.cols() != state_dim) {
            throw ConfigError("stack_observations: state dimension mismatch");
        }
        rows += obs->obs_dim();
    }
    if (rows == 0) return out;

    out.H = Eigen::MatrixXd::Zero(rows, state_dim);
    out.R = Eigen::MatrixXd::Zero(rows, rows);
    out.y = Eigen::VectorXd::Zero(rows);
    int at = 0;
    for (const auto& [id, m] : measurements) {
        const auto* obs = m.second;
        const int p = obs->obs_dim();
        out.H.middleRows(at, p) = obs->H;
        out.R.block(at, at, p, p) = obs->R;
        out.y.segment(at, p) = m.first;
        out.contributors.push_back(id);
        at += p;
    }
    return out;
}

CentralizedState centralized_step(const CentralizedState& prev,
                                  const StackedObservation& stacked,
                                  const SystemModel& model, int k) {
    const Gaussian pred = predict({prev.mean, prev.cov}, model, k);
    const Eigen::MatrixXd g = model.input_matrix_at(k - 1);

    CentralizedState out;
    out.input.mean = Eigen::VectorXd::Zero(model.input_dim);
    out.input.cov = Eigen::MatrixXd::Zero(model.input_dim, model.input_dim);
    if (stacked.empty()) {
        out.mean = pred.mean;
        out.cov = pred.cov;
        return out;
    }

    if (rank_condition(stacked.H, g)) {
        ObservationModel stacked_obs;
        stacked_obs.H = stacked.H;
        stacked_obs.R = stacked.R;
        // The centralized filter never gates on staleness.
        out.input = estimate_input(pred, stacked.y, stacked_obs, g,
                                   TimeWindow{0, std::numeric_limits<int>::max()});
    }

    Eigen::VectorXd injected = pred.mean;
    if (out.input.valid) injected += g * out.input.mean;

    const Eigen::MatrixXd r_inv = linalg::spd_inverse(stacked.R);
    const Eigen::MatrixXd pred_info = linalg::spd_inverse(pred.cov);
    out.cov = linalg::spd_inverse(pred_info +
                                  stacked.H.transpose() * r_inv * stacked.H);
    out.mean = out.cov * (stacked.H.transpose() * (r_inv * stacked.y) +
                          pred_info * injected);
    return out;
}

}  // namespace diskf
