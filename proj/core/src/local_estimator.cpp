#include "diskf/local_estimator.hpp"

#include <limits>

#include "diskf/errors.hpp"
#include "diskf/linalg.hpp"

namespace diskf {

Gaussian predict(const LocalBelief& belief, const SystemModel& model, int k) {
    if (belief.mean.size() != model.state_dim) {
        throw ConfigError("predict: belief dimension mismatch");
    }
    const Eigen::MatrixXd a = model.dynamics_at(k - 1);
    Gaussian out;
    out.mean = a * belief.mean;
    out.cov = linalg::symmetrized(a * belief.cov * a.transpose() +
                                  model.process_cov);
    return out;
}

bool rank_condition(const Eigen::MatrixXd& H, const Eigen::MatrixXd& G) {
    return linalg::numerical_rank(H * G) == G.cols();
}

InputEstimate estimate_input(const Gaussian& pred, const Eigen::VectorXd& y,
                             const ObservationModel& obs,
                             const Eigen::MatrixXd& input_matrix,
                             const TimeWindow& tw) {
    const int m = static_cast<int>(input_matrix.cols());
    InputEstimate est;
    est.mean = Eigen::VectorXd::Zero(m);
    est.cov = Eigen::MatrixXd::Zero(m, m);
    if (tw.expired()) return est;
    if (!rank_condition(obs.H, input_matrix)) return est;

    const Eigen::MatrixXd hg = obs.H * input_matrix;
    const Eigen::MatrixXd innov_cov =
        linalg::symmetrized(obs.H * pred.cov * obs.H.transpose() + obs.R);
    // hg^T innov_cov^{-1}, formed as a solve against hg.
    const Eigen::MatrixXd wt = linalg::spd_solve(innov_cov, hg).transpose();
    const Eigen::MatrixXd normal = linalg::symmetrized(wt * hg);
    Eigen::MatrixXd normal_inv;
    try {
        normal_inv = linalg::spd_inverse(normal);
    } catch (const ConditioningError&) {
        throw DegenerateEstimateError(
            "estimate_input: normal equations are singular");
    }
    est.mean = normal_inv * wt * (y - obs.H * pred.mean);
    est.cov = normal_inv;
    est.valid = true;
    return est;
}

Gaussian kf_update(const Gaussian& pred,
                   const std::optional<Eigen::VectorXd>& y,
                   const ObservationModel& obs) {
    if (!y.has_value()) return pred;
    if (y->size() != obs.obs_dim()) {
        throw ConfigError("kf_update: measurement dimension mismatch");
    }
    const Eigen::MatrixXd r_inv = linalg::spd_inverse(obs.R);
    const Eigen::MatrixXd p_inv = linalg::spd_inverse(pred.cov);
    Gaussian out;
    out.cov = linalg::spd_inverse(
        p_inv + obs.H.transpose() * r_inv * obs.H);
    const Eigen::MatrixXd gain = out.cov * obs.H.transpose() * r_inv;
    out.mean = pred.mean + gain * (*y - obs.H * pred.mean);
    return out;
}

TimeWindow advance_time_window(TimeWindow tw, bool had_observation,
                               bool neighbor_input_valid) {
    if (had_observation || neighbor_input_valid) {
        tw.steps_since_obs = 0;
    } else if (tw.steps_since_obs < std::numeric_limits<int>::max()) {
        ++tw.steps_since_obs;
    }
    return tw;
}

LocalStepOutput local_step(const LocalBelief& belief, const SystemModel& model,
                           const ObservationModel& obs,
                           const std::optional<Eigen::VectorXd>& y,
                           const TimeWindow& tw, int k, bool gate_enabled) {
    LocalStepOutput out;
    out.pred = predict(belief, model, k);
    out.had_observation = y.has_value();
    const int m = model.input_dim;
    out.input.mean = Eigen::VectorXd::Zero(m);
    out.input.cov = Eigen::MatrixXd::Zero(m, m);
    if (y.has_value()) {
        TimeWindow effective = tw;
        if (!gate_enabled) {
            effective.window = std::numeric_limits<int>::max();
        }
        try {
            out.input = estimate_input(out.pred, *y, obs,
                                       model.input_matrix_at(k - 1), effective);
        } catch (const DegenerateEstimateError&) {
            out.input.valid = false;
        }
    }
    out.upd = kf_update(out.pred, y, obs);
    return out;
}

}  // namespace diskf
