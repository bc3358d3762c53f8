#pragma once

#include <optional>

#include <Eigen/Dense>

#include "diskf/model.hpp"

namespace diskf {

struct Gaussian {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

// The belief an agent carries between steps (its fused posterior).
using LocalBelief = Gaussian;

struct InputEstimate {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    bool valid = false;
};

// Counts steps since the agent last saw the target. Input estimation is
// skipped once the gap exceeds the window: the prediction it would correct
// has absorbed too many unmodeled inputs by then.
struct TimeWindow {
    int steps_since_obs = 0;
    int window = 5;

    bool expired() const { return steps_since_obs > window; }
};

// What one agent produces per step before any fusion.
struct LocalStepOutput {
    Gaussian pred;  // prediction without input
    InputEstimate input;
    Gaussian upd;  // measurement update of pred
    bool had_observation = false;
};

// Input-free prediction into step k: mean A(k-1) x, cov A(k-1) P A(k-1)^T + Q.
Gaussian predict(const LocalBelief& belief, const SystemModel& model, int k);

// The input is recoverable from one measurement iff H * G has full column
// rank (numerical rank via SVD).
bool rank_condition(const Eigen::MatrixXd& H, const Eigen::MatrixXd& G);

// Minimum-variance unbiased input estimate from the innovation y - H x_pred:
//   St = H P_pred H^T + R
//   F  = (H G)^T St^{-1} (H G)          (must be invertible)
//   mean = F^{-1} (H G)^T St^{-1} (y - H x_pred),   cov = F^{-1}
// Returns an invalid estimate when the window has expired or the rank
// condition fails; throws DegenerateEstimateError if F cannot be inverted.
InputEstimate estimate_input(const Gaussian& pred, const Eigen::VectorXd& y,
                             const ObservationModel& obs,
                             const Eigen::MatrixXd& input_matrix,
                             const TimeWindow& tw);

// Information-form measurement update, ignoring any input:
//   P_upd^{-1} = P_pred^{-1} + H^T R^{-1} H
//   x_upd = x_pred + P_upd H^T R^{-1} (y - H x_pred)
// Without a measurement the prediction passes through unchanged.
Gaussian kf_update(const Gaussian& pred,
                   const std::optional<Eigen::VectorXd>& y,
                   const ObservationModel& obs);

// Counter resets when the agent observed this step or some neighbor shipped
// a valid input estimate; otherwise it grows by one.
TimeWindow advance_time_window(TimeWindow tw, bool had_observation,
                               bool neighbor_input_valid);

// One full local step. A degenerate input estimate is downgraded to invalid
// rather than propagated as an exception. With gating disabled the window
// check is bypassed (the rank condition still applies).
LocalStepOutput local_step(const LocalBelief& belief, const SystemModel& model,
                           const ObservationModel& obs,
                           const std::optional<Eigen::VectorXd>& y,
                           const TimeWindow& tw, int k,
                           bool gate_enabled = true);

}  // namespace diskf
