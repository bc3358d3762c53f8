#pragma once

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "diskf/local_estimator.hpp"
#include "diskf/packet.hpp"

namespace diskf {

struct FusedInput {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    bool any_valid = false;
};

// sender id -> covariance-intersection weight.
using FusionWeights = std::map<int, double>;

// Trace-reciprocal CI weights over the packets carrying a valid input
// estimate: w_j proportional to 1 / tr(S_j). Empty map when none is valid.
FusionWeights ci_weights(const std::vector<ExchangePacket>& packets);

// Covariance intersection of the valid input estimates:
//   cov = (sum_j w_j S_j^{-1})^{-1},  mean = cov * sum_j w_j S_j^{-1} d_j.
// Sums run in ascending sender order so every agent computes bit-identical
// results regardless of packet arrival order. With no valid packets the
// result is zero-mean, zero-cov, any_valid = false.
FusedInput fuse_inputs(const std::vector<ExchangePacket>& packets,
                       const FusionWeights& weights, int input_dim);

// Prediction with the fused input injected into the mean; the covariance is
// left as the input-free prediction (the input uncertainty is not folded in).
Gaussian predict_with_input(const LocalBelief& belief, const SystemModel& model,
                            const FusedInput& fused, int k);

// Information-form fusion of the neighborhood, step k:
//   P^{-1} = P_pred_own^{-1} + sum_j (P_upd_j^{-1} - P_pred_j^{-1})
//   x = P * [ sum_j (P_upd_j^{-1} x_upd_j - P_pred_j^{-1} x_pred_j)
//             + P_pred_own^{-1} (x_pred_own + G(k-1) d_fused) ]
// The sum over j covers every received packet (the sender's own included);
// packets with invalid input estimates still contribute their state terms.
// When no fused input is available the injection term is dropped.
LocalBelief fuse_states(const std::vector<ExchangePacket>& packets,
                        const LocalStepOutput& own, const FusedInput& fused,
                        const SystemModel& model, int k);

struct Compensation {
    Eigen::VectorXd mean;
    double adjustment_norm = 0.0;
};

// Nudges the fused mean toward the neighborhood consensus of injected
// predictions: x + epsilon * P * sum_j (xp_j - xp_own).
Compensation compensate_state(const Eigen::VectorXd& fused_mean,
                              const Eigen::MatrixXd& fused_cov,
                              const Eigen::VectorXd& own_pred_injected,
                              const std::vector<Eigen::VectorXd>& neighbor_pred_injected,
                              double epsilon);

}  // namespace diskf
