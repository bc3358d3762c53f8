#include "diskf/fusion.hpp"

#include <algorithm>

#include "diskf/errors.hpp"
#include "diskf/linalg.hpp"

namespace diskf {

namespace {

// Valid-input packets in ascending sender order.
std::vector<const ExchangePacket*> valid_sorted(
    const std::vector<ExchangePacket>& packets) {
    std::vector<const ExchangePacket*> out;
    for (const auto& p : packets) {
        if (p.input.valid) out.push_back(&p);
    }
    std::sort(out.begin(), out.end(),
              [](const ExchangePacket* a, const ExchangePacket* b) {
                  return a->sender < b->sender;
              });
    return out;
}

}  // namespace

FusionWeights ci_weights(const std::vector<ExchangePacket>& packets) {
    FusionWeights w;
    double total = 0.0;
    for (const ExchangePacket* p : valid_sorted(packets)) {
        const double tr = p->input.cov.trace();
        if (!(tr > 0.0)) {
            throw ConditioningError(
                "ci_weights: valid input estimate with non-positive trace");
        }
        const double inv = 1.0 / tr;
        w[p->sender] = inv;
        total += inv;
    }
    for (auto& [sender, wi] : w) wi /= total;
    return w;
}

FusedInput fuse_inputs(const std::vector<ExchangePacket>& packets,
                       const FusionWeights& weights, int input_dim) {
    FusedInput out;
    out.mean = Eigen::VectorXd::Zero(input_dim);
    out.cov = Eigen::MatrixXd::Zero(input_dim, input_dim);
    const auto valid = valid_sorted(packets);
    if (valid.empty()) return out;

    Eigen::MatrixXd info = Eigen::MatrixXd::Zero(input_dim, input_dim);
    Eigen::VectorXd info_mean = Eigen::VectorXd::Zero(input_dim);
    for (const ExchangePacket* p : valid) {
        const auto it = weights.find(p->sender);
        if (it == weights.end()) {
            throw ConfigError("fuse_inputs: missing weight for sender " +
                              std::to_string(p->sender));
        }
        const Eigen::MatrixXd si = linalg::spd_inverse(p->input.cov);
        info += it->second * si;
        info_mean += it->second * (si * p->input.mean);
    }
    out.cov = linalg::spd_inverse(info);
    out.mean = out.cov * info_mean;
    out.any_valid = true;
    return out;
}

Gaussian predict_with_input(const LocalBelief& belief, const SystemModel& model,
                            const FusedInput& fused, int k) {
    Gaussian out = predict(belief, model, k);
    if (fused.any_valid) {
        out.mean += model.input_matrix_at(k - 1) * fused.mean;
    }
    return out;
}

LocalBelief fuse_states(const std::vector<ExchangePacket>& packets,
                        const LocalStepOutput& own, const FusedInput& fused,
                        const SystemModel& model, int k) {
    const int n = model.state_dim;
    std::vector<const ExchangePacket*> sorted;
    sorted.reserve(packets.size());
    for (const auto& p : packets) sorted.push_back(&p);
    std::sort(sorted.begin(), sorted.end(),
              [](const ExchangePacket* a, const ExchangePacket* b) {
                  return a->sender < b->sender;
              });

    Eigen::MatrixXd info_gain = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd mean_gain = Eigen::VectorXd::Zero(n);
    for (const ExchangePacket* p : sorted) {
        const Eigen::MatrixXd pred_info = linalg::spd_inverse(p->cov_pred);
        const Eigen::MatrixXd upd_info = linalg::spd_inverse(p->cov_upd);
        info_gain += upd_info - pred_info;
        mean_gain += upd_info * p->state_upd - pred_info * p->state_pred;
    }

    const Eigen::MatrixXd own_pred_info = linalg::spd_inverse(own.pred.cov);
    Eigen::VectorXd injected = own.pred.mean;
    if (fused.any_valid) {
        injected += model.input_matrix_at(k - 1) * fused.mean;
    }

    LocalBelief out;
    out.cov = linalg::spd_inverse(own_pred_info + info_gain);
    out.mean = out.cov * (mean_gain + own_pred_info * injected);
    return out;
}

Compensation compensate_state(
    const Eigen::VectorXd& fused_mean, const Eigen::MatrixXd& fused_cov,
    const Eigen::VectorXd& own_pred_injected,
    const std::vector<Eigen::VectorXd>& neighbor_pred_injected,
    double epsilon) {
    Eigen::VectorXd disagreement = Eigen::VectorXd::Zero(fused_mean.size());
    for (const auto& xp : neighbor_pred_injected) {
        disagreement += xp - own_pred_injected;
    }
    Compensation out;
    const Eigen::VectorXd adjustment = epsilon * (fused_cov * disagreement);
    out.mean = fused_mean + adjustment;
    out.adjustment_norm = adjustment.norm();
    return out;
}

}  // namespace diskf
