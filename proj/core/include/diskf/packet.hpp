#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "diskf/local_estimator.hpp"

namespace diskf {

// Everything one agent broadcasts per step. state_pred_injected is the
// sender's prediction shifted by its previous step's fused input; receivers
// difference these fields to measure cross-network disagreement.
struct ExchangePacket {
    int sender = 0;
    InputEstimate input;            // local estimate, not the fused one
    Eigen::VectorXd state_pred;     // x before the measurement update
    Eigen::MatrixXd cov_pred;
    Eigen::VectorXd state_upd;      // x after the measurement update
    Eigen::MatrixXd cov_upd;
    Eigen::VectorXd state_pred_injected;
};

// Wire format: consecutive little-endian IEEE-754 doubles, no padding.
//   sender, input_valid (0.0 / 1.0),
//   input mean (m), input cov (m*m, row-major),
//   state_pred (n), cov_pred (n*n, row-major),
//   state_upd (n), cov_upd (n*n, row-major),
//   state_pred_injected (n)
// Total size: 8 * (2 + m + m^2 + 3n + 2n^2) bytes.
std::size_t packet_byte_size(int state_dim, int input_dim);

std::vector<std::uint8_t> serialize(const ExchangePacket& p);

// Throws ConfigError if the buffer size does not match the dimensions or a
// field fails its round-trip constraints (non-finite, bad flag value).
ExchangePacket deserialize(std::span<const std::uint8_t> bytes, int state_dim,
                           int input_dim);

}  // namespace diskf
