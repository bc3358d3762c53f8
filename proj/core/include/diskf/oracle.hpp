#pragma once

#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "diskf/local_estimator.hpp"
#include "diskf/model.hpp"

namespace diskf {

// Reference filter that sees every measurement in the network at once.
struct CentralizedState {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    InputEstimate input;  // last input estimate (invalid when none was made)
};

// All measurements of one step stacked into a single observation; R is block
// diagonal. Contributors are recorded in ascending agent order.
struct StackedObservation {
    Eigen::MatrixXd H;
    Eigen::MatrixXd R;
    Eigen::VectorXd y;
    std::vector<int> contributors;

    bool empty() const { return contributors.empty(); }
};

StackedObservation stack_observations(
    const std::map<int, std::pair<Eigen::VectorXd, const ObservationModel*>>&
        measurements);

// One step of the centralized filter: input-free prediction, input estimation
// from the stacked innovation when the rank condition holds, then an
// information-form update around the input-injected prediction. With no
// measurements the prediction is carried forward unchanged.
CentralizedState centralized_step(const CentralizedState& prev,
                                  const StackedObservation& stacked,
                                  const SystemModel& model, int k);

}  // namespace diskf
