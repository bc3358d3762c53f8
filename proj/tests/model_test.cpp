#include "diskf/model.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "diskf/errors.hpp"

using diskf::InputSignal;
using diskf::NoiseSource;
using diskf::ObservationModel;
using diskf::SystemModel;

namespace {

const Eigen::Matrix2d kZeroQ = Eigen::Matrix2d::Zero();
const Eigen::Matrix2d kDefaultQ = 0.2 * Eigen::Matrix2d::Identity();

}  // namespace

TEST(RotationDynamics, QuarterTurnAtStepOne) {
    // theta(k) = omega * k + theta0; omega = pi/2, k = 1 gives a quarter
    // turn: [[0,-1],[1,0]].
    const SystemModel m = diskf::rotation_dynamics(M_PI / 2.0, 0.0, kDefaultQ);
    const Eigen::MatrixXd a = m.dynamics_at(1);
    EXPECT_NEAR(a(0, 0), 0.0, 1e-12);
    EXPECT_NEAR(a(0, 1), -1.0, 1e-12);
    EXPECT_NEAR(a(1, 0), 1.0, 1e-12);
    EXPECT_NEAR(a(1, 1), 0.0, 1e-12);
}

TEST(RotationDynamics, PhaseOffsetAppliesAtStepZero) {
    const SystemModel m = diskf::rotation_dynamics(0.3, M_PI, kDefaultQ);
    const Eigen::MatrixXd a = m.dynamics_at(0);
    EXPECT_NEAR(a(0, 0), -1.0, 1e-12);
    EXPECT_NEAR(a(1, 1), -1.0, 1e-12);
    EXPECT_NEAR(a(0, 1), 0.0, 1e-12);
}

TEST(RotationDynamics, AngleGrowsLinearlyWithStep) {
    const double omega = 0.35;
    const SystemModel m = diskf::rotation_dynamics(omega, 0.1, kDefaultQ);
    const Eigen::MatrixXd a7 = m.dynamics_at(7);
    EXPECT_NEAR(a7(0, 0), std::cos(omega * 7 + 0.1), 1e-12);
    EXPECT_NEAR(a7(1, 0), std::sin(omega * 7 + 0.1), 1e-12);
}

TEST(RotationDynamics, InputPushesAlongDiagonal) {
    const SystemModel m = diskf::rotation_dynamics(0.35, 0.0, kDefaultQ);
    const Eigen::MatrixXd g = m.input_matrix_at(3);
    ASSERT_EQ(g.rows(), 2);
    ASSERT_EQ(g.cols(), 1);
    EXPECT_DOUBLE_EQ(g(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(g(1, 0), 1.0);
    EXPECT_EQ(m.state_dim, 2);
    EXPECT_EQ(m.input_dim, 1);
    m.validate();
}

TEST(SystemModelValidate, RejectsBadShapes) {
    SystemModel m = diskf::rotation_dynamics(0.35, 0.0, kDefaultQ);
    m.process_cov = Eigen::MatrixXd::Identity(3, 3);
    EXPECT_THROW(m.validate(), diskf::ConfigError);

    SystemModel m2 = diskf::rotation_dynamics(0.35, 0.0, kDefaultQ);
    m2.input_dim = 3;  // more inputs than states
    EXPECT_THROW(m2.validate(), diskf::ConfigError);
}

TEST(Quadrant, ConventionCoversBoundaries) {
    EXPECT_EQ(diskf::quadrant(3.0, 4.0), 1);
    EXPECT_EQ(diskf::quadrant(-3.0, 4.0), 2);
    EXPECT_EQ(diskf::quadrant(-3.0, -4.0), 3);
    EXPECT_EQ(diskf::quadrant(3.0, -4.0), 4);
    // Axes: x = 0 counts as nonnegative, y = 0 counts as nonnegative.
    EXPECT_EQ(diskf::quadrant(0.0, 5.0), 1);
    EXPECT_EQ(diskf::quadrant(0.0, 0.0), 1);
    EXPECT_EQ(diskf::quadrant(-5.0, 0.0), 2);
    EXPECT_EQ(diskf::quadrant(0.0, -5.0), 4);
    EXPECT_EQ(diskf::quadrant(5.0, 0.0), 1);
}

TEST(Visibility, SameQuadrantGate) {
    const auto vis = diskf::same_quadrant_visibility();
    Eigen::VectorXd truth(2);
    truth << 10.0, 10.0;
    EXPECT_TRUE(vis(truth, Eigen::Vector2d(150.0, 150.0), 0));
    EXPECT_FALSE(vis(truth, Eigen::Vector2d(-150.0, 150.0), 0));
    EXPECT_FALSE(vis(truth, Eigen::Vector2d(-150.0, -150.0), 0));
}

TEST(InputSignal, StepHoldsThenSwitches) {
    const auto sig = InputSignal::step_at(10, Eigen::VectorXd::Zero(1),
                                          Eigen::VectorXd::Constant(1, 10.0));
    EXPECT_DOUBLE_EQ(sig.at(0)(0), 0.0);
    EXPECT_DOUBLE_EQ(sig.at(9)(0), 0.0);
    EXPECT_DOUBLE_EQ(sig.at(10)(0), 10.0);
    EXPECT_DOUBLE_EQ(sig.at(199)(0), 10.0);
}

TEST(InputSignal, PiecewiseSortsBreakpoints) {
    const auto sig = InputSignal::piecewise(
        {{5, Eigen::VectorXd::Constant(1, 1.0)},
         {0, Eigen::VectorXd::Constant(1, 2.0)}},
        1);
    EXPECT_DOUBLE_EQ(sig.at(0)(0), 2.0);
    EXPECT_DOUBLE_EQ(sig.at(4)(0), 2.0);
    EXPECT_DOUBLE_EQ(sig.at(5)(0), 1.0);
}

TEST(InputSignal, ZeroBeforeFirstBreakpoint) {
    const auto sig =
        InputSignal::piecewise({{5, Eigen::VectorXd::Constant(1, 3.0)}}, 1);
    EXPECT_DOUBLE_EQ(sig.at(2)(0), 0.0);
    EXPECT_DOUBLE_EQ(sig.at(7)(0), 3.0);
}

TEST(NoiseSource, SameSeedSameDraws) {
    NoiseSource a(42), b(42);
    for (int i = 0; i < 10; ++i) {
        const Eigen::VectorXd wa = a.process_noise(kDefaultQ);
        const Eigen::VectorXd wb = b.process_noise(kDefaultQ);
        EXPECT_TRUE((wa.array() == wb.array()).all());
        const Eigen::VectorXd va =
            a.measurement_noise(2, Eigen::MatrixXd::Identity(1, 1));
        const Eigen::VectorXd vb =
            b.measurement_noise(2, Eigen::MatrixXd::Identity(1, 1));
        EXPECT_TRUE((va.array() == vb.array()).all());
    }
}

TEST(NoiseSource, StreamsAreIndependentOfEachOther) {
    // Skipping agent 1's draws must not shift agent 2's sequence.
    NoiseSource a(7), b(7);
    const Eigen::MatrixXd r = Eigen::MatrixXd::Identity(1, 1);
    (void)a.measurement_noise(1, r);
    (void)a.measurement_noise(1, r);
    const Eigen::VectorXd first_a = a.measurement_noise(2, r);
    const Eigen::VectorXd first_b = b.measurement_noise(2, r);
    EXPECT_TRUE((first_a.array() == first_b.array()).all());
}

TEST(NoiseSource, DifferentSeedsDiffer) {
    NoiseSource a(1), b(2);
    EXPECT_NE(a.process_noise(kDefaultQ)(0), b.process_noise(kDefaultQ)(0));
}

TEST(NoiseSource, ZeroCovarianceDrawsZero) {
    NoiseSource a(5);
    const Eigen::VectorXd w = a.process_noise(kZeroQ);
    EXPECT_EQ(w.cwiseAbs().maxCoeff(), 0.0);
}

TEST(NoiseSource, SampleMeanNearZero) {
    // 1e4 draws; the sample mean on each axis stays within
    // 4 * sqrt(0.2 / 1e4) = 0.0179 of zero with overwhelming probability.
    NoiseSource a(11);
    Eigen::Vector2d sum = Eigen::Vector2d::Zero();
    const int n = 10000;
    for (int i = 0; i < n; ++i) sum += a.process_noise(kDefaultQ);
    const Eigen::Vector2d mean = sum / static_cast<double>(n);
    EXPECT_LT(std::abs(mean(0)), 4.0 * std::sqrt(0.2 / n));
    EXPECT_LT(std::abs(mean(1)), 4.0 * std::sqrt(0.2 / n));
}

TEST(StepTruth, NoiselessShiftAlongInputDirection) {
    // omega = 0 keeps A = I; with Q = 0 the step is exactly x + G d.
    const SystemModel m = diskf::rotation_dynamics(0.0, 0.0, kZeroQ);
    NoiseSource noise(3);
    Eigen::VectorXd x(2);
    x << 1.0, 2.0;
    const Eigen::VectorXd next =
        diskf::step_truth(x, m, Eigen::VectorXd::Constant(1, 7.0), 1, noise);
    EXPECT_DOUBLE_EQ(next(0), 8.0);
    EXPECT_DOUBLE_EQ(next(1), 9.0);
}

TEST(Observe, GatesOnVisibilityAndAddsNoise) {
    ObservationModel om;
    om.agent_id = 0;
    om.H = Eigen::MatrixXd(1, 2);
    om.H << 1.0, 0.0;
    om.R = Eigen::MatrixXd::Zero(1, 1);
    om.visibility = diskf::same_quadrant_visibility();
    om.validate(2);

    NoiseSource noise(9);
    Eigen::VectorXd truth(2);
    truth << 50.0, 60.0;
    const auto y_visible =
        diskf::observe(truth, om, Eigen::Vector2d(150.0, 150.0), 1, noise);
    ASSERT_TRUE(y_visible.has_value());
    EXPECT_DOUBLE_EQ((*y_visible)(0), 50.0);  // R = 0, exact

    const auto y_hidden =
        diskf::observe(truth, om, Eigen::Vector2d(-150.0, 150.0), 1, noise);
    EXPECT_FALSE(y_hidden.has_value());
}

TEST(SimulateTruth, ShapesAndInitialState) {
    const SystemModel m = diskf::rotation_dynamics(0.35, 0.0, kDefaultQ);
    NoiseSource noise(4);
    Eigen::VectorXd x0(2);
    x0 << 100.0, 0.0;
    const auto truth = diskf::simulate_truth(
        m, InputSignal::step_at(10, Eigen::VectorXd::Zero(1),
                                Eigen::VectorXd::Constant(1, 10.0)),
        x0, 25, noise);
    ASSERT_EQ(truth.states.size(), 26u);
    ASSERT_EQ(truth.inputs.size(), 25u);
    EXPECT_EQ(truth.states[0](0), 100.0);
    EXPECT_DOUBLE_EQ(truth.inputs[9](0), 0.0);
    EXPECT_DOUBLE_EQ(truth.inputs[10](0), 10.0);
}

TEST(SimulateTruth, DeterministicAcrossRuns) {
    const SystemModel m = diskf::rotation_dynamics(0.35, 0.0, kDefaultQ);
    Eigen::VectorXd x0(2);
    x0 << 100.0, 0.0;
    NoiseSource n1(17), n2(17);
    const auto t1 =
        diskf::simulate_truth(m, InputSignal::zero(1), x0, 40, n1);
    const auto t2 =
        diskf::simulate_truth(m, InputSignal::zero(1), x0, 40, n2);
    for (std::size_t k = 0; k < t1.states.size(); ++k) {
        EXPECT_TRUE((t1.states[k].array() == t2.states[k].array()).all());
    }
}

TEST(ObservationModelValidate, RejectsBadR) {
    ObservationModel om;
    om.H = Eigen::MatrixXd(1, 2);
    om.H << 1.0, 0.0;
    om.R = Eigen::MatrixXd::Constant(1, 1, -1.0);
    EXPECT_THROW(om.validate(2), diskf::ConfigError);
    om.R = Eigen::MatrixXd::Identity(2, 2);  // wrong size
    EXPECT_THROW(om.validate(2), diskf::ConfigError);
}
