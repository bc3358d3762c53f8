#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace diskf {

// Linear time-varying plant driven by an unknown input:
//   x[k] = A(k-1) x[k-1] + G(k-1) d[k-1] + w[k-1],   w ~ N(0, Q).
struct SystemModel {
    int state_dim = 0;
    int input_dim = 0;
    std::function<Eigen::MatrixXd(int)> dynamics;      // A(k)
    std::function<Eigen::MatrixXd(int)> input_matrix;  // G(k)
    Eigen::MatrixXd process_cov;                       // Q

    Eigen::MatrixXd dynamics_at(int k) const;
    Eigen::MatrixXd input_matrix_at(int k) const;
    void validate() const;
};

// Planar rotation plant: A(k) rotates by angle omega * k + theta0, and the
// scalar input pushes along (1, 1).
SystemModel rotation_dynamics(double omega, double theta0,
                              const Eigen::Matrix2d& process_cov);

// Decides whether an agent at `pose` sees the target at timestep k.
using VisibilityFn =
    std::function<bool(const Eigen::VectorXd& truth,
                       const Eigen::Vector2d& pose, int k)>;

// Per-agent sensor: y = H x + v, v ~ N(0, R), gated by a visibility test.
struct ObservationModel {
    int agent_id = 0;
    Eigen::MatrixXd H;
    Eigen::MatrixXd R;
    VisibilityFn visibility;  // empty means always visible

    int obs_dim() const { return static_cast<int>(H.rows()); }
    bool visible(const Eigen::VectorXd& truth, const Eigen::Vector2d& pose,
                 int k) const;
    void validate(int state_dim) const;
};

// Quadrant of the plane, numbered counterclockwise. Boundaries are assigned so
// every point belongs to exactly one quadrant:
//   1: x >= 0 && y >= 0,  2: x < 0 && y >= 0,  3: x < 0 && y < 0,  4: rest.
int quadrant(double x, double y);

// Visible iff the target and the agent sit in the same quadrant.
VisibilityFn same_quadrant_visibility();

// Deterministic unknown-input trajectory d(k).
struct InputSignal {
    std::function<Eigen::VectorXd(int)> value;

    Eigen::VectorXd at(int k) const;

    static InputSignal zero(int dim);
    // Holds `before` for k < switch_step, `after` from switch_step on.
    static InputSignal step_at(int switch_step, const Eigen::VectorXd& before,
                               const Eigen::VectorXd& after);
    // Piecewise-constant: value of the latest breakpoint with step <= k,
    // zero before the first one. Breakpoints need not be sorted.
    static InputSignal piecewise(
        std::vector<std::pair<int, Eigen::VectorXd>> breakpoints, int dim);
};

// Reproducible Gaussian noise. Every (role, agent) pair draws from its own
// mt19937_64 substream derived from the master seed, so adding or removing
// one consumer never shifts the draws seen by the others.
class NoiseSource {
public:
    explicit NoiseSource(std::uint64_t seed);

    Eigen::VectorXd process_noise(const Eigen::MatrixXd& cov);
    Eigen::VectorXd measurement_noise(int agent_id, const Eigen::MatrixXd& cov);

    std::uint64_t seed() const { return seed_; }

private:
    std::mt19937_64& engine(std::uint64_t stream);
    Eigen::VectorXd draw(std::mt19937_64& eng, const Eigen::MatrixXd& cov);

    std::uint64_t seed_;
    std::map<std::uint64_t, std::mt19937_64> engines_;
};

// states[k] for k = 0..horizon, inputs[k] = d(k) for k = 0..horizon-1.
struct GroundTruth {
    std::vector<Eigen::VectorXd> states;
    std::vector<Eigen::VectorXd> inputs;
};

// Advances truth from step k-1 to k: A(k-1) x + G(k-1) d + w.
Eigen::VectorXd step_truth(const Eigen::VectorXd& state,
                           const SystemModel& model,
                           const Eigen::VectorXd& input, int k,
                           NoiseSource& noise);

// Returns the noisy measurement if the agent currently sees the target;
// draws from the agent's noise stream only on visibility.
std::optional<Eigen::VectorXd> observe(const Eigen::VectorXd& truth,
                                       const ObservationModel& obs,
                                       const Eigen::Vector2d& pose, int k,
                                       NoiseSource& noise);

GroundTruth simulate_truth(const SystemModel& model, const InputSignal& input,
                           const Eigen::VectorXd& x0, int horizon,
                           NoiseSource& noise);

}  // namespace diskf
