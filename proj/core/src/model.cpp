#include "diskf/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "diskf/errors.hpp"
#include "diskf/linalg.hpp"

namespace diskf {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

Eigen::MatrixXd checked_matrix(const Eigen::MatrixXd& m, int rows, int cols,
                               const std::string& name) {
    require(m.rows() == rows && m.cols() == cols,
            name + ": expected " + std::to_string(rows) + "x" +
                std::to_string(cols) + ", got " + std::to_string(m.rows()) +
                "x" + std::to_string(m.cols()));
    require(m.allFinite(), name + ": non-finite entries");
    return m;
}

}  // namespace

Eigen::MatrixXd SystemModel::dynamics_at(int k) const {
    require(static_cast<bool>(dynamics), "SystemModel: dynamics not set");
    return checked_matrix(dynamics(k), state_dim, state_dim, "dynamics(k)");
}

Eigen::MatrixXd SystemModel::input_matrix_at(int k) const {
    require(static_cast<bool>(input_matrix),
            "SystemModel: input_matrix not set");
    return checked_matrix(input_matrix(k), state_dim, input_dim,
                          "input_matrix(k)");
}

void SystemModel::validate() const {
    require(state_dim > 0, "SystemModel: state_dim must be positive");
    require(input_dim > 0, "SystemModel: input_dim must be positive");
    require(input_dim <= state_dim,
            "SystemModel: input_dim must not exceed state_dim");
    checked_matrix(process_cov, state_dim, state_dim, "process_cov");
    require(linalg::is_psd(process_cov),
            "SystemModel: process_cov must be symmetric PSD");
    dynamics_at(0);
    input_matrix_at(0);
}

SystemModel rotation_dynamics(double omega, double theta0,
                              const Eigen::Matrix2d& process_cov) {
    SystemModel m;
    m.state_dim = 2;
    m.input_dim = 1;
    m.dynamics = [omega, theta0](int k) {
        const double th = omega * static_cast<double>(k) + theta0;
        Eigen::Matrix2d a;
        a << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
        return Eigen::MatrixXd(a);
    };
    m.input_matrix = [](int) {
        Eigen::MatrixXd g(2, 1);
        g << 1.0, 1.0;
        return g;
    };
    m.process_cov = process_cov;
    return m;
}

bool ObservationModel::visible(const Eigen::VectorXd& truth,
                               const Eigen::Vector2d& pose, int k) const {
    return !visibility || visibility(truth, pose, k);
}

void ObservationModel::validate(int state_dim) const {
    require(H.rows() > 0, "ObservationModel: H has no rows");
    require(H.cols() == state_dim, "ObservationModel: H column count");
    require(H.allFinite(), "ObservationModel: H non-finite");
    require(R.rows() == H.rows() && R.cols() == H.rows(),
            "ObservationModel: R must be obs_dim x obs_dim");
    require(linalg::is_psd(R), "ObservationModel: R must be symmetric PSD");
}

int quadrant(double x, double y) {
    if (x >= 0.0 && y >= 0.0) return 1;
    if (x < 0.0 && y >= 0.0) return 2;
    if (x < 0.0 && y < 0.0) return 3;
    return 4;
}

VisibilityFn same_quadrant_visibility() {
    return [](const Eigen::VectorXd& truth, const Eigen::Vector2d& pose, int) {
        return quadrant(truth(0), truth(1)) == quadrant(pose(0), pose(1));
    };
}

Eigen::VectorXd InputSignal::at(int k) const {
    if (!value) throw ConfigError("InputSignal: value not set");
    Eigen::VectorXd v = value(k);
    if (!v.allFinite()) throw ConfigError("InputSignal: non-finite value");
    return v;
}

InputSignal InputSignal::zero(int dim) {
    return InputSignal{
        [dim](int) { return Eigen::VectorXd(Eigen::VectorXd::Zero(dim)); }};
}

InputSignal InputSignal::step_at(int switch_step,
                                 const Eigen::VectorXd& before,
                                 const Eigen::VectorXd& after) {
    if (before.size() != after.size()) {
        throw ConfigError("InputSignal::step_at: dimension mismatch");
    }
    return InputSignal{[switch_step, before, after](int k) {
        return k < switch_step ? before : after;
    }};
}

InputSignal InputSignal::piecewise(
    std::vector<std::pair<int, Eigen::VectorXd>> breakpoints, int dim) {
    for (const auto& [step, v] : breakpoints) {
        if (v.size() != dim) {
            throw ConfigError("InputSignal::piecewise: dimension mismatch");
        }
    }
    std::stable_sort(breakpoints.begin(), breakpoints.end(),
                     [](const auto& a, const auto& b) {
                         return a.first < b.first;
                     });
    return InputSignal{[breakpoints, dim](int k) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
        for (const auto& [step, bv] : breakpoints) {
            if (step > k) break;
            v = bv;
        }
        return v;
    }};
}

NoiseSource::NoiseSource(std::uint64_t seed) : seed_(seed) {}

namespace {

// splitmix64; decorrelates the per-stream engine seeds.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kProcessStream = 0;
constexpr std::uint64_t kMeasurementStreamBase = 0x100;

}  // namespace

std::mt19937_64& NoiseSource::engine(std::uint64_t stream) {
    auto it = engines_.find(stream);
    if (it == engines_.end()) {
        std::mt19937_64 eng(mix64(seed_ ^ mix64(stream)));
        it = engines_.emplace(stream, std::move(eng)).first;
    }
    return it->second;
}

Eigen::VectorXd NoiseSource::draw(std::mt19937_64& eng,
                                  const Eigen::MatrixXd& cov) {
    // A fresh distribution per call: normal_distribution caches a spare
    // variate, and that cache must not leak across covariance shapes.
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd z(cov.rows());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = gauss(eng);
    return linalg::psd_factor(cov) * z;
}

Eigen::VectorXd NoiseSource::process_noise(const Eigen::MatrixXd& cov) {
    return draw(engine(kProcessStream), cov);
}

Eigen::VectorXd NoiseSource::measurement_noise(int agent_id,
                                               const Eigen::MatrixXd& cov) {
    if (agent_id < 0) throw ConfigError("measurement_noise: negative agent id");
    return draw(engine(kMeasurementStreamBase +
                       static_cast<std::uint64_t>(agent_id)),
                cov);
}

Eigen::VectorXd step_truth(const Eigen::VectorXd& state,
                           const SystemModel& model,
                           const Eigen::VectorXd& input, int k,
                           NoiseSource& noise) {
    if (state.size() != model.state_dim || input.size() != model.input_dim) {
        throw ConfigError("step_truth: dimension mismatch");
    }
    return model.dynamics_at(k - 1) * state +
           model.input_matrix_at(k - 1) * input +
           noise.process_noise(model.process_cov);
}

std::optional<Eigen::VectorXd> observe(const Eigen::VectorXd& truth,
                                       const ObservationModel& obs,
                                       const Eigen::Vector2d& pose, int k,
                                       NoiseSource& noise) {
    if (!obs.visible(truth, pose, k)) return std::nullopt;
    return obs.H * truth + noise.measurement_noise(obs.agent_id, obs.R);
}

GroundTruth simulate_truth(const SystemModel& model, const InputSignal& input,
                           const Eigen::VectorXd& x0, int horizon,
                           NoiseSource& noise) {
    model.validate();
    if (x0.size() != model.state_dim) {
        throw ConfigError("simulate_truth: x0 dimension mismatch");
    }
    if (horizon < 1) throw ConfigError("simulate_truth: horizon must be >= 1");
    GroundTruth truth;
    truth.states.reserve(static_cast<std::size_t>(horizon) + 1);
    truth.inputs.reserve(static_cast<std::size_t>(horizon));
    truth.states.push_back(x0);
    for (int k = 1; k <= horizon; ++k) {
        const Eigen::VectorXd d = input.at(k - 1);
        truth.inputs.push_back(d);
        truth.states.push_back(
            step_truth(truth.states.back(), model, d, k, noise));
    }
    return truth;
}

}  // namespace diskf
