#pragma once

#include "softfinger/dataset.hpp"
#include "softfinger/sensor_mode.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

namespace softfinger {

struct ModelFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NarxConfig {
    std::size_t state_dim = 3;
    std::size_t exo_dim = 2;
    std::size_t delays = 3;  ///< taps: current + (delays - 1) delayed
    std::array<std::size_t, 2> hidden = {50, 50};
    double learning_rate = 1e-3;
    std::size_t epochs = 300;
    std::size_t batch_size = 64;
    std::uint64_t seed = 1;

    std::size_t input_size() const { return delays * (state_dim + exo_dim); }
    void validate() const;
};

/// Two-hidden-layer GELU network with per-channel normalization statistics.
/// Immutable after training; inference is safe concurrently.
struct NarxModel {
    NarxConfig config;
    Eigen::MatrixXd w1, w2, w3;
    Eigen::VectorXd b1, b2, b3;
    Normalizer state_norm;  ///< 3 channels (x, y, z)
    Normalizer exo_norm;    ///< exo_dim channels
};

/// Exact Gaussian-CDF form x * Phi(x).
double gelu(double x);
/// d/dx gelu = Phi(x) + x * phi(x).
double gelu_derivative(double x);

/// affine -> GELU -> affine -> GELU -> affine (linear output layer).
/// Input and output are in normalized units.
Eigen::VectorXd narx_forward(const NarxModel& model, const Eigen::VectorXd& input);

struct Gradients {
    Eigen::MatrixXd w1, w2, w3;
    Eigen::VectorXd b1, b2, b3;
};

/// Mean-squared error over the batch (mean across samples and output
/// coordinates) with exact analytic gradients for every parameter.
double loss_and_gradients(const NarxModel& model, std::span<const RegressionPair> batch,
                          Gradients& grads);

/// First/second-moment state for Adam, one slot per parameter tensor.
struct AdamState {
    Gradients m, v;
    long step = 0;
};

/// One bias-corrected Adam update (beta1 = 0.9, beta2 = 0.999, eps = 1e-8).
void adam_step(NarxModel& model, const Gradients& grads, AdamState& state, double lr);

struct TrainResult {
    NarxModel model;
    std::vector<double> loss_history;  ///< per-epoch training MSE, normalized units
};

/// Open-loop (teacher-forced) training with seeded shuffled mini-batches.
/// Normalization statistics are fitted on `train` only. Deterministic per
/// (data, config, seed).
TrainResult train_open_loop(const TimeSeriesDataset& train, const NarxConfig& cfg,
                            SensorMode mode);

/// One-step prediction from raw-unit tap windows, newest first:
/// states[0] = r_i, exo[0] = u_i. Returns the next position in mm.
Vec3 predict_next(const NarxModel& model, std::span<const Vec3> states_newest_first,
                  std::span<const std::vector<double>> exo_newest_first);

/// predict_next with the exogenous window already flattened
/// ([u_i, u_{i-1}, ...] as produced by assemble_exo_windows).
Vec3 predict_from_taps(const NarxModel& model, std::span<const Vec3> states_newest_first,
                       std::span<const double> exo_window);

/// Free-running rollout: predictions are fed back as state taps while the
/// exogenous windows come from the recorded sequence. Output length equals
/// exo_windows length.
std::vector<Vec3> rollout_self_loop(const NarxModel& model,
                                    std::span<const Vec3> initial_states_newest_first,
                                    std::span<const std::vector<double>> exo_windows);

/// Same tap schedule but with ground-truth states at every tap; window k
/// predicts true_states[delays + k]. This is open-loop operation.
std::vector<Vec3> rollout_teacher_forced(const NarxModel& model,
                                         std::span<const Vec3> true_states,
                                         std::span<const std::vector<double>> exo_windows);

// Model file: JSON with config, per-channel normalization ranges and
// row-major layer weights. save -> load -> save is byte-identical.
void save_model(const NarxModel& model, const std::filesystem::path& path);
NarxModel load_model(const std::filesystem::path& path);

}  // namespace softfinger
