#pragma once

#include "softfinger/narx.hpp"
#include "softfinger/sensor_mode.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace softfinger {

/// Mean absolute error per coordinate plus the mean Euclidean norm, mm.
struct CoordinateErrors {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double r = 0.0;
};

CoordinateErrors mean_error(std::span<const Vec3> pred, std::span<const Vec3> truth);

/// Per-step squared positional error, mm^2.
std::vector<double> mse_curve(std::span<const Vec3> pred, std::span<const Vec3> truth);

/// Predictions aligned with ground truth; the warm-up taps are excluded
/// from both sequences (entry k corresponds to frame delays + k).
struct LoopPredictions {
    std::vector<Vec3> predicted;
    std::vector<Vec3> truth;
};

LoopPredictions evaluate_open_loop(const NarxModel& model, const TimeSeriesDataset& test,
                                   SensorMode mode);
LoopPredictions evaluate_self_loop(const NarxModel& model, const TimeSeriesDataset& test,
                                   SensorMode mode);

struct HorizonPoint {
    double horizon_s = 0.0;
    /// Error level reached by the end of the horizon: mean error over the
    /// second half of each window (exactly the final-step error at one step).
    double me_end_mm = 0.0;
    double me_avg_mm = 0.0;  ///< mean error over the whole window
};

/// Self-loop error versus rollout horizon, averaged over windows whose true
/// initial taps start every `stride_s` seconds.
std::vector<HorizonPoint> horizon_curve(const NarxModel& model, const TimeSeriesDataset& test,
                                        SensorMode mode, std::span<const double> horizons_s,
                                        double stride_s = 1.0);

/// Simulated duration divided by wall-clock self-loop time, median of
/// `runs` rollouts over the full test set.
double measure_speedup(const NarxModel& model, const TimeSeriesDataset& test,
                       SensorMode mode, int runs = 5);

struct ModeResult {
    SensorMode mode = SensorMode::no_signal;
    NarxConfig config;
    double final_train_loss = 0.0;
    CoordinateErrors open_loop, self_loop;
    CoordinateErrors open_decrease_pct, self_decrease_pct;  ///< vs MA
    std::vector<double> mse_open, mse_self;
    std::vector<HorizonPoint> horizon;
    std::vector<Vec3> predicted_self;  ///< for path output files
    double speedup = 0.0;  ///< wall-clock measurement; not serialized
};

struct AblationReport {
    double sample_rate_hz = 25.0;
    std::size_t train_frames = 0;
    std::size_t test_frames = 0;
    std::vector<Vec3> truth;  ///< test positions, warm-up excluded
    std::vector<double> truth_t;
    std::array<ModeResult, 3> modes;  ///< MA, MB, MC
};

/// Hidden sizes 2x50 / 2x75 / 2x100 for MA / MB / MC with per-model seeds
/// base_seed + 1..3; the rest are the training defaults.
std::array<NarxConfig, 3> ablation_configs(std::uint64_t base_seed);

struct AblationOptions {
    bool parallel_training = true;
    bool measure_timing = true;  ///< off in tests that compare reports
    std::vector<double> horizons_s;  ///< empty -> built-in grid up to the full test
    double horizon_stride_s = 1.0;
    int speedup_runs = 5;
};

/// Trains the three estimators and evaluates both loops on the test split.
/// Deterministic given datasets and config seeds (timing fields aside).
AblationReport run_ablation(const TimeSeriesDataset& train, const TimeSeriesDataset& test,
                            const std::array<NarxConfig, 3>& cfgs,
                            const AblationOptions& options = {});

/// Deterministic report serialization; wall-clock timing is excluded and
/// reported separately.
nlohmann::json report_to_json(const AblationReport& report);
std::string report_to_text(const AblationReport& report);

}  // namespace softfinger
