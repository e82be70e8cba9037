#pragma once

#include "softfinger/config.hpp"
#include "softfinger/evaluation.hpp"

#include <filesystem>
#include <optional>

namespace softfinger::cli {

// Subcommand bodies, exposed for integration tests. Each writes its output
// files atomically and returns 0 on success; failures are reported by
// throwing (the CLI turns them into one-line errors and exit code 1).

/// Emits dataset.csv plus the sequential train/test split and the
/// effective configuration.
int run_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Fits the projection constants from a calibration CSV.
int run_calibrate(const std::filesystem::path& calibration_csv,
                  const std::filesystem::path& out_dir);

/// Tracks every PNG/PPM frame in a directory (ordered by filename) and
/// emits positions.csv.
int run_track(const std::filesystem::path& frames_dir,
              const std::filesystem::path& coefficients_json, double sample_rate_hz,
              const TrackOptions& options, const std::filesystem::path& out_dir);

/// Trains one estimator on a dataset CSV and saves the model JSON.
int run_train(const RunConfig& cfg, const std::filesystem::path& data_csv, SensorMode mode,
              const std::filesystem::path& out_dir);

/// Self-loop rollout of a saved model over a dataset; emits predicted.csv.
int run_rollout(const std::filesystem::path& model_json, const std::filesystem::path& data_csv,
                const std::filesystem::path& out_dir);

/// Compares a predicted positions CSV against ground truth (positions CSV
/// or dataset CSV) aligned by time stamps; emits metrics.json.
int run_evaluate(const std::filesystem::path& pred_csv, const std::filesystem::path& truth_csv,
                 const std::filesystem::path& out_dir);

/// Full three-estimator study: trains MA/MB/MC, evaluates both loops,
/// emits report.json/report.txt, per-figure CSVs and timing.json.
int run_ablation_command(const RunConfig& cfg, std::optional<std::filesystem::path> data_csv,
                         const std::filesystem::path& out_dir);

}  // namespace softfinger::cli
