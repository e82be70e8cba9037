#pragma once

#include "softfinger/narx.hpp"
#include "softfinger/plant.hpp"
#include "softfinger/sensor_mode.hpp"
#include "softfinger/tracker.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace softfinger {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ActuationConfig {
    double step_rate_hz = 5.0;       ///< speed redraw rate
    double speed_bound_per_s = 0.4;  ///< |dp/dt| bound per chamber
};

struct NarxDefaults {
    std::size_t delays = 3;
    double learning_rate = 1e-3;
    std::size_t epochs = 300;
    std::size_t batch_size = 64;
    /// hidden layer widths per estimator MA / MB / MC
    std::array<std::array<std::size_t, 2>, 3> hidden = {{{50, 50}, {75, 75}, {100, 100}}};
};

struct PathsConfig {
    std::string data;         ///< dataset CSV; empty -> commands simulate it
    std::string out = "out";  ///< default output directory
};

/// Fully materialized run configuration. The JSON file may omit anything
/// except `seed`; unknown keys are rejected.
struct RunConfig {
    std::uint64_t seed = 0;
    double sample_rate_hz = 25.0;
    double duration_s = 1200.0;
    double train_fraction = 0.9;
    PlantConfig plant;  ///< plant.seed mirrors the top-level seed
    ActuationConfig actuation;
    NarxDefaults narx;
    TrackOptions track;
    PathsConfig paths;

    /// Per-estimator training config; model seeds are seed + 1 + mode index.
    NarxConfig narx_config(SensorMode mode) const;
};

RunConfig parse_config(const std::filesystem::path& path);
RunConfig config_from_json(const nlohmann::json& doc, const std::string& origin);

/// Every effective value, defaults included; parse_config of the emitted
/// JSON reproduces the same configuration.
nlohmann::json effective_config_json(const RunConfig& cfg);

}  // namespace softfinger
