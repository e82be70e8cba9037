#pragma once

#include "softfinger/dataset.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace softfinger {

/// Degree of waveguide signal exposed to an estimator:
///   MA - pressures only, MB - averaged signal + pressures,
///   MC - both signal channels + pressures.
enum class SensorMode { no_signal, averaged_signal, full_signal };

inline constexpr SensorMode kAllModes[] = {SensorMode::no_signal,
                                           SensorMode::averaged_signal,
                                           SensorMode::full_signal};

std::size_t exo_dim(SensorMode mode);

/// "MA" / "MB" / "MC"
std::string to_string(SensorMode mode);
SensorMode parse_sensor_mode(std::string_view name);
SensorMode sensor_mode_for_exo_dim(std::size_t dim);

/// Exogenous input vector of one frame under `mode`:
///   MA -> (p1, p2); MB -> ((s1+s2)/2, p1, p2); MC -> (s1, s2, p1, p2).
std::vector<double> exo_select(const SampleFrame& frame, SensorMode mode);

/// exo_select applied to every frame.
std::vector<std::vector<double>> exo_sequence(const TimeSeriesDataset& ds, SensorMode mode);

/// Delay-embedded supervised pairs for a dataset under `mode`; see
/// assemble_windows for the input layout.
std::vector<RegressionPair> assemble_delay_pairs(const TimeSeriesDataset& ds,
                                                 SensorMode mode,
                                                 std::size_t delays = 3);

}  // namespace softfinger
