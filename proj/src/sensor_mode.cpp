#include "softfinger/sensor_mode.hpp"

#include <stdexcept>

namespace softfinger {

std::size_t exo_dim(SensorMode mode) {
    switch (mode) {
        case SensorMode::no_signal: return 2;
        case SensorMode::averaged_signal: return 3;
        case SensorMode::full_signal: return 4;
    }
    throw std::invalid_argument("unknown sensor mode");
}

std::string to_string(SensorMode mode) {
    switch (mode) {
        case SensorMode::no_signal: return "MA";
        case SensorMode::averaged_signal: return "MB";
        case SensorMode::full_signal: return "MC";
    }
    return "?";
}

SensorMode parse_sensor_mode(std::string_view name) {
    if (name == "MA") return SensorMode::no_signal;
    if (name == "MB") return SensorMode::averaged_signal;
    if (name == "MC") return SensorMode::full_signal;
    throw std::invalid_argument("unknown sensor mode '" + std::string(name) +
                                "' (expected MA, MB or MC)");
}

SensorMode sensor_mode_for_exo_dim(std::size_t dim) {
    switch (dim) {
        case 2: return SensorMode::no_signal;
        case 3: return SensorMode::averaged_signal;
        case 4: return SensorMode::full_signal;
    }
    throw std::invalid_argument("no sensor mode with exogenous dimension " + std::to_string(dim));
}

std::vector<double> exo_select(const SampleFrame& frame, SensorMode mode) {
    switch (mode) {
        case SensorMode::no_signal:
            return {frame.p1, frame.p2};
        case SensorMode::averaged_signal:
            return {0.5 * (frame.s1 + frame.s2), frame.p1, frame.p2};
        case SensorMode::full_signal:
            return {frame.s1, frame.s2, frame.p1, frame.p2};
    }
    throw std::invalid_argument("unknown sensor mode");
}

std::vector<std::vector<double>> exo_sequence(const TimeSeriesDataset& ds, SensorMode mode) {
    std::vector<std::vector<double>> exo;
    exo.reserve(ds.frames.size());
    for (const SampleFrame& f : ds.frames) {
        exo.push_back(exo_select(f, mode));
    }
    return exo;
}

std::vector<RegressionPair> assemble_delay_pairs(const TimeSeriesDataset& ds,
                                                 SensorMode mode,
                                                 std::size_t delays) {
    std::vector<Vec3> states;
    states.reserve(ds.frames.size());
    for (const SampleFrame& f : ds.frames) {
        states.push_back(f.position());
    }
    return assemble_windows(states, exo_sequence(ds, mode), delays);
}

}  // namespace softfinger
