#include "softfinger/plant.hpp"

#include "softfinger/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace softfinger {

namespace {

constexpr double kShearGain = 0.5;       // sideways reach grows with total inflation
constexpr double kDepthCoupling = 0.3;   // asymmetric bending lifts the tip
constexpr double kSaturationShape = 0.8;
constexpr double kSignalBase = 0.3;
constexpr double kSignalAmplitudeGain = 0.35;
// keeps both channels inside (0, 1] at full asymmetric deflection while the
// ratio channel stays well above the sensor noise floor
constexpr double kSignalDirectionGain = 1.6;
constexpr double kBacklashWidth = 0.02;  // chamber travel that flips the memory

// smooth monotone saturating map with sat(0) = 0, sat(1) = 1
double saturate(double u) {
    return std::tanh(kSaturationShape * u) / std::tanh(kSaturationShape);
}

void check_chamber_range(double q1, double q2) {
    if (q1 < 0.0 || q1 > 1.0 || q2 < 0.0 || q2 > 1.0) {
        throw std::invalid_argument("chamber state outside [0, 1]");
    }
}

double update_backlash(double memory, double dq) {
    if (dq == 0.0) return memory;
    const double direction = dq > 0.0 ? 1.0 : -1.0;
    const double fraction = std::min(1.0, std::abs(dq) / kBacklashWidth);
    return memory + fraction * (direction - memory);
}

// The backlash memory deflects the body itself: pose and waveguide both
// respond to this effective chamber state, while the commanded pressure
// carries no trace of it. hysteresis_gain scales the deflection.
std::pair<double, double> effective_deflection(const PlantState& state,
                                               const PlantConfig& cfg) {
    const double e1 = std::clamp(state.q1 + cfg.hysteresis_gain * state.h1, 0.0, 1.0);
    const double e2 = std::clamp(state.q2 + cfg.hysteresis_gain * state.h2, 0.0, 1.0);
    return {e1, e2};
}

}  // namespace

void PlantConfig::validate() const {
    if (!(time_constant_s > 0.0)) {
        throw std::invalid_argument("time constant must be positive");
    }
    if (sensor_noise < 0.0 || position_noise_mm < 0.0) {
        throw std::invalid_argument("noise levels must be non-negative");
    }
    if (!(x_max_mm > 0.0) || !(y_max_mm > 0.0) || !(z_max_mm > 0.0)) {
        throw std::invalid_argument("workspace ranges must be positive");
    }
}

PressureTrajectory random_actuation(double duration_s, double f1_hz, double f2_hz,
                                    double speed_bound, std::uint64_t seed) {
    if (!(duration_s > 0.0) || !(f1_hz > 0.0) || !(f2_hz > 0.0) || !(speed_bound > 0.0)) {
        throw std::invalid_argument("actuation rates and duration must be positive");
    }
    const double ratio = f1_hz / f2_hz;
    const auto hold = static_cast<std::size_t>(std::llround(ratio));
    if (hold < 1 || std::abs(ratio - static_cast<double>(hold)) > 1e-9) {
        throw std::invalid_argument("f1 must be an integer multiple of f2");
    }

    const auto n = static_cast<std::size_t>(std::llround(duration_s * f1_hz));
    const double dt = 1.0 / f1_hz;
    Rng rng(seed);

    PressureTrajectory traj;
    traj.sample_rate_hz = f1_hz;
    traj.samples.reserve(n);
    double p1 = 0.0;
    double p2 = 0.0;
    double v1 = 0.0;
    double v2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % hold == 0) {
            v1 = rng.uniform(-speed_bound, speed_bound);
            v2 = rng.uniform(-speed_bound, speed_bound);
        }
        if (i > 0) {
            p1 = std::clamp(p1 + v1 * dt, 0.0, 1.0);
            p2 = std::clamp(p2 + v2 * dt, 0.0, 1.0);
        }
        traj.samples.push_back({p1, p2});
    }
    return traj;
}

Vec3 quasistatic_pose(double q1, double q2, const PlantConfig& cfg) {
    check_chamber_range(q1, q2);
    const double diff = q1 - q2;
    const double total = q1 + q2;
    // the shear factor is normalized so the grid corners reach exactly x_max
    const double x = cfg.x_max_mm * diff * (1.0 + kShearGain * total) / (1.0 + kShearGain);
    const double flex = saturate(total / 2.0);
    const double y = -cfg.y_max_mm * flex;
    const double z = -cfg.z_max_mm * flex * (1.0 - kDepthCoupling * diff * diff);
    return {x, y, z};
}

std::pair<double, double> sensor_response(const PlantState& state, const PlantConfig& cfg) {
    check_chamber_range(state.q1, state.q2);
    // the embedded waveguide reads the deforming body, so the log ratio is
    // g_d * (q1 - q2) plus the backlash term g_d * gain * (h1 - h2)
    const auto [e1, e2] = effective_deflection(state, cfg);
    const double mean = kSignalBase + kSignalAmplitudeGain * (e1 + e2) / 2.0;
    const double log_ratio = kSignalDirectionGain * (e1 - e2);
    // split so that (s1 + s2)/2 == mean exactly and log2(s1/s2) == log_ratio
    const double a = std::exp2(log_ratio / 2.0);
    const double b = std::exp2(-log_ratio / 2.0);
    const double denom = a + b;
    const double doubled = 2.0 * mean;
    return {doubled * a / denom, doubled * b / denom};
}

PlantState step_dynamics(const PlantState& state, double p1, double p2, double dt,
                         const PlantConfig& cfg) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("dt must be positive");
    }
    cfg.validate();
    const double tau = cfg.time_constant_s;

    PlantState next = state;
    auto advance = [&](double q, double v, double p, double& q_out, double& v_out) {
        const double relative = dt / tau;
        if (relative > 500.0) {  // fully settled within one step
            q_out = p;
            v_out = 0.0;
            return;
        }
        // exact critically damped response to a held target
        const double offset = q - p;
        const double slope = v + offset / tau;
        const double decay = std::exp(-relative);
        q_out = p + (offset + slope * dt) * decay;
        v_out = (slope - (offset + slope * dt) / tau) * decay;
    };
    advance(state.q1, state.v1, p1, next.q1, next.v1);
    advance(state.q2, state.v2, p2, next.q2, next.v2);
    next.q1 = std::clamp(next.q1, 0.0, 1.0);
    next.q2 = std::clamp(next.q2, 0.0, 1.0);
    next.h1 = update_backlash(state.h1, next.q1 - state.q1);
    next.h2 = update_backlash(state.h2, next.q2 - state.q2);
    return next;
}

TimeSeriesDataset simulate(const PressureTrajectory& traj, const PlantConfig& cfg) {
    cfg.validate();
    if (traj.samples.empty() || !(traj.sample_rate_hz > 0.0)) {
        throw std::invalid_argument("empty pressure trajectory");
    }
    const double dt = 1.0 / traj.sample_rate_hz;
    Rng noise(cfg.seed, /*stream=*/1);

    PlantState state;
    state.q1 = traj.samples.front().p1;
    state.q2 = traj.samples.front().p2;

    TimeSeriesDataset ds;
    ds.sample_rate_hz = traj.sample_rate_hz;
    ds.frames.reserve(traj.samples.size());
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const PressureSample& p = traj.samples[i];
        if (i > 0) {
            state = step_dynamics(state, p.p1, p.p2, dt, cfg);
        }
        auto [s1, s2] = sensor_response(state, cfg);
        const auto [e1, e2] = effective_deflection(state, cfg);
        const Vec3 pose = quasistatic_pose(e1, e2, cfg);

        SampleFrame frame;
        frame.t = static_cast<double>(i) * dt;
        frame.p1 = p.p1;
        frame.p2 = p.p2;
        frame.s1 = s1 + noise.gaussian(cfg.sensor_noise);
        frame.s2 = s2 + noise.gaussian(cfg.sensor_noise);
        frame.x = pose.x() + noise.gaussian(cfg.position_noise_mm);
        frame.y = pose.y() + noise.gaussian(cfg.position_noise_mm);
        frame.z = pose.z() + noise.gaussian(cfg.position_noise_mm);
        ds.frames.push_back(frame);
    }
    return ds;
}

std::vector<GridPoint> settled_grid(int n, const PlantConfig& cfg) {
    if (n < 2) {
        throw std::invalid_argument("grid needs at least 2 points per axis");
    }
    cfg.validate();
    std::vector<GridPoint> grid;
    grid.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            GridPoint gp;
            gp.p1 = static_cast<double>(i) / (n - 1);
            gp.p2 = static_cast<double>(j) / (n - 1);
            PlantState settled;
            settled.q1 = gp.p1;
            settled.q2 = gp.p2;
            gp.pose = quasistatic_pose(settled.q1, settled.q2, cfg);
            std::tie(gp.s1, gp.s2) = sensor_response(settled, cfg);
            grid.push_back(gp);
        }
    }
    return grid;
}

}  // namespace softfinger
