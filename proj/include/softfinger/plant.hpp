#pragma once

#include "softfinger/dataset.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace softfinger {

/// Synthetic two-chamber finger configuration. The plant is a surrogate:
/// its contract is the workspace spans plus the symmetry, monotonicity and
/// information-structure properties, not a physics model.
struct PlantConfig {
    double x_max_mm = 72.5;  ///< max |x| over the pressure grid (span 145)
    double y_max_mm = 80.0;  ///< max |y| (span 80)
    double z_max_mm = 50.0;  ///< max |z| (span 50)
    double time_constant_s = 0.08;   ///< chamber lag, critically damped
    double hysteresis_gain = 0.1;    ///< backlash deflection, fraction of stroke
    double sensor_noise = 0.005;     ///< additive, per signal channel
    double position_noise_mm = 1.5;  ///< camera tracking noise, per coordinate
    std::uint64_t seed = 1;

    void validate() const;
};

/// Internal plant state: filtered chamber positions with their rates and
/// a backlash memory per chamber in [-1, 1].
struct PlantState {
    double q1 = 0.0;
    double q2 = 0.0;
    double v1 = 0.0;
    double v2 = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;
};

struct PressureSample {
    double p1 = 0.0;
    double p2 = 0.0;
};

struct PressureTrajectory {
    std::vector<PressureSample> samples;
    double sample_rate_hz = 25.0;
};

/// Random actuation protocol: each chamber's speed is redrawn uniformly in
/// [-speed_bound, speed_bound] every 1/f2 s, positions are integrated at f1
/// and clamped to [0, 1]. Deterministic given the seed. f1 must be an
/// integer multiple of f2.
PressureTrajectory random_actuation(double duration_s, double f1_hz, double f2_hz,
                                    double speed_bound, std::uint64_t seed);

/// Settled end-effector position for chamber states (q1, q2) in [0, 1].
/// Antisymmetric in x under chamber swap, symmetric in y and z, x = 0 for
/// q1 = q2; grid spans (2*x_max, y_max, z_max).
Vec3 quasistatic_pose(double q1, double q2, const PlantConfig& cfg = {});

/// Noise-free dual-channel waveguide response. The channel mean carries
/// the bending amplitude (q1 + q2); the log2 ratio carries the bending
/// direction (q1 - q2) plus the backlash term. Chamber swap exchanges the
/// channels exactly.
std::pair<double, double> sensor_response(const PlantState& state,
                                          const PlantConfig& cfg = {});

/// One integration step: critically damped second-order lag of (q1, q2)
/// toward (p1, p2), exact discretization, plus the backlash memory update.
PlantState step_dynamics(const PlantState& state, double p1, double p2, double dt,
                         const PlantConfig& cfg = {});

/// Integrates the plant over a pressure trajectory and records the noisy
/// dataset. Deterministic per cfg.seed.
TimeSeriesDataset simulate(const PressureTrajectory& traj, const PlantConfig& cfg);

/// Noise-free settled response over an n x n held-pressure grid, for
/// workspace and signal characterization.
struct GridPoint {
    double p1 = 0.0;
    double p2 = 0.0;
    Vec3 pose = Vec3::Zero();
    double s1 = 0.0;
    double s2 = 0.0;
};
std::vector<GridPoint> settled_grid(int n, const PlantConfig& cfg = {});

}  // namespace softfinger
