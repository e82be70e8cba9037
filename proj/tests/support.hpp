#pragma once

#include "softfinger/dataset.hpp"
#include "softfinger/projection.hpp"

#include <filesystem>
#include <random>
#include <string>

namespace testsupport {

/// Coefficient set of a desk camera rig used as ground truth in round-trip
/// and composition tests.
inline softfinger::ProjectionCoefficients reference_camera() {
    return {1.9e-1, -1.99e-3, -6.77e-3, -5.31e-2, 7.13, -2.87e2};
}

/// Pixel samples with well-spread radius and size terms; worlds follow from
/// the reference transform, so a fit on these pairs must recover it.
inline std::vector<softfinger::CalibrationPoint>
reference_pixel_grid(const softfinger::ProjectionCoefficients& c) {
    std::vector<softfinger::CalibrationPoint> points;
    for (double h : {4.0, 7.0, 10.0}) {
        for (double x : {-150.0, 0.0, 150.0}) {
            for (double y : {-60.0, 0.0, 60.0}) {
                softfinger::CalibrationPoint p;
                p.observation = {x, y, h * h};
                p.world = softfinger::pixel_to_world(p.observation, c);
                points.push_back(p);
            }
        }
    }
    return points;
}

/// Inverts the reference transform for a world point by bisection on the
/// size term. Test-side only; the library never inverts the transform.
inline softfinger::PixelObservation invert_reference(const softfinger::Vec3& world,
                                                     const softfinger::ProjectionCoefficients& c) {
    const double r_mm = std::hypot(world.x(), world.y());
    auto z_of_h = [&](double h) {
        const double r_px = r_mm / (c.c0 + c.c1 * h);
        return c.c2 * r_px + c.c3 * h + c.c4 * h * h + c.c5;
    };
    double lo = 3.0;
    double hi = 15.0;
    if (!(z_of_h(lo) < world.z() && z_of_h(hi) > world.z())) {
        throw std::runtime_error("bisection bracket does not contain the target depth");
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (z_of_h(mid) < world.z() ? lo : hi) = mid;
    }
    const double h = 0.5 * (lo + hi);
    const double r_px = r_mm / (c.c0 + c.c1 * h);
    softfinger::PixelObservation obs;
    obs.area_px = h * h;
    if (r_mm > 0.0) {
        obs.x_px = r_px * world.x() / r_mm;
        obs.y_px = r_px * world.y() / r_mm;
    }
    return obs;
}

/// Unique scratch directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        dir_ = std::filesystem::temp_directory_path() /
               ("softfinger_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(dir_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(dir_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return dir_; }
    std::filesystem::path file(const std::string& name) const { return dir_ / name; }

private:
    std::filesystem::path dir_;
};

/// Uniformly sampled dataset with deterministic but non-constant channels.
inline softfinger::TimeSeriesDataset synthetic_dataset(std::size_t n, double rate = 25.0) {
    softfinger::TimeSeriesDataset ds;
    ds.sample_rate_hz = rate;
    ds.frames.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        softfinger::SampleFrame f;
        const double u = static_cast<double>(i);
        f.t = u / rate;
        f.p1 = 0.5 + 0.4 * std::sin(0.13 * u);
        f.p2 = 0.5 + 0.4 * std::cos(0.07 * u);
        f.s1 = 0.4 + 0.2 * std::sin(0.05 * u + 0.3);
        f.s2 = 0.45 + 0.15 * std::cos(0.11 * u);
        f.x = 30.0 * std::sin(0.02 * u);
        f.y = -40.0 + 10.0 * std::cos(0.03 * u);
        f.z = -20.0 + 5.0 * std::sin(0.04 * u + 1.0);
        ds.frames.push_back(f);
    }
    return ds;
}

}  // namespace testsupport
