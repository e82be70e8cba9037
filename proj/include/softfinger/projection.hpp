#pragma once

#include "softfinger/dataset.hpp"

#include <cmath>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

namespace softfinger {

/// Constants of the pixel-to-world transform. Mixed units:
/// c0 mm/px, c1 mm/px^2, c2 mm/px, c3 mm/px, c4 mm/px^2, c5 mm.
struct ProjectionCoefficients {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double c4 = 0.0;
    double c5 = 0.0;
};

/// A tracked marker in the image plane, centered on the optical axis.
struct PixelObservation {
    double x_px = 0.0;
    double y_px = 0.0;
    double area_px = 0.0;

    double r_px() const { return std::hypot(x_px, y_px); }
    double h_px() const { return std::sqrt(area_px); }
};

struct CalibrationPoint {
    PixelObservation observation;
    Vec3 world = Vec3::Zero();  // mm
};

struct SingularCalibrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Radial/size transform to world millimetres:
///   r_mm = c0*r_px + c1*r_px*h_px
///   z_mm = c2*r_px + c3*h_px + c4*h_px^2 + c5
/// x/y recover the pixel bearing scaled to r_mm; both are 0 when r_px = 0.
Vec3 pixel_to_world(const PixelObservation& obs, const ProjectionCoefficients& c);

/// 27 world positions on a 3x3x3 mesh widening with camera distance:
/// planes z = {55, 105, 155} mm spanning {100, 150, 250} mm in x and
/// {40, 80, 120} mm in y, centered on the optical axis, ordered by
/// increasing z.
std::vector<Vec3> generate_calibration_mesh();

/// Least-squares fit of the six constants from pixel/world pairs. The
/// radial and z equations are decoupled linear models and are solved
/// independently. Throws SingularCalibrationError when either design
/// matrix is rank deficient.
ProjectionCoefficients fit_coefficients(std::span<const CalibrationPoint> points);

// Calibration CSV: header "x_px,y_px,area_px,x_mm,y_mm,z_mm".
std::vector<CalibrationPoint> read_calibration_csv(const std::filesystem::path& path);
void write_calibration_csv(std::span<const CalibrationPoint> points,
                           const std::filesystem::path& path);

// Coefficient file: JSON object with keys c0..c5.
ProjectionCoefficients read_coefficients_json(const std::filesystem::path& path);
void write_coefficients_json(const ProjectionCoefficients& c,
                             const std::filesystem::path& path);

}  // namespace softfinger
