#pragma once

#include "softfinger/projection.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

namespace softfinger {

/// 8-bit RGB image, row-major, 3 bytes per pixel.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;

    std::uint8_t at(int x, int y, int ch) const {
        return rgb[static_cast<std::size_t>((y * width + x) * 3 + ch)];
    }
    std::uint8_t& at(int x, int y, int ch) {
        return rgb[static_cast<std::size_t>((y * width + x) * 3 + ch)];
    }
    bool valid() const {
        return width >= 1 && height >= 1 &&
               rgb.size() == static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3;
    }
};

/// Binary mask in image coordinates; one byte per pixel, 0 or 1.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> on;

    bool at(int x, int y) const {
        return on[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)] != 0;
    }
    std::size_t count_on() const;
};

/// Connected component of on-pixels.
struct Blob {
    double cx = 0.0;  ///< centroid, image coordinates (column)
    double cy = 0.0;  ///< centroid, image coordinates (row)
    std::size_t area_px = 0;
};

struct TrackingLossError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ImageFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Blue channel -> median filter (edge replication) -> binarize.
/// A pixel is on iff its filtered value is strictly greater than
/// threshold * 255. The window is the side length of the square
/// neighbourhood and must be odd.
BinaryMask preprocess(const Image& img, double threshold = 0.15, int median_window = 3);

/// Connected components under 8-connectivity, in scan order of their first
/// pixel. Centroid is the mean of member pixel centers (integer grid).
std::vector<Blob> find_blobs(const BinaryMask& mask);

/// Reduces the two pin blobs to one end-effector observation: centroid at
/// the midpoint, area the mean of the two areas. Symmetric in its
/// arguments. The observation is still in image coordinates.
PixelObservation combine_pins(const Blob& a, const Blob& b);

struct TrackOptions {
    double threshold = 0.15;
    int median_window = 3;
    std::size_t min_blob_area = 4;  ///< rejects residual speckle
};

/// Full per-frame pipeline: preprocess, blob analysis, two largest blobs
/// combined, recentered on the image center (y up), projected to world mm.
/// Throws TrackingLossError when fewer than two blobs pass the area floor.
Vec3 track_frame(const Image& img, const ProjectionCoefficients& c,
                 const TrackOptions& options = {});

// Frame files: PNG or binary PPM (P6), selected by magic bytes.
Image read_image(const std::filesystem::path& path);
Image read_ppm(const std::filesystem::path& path);
void write_ppm(const Image& img, const std::filesystem::path& path);
Image read_png(const std::filesystem::path& path);
void write_png(const Image& img, const std::filesystem::path& path);

}  // namespace softfinger
