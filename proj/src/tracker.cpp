#include "softfinger/tracker.hpp"

#include <algorithm>
#include <array>

namespace softfinger {

std::size_t BinaryMask::count_on() const {
    return static_cast<std::size_t>(std::count(on.begin(), on.end(), std::uint8_t{1}));
}

BinaryMask preprocess(const Image& img, double threshold, int median_window) {
    if (!img.valid()) {
        throw std::invalid_argument("invalid image");
    }
    if (median_window < 1 || median_window % 2 == 0) {
        throw std::invalid_argument("median window must be odd and >= 1");
    }
    const int w = img.width;
    const int h = img.height;
    const int half = median_window / 2;
    const double cut = threshold * 255.0;

    // blue plane
    std::vector<std::uint8_t> blue(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            blue[static_cast<std::size_t>(y) * w + x] = img.at(x, y, 2);
        }
    }

    BinaryMask mask{w, h, std::vector<std::uint8_t>(blue.size(), 0)};
    std::vector<std::uint8_t> window;
    window.reserve(static_cast<std::size_t>(median_window) * median_window);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            window.clear();
            for (int dy = -half; dy <= half; ++dy) {
                const int yy = std::clamp(y + dy, 0, h - 1);
                for (int dx = -half; dx <= half; ++dx) {
                    const int xx = std::clamp(x + dx, 0, w - 1);
                    window.push_back(blue[static_cast<std::size_t>(yy) * w + xx]);
                }
            }
            auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
            std::nth_element(window.begin(), mid, window.end());
            if (static_cast<double>(*mid) > cut) {
                mask.on[static_cast<std::size_t>(y) * w + x] = 1;
            }
        }
    }
    return mask;
}

std::vector<Blob> find_blobs(const BinaryMask& mask) {
    const int w = mask.width;
    const int h = mask.height;
    std::vector<std::uint8_t> visited(mask.on.size(), 0);
    std::vector<Blob> blobs;
    std::vector<std::pair<int, int>> stack;

    constexpr std::array<std::pair<int, int>, 8> neighbours = {
        {{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}}};

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * w + x;
            if (!mask.on[idx] || visited[idx]) continue;

            double sum_x = 0.0;
            double sum_y = 0.0;
            std::size_t area = 0;
            stack.clear();
            stack.emplace_back(x, y);
            visited[idx] = 1;
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                sum_x += cx;
                sum_y += cy;
                ++area;
                for (auto [dx, dy] : neighbours) {
                    const int nx = cx + dx;
                    const int ny = cy + dy;
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    const std::size_t nidx = static_cast<std::size_t>(ny) * w + nx;
                    if (mask.on[nidx] && !visited[nidx]) {
                        visited[nidx] = 1;
                        stack.emplace_back(nx, ny);
                    }
                }
            }
            blobs.push_back({sum_x / static_cast<double>(area),
                             sum_y / static_cast<double>(area), area});
        }
    }
    return blobs;
}

PixelObservation combine_pins(const Blob& a, const Blob& b) {
    PixelObservation obs;
    obs.x_px = 0.5 * (a.cx + b.cx);
    obs.y_px = 0.5 * (a.cy + b.cy);
    obs.area_px = 0.5 * (static_cast<double>(a.area_px) + static_cast<double>(b.area_px));
    return obs;
}

Vec3 track_frame(const Image& img, const ProjectionCoefficients& c,
                 const TrackOptions& options) {
    const BinaryMask mask = preprocess(img, options.threshold, options.median_window);
    std::vector<Blob> blobs = find_blobs(mask);
    std::erase_if(blobs, [&](const Blob& b) { return b.area_px < options.min_blob_area; });
    if (blobs.size() < 2) {
        throw TrackingLossError("tracking loss: " + std::to_string(blobs.size()) +
                                " qualifying blob(s), need 2");
    }
    std::sort(blobs.begin(), blobs.end(), [](const Blob& a, const Blob& b) {
        if (a.area_px != b.area_px) return a.area_px > b.area_px;
        if (a.cy != b.cy) return a.cy < b.cy;
        return a.cx < b.cx;
    });

    PixelObservation obs = combine_pins(blobs[0], blobs[1]);
    // image coordinates -> optical-axis frame (center origin, y up)
    obs.x_px -= (img.width - 1) / 2.0;
    obs.y_px = (img.height - 1) / 2.0 - obs.y_px;
    return pixel_to_world(obs, c);
}

}  // namespace softfinger
