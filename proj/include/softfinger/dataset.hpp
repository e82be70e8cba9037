#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace softfinger {

using Vec3 = Eigen::Vector3d;

/// One 25 Hz record of the actuated finger.
struct SampleFrame {
    double t = 0.0;   ///< seconds
    double p1 = 0.0;  ///< chamber pressures, normalized to [0, 1]
    double p2 = 0.0;
    double s1 = 0.0;  ///< waveguide signal strengths, normalized
    double s2 = 0.0;
    double x = 0.0;   ///< end-effector position, mm
    double y = 0.0;
    double z = 0.0;

    Vec3 position() const { return {x, y, z}; }
};

enum class Channel : int { t = 0, p1, p2, s1, s2, x, y, z };

double channel_value(const SampleFrame& frame, Channel ch);
const char* channel_name(Channel ch);

/// Uniformly sampled frame sequence; the unit of training and testing.
struct TimeSeriesDataset {
    std::vector<SampleFrame> frames;
    double sample_rate_hz = 25.0;

    std::size_t size() const { return frames.size(); }
    double duration_s() const {
        return static_cast<double>(frames.size()) / sample_rate_hz;
    }

    /// Throws std::invalid_argument unless non-empty with a uniform time
    /// step of 1/sample_rate_hz (1e-9 s slack).
    void validate() const;
};

struct DegenerateChannelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateSignalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CsvFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Per-channel affine map onto [0, 1] fitted from data extremes.
/// forward(inverse(u)) and inverse(forward(v)) are identities.
class Normalizer {
public:
    struct Range {
        double min = 0.0;
        double max = 1.0;
    };

    Normalizer() = default;
    explicit Normalizer(std::vector<Range> ranges);

    /// One range per column; `names` label columns in error messages.
    /// Throws DegenerateChannelError for a constant column.
    static Normalizer fit_columns(std::span<const std::vector<double>> columns,
                                  std::span<const std::string> names);

    std::size_t channels() const { return ranges_.size(); }
    const Range& range(std::size_t ch) const;

    double forward(std::size_t ch, double v) const;
    double inverse(std::size_t ch, double u) const;

    void forward(std::span<const double> in, std::span<double> out) const;
    void inverse(std::span<const double> in, std::span<double> out) const;

private:
    std::vector<Range> ranges_;
};

Normalizer fit_normalizer(const TimeSeriesDataset& ds, std::span<const Channel> channels);

/// Affine image of `s1` whose extremes equal the extremes of `s2`.
/// Element order is preserved. Throws DegenerateSignalError if s1 is constant.
std::vector<double> rescale_paired_signal(std::span<const double> s1,
                                          std::span<const double> s2);

/// Splits into the earliest floor(N * train_fraction) frames and the rest,
/// order preserved, no shuffling.
std::pair<TimeSeriesDataset, TimeSeriesDataset>
split_sequential(const TimeSeriesDataset& ds, double train_fraction);

/// One supervised sample: delay-stacked input and the next position.
struct RegressionPair {
    std::vector<double> input;
    Vec3 target = Vec3::Zero();
};

/// Delay-embeds aligned state/exogenous sequences. Input layout, fixed for
/// model portability: states newest-first [r_i, r_{i-1}, ..., r_{i-d+1}],
/// then exogenous newest-first [u_i, u_{i-1}, ..., u_{i-d+1}]; target is
/// r_{i+1}. Input size = d * (3 + exo_dim); pair count = N - d.
std::vector<RegressionPair> assemble_windows(std::span<const Vec3> states,
                                             std::span<const std::vector<double>> exo,
                                             std::size_t delays);

/// Stacked exogenous taps [u_i, u_{i-1}, ...] per valid index i; window k
/// drives the prediction of state index delays + k.
std::vector<std::vector<double>> assemble_exo_windows(std::span<const std::vector<double>> exo,
                                                      std::size_t delays);

// Dataset CSV: header "t,p1,p2,s1,s2,x,y,z", one frame per row, shortest
// round-trip float formatting, newline-terminated.
TimeSeriesDataset read_dataset_csv(const std::filesystem::path& path);
void write_dataset_csv(const TimeSeriesDataset& ds, const std::filesystem::path& path);

}  // namespace softfinger
