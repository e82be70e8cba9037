#include "softfinger/dataset.hpp"

#include "softfinger/io_util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace softfinger {

double channel_value(const SampleFrame& frame, Channel ch) {
    switch (ch) {
        case Channel::t: return frame.t;
        case Channel::p1: return frame.p1;
        case Channel::p2: return frame.p2;
        case Channel::s1: return frame.s1;
        case Channel::s2: return frame.s2;
        case Channel::x: return frame.x;
        case Channel::y: return frame.y;
        case Channel::z: return frame.z;
    }
    throw std::invalid_argument("unknown channel");
}

const char* channel_name(Channel ch) {
    switch (ch) {
        case Channel::t: return "t";
        case Channel::p1: return "p1";
        case Channel::p2: return "p2";
        case Channel::s1: return "s1";
        case Channel::s2: return "s2";
        case Channel::x: return "x";
        case Channel::y: return "y";
        case Channel::z: return "z";
    }
    return "?";
}

void TimeSeriesDataset::validate() const {
    if (frames.empty()) {
        throw std::invalid_argument("dataset is empty");
    }
    if (!(sample_rate_hz > 0.0)) {
        throw std::invalid_argument("sample rate must be positive");
    }
    const double dt = 1.0 / sample_rate_hz;
    for (std::size_t i = 1; i < frames.size(); ++i) {
        const double step = frames[i].t - frames[i - 1].t;
        if (!(step > 0.0) || std::abs(step - dt) > 1e-9) {
            throw std::invalid_argument("non-uniform time step at frame " + std::to_string(i));
        }
    }
}

Normalizer::Normalizer(std::vector<Range> ranges) : ranges_(std::move(ranges)) {
    for (const Range& r : ranges_) {
        if (!(r.max > r.min)) {
            throw std::invalid_argument("normalizer range must have max > min");
        }
    }
}

const Normalizer::Range& Normalizer::range(std::size_t ch) const {
    return ranges_.at(ch);
}

Normalizer Normalizer::fit_columns(std::span<const std::vector<double>> columns,
                                   std::span<const std::string> names) {
    std::vector<Range> ranges;
    ranges.reserve(columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c].empty()) {
            throw std::invalid_argument("cannot fit normalizer on empty column");
        }
        auto [lo, hi] = std::minmax_element(columns[c].begin(), columns[c].end());
        if (!(*hi > *lo)) {
            const std::string label = c < names.size() ? names[c] : std::to_string(c);
            throw DegenerateChannelError("channel '" + label + "' is constant (min == max == " +
                                         format_double(*lo) + ")");
        }
        ranges.push_back({*lo, *hi});
    }
    return Normalizer(std::move(ranges));
}

double Normalizer::forward(std::size_t ch, double v) const {
    const Range& r = ranges_.at(ch);
    return (v - r.min) / (r.max - r.min);
}

double Normalizer::inverse(std::size_t ch, double u) const {
    const Range& r = ranges_.at(ch);
    return r.min + u * (r.max - r.min);
}

void Normalizer::forward(std::span<const double> in, std::span<double> out) const {
    if (in.size() != ranges_.size() || out.size() != ranges_.size()) {
        throw std::invalid_argument("normalizer span size mismatch");
    }
    for (std::size_t c = 0; c < in.size(); ++c) out[c] = forward(c, in[c]);
}

void Normalizer::inverse(std::span<const double> in, std::span<double> out) const {
    if (in.size() != ranges_.size() || out.size() != ranges_.size()) {
        throw std::invalid_argument("normalizer span size mismatch");
    }
    for (std::size_t c = 0; c < in.size(); ++c) out[c] = inverse(c, in[c]);
}

Normalizer fit_normalizer(const TimeSeriesDataset& ds, std::span<const Channel> channels) {
    if (ds.frames.empty()) {
        throw std::invalid_argument("cannot fit normalizer on empty dataset");
    }
    std::vector<std::vector<double>> columns(channels.size());
    std::vector<std::string> names(channels.size());
    for (std::size_t c = 0; c < channels.size(); ++c) {
        names[c] = channel_name(channels[c]);
        columns[c].reserve(ds.frames.size());
        for (const SampleFrame& f : ds.frames) {
            columns[c].push_back(channel_value(f, channels[c]));
        }
    }
    return Normalizer::fit_columns(columns, names);
}

std::vector<double> rescale_paired_signal(std::span<const double> s1,
                                          std::span<const double> s2) {
    if (s1.empty() || s2.empty()) {
        throw std::invalid_argument("rescale_paired_signal: empty input");
    }
    auto [lo1, hi1] = std::minmax_element(s1.begin(), s1.end());
    auto [lo2, hi2] = std::minmax_element(s2.begin(), s2.end());
    if (!(*hi1 > *lo1)) {
        throw DegenerateSignalError("rescale_paired_signal: first signal is constant");
    }
    const double gain = (*hi2 - *lo2) / (*hi1 - *lo1);
    std::vector<double> out;
    out.reserve(s1.size());
    for (double v : s1) {
        out.push_back(*lo2 + (v - *lo1) * gain);
    }
    return out;
}

std::pair<TimeSeriesDataset, TimeSeriesDataset>
split_sequential(const TimeSeriesDataset& ds, double train_fraction) {
    if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
        throw std::invalid_argument("train_fraction must lie in (0, 1)");
    }
    const auto n = ds.frames.size();
    const auto n_train = static_cast<std::size_t>(
        std::floor(static_cast<double>(n) * train_fraction));
    TimeSeriesDataset train{{ds.frames.begin(), ds.frames.begin() + static_cast<std::ptrdiff_t>(n_train)},
                            ds.sample_rate_hz};
    TimeSeriesDataset test{{ds.frames.begin() + static_cast<std::ptrdiff_t>(n_train), ds.frames.end()},
                           ds.sample_rate_hz};
    return {std::move(train), std::move(test)};
}

std::vector<RegressionPair> assemble_windows(std::span<const Vec3> states,
                                             std::span<const std::vector<double>> exo,
                                             std::size_t delays) {
    if (delays == 0) {
        throw std::invalid_argument("delays must be >= 1");
    }
    if (states.size() != exo.size()) {
        throw std::invalid_argument("state/exogenous sequence length mismatch");
    }
    if (states.size() < delays + 1) {
        throw std::invalid_argument("dataset too short for delay assembly: need at least " +
                                    std::to_string(delays + 1) + " frames, have " +
                                    std::to_string(states.size()));
    }
    const std::size_t exo_dim = exo.empty() ? 0 : exo.front().size();
    const std::size_t input_size = delays * (3 + exo_dim);

    std::vector<RegressionPair> pairs;
    pairs.reserve(states.size() - delays);
    for (std::size_t i = delays - 1; i + 1 < states.size(); ++i) {
        RegressionPair pair;
        pair.input.reserve(input_size);
        for (std::size_t d = 0; d < delays; ++d) {
            const Vec3& r = states[i - d];
            pair.input.push_back(r.x());
            pair.input.push_back(r.y());
            pair.input.push_back(r.z());
        }
        for (std::size_t d = 0; d < delays; ++d) {
            const std::vector<double>& u = exo[i - d];
            if (u.size() != exo_dim) {
                throw std::invalid_argument("ragged exogenous sequence");
            }
            pair.input.insert(pair.input.end(), u.begin(), u.end());
        }
        pair.target = states[i + 1];
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

std::vector<std::vector<double>> assemble_exo_windows(std::span<const std::vector<double>> exo,
                                                      std::size_t delays) {
    if (delays == 0) {
        throw std::invalid_argument("delays must be >= 1");
    }
    if (exo.size() < delays + 1) {
        throw std::invalid_argument("exogenous sequence too short for delay assembly");
    }
    const std::size_t exo_dim = exo.front().size();
    std::vector<std::vector<double>> windows;
    windows.reserve(exo.size() - delays);
    for (std::size_t i = delays - 1; i + 1 < exo.size(); ++i) {
        std::vector<double> w;
        w.reserve(delays * exo_dim);
        for (std::size_t d = 0; d < delays; ++d) {
            const std::vector<double>& u = exo[i - d];
            if (u.size() != exo_dim) {
                throw std::invalid_argument("ragged exogenous sequence");
            }
            w.insert(w.end(), u.begin(), u.end());
        }
        windows.push_back(std::move(w));
    }
    return windows;
}

namespace {

constexpr const char* kDatasetHeader = "t,p1,p2,s1,s2,x,y,z";

}  // namespace

TimeSeriesDataset read_dataset_csv(const std::filesystem::path& path) {
    const std::string content = read_file(path);
    std::istringstream in(content);
    std::string line;
    if (!std::getline(in, line)) {
        throw CsvFormatError(path.string() + ": empty file");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kDatasetHeader) {
        throw CsvFormatError(path.string() + ": expected header '" + kDatasetHeader +
                             "', got '" + line + "'");
    }
    TimeSeriesDataset ds;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 8) {
            throw CsvFormatError(path.string() + ":" + std::to_string(line_no) +
                                 ": expected 8 fields, got " + std::to_string(fields.size()));
        }
        SampleFrame f;
        double* slots[8] = {&f.t, &f.p1, &f.p2, &f.s1, &f.s2, &f.x, &f.y, &f.z};
        for (int c = 0; c < 8; ++c) {
            try {
                *slots[c] = parse_double(fields[static_cast<std::size_t>(c)], "field");
            } catch (const std::invalid_argument&) {
                throw CsvFormatError(path.string() + ":" + std::to_string(line_no) +
                                     ": bad value in column " + std::to_string(c + 1));
            }
            if (!std::isfinite(*slots[c])) {
                throw CsvFormatError(path.string() + ":" + std::to_string(line_no) +
                                     ": non-finite value in column " + std::to_string(c + 1));
            }
        }
        ds.frames.push_back(f);
    }
    if (ds.frames.size() < 2) {
        throw CsvFormatError(path.string() + ": need at least 2 frames");
    }
    ds.sample_rate_hz = 1.0 / (ds.frames[1].t - ds.frames[0].t);
    ds.validate();
    return ds;
}

void write_dataset_csv(const TimeSeriesDataset& ds, const std::filesystem::path& path) {
    std::string out;
    out.reserve(64 * ds.frames.size() + 16);
    out += kDatasetHeader;
    out += '\n';
    for (const SampleFrame& f : ds.frames) {
        out += format_double(f.t);
        for (double v : {f.p1, f.p2, f.s1, f.s2, f.x, f.y, f.z}) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    write_file_atomic(path, out);
}

}  // namespace softfinger
