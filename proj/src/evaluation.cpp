#include "softfinger/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

namespace softfinger {

namespace {

void check_lengths(std::span<const Vec3> pred, std::span<const Vec3> truth) {
    if (pred.size() != truth.size()) {
        throw std::invalid_argument("trajectory length mismatch: " + std::to_string(pred.size()) +
                                    " vs " + std::to_string(truth.size()));
    }
    if (pred.empty()) {
        throw std::invalid_argument("empty trajectories");
    }
}

struct TestSequences {
    std::vector<Vec3> states;
    std::vector<std::vector<double>> exo_windows;
};

TestSequences test_sequences(const NarxModel& model, const TimeSeriesDataset& test,
                             SensorMode mode) {
    test.validate();
    if (exo_dim(mode) != model.config.exo_dim) {
        throw std::invalid_argument("sensor mode does not match model exo_dim");
    }
    TestSequences seq;
    seq.states.reserve(test.size());
    for (const SampleFrame& f : test.frames) seq.states.push_back(f.position());
    seq.exo_windows = assemble_exo_windows(exo_sequence(test, mode), model.config.delays);
    return seq;
}

std::vector<Vec3> truth_after_warmup(std::span<const Vec3> states, std::size_t delays) {
    return {states.begin() + static_cast<std::ptrdiff_t>(delays), states.end()};
}

}  // namespace

CoordinateErrors mean_error(std::span<const Vec3> pred, std::span<const Vec3> truth) {
    check_lengths(pred, truth);
    CoordinateErrors me;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const Vec3 d = pred[i] - truth[i];
        me.x += std::abs(d.x());
        me.y += std::abs(d.y());
        me.z += std::abs(d.z());
        me.r += d.norm();
    }
    const auto n = static_cast<double>(pred.size());
    me.x /= n;
    me.y /= n;
    me.z /= n;
    me.r /= n;
    return me;
}

std::vector<double> mse_curve(std::span<const Vec3> pred, std::span<const Vec3> truth) {
    check_lengths(pred, truth);
    std::vector<double> curve;
    curve.reserve(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) {
        curve.push_back((pred[i] - truth[i]).squaredNorm());
    }
    return curve;
}

LoopPredictions evaluate_open_loop(const NarxModel& model, const TimeSeriesDataset& test,
                                   SensorMode mode) {
    const TestSequences seq = test_sequences(model, test, mode);
    LoopPredictions out;
    out.predicted = rollout_teacher_forced(model, seq.states, seq.exo_windows);
    out.truth = truth_after_warmup(seq.states, model.config.delays);
    return out;
}

LoopPredictions evaluate_self_loop(const NarxModel& model, const TimeSeriesDataset& test,
                                   SensorMode mode) {
    const TestSequences seq = test_sequences(model, test, mode);
    const std::size_t delays = model.config.delays;
    std::vector<Vec3> init(delays);
    for (std::size_t d = 0; d < delays; ++d) init[d] = seq.states[delays - 1 - d];
    LoopPredictions out;
    out.predicted = rollout_self_loop(model, init, seq.exo_windows);
    out.truth = truth_after_warmup(seq.states, delays);
    return out;
}

std::vector<HorizonPoint> horizon_curve(const NarxModel& model, const TimeSeriesDataset& test,
                                        SensorMode mode, std::span<const double> horizons_s,
                                        double stride_s) {
    const TestSequences seq = test_sequences(model, test, mode);
    const std::size_t delays = model.config.delays;
    const std::size_t n_pred = seq.exo_windows.size();
    const double rate = test.sample_rate_hz;

    std::vector<std::size_t> horizons;
    horizons.reserve(horizons_s.size());
    for (double h_s : horizons_s) {
        const auto h = static_cast<std::size_t>(std::llround(h_s * rate));
        if (h < 1 || h > n_pred) {
            throw std::invalid_argument("horizon " + std::to_string(h_s) +
                                        " s does not fit the test rollout");
        }
        horizons.push_back(h);
    }

    const auto stride = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(stride_s * rate)));

    // One full rollout per window start; every horizon shares its prefix.
    // error_norms[w][j] = position error j+1 steps after start w.
    std::vector<std::vector<double>> error_norms;
    for (std::size_t start = 0; start + 1 <= n_pred; start += stride) {
        std::vector<Vec3> init(delays);
        for (std::size_t d = 0; d < delays; ++d) init[d] = seq.states[start + delays - 1 - d];
        const std::span<const std::vector<double>> windows{seq.exo_windows.data() + start,
                                                           n_pred - start};
        const std::vector<Vec3> pred = rollout_self_loop(model, init, windows);
        std::vector<double> norms(pred.size());
        for (std::size_t j = 0; j < pred.size(); ++j) {
            norms[j] = (pred[j] - seq.states[start + delays + j]).norm();
        }
        error_norms.push_back(std::move(norms));
    }

    std::vector<HorizonPoint> curve;
    curve.reserve(horizons.size());
    for (std::size_t h : horizons) {
        // the end level is averaged over the window's second half so the
        // long-horizon entries are not single-step draws
        const std::size_t tail_start = h / 2;  // tail = steps (h/2, h]
        double end_sum = 0.0;
        double avg_sum = 0.0;
        std::size_t count = 0;
        for (const auto& norms : error_norms) {
            if (norms.size() < h) continue;
            double prefix = 0.0;
            double tail = 0.0;
            for (std::size_t j = 0; j < h; ++j) {
                prefix += norms[j];
                if (j + 1 > tail_start) tail += norms[j];
            }
            end_sum += tail / static_cast<double>(h - tail_start);
            avg_sum += prefix / static_cast<double>(h);
            ++count;
        }
        if (count == 0) {
            throw std::invalid_argument("no window fits horizon of " + std::to_string(h) + " steps");
        }
        curve.push_back({static_cast<double>(h) / rate, end_sum / static_cast<double>(count),
                         avg_sum / static_cast<double>(count)});
    }
    return curve;
}

double measure_speedup(const NarxModel& model, const TimeSeriesDataset& test,
                       SensorMode mode, int runs) {
    if (test.duration_s() < 10.0) {
        throw std::invalid_argument("speedup measurement needs at least 10 s of test data");
    }
    if (runs < 1) {
        throw std::invalid_argument("need at least one run");
    }
    const TestSequences seq = test_sequences(model, test, mode);
    const std::size_t delays = model.config.delays;
    std::vector<Vec3> init(delays);
    for (std::size_t d = 0; d < delays; ++d) init[d] = seq.states[delays - 1 - d];
    const double simulated_s =
        static_cast<double>(seq.exo_windows.size()) / test.sample_rate_hz;

    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(runs));
    volatile double sink = 0.0;  // keep the rollout from being optimized out
    for (int run = 0; run < runs; ++run) {
        const auto start = std::chrono::steady_clock::now();
        const std::vector<Vec3> pred = rollout_self_loop(model, init, seq.exo_windows);
        const auto stop = std::chrono::steady_clock::now();
        sink = sink + pred.back().sum();
        times.push_back(std::chrono::duration<double>(stop - start).count());
    }
    std::sort(times.begin(), times.end());
    const double median = times[times.size() / 2];
    return simulated_s / median;
}

std::array<NarxConfig, 3> ablation_configs(std::uint64_t base_seed) {
    std::array<NarxConfig, 3> cfgs;
    const std::array<std::size_t, 3> widths = {50, 75, 100};
    for (std::size_t i = 0; i < 3; ++i) {
        cfgs[i].exo_dim = exo_dim(kAllModes[i]);
        cfgs[i].hidden = {widths[i], widths[i]};
        cfgs[i].seed = base_seed + 1 + i;
    }
    return cfgs;
}

namespace {

std::vector<double> default_horizons(std::size_t n_pred, double rate) {
    const std::size_t steps[] = {1, 2, 3, 5, 10, 15, 25, 50, 100, 200, 500, 1000, 2000};
    std::vector<double> horizons;
    for (std::size_t s : steps) {
        if (s < n_pred) horizons.push_back(static_cast<double>(s) / rate);
    }
    horizons.push_back(static_cast<double>(n_pred) / rate);
    return horizons;
}

CoordinateErrors relative_decrease(const CoordinateErrors& base, const CoordinateErrors& other) {
    auto pct = [](double a, double b) { return a > 0.0 ? 100.0 * (a - b) / a : 0.0; };
    return {pct(base.x, other.x), pct(base.y, other.y), pct(base.z, other.z),
            pct(base.r, other.r)};
}

}  // namespace

AblationReport run_ablation(const TimeSeriesDataset& train, const TimeSeriesDataset& test,
                            const std::array<NarxConfig, 3>& cfgs,
                            const AblationOptions& options) {
    train.validate();
    test.validate();
    if (std::abs(train.sample_rate_hz - test.sample_rate_hz) > 1e-9) {
        throw std::invalid_argument("train/test sample rates differ");
    }

    AblationReport report;
    report.sample_rate_hz = test.sample_rate_hz;
    report.train_frames = train.size();
    report.test_frames = test.size();

    auto train_and_evaluate = [&](std::size_t i) {
        const SensorMode mode = kAllModes[i];
        ModeResult& res = report.modes[i];
        res.mode = mode;
        res.config = cfgs[i];

        TrainResult trained = train_open_loop(train, cfgs[i], mode);
        res.final_train_loss = trained.loss_history.back();

        const LoopPredictions open = evaluate_open_loop(trained.model, test, mode);
        const LoopPredictions self = evaluate_self_loop(trained.model, test, mode);
        res.open_loop = mean_error(open.predicted, open.truth);
        res.self_loop = mean_error(self.predicted, self.truth);
        res.mse_open = mse_curve(open.predicted, open.truth);
        res.mse_self = mse_curve(self.predicted, self.truth);
        res.predicted_self = self.predicted;

        std::vector<double> horizons = options.horizons_s;
        if (horizons.empty()) {
            horizons = default_horizons(self.predicted.size(), test.sample_rate_hz);
        }
        res.horizon = horizon_curve(trained.model, test, mode, horizons,
                                    options.horizon_stride_s);
        if (options.measure_timing) {
            res.speedup = measure_speedup(trained.model, test, mode, options.speedup_runs);
        }

        if (i == 0) {
            const std::size_t delays = cfgs[i].delays;
            report.truth = self.truth;
            report.truth_t.clear();
            for (std::size_t k = delays; k < test.size(); ++k) {
                report.truth_t.push_back(test.frames[k].t);
            }
        }
    };

    if (options.parallel_training) {
        std::vector<std::thread> workers;
        workers.reserve(3);
        std::array<std::exception_ptr, 3> errors{};
        for (std::size_t i = 0; i < 3; ++i) {
            workers.emplace_back([&, i] {
                try {
                    train_and_evaluate(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            });
        }
        for (auto& w : workers) w.join();
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    } else {
        for (std::size_t i = 0; i < 3; ++i) train_and_evaluate(i);
    }

    for (std::size_t i = 0; i < 3; ++i) {
        report.modes[i].open_decrease_pct =
            relative_decrease(report.modes[0].open_loop, report.modes[i].open_loop);
        report.modes[i].self_decrease_pct =
            relative_decrease(report.modes[0].self_loop, report.modes[i].self_loop);
    }
    return report;
}

namespace {

nlohmann::json errors_to_json(const CoordinateErrors& e) {
    return {{"x", e.x}, {"y", e.y}, {"z", e.z}, {"r", e.r}};
}

}  // namespace

nlohmann::json report_to_json(const AblationReport& report) {
    nlohmann::json doc;
    doc["sample_rate_hz"] = report.sample_rate_hz;
    doc["train_frames"] = report.train_frames;
    doc["test_frames"] = report.test_frames;
    nlohmann::json models = nlohmann::json::object();
    for (const ModeResult& res : report.modes) {
        nlohmann::json m;
        m["hidden"] = {res.config.hidden[0], res.config.hidden[1]};
        m["net_inputs"] = res.config.input_size();
        m["seed"] = res.config.seed;
        m["final_train_loss"] = res.final_train_loss;
        m["open_loop_me_mm"] = errors_to_json(res.open_loop);
        m["self_loop_me_mm"] = errors_to_json(res.self_loop);
        m["open_loop_decrease_vs_MA_pct"] = errors_to_json(res.open_decrease_pct);
        m["self_loop_decrease_vs_MA_pct"] = errors_to_json(res.self_decrease_pct);
        m["mse_open_mm2"] = res.mse_open;
        m["mse_self_mm2"] = res.mse_self;
        nlohmann::json horizon = nlohmann::json::array();
        for (const HorizonPoint& hp : res.horizon) {
            horizon.push_back({{"horizon_s", hp.horizon_s},
                               {"me_end_mm", hp.me_end_mm},
                               {"me_avg_mm", hp.me_avg_mm}});
        }
        m["horizon"] = horizon;
        models[to_string(res.mode)] = std::move(m);
    }
    doc["models"] = std::move(models);
    return doc;
}

std::string report_to_text(const AblationReport& report) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out << "Ablation over sensor inputs (" << report.train_frames << " train / "
        << report.test_frames << " test frames @ " << report.sample_rate_hz << " Hz)\n\n";
    out << "model  loop   ME_x/mm  ME_y/mm  ME_z/mm  ME_r/mm  vs MA\n";
    for (const ModeResult& res : report.modes) {
        for (const char* loop : {"open", "self"}) {
            const bool is_open = std::string_view(loop) == "open";
            const CoordinateErrors& e = is_open ? res.open_loop : res.self_loop;
            const CoordinateErrors& d = is_open ? res.open_decrease_pct : res.self_decrease_pct;
            out << to_string(res.mode) << "     " << loop << "   ";
            out.precision(3);
            out.width(8);
            out << e.x << " ";
            out.width(8);
            out << e.y << " ";
            out.width(8);
            out << e.z << " ";
            out.width(8);
            out << e.r << "  ";
            out.precision(1);
            out << (d.r >= 0 ? "-" : "+") << std::abs(d.r) << "%\n";
        }
    }
    return out.str();
}

}  // namespace softfinger
