#include "softfinger/commands.hpp"

#include "softfinger/io_util.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <sstream>

namespace softfinger::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kPositionsHeader = "t,x,y,z";

void write_positions_csv(std::span<const double> t, std::span<const Vec3> positions,
                         const fs::path& path) {
    if (t.size() != positions.size()) {
        throw std::invalid_argument("time/position length mismatch");
    }
    std::string out = kPositionsHeader;
    out += '\n';
    for (std::size_t i = 0; i < positions.size(); ++i) {
        out += format_double(t[i]);
        for (int c = 0; c < 3; ++c) {
            out += ',';
            out += format_double(positions[i](c));
        }
        out += '\n';
    }
    write_file_atomic(path, out);
}

struct TimedPositions {
    std::vector<double> t;
    std::vector<Vec3> positions;
};

TimedPositions read_positions(const fs::path& path) {
    const std::string content = read_file(path);
    std::istringstream in(content);
    std::string line;
    if (!std::getline(in, line)) {
        throw CsvFormatError(path.string() + ": empty file");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();

    TimedPositions out;
    if (line == kPositionsHeader) {
        std::size_t line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            const auto fields = split_csv_line(line);
            if (fields.size() != 4) {
                throw CsvFormatError(path.string() + ":" + std::to_string(line_no) +
                                     ": expected 4 fields");
            }
            out.t.push_back(parse_double(fields[0], "t"));
            out.positions.emplace_back(parse_double(fields[1], "x"),
                                       parse_double(fields[2], "y"),
                                       parse_double(fields[3], "z"));
        }
        return out;
    }
    // fall back to the full dataset format
    const TimeSeriesDataset ds = read_dataset_csv(path);
    for (const SampleFrame& f : ds.frames) {
        out.t.push_back(f.t);
        out.positions.push_back(f.position());
    }
    return out;
}

TimeSeriesDataset obtain_dataset(const RunConfig& cfg, std::optional<fs::path> data_csv,
                                 const fs::path& out_dir, bool persist_simulated) {
    fs::path source;
    if (data_csv.has_value() && !data_csv->empty()) {
        source = *data_csv;
    } else {
        source = cfg.paths.data;
    }
    if (!source.empty()) {
        return read_dataset_csv(source);
    }
    const PressureTrajectory traj =
        random_actuation(cfg.duration_s, cfg.sample_rate_hz, cfg.actuation.step_rate_hz,
                         cfg.actuation.speed_bound_per_s, cfg.seed);
    TimeSeriesDataset ds = simulate(traj, cfg.plant);
    if (persist_simulated) {
        write_dataset_csv(ds, out_dir / "dataset.csv");
    }
    return ds;
}

std::string format_cell(double v, int precision) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(precision);
    s << v;
    return s.str();
}

}  // namespace

int run_simulate(const RunConfig& cfg, const fs::path& out_dir) {
    const PressureTrajectory traj =
        random_actuation(cfg.duration_s, cfg.sample_rate_hz, cfg.actuation.step_rate_hz,
                         cfg.actuation.speed_bound_per_s, cfg.seed);
    const TimeSeriesDataset ds = simulate(traj, cfg.plant);
    const auto [train, test] = split_sequential(ds, cfg.train_fraction);

    write_dataset_csv(ds, out_dir / "dataset.csv");
    write_dataset_csv(train, out_dir / "train.csv");
    write_dataset_csv(test, out_dir / "test.csv");
    write_file_atomic(out_dir / "effective_config.json",
                      effective_config_json(cfg).dump(2) + "\n");
    std::cout << "simulated " << ds.size() << " frames (" << ds.duration_s() << " s at "
              << cfg.sample_rate_hz << " Hz) -> " << (out_dir / "dataset.csv").string() << "\n";
    return 0;
}

int run_calibrate(const fs::path& calibration_csv, const fs::path& out_dir) {
    const std::vector<CalibrationPoint> points = read_calibration_csv(calibration_csv);
    const ProjectionCoefficients coeffs = fit_coefficients(points);
    write_coefficients_json(coeffs, out_dir / "coefficients.json");

    double rms = 0.0;
    for (const CalibrationPoint& p : points) {
        rms += (pixel_to_world(p.observation, coeffs) - p.world).squaredNorm();
    }
    rms = std::sqrt(rms / static_cast<double>(points.size()));
    std::cout << "calibrated on " << points.size() << " points, residual RMS " << rms
              << " mm -> " << (out_dir / "coefficients.json").string() << "\n";
    return 0;
}

int run_track(const fs::path& frames_dir, const fs::path& coefficients_json,
              double sample_rate_hz, const TrackOptions& options, const fs::path& out_dir) {
    if (!(sample_rate_hz > 0.0)) {
        throw std::invalid_argument("sample rate must be positive");
    }
    const ProjectionCoefficients coeffs = read_coefficients_json(coefficients_json);

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(frames_dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = entry.path().extension().string();
        if (ext == ".png" || ext == ".ppm") files.push_back(entry.path());
    }
    if (files.empty()) {
        throw std::runtime_error("no .png/.ppm frames in " + frames_dir.string());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });

    std::vector<double> t;
    std::vector<Vec3> positions;
    for (std::size_t i = 0; i < files.size(); ++i) {
        const Image img = read_image(files[i]);
        try {
            positions.push_back(track_frame(img, coeffs, options));
        } catch (const TrackingLossError& e) {
            throw TrackingLossError(files[i].filename().string() + ": " + e.what());
        }
        t.push_back(static_cast<double>(i) / sample_rate_hz);
    }
    write_positions_csv(t, positions, out_dir / "positions.csv");
    std::cout << "tracked " << files.size() << " frames -> "
              << (out_dir / "positions.csv").string() << "\n";
    return 0;
}

int run_train(const RunConfig& cfg, const fs::path& data_csv, SensorMode mode,
              const fs::path& out_dir) {
    const TimeSeriesDataset ds = obtain_dataset(cfg, data_csv, out_dir, false);
    const TrainResult result = train_open_loop(ds, cfg.narx_config(mode), mode);

    const fs::path model_path = out_dir / ("model_" + to_string(mode) + ".json");
    save_model(result.model, model_path);

    std::string history = "epoch,train_mse\n";
    for (std::size_t e = 0; e < result.loss_history.size(); ++e) {
        history += std::to_string(e + 1) + "," + format_double(result.loss_history[e]) + "\n";
    }
    write_file_atomic(out_dir / ("train_history_" + to_string(mode) + ".csv"), history);

    std::cout << "trained " << to_string(mode) << " on " << ds.size() << " frames, final MSE "
              << result.loss_history.back() << " -> " << model_path.string() << "\n";
    return 0;
}

int run_rollout(const fs::path& model_json, const fs::path& data_csv, const fs::path& out_dir) {
    const NarxModel model = load_model(model_json);
    const SensorMode mode = sensor_mode_for_exo_dim(model.config.exo_dim);
    const TimeSeriesDataset ds = read_dataset_csv(data_csv);
    const LoopPredictions self = evaluate_self_loop(model, ds, mode);

    std::vector<double> t;
    for (std::size_t k = model.config.delays; k < ds.size(); ++k) {
        t.push_back(ds.frames[k].t);
    }
    write_positions_csv(t, self.predicted, out_dir / "predicted.csv");
    std::cout << "rolled out " << self.predicted.size() << " steps (" << to_string(mode)
              << ") -> " << (out_dir / "predicted.csv").string() << "\n";
    return 0;
}

int run_evaluate(const fs::path& pred_csv, const fs::path& truth_csv, const fs::path& out_dir) {
    const TimedPositions pred = read_positions(pred_csv);
    const TimedPositions truth = read_positions(truth_csv);
    if (pred.t.empty() || truth.t.empty()) {
        throw std::invalid_argument("empty trajectory file");
    }

    // align the prediction window inside the truth sequence by time stamp
    std::size_t offset = 0;
    while (offset < truth.t.size() && std::abs(truth.t[offset] - pred.t.front()) > 1e-9) {
        ++offset;
    }
    if (offset == truth.t.size() || truth.t.size() - offset < pred.t.size()) {
        throw std::invalid_argument("prediction time range not contained in truth");
    }
    for (std::size_t i = 0; i < pred.t.size(); ++i) {
        if (std::abs(truth.t[offset + i] - pred.t[i]) > 1e-9) {
            throw std::invalid_argument("time stamps diverge at row " + std::to_string(i + 2));
        }
    }
    const std::span<const Vec3> truth_window{truth.positions.data() + offset, pred.t.size()};

    const CoordinateErrors me = mean_error(pred.positions, truth_window);
    const std::vector<double> mse = mse_curve(pred.positions, truth_window);
    const double mse_mean =
        std::accumulate(mse.begin(), mse.end(), 0.0) / static_cast<double>(mse.size());

    nlohmann::json doc{{"n", pred.t.size()},
                       {"me_x_mm", me.x},
                       {"me_y_mm", me.y},
                       {"me_z_mm", me.z},
                       {"me_r_mm", me.r},
                       {"mse_mean_mm2", mse_mean}};
    write_file_atomic(out_dir / "metrics.json", doc.dump(2) + "\n");
    std::cout << "ME x/y/z/r = " << me.x << " / " << me.y << " / " << me.z << " / " << me.r
              << " mm over " << pred.t.size() << " steps -> "
              << (out_dir / "metrics.json").string() << "\n";
    return 0;
}

namespace {

void write_workspace_grid_csv(const PlantConfig& plant, const fs::path& path) {
    const std::vector<GridPoint> grid = settled_grid(9, plant);
    std::string out = "p1,p2,x_mm,y_mm,z_mm,s1,s2,s_avg,s_log2_ratio\n";
    for (const GridPoint& gp : grid) {
        out += format_double(gp.p1);
        for (double v : {gp.p2, gp.pose.x(), gp.pose.y(), gp.pose.z(), gp.s1, gp.s2,
                         0.5 * (gp.s1 + gp.s2), std::log2(gp.s1 / gp.s2)}) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    write_file_atomic(path, out);
}

void write_me_bars_csv(const AblationReport& report, const fs::path& path) {
    std::string out = "model,loop,me_x_mm,me_y_mm,me_z_mm,me_r_mm,decrease_vs_MA_pct\n";
    for (const ModeResult& res : report.modes) {
        for (bool open : {true, false}) {
            const CoordinateErrors& e = open ? res.open_loop : res.self_loop;
            const CoordinateErrors& d = open ? res.open_decrease_pct : res.self_decrease_pct;
            out += to_string(res.mode);
            out += open ? ",open" : ",self";
            for (double v : {e.x, e.y, e.z, e.r, d.r}) {
                out += ',';
                out += format_double(v);
            }
            out += '\n';
        }
    }
    write_file_atomic(path, out);
}

void write_paths_csv(const AblationReport& report, const fs::path& path) {
    std::string out = "t_s,x_true,y_true,z_true";
    for (const ModeResult& res : report.modes) {
        const std::string name = to_string(res.mode);
        out += ",x_" + name + ",y_" + name + ",z_" + name;
    }
    out += '\n';
    for (std::size_t k = 0; k < report.truth.size(); ++k) {
        out += format_double(report.truth_t[k]);
        for (int c = 0; c < 3; ++c) {
            out += ',';
            out += format_double(report.truth[k](c));
        }
        for (const ModeResult& res : report.modes) {
            for (int c = 0; c < 3; ++c) {
                out += ',';
                out += format_double(res.predicted_self[k](c));
            }
        }
        out += '\n';
    }
    write_file_atomic(path, out);
}

void write_mse_csv(const AblationReport& report, const ModeResult& res, const fs::path& path) {
    std::string out = "t_s,mse_mm2\n";
    for (std::size_t k = 0; k < res.mse_self.size(); ++k) {
        out += format_double(report.truth_t[k]);
        out += ',';
        out += format_double(res.mse_self[k]);
        out += '\n';
    }
    write_file_atomic(path, out);
}

void write_horizon_csv(const ModeResult& res, const fs::path& path) {
    std::string out = "horizon_s,me_end_mm,me_avg_mm\n";
    for (const HorizonPoint& hp : res.horizon) {
        out += format_double(hp.horizon_s);
        out += ',';
        out += format_double(hp.me_end_mm);
        out += ',';
        out += format_double(hp.me_avg_mm);
        out += '\n';
    }
    write_file_atomic(path, out);
}

}  // namespace

int run_ablation_command(const RunConfig& cfg, std::optional<fs::path> data_csv,
                         const fs::path& out_dir) {
    const TimeSeriesDataset ds = obtain_dataset(cfg, data_csv, out_dir, true);
    const auto [train, test] = split_sequential(ds, cfg.train_fraction);

    const std::array<NarxConfig, 3> cfgs = {cfg.narx_config(SensorMode::no_signal),
                                            cfg.narx_config(SensorMode::averaged_signal),
                                            cfg.narx_config(SensorMode::full_signal)};
    AblationOptions options;
    const AblationReport report = run_ablation(train, test, cfgs, options);

    write_file_atomic(out_dir / "report.json", report_to_json(report).dump(2) + "\n");
    write_file_atomic(out_dir / "report.txt", report_to_text(report));
    write_file_atomic(out_dir / "effective_config.json",
                      effective_config_json(cfg).dump(2) + "\n");
    write_workspace_grid_csv(cfg.plant, out_dir / "workspace_grid.csv");
    write_me_bars_csv(report, out_dir / "me_bars.csv");
    write_paths_csv(report, out_dir / "paths_self_loop.csv");
    for (const ModeResult& res : report.modes) {
        write_mse_csv(report, res, out_dir / ("mse_" + to_string(res.mode) + ".csv"));
        write_horizon_csv(res, out_dir / ("horizon_" + to_string(res.mode) + ".csv"));
    }

    // wall-clock numbers are kept out of report.json so identical runs
    // produce identical reports
    nlohmann::json timing;
    for (const ModeResult& res : report.modes) {
        timing["speedup_vs_realtime"][to_string(res.mode)] = res.speedup;
    }
    write_file_atomic(out_dir / "timing.json", timing.dump(2) + "\n");

    std::cout << report_to_text(report);
    std::cout << "speedup vs real time:";
    for (const ModeResult& res : report.modes) {
        std::cout << " " << to_string(res.mode) << " " << format_cell(res.speedup, 1) << "x";
    }
    std::cout << "\nreport -> " << (out_dir / "report.json").string() << "\n";
    return 0;
}

}  // namespace softfinger::cli
