#include "softfinger/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

namespace fs = std::filesystem;
using namespace softfinger;

RunConfig load_config(const std::string& path, std::optional<std::uint64_t> seed_override) {
    RunConfig cfg = parse_config(path);
    if (seed_override) {
        cfg.seed = *seed_override;
        cfg.plant.seed = *seed_override;
    }
    return cfg;
}

fs::path pick_out_dir(const std::string& flag, const RunConfig* cfg) {
    if (!flag.empty()) return flag;
    if (cfg != nullptr && !cfg->paths.out.empty()) return cfg->paths.out;
    return "out";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Soft finger state estimation toolkit: synthetic plant, camera "
                 "calibration and pin tracking, NARX training and the sensor-input "
                 "ablation study. Config files are JSON; only \"seed\" is required, "
                 "all other keys fall back to the defaults listed in README.md."};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_flag;
    std::string data_path;
    std::string mode_name = "MC";
    std::string model_path;
    std::string pred_path;
    std::string truth_path;
    std::string frames_dir;
    std::string coefficients_path;
    std::string calibration_path;
    double rate = 25.0;
    std::optional<std::uint64_t> seed_override;

    auto add_config = [&](CLI::App* cmd, bool with_seed = true) {
        cmd->add_option("--config", config_path, "run configuration JSON")->required();
        if (with_seed) {
            cmd->add_option("--seed", seed_override, "override the configured seed");
        }
    };
    auto add_out = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_flag, "output directory (default: paths.out or ./out)");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "generate the synthetic dataset");
    add_config(simulate);
    add_out(simulate);

    CLI::App* calibrate =
        app.add_subcommand("calibrate", "fit projection constants from a calibration CSV");
    calibrate->add_option("--calibration", calibration_path, "calibration CSV")->required();
    add_out(calibrate);

    CLI::App* track = app.add_subcommand("track", "track pin markers in a directory of frames");
    track->add_option("--frames", frames_dir, "directory of PNG/PPM frames")->required();
    track->add_option("--coefficients", coefficients_path, "projection coefficients JSON")
        ->required();
    track->add_option("--rate", rate, "frame rate in Hz (default 25)");
    track->add_option("--config", config_path, "optional config for tracker settings");
    add_out(track);

    CLI::App* train = app.add_subcommand("train", "train one estimator on a dataset CSV");
    add_config(train);
    train->add_option("--data", data_path, "dataset CSV (default: paths.data, else simulated)");
    train->add_option("--mode", mode_name, "sensor mode: MA, MB or MC")->required();
    add_out(train);

    CLI::App* rollout = app.add_subcommand("rollout", "self-loop rollout of a saved model");
    rollout->add_option("--model", model_path, "model JSON")->required();
    rollout->add_option("--data", data_path, "dataset CSV with the exogenous inputs")->required();
    add_out(rollout);

    CLI::App* evaluate = app.add_subcommand("evaluate", "compare predicted against true positions");
    evaluate->add_option("--pred", pred_path, "predicted positions CSV")->required();
    evaluate->add_option("--truth", truth_path, "truth positions or dataset CSV")->required();
    add_out(evaluate);

    CLI::App* ablation =
        app.add_subcommand("ablation", "train MA/MB/MC and produce the full comparison report");
    add_config(ablation);
    ablation->add_option("--data", data_path, "dataset CSV (default: paths.data, else simulated)");
    add_out(ablation);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            const RunConfig cfg = load_config(config_path, seed_override);
            return cli::run_simulate(cfg, pick_out_dir(out_flag, &cfg));
        }
        if (calibrate->parsed()) {
            return cli::run_calibrate(calibration_path, pick_out_dir(out_flag, nullptr));
        }
        if (track->parsed()) {
            TrackOptions options;
            std::optional<RunConfig> cfg;
            if (!config_path.empty()) {
                cfg = load_config(config_path, std::nullopt);
                options = cfg->track;
            }
            return cli::run_track(frames_dir, coefficients_path, rate, options,
                                  pick_out_dir(out_flag, cfg ? &*cfg : nullptr));
        }
        if (train->parsed()) {
            const RunConfig cfg = load_config(config_path, seed_override);
            return cli::run_train(cfg, data_path, parse_sensor_mode(mode_name),
                                  pick_out_dir(out_flag, &cfg));
        }
        if (rollout->parsed()) {
            return cli::run_rollout(model_path, data_path, pick_out_dir(out_flag, nullptr));
        }
        if (evaluate->parsed()) {
            return cli::run_evaluate(pred_path, truth_path, pick_out_dir(out_flag, nullptr));
        }
        if (ablation->parsed()) {
            const RunConfig cfg = load_config(config_path, seed_override);
            std::optional<fs::path> data;
            if (!data_path.empty()) data = data_path;
            return cli::run_ablation_command(cfg, data, pick_out_dir(out_flag, &cfg));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
