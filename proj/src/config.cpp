#include "softfinger/config.hpp"

#include "softfinger/io_util.hpp"

#include <set>

namespace softfinger {

namespace {

void reject_unknown_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                         const std::string& scope) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError("unknown key '" + (scope.empty() ? key : scope + "." + key) + "'");
        }
    }
}

double get_number(const nlohmann::json& obj, const char* key, double fallback,
                  const std::string& scope) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number()) {
        throw ConfigError("'" + scope + key + "' must be a number");
    }
    return obj.at(key).get<double>();
}

bool is_nonnegative_integer(const nlohmann::json& v) {
    return v.is_number_unsigned() ||
           (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

std::size_t get_size(const nlohmann::json& obj, const char* key, std::size_t fallback,
                     const std::string& scope) {
    if (!obj.contains(key)) return fallback;
    if (!is_nonnegative_integer(obj.at(key))) {
        throw ConfigError("'" + scope + key + "' must be a non-negative integer");
    }
    return obj.at(key).get<std::size_t>();
}

std::string get_string(const nlohmann::json& obj, const char* key, const std::string& fallback,
                       const std::string& scope) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_string()) {
        throw ConfigError("'" + scope + key + "' must be a string");
    }
    return obj.at(key).get<std::string>();
}

}  // namespace

NarxConfig RunConfig::narx_config(SensorMode mode) const {
    NarxConfig cfg;
    cfg.exo_dim = exo_dim(mode);
    cfg.delays = narx.delays;
    cfg.learning_rate = narx.learning_rate;
    cfg.epochs = narx.epochs;
    cfg.batch_size = narx.batch_size;
    const auto index = static_cast<std::size_t>(mode);
    cfg.hidden = narx.hidden[index];
    cfg.seed = seed + 1 + index;
    return cfg;
}

RunConfig config_from_json(const nlohmann::json& doc, const std::string& origin) {
    if (!doc.is_object()) {
        throw ConfigError(origin + ": top level must be a JSON object");
    }
    reject_unknown_keys(doc, {"seed", "sample_rate_hz", "duration_s", "train_fraction",
                              "plant", "actuation", "narx", "track", "paths"},
                        "");

    RunConfig cfg;
    if (!doc.contains("seed")) {
        throw ConfigError(origin + ": 'seed' is required (no wall-clock default)");
    }
    if (!is_nonnegative_integer(doc.at("seed"))) {
        throw ConfigError("'seed' must be a non-negative integer");
    }
    cfg.seed = doc.at("seed").get<std::uint64_t>();
    cfg.sample_rate_hz = get_number(doc, "sample_rate_hz", cfg.sample_rate_hz, "");
    cfg.duration_s = get_number(doc, "duration_s", cfg.duration_s, "");
    cfg.train_fraction = get_number(doc, "train_fraction", cfg.train_fraction, "");
    if (!(cfg.sample_rate_hz > 0.0) || !(cfg.duration_s > 0.0)) {
        throw ConfigError("'sample_rate_hz' and 'duration_s' must be positive");
    }
    if (!(cfg.train_fraction > 0.0) || !(cfg.train_fraction < 1.0)) {
        throw ConfigError("'train_fraction' must lie in (0, 1)");
    }

    if (doc.contains("plant")) {
        const auto& plant = doc.at("plant");
        if (!plant.is_object()) throw ConfigError("'plant' must be an object");
        reject_unknown_keys(plant,
                            {"x_max_mm", "y_max_mm", "z_max_mm", "time_constant_s",
                             "hysteresis_gain", "sensor_noise", "position_noise_mm"},
                            "plant");
        cfg.plant.x_max_mm = get_number(plant, "x_max_mm", cfg.plant.x_max_mm, "plant.");
        cfg.plant.y_max_mm = get_number(plant, "y_max_mm", cfg.plant.y_max_mm, "plant.");
        cfg.plant.z_max_mm = get_number(plant, "z_max_mm", cfg.plant.z_max_mm, "plant.");
        cfg.plant.time_constant_s =
            get_number(plant, "time_constant_s", cfg.plant.time_constant_s, "plant.");
        cfg.plant.hysteresis_gain =
            get_number(plant, "hysteresis_gain", cfg.plant.hysteresis_gain, "plant.");
        cfg.plant.sensor_noise = get_number(plant, "sensor_noise", cfg.plant.sensor_noise, "plant.");
        cfg.plant.position_noise_mm =
            get_number(plant, "position_noise_mm", cfg.plant.position_noise_mm, "plant.");
    }
    cfg.plant.seed = cfg.seed;
    try {
        cfg.plant.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("plant: ") + e.what());
    }

    if (doc.contains("actuation")) {
        const auto& act = doc.at("actuation");
        if (!act.is_object()) throw ConfigError("'actuation' must be an object");
        reject_unknown_keys(act, {"step_rate_hz", "speed_bound_per_s"}, "actuation");
        cfg.actuation.step_rate_hz =
            get_number(act, "step_rate_hz", cfg.actuation.step_rate_hz, "actuation.");
        cfg.actuation.speed_bound_per_s =
            get_number(act, "speed_bound_per_s", cfg.actuation.speed_bound_per_s, "actuation.");
        if (!(cfg.actuation.step_rate_hz > 0.0) || !(cfg.actuation.speed_bound_per_s > 0.0)) {
            throw ConfigError("actuation rates must be positive");
        }
    }

    if (doc.contains("narx")) {
        const auto& nx = doc.at("narx");
        if (!nx.is_object()) throw ConfigError("'narx' must be an object");
        reject_unknown_keys(nx, {"delays", "learning_rate", "epochs", "batch_size", "hidden"},
                            "narx");
        cfg.narx.delays = get_size(nx, "delays", cfg.narx.delays, "narx.");
        cfg.narx.learning_rate = get_number(nx, "learning_rate", cfg.narx.learning_rate, "narx.");
        cfg.narx.epochs = get_size(nx, "epochs", cfg.narx.epochs, "narx.");
        cfg.narx.batch_size = get_size(nx, "batch_size", cfg.narx.batch_size, "narx.");
        if (nx.contains("hidden")) {
            const auto& hidden = nx.at("hidden");
            if (!hidden.is_object()) {
                throw ConfigError("'narx.hidden' must map MA/MB/MC to [h1, h2]");
            }
            reject_unknown_keys(hidden, {"MA", "MB", "MC"}, "narx.hidden");
            for (SensorMode mode : kAllModes) {
                const std::string name = to_string(mode);
                if (!hidden.contains(name)) continue;
                const auto& sizes = hidden.at(name);
                if (!sizes.is_array() || sizes.size() != 2 || !is_nonnegative_integer(sizes[0]) ||
                    !is_nonnegative_integer(sizes[1])) {
                    throw ConfigError("'narx.hidden." + name + "' must be [h1, h2]");
                }
                cfg.narx.hidden[static_cast<std::size_t>(mode)] = {
                    sizes[0].get<std::size_t>(), sizes[1].get<std::size_t>()};
            }
        }
    }
    for (SensorMode mode : kAllModes) {
        try {
            cfg.narx_config(mode).validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("narx: ") + e.what());
        }
    }

    if (doc.contains("track")) {
        const auto& track = doc.at("track");
        if (!track.is_object()) throw ConfigError("'track' must be an object");
        reject_unknown_keys(track, {"threshold", "median_window", "min_blob_area"}, "track");
        cfg.track.threshold = get_number(track, "threshold", cfg.track.threshold, "track.");
        cfg.track.median_window = static_cast<int>(
            get_size(track, "median_window", static_cast<std::size_t>(cfg.track.median_window),
                     "track."));
        cfg.track.min_blob_area = get_size(track, "min_blob_area", cfg.track.min_blob_area, "track.");
        if (cfg.track.median_window < 1 || cfg.track.median_window % 2 == 0) {
            throw ConfigError("'track.median_window' must be odd and >= 1");
        }
        if (!(cfg.track.threshold > 0.0) || !(cfg.track.threshold < 1.0)) {
            throw ConfigError("'track.threshold' must lie in (0, 1)");
        }
    }

    if (doc.contains("paths")) {
        const auto& paths = doc.at("paths");
        if (!paths.is_object()) throw ConfigError("'paths' must be an object");
        reject_unknown_keys(paths, {"data", "out"}, "paths");
        cfg.paths.data = get_string(paths, "data", cfg.paths.data, "paths.");
        cfg.paths.out = get_string(paths, "out", cfg.paths.out, "paths.");
    }
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    } catch (const std::runtime_error& e) {
        throw ConfigError(e.what());
    }
    return config_from_json(doc, path.string());
}

nlohmann::json effective_config_json(const RunConfig& cfg) {
    nlohmann::json doc;
    doc["seed"] = cfg.seed;
    doc["sample_rate_hz"] = cfg.sample_rate_hz;
    doc["duration_s"] = cfg.duration_s;
    doc["train_fraction"] = cfg.train_fraction;
    doc["plant"] = {{"x_max_mm", cfg.plant.x_max_mm},
                    {"y_max_mm", cfg.plant.y_max_mm},
                    {"z_max_mm", cfg.plant.z_max_mm},
                    {"time_constant_s", cfg.plant.time_constant_s},
                    {"hysteresis_gain", cfg.plant.hysteresis_gain},
                    {"sensor_noise", cfg.plant.sensor_noise},
                    {"position_noise_mm", cfg.plant.position_noise_mm}};
    doc["actuation"] = {{"step_rate_hz", cfg.actuation.step_rate_hz},
                        {"speed_bound_per_s", cfg.actuation.speed_bound_per_s}};
    doc["narx"] = {{"delays", cfg.narx.delays},
                   {"learning_rate", cfg.narx.learning_rate},
                   {"epochs", cfg.narx.epochs},
                   {"batch_size", cfg.narx.batch_size},
                   {"hidden",
                    {{"MA", {cfg.narx.hidden[0][0], cfg.narx.hidden[0][1]}},
                     {"MB", {cfg.narx.hidden[1][0], cfg.narx.hidden[1][1]}},
                     {"MC", {cfg.narx.hidden[2][0], cfg.narx.hidden[2][1]}}}}};
    doc["track"] = {{"threshold", cfg.track.threshold},
                    {"median_window", cfg.track.median_window},
                    {"min_blob_area", cfg.track.min_blob_area}};
    doc["paths"] = {{"data", cfg.paths.data}, {"out", cfg.paths.out}};
    return doc;
}

}  // namespace softfinger
