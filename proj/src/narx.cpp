#include "softfinger/narx.hpp"

#include "softfinger/io_util.hpp"
#include "softfinger/rng.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>

namespace softfinger {

namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEpsilon = 1e-8;

double normal_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

Eigen::MatrixXd gelu_matrix(const Eigen::MatrixXd& z) {
    return z.unaryExpr([](double v) { return gelu(v); });
}

Eigen::MatrixXd gelu_derivative_matrix(const Eigen::MatrixXd& z) {
    return z.unaryExpr([](double v) { return gelu_derivative(v); });
}

void check_shapes(const NarxModel& m) {
    if (m.w1.rows() != m.b1.size() || m.w2.rows() != m.b2.size() ||
        m.w3.rows() != m.b3.size() || m.w2.cols() != m.w1.rows() ||
        m.w3.cols() != m.w2.rows()) {
        throw std::invalid_argument("model layer shapes do not chain");
    }
}

// column b of X/T <- pair b
void pairs_to_matrices(std::span<const RegressionPair> batch, Eigen::MatrixXd& x,
                       Eigen::MatrixXd& t) {
    const auto b = static_cast<Eigen::Index>(batch.size());
    const auto in = static_cast<Eigen::Index>(batch.front().input.size());
    x.resize(in, b);
    t.resize(3, b);
    for (Eigen::Index col = 0; col < b; ++col) {
        const RegressionPair& pair = batch[static_cast<std::size_t>(col)];
        if (static_cast<Eigen::Index>(pair.input.size()) != in) {
            throw std::invalid_argument("ragged batch");
        }
        x.col(col) = Eigen::Map<const Eigen::VectorXd>(pair.input.data(), in);
        t.col(col) = pair.target;
    }
}

double loss_and_gradients_matrix(const NarxModel& model, const Eigen::MatrixXd& x,
                                 const Eigen::MatrixXd& t, Gradients& grads) {
    check_shapes(model);
    if (x.rows() != model.w1.cols()) {
        throw std::invalid_argument("input size " + std::to_string(x.rows()) +
                                    " does not match first layer (" +
                                    std::to_string(model.w1.cols()) + ")");
    }
    if (t.rows() != model.w3.rows() || t.cols() != x.cols()) {
        throw std::invalid_argument("target shape mismatch");
    }
    const auto batch = x.cols();

    const Eigen::MatrixXd z1 = (model.w1 * x).colwise() + model.b1;
    const Eigen::MatrixXd a1 = gelu_matrix(z1);
    const Eigen::MatrixXd z2 = (model.w2 * a1).colwise() + model.b2;
    const Eigen::MatrixXd a2 = gelu_matrix(z2);
    const Eigen::MatrixXd y = (model.w3 * a2).colwise() + model.b3;

    const Eigen::MatrixXd err = y - t;
    const double denom = static_cast<double>(t.rows()) * static_cast<double>(batch);
    const double loss = err.squaredNorm() / denom;

    const Eigen::MatrixXd dy = (2.0 / denom) * err;
    grads.w3 = dy * a2.transpose();
    grads.b3 = dy.rowwise().sum();
    const Eigen::MatrixXd dz2 =
        (model.w3.transpose() * dy).cwiseProduct(gelu_derivative_matrix(z2));
    grads.w2 = dz2 * a1.transpose();
    grads.b2 = dz2.rowwise().sum();
    const Eigen::MatrixXd dz1 =
        (model.w2.transpose() * dz2).cwiseProduct(gelu_derivative_matrix(z1));
    grads.w1 = dz1 * x.transpose();
    grads.b1 = dz1.rowwise().sum();
    return loss;
}

template <typename Tensor>
void adam_update_tensor(Tensor& param, const Tensor& grad, Tensor& m, Tensor& v,
                        double lr, double bias1, double bias2) {
    m = kBeta1 * m + (1.0 - kBeta1) * grad;
    v = (kBeta2 * v.array() + (1.0 - kBeta2) * grad.array().square()).matrix();
    param.array() -= lr * (m.array() / bias1) / ((v.array() / bias2).sqrt() + kEpsilon);
}

std::vector<std::string> exo_channel_names(SensorMode mode) {
    switch (mode) {
        case SensorMode::no_signal: return {"p1", "p2"};
        case SensorMode::averaged_signal: return {"s_avg", "p1", "p2"};
        case SensorMode::full_signal: return {"s1", "s2", "p1", "p2"};
    }
    return {};
}

}  // namespace

void NarxConfig::validate() const {
    if (state_dim != 3) {
        throw std::invalid_argument("only 3-dimensional states are supported");
    }
    if (exo_dim < 1 || delays < 1) {
        throw std::invalid_argument("exo_dim and delays must be >= 1");
    }
    if (hidden[0] < 1 || hidden[1] < 1) {
        throw std::invalid_argument("hidden sizes must be >= 1");
    }
    if (!(learning_rate > 0.0) || batch_size < 1 || epochs < 1) {
        throw std::invalid_argument("invalid training hyperparameters");
    }
}

double gelu(double x) { return x * normal_cdf(x); }

double gelu_derivative(double x) { return normal_cdf(x) + x * normal_pdf(x); }

Eigen::VectorXd narx_forward(const NarxModel& model, const Eigen::VectorXd& input) {
    check_shapes(model);
    if (input.size() != model.w1.cols()) {
        throw std::invalid_argument("input size " + std::to_string(input.size()) +
                                    " does not match first layer (" +
                                    std::to_string(model.w1.cols()) + ")");
    }
    const Eigen::VectorXd a1 = gelu_matrix(model.w1 * input + model.b1);
    const Eigen::VectorXd a2 = gelu_matrix(model.w2 * a1 + model.b2);
    return model.w3 * a2 + model.b3;
}

double loss_and_gradients(const NarxModel& model, std::span<const RegressionPair> batch,
                          Gradients& grads) {
    if (batch.empty()) {
        throw std::invalid_argument("empty batch");
    }
    Eigen::MatrixXd x, t;
    pairs_to_matrices(batch, x, t);
    return loss_and_gradients_matrix(model, x, t, grads);
}

void adam_step(NarxModel& model, const Gradients& grads, AdamState& state, double lr) {
    if (state.step == 0) {
        state.m.w1 = Eigen::MatrixXd::Zero(model.w1.rows(), model.w1.cols());
        state.m.w2 = Eigen::MatrixXd::Zero(model.w2.rows(), model.w2.cols());
        state.m.w3 = Eigen::MatrixXd::Zero(model.w3.rows(), model.w3.cols());
        state.m.b1 = Eigen::VectorXd::Zero(model.b1.size());
        state.m.b2 = Eigen::VectorXd::Zero(model.b2.size());
        state.m.b3 = Eigen::VectorXd::Zero(model.b3.size());
        state.v = state.m;
    }
    if (grads.w1.rows() != model.w1.rows() || grads.w1.cols() != model.w1.cols() ||
        grads.w2.rows() != model.w2.rows() || grads.w3.rows() != model.w3.rows() ||
        grads.b1.size() != model.b1.size() || grads.b2.size() != model.b2.size() ||
        grads.b3.size() != model.b3.size()) {
        throw std::invalid_argument("gradient shapes do not match parameters");
    }
    state.step += 1;
    const double bias1 = 1.0 - std::pow(kBeta1, static_cast<double>(state.step));
    const double bias2 = 1.0 - std::pow(kBeta2, static_cast<double>(state.step));
    adam_update_tensor(model.w1, grads.w1, state.m.w1, state.v.w1, lr, bias1, bias2);
    adam_update_tensor(model.w2, grads.w2, state.m.w2, state.v.w2, lr, bias1, bias2);
    adam_update_tensor(model.w3, grads.w3, state.m.w3, state.v.w3, lr, bias1, bias2);
    adam_update_tensor(model.b1, grads.b1, state.m.b1, state.v.b1, lr, bias1, bias2);
    adam_update_tensor(model.b2, grads.b2, state.m.b2, state.v.b2, lr, bias1, bias2);
    adam_update_tensor(model.b3, grads.b3, state.m.b3, state.v.b3, lr, bias1, bias2);
}

namespace {

Eigen::MatrixXd init_weights(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Eigen::MatrixXd w(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            w(r, c) = rng.uniform(-limit, limit);
        }
    }
    return w;
}

}  // namespace

TrainResult train_open_loop(const TimeSeriesDataset& train, const NarxConfig& cfg,
                            SensorMode mode) {
    cfg.validate();
    train.validate();
    if (cfg.exo_dim != exo_dim(mode)) {
        throw std::invalid_argument("config exo_dim " + std::to_string(cfg.exo_dim) +
                                    " does not match mode " + to_string(mode));
    }
    if (train.size() < cfg.delays + 2) {
        throw std::invalid_argument("training dataset too short");
    }

    // normalization statistics from the training split only
    std::vector<Vec3> states;
    states.reserve(train.size());
    for (const SampleFrame& f : train.frames) states.push_back(f.position());
    std::vector<std::vector<double>> exo = exo_sequence(train, mode);

    std::vector<std::vector<double>> state_cols(3), exo_cols(cfg.exo_dim);
    for (const Vec3& r : states) {
        for (int c = 0; c < 3; ++c) state_cols[static_cast<std::size_t>(c)].push_back(r(c));
    }
    for (const auto& u : exo) {
        for (std::size_t c = 0; c < cfg.exo_dim; ++c) exo_cols[c].push_back(u[c]);
    }
    const std::vector<std::string> state_names = {"x", "y", "z"};
    NarxModel model;
    model.config = cfg;
    model.state_norm = Normalizer::fit_columns(state_cols, state_names);
    model.exo_norm = Normalizer::fit_columns(exo_cols, exo_channel_names(mode));

    for (Vec3& r : states) {
        for (int c = 0; c < 3; ++c) r(c) = model.state_norm.forward(static_cast<std::size_t>(c), r(c));
    }
    for (auto& u : exo) {
        model.exo_norm.forward(u, u);
    }

    const std::vector<RegressionPair> pairs = assemble_windows(states, exo, cfg.delays);
    const auto n = static_cast<Eigen::Index>(pairs.size());
    const auto in = static_cast<Eigen::Index>(cfg.input_size());
    Eigen::MatrixXd x_all(in, n), t_all(3, n);
    pairs_to_matrices(pairs, x_all, t_all);

    Rng rng(cfg.seed);
    const auto h1 = static_cast<Eigen::Index>(cfg.hidden[0]);
    const auto h2 = static_cast<Eigen::Index>(cfg.hidden[1]);
    model.w1 = init_weights(h1, in, rng);
    model.w2 = init_weights(h2, h1, rng);
    model.w3 = init_weights(3, h2, rng);
    model.b1 = Eigen::VectorXd::Zero(h1);
    model.b2 = Eigen::VectorXd::Zero(h2);
    model.b3 = Eigen::VectorXd::Zero(3);

    AdamState adam;
    Gradients grads;
    std::vector<std::size_t> order(pairs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    const auto batch_size = static_cast<Eigen::Index>(cfg.batch_size);
    Eigen::MatrixXd x_batch(in, batch_size), t_batch(3, batch_size);

    TrainResult result;
    result.loss_history.reserve(cfg.epochs);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        double sq_err_sum = 0.0;
        for (Eigen::Index start = 0; start < n; start += batch_size) {
            const Eigen::Index b = std::min(batch_size, n - start);
            for (Eigen::Index col = 0; col < b; ++col) {
                const auto src = static_cast<Eigen::Index>(order[static_cast<std::size_t>(start + col)]);
                x_batch.col(col) = x_all.col(src);
                t_batch.col(col) = t_all.col(src);
            }
            const double mse =
                loss_and_gradients_matrix(model, x_batch.leftCols(b), t_batch.leftCols(b), grads);
            adam_step(model, grads, adam, cfg.learning_rate);
            sq_err_sum += mse * 3.0 * static_cast<double>(b);
        }
        result.loss_history.push_back(sq_err_sum / (3.0 * static_cast<double>(n)));
    }
    result.model = std::move(model);
    return result;
}

Vec3 predict_from_taps(const NarxModel& model, std::span<const Vec3> states_newest_first,
                       std::span<const double> exo_window) {
    const std::size_t delays = model.config.delays;
    const std::size_t exo_d = model.config.exo_dim;
    if (states_newest_first.size() != delays) {
        throw std::invalid_argument("state window underfull: need " + std::to_string(delays) +
                                    " taps, have " + std::to_string(states_newest_first.size()));
    }
    if (exo_window.size() != delays * exo_d) {
        throw std::invalid_argument("exogenous window size " + std::to_string(exo_window.size()) +
                                    " does not match delays * exo_dim = " +
                                    std::to_string(delays * exo_d));
    }
    Eigen::VectorXd input(static_cast<Eigen::Index>(model.config.input_size()));
    Eigen::Index pos = 0;
    for (std::size_t d = 0; d < delays; ++d) {
        for (std::size_t c = 0; c < 3; ++c) {
            input(pos++) = model.state_norm.forward(c, states_newest_first[d](static_cast<int>(c)));
        }
    }
    for (std::size_t d = 0; d < delays; ++d) {
        for (std::size_t c = 0; c < exo_d; ++c) {
            input(pos++) = model.exo_norm.forward(c, exo_window[d * exo_d + c]);
        }
    }
    const Eigen::VectorXd out = narx_forward(model, input);
    Vec3 world;
    for (std::size_t c = 0; c < 3; ++c) {
        world(static_cast<int>(c)) = model.state_norm.inverse(c, out(static_cast<Eigen::Index>(c)));
    }
    return world;
}

Vec3 predict_next(const NarxModel& model, std::span<const Vec3> states_newest_first,
                  std::span<const std::vector<double>> exo_newest_first) {
    const std::size_t delays = model.config.delays;
    const std::size_t exo_d = model.config.exo_dim;
    if (exo_newest_first.size() != delays) {
        throw std::invalid_argument("exogenous window underfull: need " +
                                    std::to_string(delays) + " taps");
    }
    std::vector<double> flat;
    flat.reserve(delays * exo_d);
    for (const auto& u : exo_newest_first) {
        if (u.size() != exo_d) {
            throw std::invalid_argument("exogenous tap size " + std::to_string(u.size()) +
                                        " does not match exo_dim " + std::to_string(exo_d));
        }
        flat.insert(flat.end(), u.begin(), u.end());
    }
    return predict_from_taps(model, states_newest_first, flat);
}

std::vector<Vec3> rollout_self_loop(const NarxModel& model,
                                    std::span<const Vec3> initial_states_newest_first,
                                    std::span<const std::vector<double>> exo_windows) {
    const std::size_t delays = model.config.delays;
    if (initial_states_newest_first.size() != delays) {
        throw std::invalid_argument("initial state window underfull");
    }
    if (exo_windows.empty()) {
        throw std::invalid_argument("empty exogenous sequence");
    }
    std::vector<Vec3> window(initial_states_newest_first.begin(),
                             initial_states_newest_first.end());
    std::vector<Vec3> predictions;
    predictions.reserve(exo_windows.size());
    for (const auto& exo : exo_windows) {
        const Vec3 next = predict_from_taps(model, window, exo);
        predictions.push_back(next);
        for (std::size_t d = delays - 1; d > 0; --d) window[d] = window[d - 1];
        window[0] = next;
    }
    return predictions;
}

std::vector<Vec3> rollout_teacher_forced(const NarxModel& model,
                                         std::span<const Vec3> true_states,
                                         std::span<const std::vector<double>> exo_windows) {
    const std::size_t delays = model.config.delays;
    if (true_states.size() < delays + exo_windows.size()) {
        throw std::invalid_argument("true state sequence shorter than tap schedule");
    }
    std::vector<Vec3> window(delays);
    std::vector<Vec3> predictions;
    predictions.reserve(exo_windows.size());
    for (std::size_t k = 0; k < exo_windows.size(); ++k) {
        for (std::size_t d = 0; d < delays; ++d) {
            window[d] = true_states[k + delays - 1 - d];
        }
        predictions.push_back(predict_from_taps(model, window, exo_windows[k]));
    }
    return predictions;
}

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

nlohmann::json ranges_to_json(const Normalizer& n) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t c = 0; c < n.channels(); ++c) {
        arr.push_back({n.range(c).min, n.range(c).max});
    }
    return arr;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, const char* name) {
    if (!j.is_array() || j.empty() || !j.front().is_array()) {
        throw ModelFormatError(std::string("'") + name + "' must be a nested array");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.front().size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw ModelFormatError(std::string("ragged rows in '") + name + "'");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto& cell = row[static_cast<std::size_t>(c)];
            if (!cell.is_number()) {
                throw ModelFormatError(std::string("non-numeric entry in '") + name + "'");
            }
            m(r, c) = cell.get<double>();
            if (!std::isfinite(m(r, c))) {
                throw ModelFormatError(std::string("non-finite entry in '") + name + "'");
            }
        }
    }
    return m;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j, const char* name) {
    if (!j.is_array()) {
        throw ModelFormatError(std::string("'") + name + "' must be an array");
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const auto& cell = j[static_cast<std::size_t>(i)];
        if (!cell.is_number()) {
            throw ModelFormatError(std::string("non-numeric entry in '") + name + "'");
        }
        v(i) = cell.get<double>();
        if (!std::isfinite(v(i))) {
            throw ModelFormatError(std::string("non-finite entry in '") + name + "'");
        }
    }
    return v;
}

Normalizer ranges_from_json(const nlohmann::json& j, const char* name) {
    if (!j.is_array() || j.empty()) {
        throw ModelFormatError(std::string("'") + name + "' must be a non-empty array");
    }
    std::vector<Normalizer::Range> ranges;
    for (const auto& pair : j) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
            throw ModelFormatError(std::string("entries of '") + name + "' must be [min, max]");
        }
        ranges.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    try {
        return Normalizer(std::move(ranges));
    } catch (const std::invalid_argument& e) {
        throw ModelFormatError(std::string(name) + ": " + e.what());
    }
}

constexpr const char* kModelFormat = "softfinger-narx-v1";

}  // namespace

void save_model(const NarxModel& model, const std::filesystem::path& path) {
    check_shapes(model);
    nlohmann::json doc;
    doc["format"] = kModelFormat;
    doc["config"] = {{"state_dim", model.config.state_dim},
                     {"exo_dim", model.config.exo_dim},
                     {"delays", model.config.delays},
                     {"hidden", {model.config.hidden[0], model.config.hidden[1]}},
                     {"learning_rate", model.config.learning_rate},
                     {"epochs", model.config.epochs},
                     {"batch_size", model.config.batch_size},
                     {"seed", model.config.seed},
                     {"sensor_mode", to_string(sensor_mode_for_exo_dim(model.config.exo_dim))}};
    doc["normalization"] = {{"state", ranges_to_json(model.state_norm)},
                            {"exo", ranges_to_json(model.exo_norm)}};
    doc["layers"] = nlohmann::json::array();
    doc["layers"].push_back({{"weights", matrix_to_json(model.w1)}, {"bias", vector_to_json(model.b1)}});
    doc["layers"].push_back({{"weights", matrix_to_json(model.w2)}, {"bias", vector_to_json(model.b2)}});
    doc["layers"].push_back({{"weights", matrix_to_json(model.w3)}, {"bias", vector_to_json(model.b3)}});
    write_file_atomic(path, doc.dump(2) + "\n");
}

NarxModel load_model(const std::filesystem::path& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ModelFormatError(path.string() + ": " + e.what());
    }
    auto require = [&](const nlohmann::json& obj, const char* key) -> const nlohmann::json& {
        if (!obj.contains(key)) {
            throw ModelFormatError(path.string() + ": missing key '" + key + "'");
        }
        return obj.at(key);
    };

    if (!doc.is_object() || require(doc, "format").get<std::string>() != kModelFormat) {
        throw ModelFormatError(path.string() + ": not a " + std::string(kModelFormat) + " file");
    }

    NarxModel model;
    const auto& cfg = require(doc, "config");
    try {
        model.config.state_dim = require(cfg, "state_dim").get<std::size_t>();
        model.config.exo_dim = require(cfg, "exo_dim").get<std::size_t>();
        model.config.delays = require(cfg, "delays").get<std::size_t>();
        const auto& hidden = require(cfg, "hidden");
        if (!hidden.is_array() || hidden.size() != 2) {
            throw ModelFormatError("'hidden' must be an array of two sizes");
        }
        model.config.hidden = {hidden[0].get<std::size_t>(), hidden[1].get<std::size_t>()};
        model.config.learning_rate = require(cfg, "learning_rate").get<double>();
        model.config.epochs = require(cfg, "epochs").get<std::size_t>();
        model.config.batch_size = require(cfg, "batch_size").get<std::size_t>();
        model.config.seed = require(cfg, "seed").get<std::uint64_t>();
        const SensorMode declared = parse_sensor_mode(require(cfg, "sensor_mode").get<std::string>());
        if (exo_dim(declared) != model.config.exo_dim) {
            throw ModelFormatError("sensor_mode does not match exo_dim");
        }
        model.config.validate();
    } catch (const nlohmann::json::exception& e) {
        throw ModelFormatError(path.string() + ": bad config: " + e.what());
    } catch (const std::invalid_argument& e) {
        throw ModelFormatError(path.string() + ": bad config: " + e.what());
    }

    const auto& norm = require(doc, "normalization");
    model.state_norm = ranges_from_json(require(norm, "state"), "normalization.state");
    model.exo_norm = ranges_from_json(require(norm, "exo"), "normalization.exo");
    if (model.state_norm.channels() != 3 || model.exo_norm.channels() != model.config.exo_dim) {
        throw ModelFormatError(path.string() + ": normalization channel counts do not match config");
    }

    const auto& layers = require(doc, "layers");
    if (!layers.is_array() || layers.size() != 3) {
        throw ModelFormatError(path.string() + ": expected exactly 3 layers");
    }
    model.w1 = matrix_from_json(require(layers[0], "weights"), "layers[0].weights");
    model.b1 = vector_from_json(require(layers[0], "bias"), "layers[0].bias");
    model.w2 = matrix_from_json(require(layers[1], "weights"), "layers[1].weights");
    model.b2 = vector_from_json(require(layers[1], "bias"), "layers[1].bias");
    model.w3 = matrix_from_json(require(layers[2], "weights"), "layers[2].weights");
    model.b3 = vector_from_json(require(layers[2], "bias"), "layers[2].bias");

    if (model.w1.cols() != static_cast<Eigen::Index>(model.config.input_size()) ||
        model.w1.rows() != static_cast<Eigen::Index>(model.config.hidden[0]) ||
        model.w2.rows() != static_cast<Eigen::Index>(model.config.hidden[1]) ||
        model.w3.rows() != 3) {
        throw ModelFormatError(path.string() + ": layer shapes do not match config");
    }
    try {
        check_shapes(model);
    } catch (const std::invalid_argument& e) {
        throw ModelFormatError(path.string() + ": " + e.what());
    }
    return model;
}

}  // namespace softfinger
