#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "softfinger/evaluation.hpp"
#include "softfinger/plant.hpp"
#include "softfinger/rng.hpp"
#include "support.hpp"

#include <cmath>

using namespace softfinger;

namespace {

TimeSeriesDataset small_benchmark(double duration_s, std::uint64_t seed) {
    PlantConfig plant;
    plant.seed = seed;
    const PressureTrajectory traj = random_actuation(duration_s, 25.0, 5.0, 0.4, seed);
    return simulate(traj, plant);
}

std::array<NarxConfig, 3> quick_configs(std::uint64_t seed) {
    std::array<NarxConfig, 3> cfgs = ablation_configs(seed);
    for (NarxConfig& c : cfgs) {
        c.hidden = {16, 16};
        c.epochs = 15;
        c.batch_size = 64;
    }
    return cfgs;
}

}  // namespace

TEST_CASE("mean error") {
    SUBCASE("identical trajectories score zero") {
        const std::vector<Vec3> traj = {{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}};
        const CoordinateErrors me = mean_error(traj, traj);
        CHECK(me.x == 0.0);
        CHECK(me.y == 0.0);
        CHECK(me.z == 0.0);
        CHECK(me.r == 0.0);
    }
    SUBCASE("a constant unit offset in x") {
        std::vector<Vec3> pred = {{1.0, 0.0, 0.0}, {2.0, 0.0, 0.0}};
        std::vector<Vec3> truth = {{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
        const CoordinateErrors me = mean_error(pred, truth);
        CHECK(me.x == doctest::Approx(1.0));
        CHECK(me.y == 0.0);
        CHECK(me.z == 0.0);
        CHECK(me.r == doctest::Approx(1.0));
    }
    SUBCASE("a 3-4-5 offset") {
        const std::vector<Vec3> pred = {{3.0, 4.0, 0.0}};
        const std::vector<Vec3> truth = {Vec3::Zero()};
        const CoordinateErrors me = mean_error(pred, truth);
        CHECK(me.r == doctest::Approx(5.0));
    }
    SUBCASE("length mismatch is rejected") {
        const std::vector<Vec3> a(3, Vec3::Zero());
        const std::vector<Vec3> b(4, Vec3::Zero());
        CHECK_THROWS_AS((void)mean_error(a, b), std::invalid_argument);
    }
    SUBCASE("the norm error dominates each coordinate error") {
        Rng rng(1);
        std::vector<Vec3> pred(64), truth(64);
        for (std::size_t i = 0; i < pred.size(); ++i) {
            pred[i] = {rng.gaussian(5.0), rng.gaussian(5.0), rng.gaussian(5.0)};
            truth[i] = {rng.gaussian(5.0), rng.gaussian(5.0), rng.gaussian(5.0)};
        }
        const CoordinateErrors me = mean_error(pred, truth);
        CHECK(me.r >= me.x);
        CHECK(me.r >= me.y);
        CHECK(me.r >= me.z);
    }
}

TEST_CASE("mse curve") {
    SUBCASE("identical trajectories give a zero series") {
        const std::vector<Vec3> traj = {{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}};
        for (double v : mse_curve(traj, traj)) CHECK(v == 0.0);
    }
    SUBCASE("a single 2 mm step contributes 4 mm^2") {
        const std::vector<Vec3> pred = {{0.0, 0.0, 0.0}, {2.0, 0.0, 0.0}};
        const std::vector<Vec3> truth = {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
        const std::vector<double> curve = mse_curve(pred, truth);
        CHECK(curve[0] == 0.0);
        CHECK(curve[1] == doctest::Approx(4.0));
    }
    SUBCASE("the series mean equals a direct recomputation") {
        Rng rng(2);
        std::vector<Vec3> pred(50), truth(50);
        for (std::size_t i = 0; i < pred.size(); ++i) {
            pred[i] = {rng.gaussian(3.0), rng.gaussian(3.0), rng.gaussian(3.0)};
            truth[i] = {rng.gaussian(3.0), rng.gaussian(3.0), rng.gaussian(3.0)};
        }
        const std::vector<double> curve = mse_curve(pred, truth);
        double direct = 0.0;
        for (std::size_t i = 0; i < pred.size(); ++i) {
            direct += (pred[i] - truth[i]).squaredNorm();
        }
        direct /= static_cast<double>(pred.size());
        double from_curve = 0.0;
        for (double v : curve) from_curve += v;
        from_curve /= static_cast<double>(curve.size());
        CHECK(from_curve == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("loop evaluation aligns predictions with the post-warm-up truth") {
    const TimeSeriesDataset ds = small_benchmark(20.0, 5);
    NarxConfig cfg;
    cfg.exo_dim = 2;
    cfg.hidden = {8, 8};
    cfg.epochs = 3;
    cfg.seed = 6;
    const TrainResult trained = train_open_loop(ds, cfg, SensorMode::no_signal);

    const LoopPredictions open = evaluate_open_loop(trained.model, ds, SensorMode::no_signal);
    const LoopPredictions self = evaluate_self_loop(trained.model, ds, SensorMode::no_signal);
    CHECK(open.predicted.size() == ds.size() - 3);
    CHECK(open.truth.size() == open.predicted.size());
    CHECK(self.predicted.size() == open.predicted.size());
    for (std::size_t k = 0; k < open.truth.size(); ++k) {
        CHECK(open.truth[k] == ds.frames[k + 3].position());
    }
}

TEST_CASE("horizon curve") {
    const TimeSeriesDataset ds = small_benchmark(24.0, 7);
    NarxConfig cfg;
    cfg.exo_dim = 2;
    cfg.hidden = {12, 12};
    cfg.epochs = 10;
    cfg.seed = 8;
    const TrainResult trained = train_open_loop(ds, cfg, SensorMode::no_signal);

    SUBCASE("one-step horizon reduces to the open-loop one-step error") {
        // stride of one sample makes every step a window start
        const std::vector<double> horizons = {1.0 / 25.0};
        const auto curve = horizon_curve(trained.model, ds, SensorMode::no_signal, horizons,
                                         1.0 / 25.0);
        REQUIRE(curve.size() == 1);
        const LoopPredictions open = evaluate_open_loop(trained.model, ds, SensorMode::no_signal);
        const CoordinateErrors me = mean_error(open.predicted, open.truth);
        CHECK(curve[0].me_end_mm == doctest::Approx(me.r).epsilon(1e-9));
        CHECK(curve[0].me_avg_mm == doctest::Approx(me.r).epsilon(1e-9));
    }
    SUBCASE("end value and window average coincide at horizon one and differ later") {
        const std::vector<double> horizons = {1.0 / 25.0, 2.0, 10.0};
        const auto curve = horizon_curve(trained.model, ds, SensorMode::no_signal, horizons, 1.0);
        REQUIRE(curve.size() == 3);
        CHECK(curve[0].me_end_mm == doctest::Approx(curve[0].me_avg_mm));
        for (const HorizonPoint& hp : curve) {
            CHECK(std::isfinite(hp.me_end_mm));
            CHECK(hp.me_avg_mm > 0.0);
        }
    }
    SUBCASE("horizons beyond the test length are rejected") {
        const std::vector<double> horizons = {1000.0};
        CHECK_THROWS_AS(
            (void)horizon_curve(trained.model, ds, SensorMode::no_signal, horizons, 1.0),
            std::invalid_argument);
    }
}

TEST_CASE("speedup measurement returns a sane throughput ratio") {
    const TimeSeriesDataset ds = small_benchmark(12.0, 3);
    NarxConfig cfg;
    cfg.exo_dim = 2;
    cfg.hidden = {8, 8};
    cfg.epochs = 2;
    cfg.seed = 1;
    const TrainResult trained = train_open_loop(ds, cfg, SensorMode::no_signal);
    const double speedup = measure_speedup(trained.model, ds, SensorMode::no_signal, 3);
    CHECK(speedup > 0.0);
    CHECK(std::isfinite(speedup));
}

TEST_CASE("ablation on a short benchmark") {
    const TimeSeriesDataset ds = small_benchmark(60.0, 13);
    const auto [train, test] = split_sequential(ds, 0.9);
    AblationOptions options;
    options.measure_timing = false;
    options.parallel_training = true;
    const AblationReport report = run_ablation(train, test, quick_configs(13), options);

    SUBCASE("report structure") {
        CHECK(report.train_frames == 1350);
        CHECK(report.test_frames == 150);
        CHECK(report.modes[0].mode == SensorMode::no_signal);
        CHECK(report.modes[2].config.input_size() == 21);
        CHECK(report.modes[0].mse_self.size() == report.test_frames - 3);
        CHECK(report.truth.size() == report.test_frames - 3);
    }
    SUBCASE("the baseline's relative decrease is zero by definition") {
        CHECK(report.modes[0].self_decrease_pct.r == 0.0);
        CHECK(report.modes[0].open_decrease_pct.x == 0.0);
    }
    SUBCASE("identical seeds give an identical report") {
        const AblationReport again = run_ablation(train, test, quick_configs(13), options);
        CHECK(report_to_json(report).dump() == report_to_json(again).dump());
    }
    SUBCASE("sequential and parallel training agree") {
        AblationOptions sequential = options;
        sequential.parallel_training = false;
        const AblationReport seq = run_ablation(train, test, quick_configs(13), sequential);
        CHECK(report_to_json(report).dump() == report_to_json(seq).dump());
    }
    SUBCASE("text report lists all six rows") {
        const std::string text = report_to_text(report);
        CHECK(text.find("MA") != std::string::npos);
        CHECK(text.find("MB") != std::string::npos);
        CHECK(text.find("MC") != std::string::npos);
        CHECK(text.find("open") != std::string::npos);
        CHECK(text.find("self") != std::string::npos);
    }
}

TEST_CASE("averaged-signal selection is swap-invariant, full selection is not") {
    SampleFrame f;
    f.s1 = 0.3;
    f.s2 = 0.7;
    f.p1 = 0.5;
    f.p2 = 0.5;
    SampleFrame swapped = f;
    std::swap(swapped.s1, swapped.s2);
    CHECK(exo_select(f, SensorMode::averaged_signal) ==
          exo_select(swapped, SensorMode::averaged_signal));
    CHECK(exo_select(f, SensorMode::full_signal) !=
          exo_select(swapped, SensorMode::full_signal));
}
