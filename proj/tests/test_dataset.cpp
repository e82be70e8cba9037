#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "softfinger/dataset.hpp"
#include "softfinger/io_util.hpp"
#include "softfinger/rng.hpp"
#include "softfinger/sensor_mode.hpp"
#include "support.hpp"

#include <cmath>

using namespace softfinger;

TEST_CASE("normalizer maps extremes to the unit interval") {
    const std::vector<std::vector<double>> cols = {{0.0, 5.0, 10.0}};
    const std::vector<std::string> names = {"demo"};
    const Normalizer norm = Normalizer::fit_columns(cols, names);

    CHECK(norm.range(0).min == 0.0);
    CHECK(norm.range(0).max == 10.0);
    CHECK(norm.forward(0, 5.0) == doctest::Approx(0.5));
    CHECK(norm.forward(0, 0.0) == 0.0);
    CHECK(norm.forward(0, 10.0) == 1.0);
}

TEST_CASE("normalizer round-trip is identity within 1e-12 relative") {
    const std::vector<std::vector<double>> cols = {{-3.2, 7.9}, {100.0, 250.0}};
    const std::vector<std::string> names = {"a", "b"};
    const Normalizer norm = Normalizer::fit_columns(cols, names);

    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        const double va = rng.uniform(-3.2, 7.9);
        const double vb = rng.uniform(100.0, 250.0);
        CHECK(norm.inverse(0, norm.forward(0, va)) == doctest::Approx(va).epsilon(1e-12));
        CHECK(norm.inverse(1, norm.forward(1, vb)) == doctest::Approx(vb).epsilon(1e-12));
    }
}

TEST_CASE("constant channel is rejected by name") {
    const std::vector<std::vector<double>> cols = {{1.0, 2.0}, {4.0, 4.0}};
    const std::vector<std::string> names = {"fine", "stuck"};
    CHECK_THROWS_WITH_AS(Normalizer::fit_columns(cols, names),
                         doctest::Contains("stuck"), DegenerateChannelError);
}

TEST_CASE("fit_normalizer works on frame channels") {
    const TimeSeriesDataset ds = testsupport::synthetic_dataset(200);
    const std::vector<Channel> channels = {Channel::x, Channel::y, Channel::z};
    const Normalizer norm = fit_normalizer(ds, channels);
    REQUIRE(norm.channels() == 3);
    for (const SampleFrame& f : ds.frames) {
        for (std::size_t c = 0; c < 3; ++c) {
            const double u = norm.forward(c, channel_value(f, channels[c]));
            CHECK(u >= 0.0);
            CHECK(u <= 1.0);
        }
    }
}

TEST_CASE("paired-signal rescaling maps to the partner's extremes") {
    SUBCASE("two-point affine fit") {
        const std::vector<double> s1 = {0.2, 0.4, 0.6};
        const std::vector<double> s2 = {0.9, 0.1, 0.5};
        const std::vector<double> out = rescale_paired_signal(s1, s2);
        // v -> 2v - 0.3
        CHECK(out[0] == doctest::Approx(0.1));
        CHECK(out[1] == doctest::Approx(0.5));
        CHECK(out[2] == doctest::Approx(0.9));
    }
    SUBCASE("identical ranges give the identity map") {
        const std::vector<double> s1 = {0.3, 0.1, 0.7};
        const std::vector<double> s2 = {0.7, 0.1, 0.4};
        const std::vector<double> out = rescale_paired_signal(s1, s2);
        for (std::size_t i = 0; i < s1.size(); ++i) CHECK(out[i] == doctest::Approx(s1[i]));
    }
    SUBCASE("output extremes equal partner extremes for random signals") {
        Rng rng(11);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> s1(50), s2(70);
            for (double& v : s1) v = rng.uniform(-2.0, 3.0);
            for (double& v : s2) v = rng.uniform(10.0, 20.0);
            const std::vector<double> out = rescale_paired_signal(s1, s2);
            const auto [lo2, hi2] = std::minmax_element(s2.begin(), s2.end());
            const auto [lo, hi] = std::minmax_element(out.begin(), out.end());
            CHECK(*lo == doctest::Approx(*lo2).epsilon(1e-12));
            CHECK(*hi == doctest::Approx(*hi2).epsilon(1e-12));
        }
    }
    SUBCASE("constant first signal is an error") {
        const std::vector<double> s1 = {0.5, 0.5};
        const std::vector<double> s2 = {0.1, 0.9};
        CHECK_THROWS_AS((void)rescale_paired_signal(s1, s2), DegenerateSignalError);
    }
}

TEST_CASE("sequential split keeps order and partitions the input") {
    SUBCASE("90/10 on a 1200 s run at 25 Hz") {
        const TimeSeriesDataset ds = testsupport::synthetic_dataset(30000);
        const auto [train, test] = split_sequential(ds, 0.9);
        CHECK(train.size() == 27000);  // 1080 s
        CHECK(test.size() == 3000);    // 120 s
        CHECK(train.duration_s() == doctest::Approx(1080.0));
        CHECK(test.duration_s() == doctest::Approx(120.0));
    }
    SUBCASE("10 frames at 0.5") {
        const TimeSeriesDataset ds = testsupport::synthetic_dataset(10);
        const auto [train, test] = split_sequential(ds, 0.5);
        CHECK(train.size() == 5);
        CHECK(test.size() == 5);
    }
    SUBCASE("concatenation reproduces the input exactly") {
        const TimeSeriesDataset ds = testsupport::synthetic_dataset(101);
        const auto [train, test] = split_sequential(ds, 0.37);
        REQUIRE(train.size() + test.size() == ds.size());
        for (std::size_t i = 0; i < train.size(); ++i) {
            CHECK(train.frames[i].t == ds.frames[i].t);
        }
        for (std::size_t i = 0; i < test.size(); ++i) {
            CHECK(test.frames[i].x == ds.frames[train.size() + i].x);
        }
    }
    SUBCASE("fractions outside (0,1) are rejected") {
        const TimeSeriesDataset ds = testsupport::synthetic_dataset(10);
        CHECK_THROWS_AS((void)split_sequential(ds, 0.0), std::invalid_argument);
        CHECK_THROWS_AS((void)split_sequential(ds, 1.0), std::invalid_argument);
        CHECK_THROWS_AS((void)split_sequential(ds, -0.2), std::invalid_argument);
    }
}

TEST_CASE("delay assembly matches the estimator input widths") {
    const TimeSeriesDataset ds = testsupport::synthetic_dataset(50);
    CHECK(assemble_delay_pairs(ds, SensorMode::no_signal).front().input.size() == 15);
    CHECK(assemble_delay_pairs(ds, SensorMode::averaged_signal).front().input.size() == 18);
    CHECK(assemble_delay_pairs(ds, SensorMode::full_signal).front().input.size() == 21);
}

TEST_CASE("delay assembly count and layout") {
    SUBCASE("10 frames with 3 taps give 7 pairs") {
        const TimeSeriesDataset ds = testsupport::synthetic_dataset(10);
        CHECK(assemble_delay_pairs(ds, SensorMode::no_signal).size() == 7);
    }
    SUBCASE("too-short dataset is rejected") {
        const TimeSeriesDataset ds = testsupport::synthetic_dataset(3);
        CHECK_THROWS_AS((void)assemble_delay_pairs(ds, SensorMode::no_signal),
                        std::invalid_argument);
    }
    SUBCASE("taps are newest-first, states before exogenous, target is the next state") {
        const TimeSeriesDataset ds = testsupport::synthetic_dataset(8);
        const auto pairs = assemble_delay_pairs(ds, SensorMode::full_signal, 3);
        REQUIRE(!pairs.empty());
        // pair 0 sits at index i = 2
        const RegressionPair& p = pairs.front();
        REQUIRE(p.input.size() == 21);
        for (int d = 0; d < 3; ++d) {
            const SampleFrame& f = ds.frames[static_cast<std::size_t>(2 - d)];
            CHECK(p.input[static_cast<std::size_t>(3 * d + 0)] == f.x);
            CHECK(p.input[static_cast<std::size_t>(3 * d + 1)] == f.y);
            CHECK(p.input[static_cast<std::size_t>(3 * d + 2)] == f.z);
            CHECK(p.input[static_cast<std::size_t>(9 + 4 * d + 0)] == f.s1);
            CHECK(p.input[static_cast<std::size_t>(9 + 4 * d + 1)] == f.s2);
            CHECK(p.input[static_cast<std::size_t>(9 + 4 * d + 2)] == f.p1);
            CHECK(p.input[static_cast<std::size_t>(9 + 4 * d + 3)] == f.p2);
        }
        CHECK(p.target == ds.frames[3].position());
        // last pair targets the final frame
        CHECK(pairs.back().target == ds.frames[7].position());
    }
}

TEST_CASE("exogenous windows align with delay pairs") {
    const TimeSeriesDataset ds = testsupport::synthetic_dataset(12);
    const auto exo = exo_sequence(ds, SensorMode::averaged_signal);
    const auto windows = assemble_exo_windows(exo, 3);
    const auto pairs = assemble_delay_pairs(ds, SensorMode::averaged_signal, 3);
    REQUIRE(windows.size() == pairs.size());
    for (std::size_t k = 0; k < windows.size(); ++k) {
        REQUIRE(windows[k].size() == 9);
        for (std::size_t j = 0; j < 9; ++j) {
            CHECK(windows[k][j] == pairs[k].input[9 + j]);
        }
    }
}

TEST_CASE("dataset csv round-trips bit-exactly") {
    testsupport::TempDir tmp("dataset_csv");
    const TimeSeriesDataset ds = testsupport::synthetic_dataset(64);
    const auto path = tmp.file("data.csv");
    write_dataset_csv(ds, path);
    const TimeSeriesDataset back = read_dataset_csv(path);
    REQUIRE(back.size() == ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        CHECK(back.frames[i].t == ds.frames[i].t);
        CHECK(back.frames[i].p1 == ds.frames[i].p1);
        CHECK(back.frames[i].s2 == ds.frames[i].s2);
        CHECK(back.frames[i].x == ds.frames[i].x);
        CHECK(back.frames[i].z == ds.frames[i].z);
    }
    // writing again produces identical bytes
    const auto path2 = tmp.file("data2.csv");
    write_dataset_csv(back, path2);
    CHECK(read_file(path) == read_file(path2));
}

TEST_CASE("dataset csv rejects malformed input") {
    testsupport::TempDir tmp("dataset_bad");
    SUBCASE("wrong header") {
        write_file_atomic(tmp.file("bad.csv"), "a,b,c\n1,2,3\n");
        CHECK_THROWS_AS((void)read_dataset_csv(tmp.file("bad.csv")), CsvFormatError);
    }
    SUBCASE("wrong field count") {
        write_file_atomic(tmp.file("bad.csv"), "t,p1,p2,s1,s2,x,y,z\n0,0,0\n");
        CHECK_THROWS_AS((void)read_dataset_csv(tmp.file("bad.csv")), CsvFormatError);
    }
    SUBCASE("non-numeric value") {
        write_file_atomic(tmp.file("bad.csv"),
                          "t,p1,p2,s1,s2,x,y,z\n0,0,0,0,0,0,0,0\n0.04,0,oops,0,0,0,0,0\n");
        CHECK_THROWS_AS((void)read_dataset_csv(tmp.file("bad.csv")), CsvFormatError);
    }
    SUBCASE("non-uniform time step") {
        write_file_atomic(tmp.file("bad.csv"),
                          "t,p1,p2,s1,s2,x,y,z\n0,0,0,0,0,0,0,0\n0.04,0,0,0,0,0,0,0\n"
                          "0.3,0,0,0,0,0,0,0\n");
        CHECK_THROWS_AS((void)read_dataset_csv(tmp.file("bad.csv")), std::invalid_argument);
    }
}

TEST_CASE("exo_select picks the documented channels") {
    SampleFrame f;
    f.p1 = 0.7;
    f.p2 = 0.2;
    f.s1 = 0.4;
    f.s2 = 0.6;

    SUBCASE("averaged mode averages the two channels") {
        const auto u = exo_select(f, SensorMode::averaged_signal);
        REQUIRE(u.size() == 3);
        CHECK(u[0] == doctest::Approx(0.5));
        CHECK(u[1] == 0.7);
        CHECK(u[2] == 0.2);
    }
    SUBCASE("pressure-only mode ignores the signal entirely") {
        const auto base = exo_select(f, SensorMode::no_signal);
        SampleFrame g = f;
        g.s1 = 0.9;
        g.s2 = 0.05;
        CHECK(exo_select(g, SensorMode::no_signal) == base);
    }
    SUBCASE("full mode passes both channels") {
        const auto u = exo_select(f, SensorMode::full_signal);
        REQUIRE(u.size() == 4);
        CHECK(u[0] == 0.4);
        CHECK(u[1] == 0.6);
        CHECK(u[2] == 0.7);
        CHECK(u[3] == 0.2);
    }
}
