#include <algorithm>
#include <cmath>
#include <tuple>
#include <sstream>

#include "cvxhole/error.hpp"
#include "cvxhole/harness.hpp"
#include "cvxhole/occupancy.hpp"
#include "doctest.h"

using namespace cvxhole;
using doctest::Approx;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.n_values = {200, 400};
    c.trials_per_n = 3;
    c.master_seed = 99;
    c.which = {"max_l", "polymax", "stripquad", "occupancy", "maxrect"};
    c.maxrect_frames = 2000;
    return c;
}

std::string csv_of(const ScalingReport& r) {
    std::ostringstream out;
    write_report_csv(out, r);
    return out.str();
}

// Rows built from value = f(n), three trials per n.
ScalingReport planted(const std::vector<std::uint64_t>& ns, double (*f)(double)) {
    std::vector<TrialRecord> rows;
    for (std::uint64_t n : ns) {
        for (std::uint64_t t = 0; t < 3; ++t) {
            const double v = f(static_cast<double>(n));
            const double nd = static_cast<double>(n);
            rows.push_back({"x", n, t, t, v, v * nd / std::log(nd), Certificate::certified});
        }
    }
    return summarize(rows);
}

}  // namespace

TEST_CASE("config validation") {
    ExperimentConfig c = small_config();
    CHECK_NOTHROW(c.validate());
    c.n_values = {400, 200};
    CHECK_THROWS_AS(c.validate(), Error);
    c.n_values = {200, 200};
    CHECK_THROWS_AS(c.validate(), Error);
    c = small_config();
    c.trials_per_n = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = small_config();
    c.which = {"max_l", "nonsense"};
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("config json round trip") {
    ExperimentConfig c = small_config();
    c.shapes = {"square", "disk", nlohmann::json{{"vertices", {{0, 0}, {2, 0}, {0, 1}}}}};
    c.body = nlohmann::json{{"regular", 6}};
    const ExperimentConfig d = config_from_json(config_to_json(c));
    CHECK(config_to_json(d) == config_to_json(c));
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"which", {"max_l"}}}), Error);
}

TEST_CASE("body and shape specs") {
    CHECK(area(resolve_body("unit_square")) == Approx(1.0));
    CHECK(area(resolve_body(nlohmann::json{{"regular", 5}})) == Approx(1.0).epsilon(1e-12));
    const ConvexBody tri = resolve_body(nlohmann::json{{"vertices", {{0, 0}, {4, 0}, {0, 4}}}});
    CHECK(area(tri) == Approx(1.0).epsilon(1e-12));
    CHECK(resolve_shape("disk").kind() == Shape::Kind::disk);
    CHECK(resolve_shape("rect:2").id() == "rect:2");
    CHECK_THROWS_AS(resolve_shape("rect:-1"), Error);
}

TEST_CASE("trial streams") {
    CHECK(trial_stream(1, 100, 0, "max_l") == trial_stream(1, 100, 0, "max_l"));
    CHECK(trial_stream(1, 100, 0, "max_l") != trial_stream(1, 100, 1, "max_l"));
    CHECK(trial_stream(1, 100, 0, "max_l") != trial_stream(1, 200, 0, "max_l"));
    CHECK(trial_stream(1, 100, 0, "max_l") != trial_stream(1, 100, 0, "polymax"));
    CHECK(trial_stream(1, 100, 0, "max_l") != trial_stream(2, 100, 0, "max_l"));
}

TEST_CASE("experiment is deterministic across thread counts") {
    const ExperimentConfig c = small_config();
    const ScalingReport one = run_experiment(c, 1);
    const ScalingReport eight = run_experiment(c, 8);
    CHECK(csv_of(one) == csv_of(eight));
    CHECK(one.rows == eight.rows);
    CHECK(report_summary_json(one).dump() == report_summary_json(eight).dump());
    // Reordering the statistics does not change any row.
    ExperimentConfig r = c;
    std::reverse(r.which.begin(), r.which.end());
    ScalingReport rev = run_experiment(r, 2);
    auto key = [](const TrialRecord& a, const TrialRecord& b) {
        return std::tie(a.n, a.trial, a.statistic) < std::tie(b.n, b.trial, b.statistic);
    };
    auto a = one.rows, b = rev.rows;
    std::sort(a.begin(), a.end(), key);
    std::sort(b.begin(), b.end(), key);
    CHECK(a == b);
}

TEST_CASE("report rows") {
    const ExperimentConfig c = small_config();
    const ScalingReport rep = run_experiment(c);
    for (const auto& [stat, trend] : rep.trend) CHECK(trend.size() == c.n_values.size());
    for (const TrialRecord& row : rep.rows) {
        CAPTURE(row.statistic);
        std::string task = row.statistic;
        if (task.ends_with("_upper")) task.resize(task.size() - 6);
        CHECK(row.seed == trial_stream(c.master_seed, row.n, row.trial, task));
        if (row.value > 0) CHECK(row.normalized > 0);
        CHECK(row.normalized == Approx(row.value * row.n / std::log(row.n)).epsilon(1e-12));
    }
    // Certified lower values sit below the bound recorded next to them.
    for (const TrialRecord& row : rep.rows) {
        if (row.statistic != "max_l_upper" && row.statistic != "maxrect_upper") continue;
        if (row.certificate != Certificate::certified) continue;
        const std::string base = row.statistic.substr(0, row.statistic.size() - 6);
        for (const TrialRecord& other : rep.rows) {
            if (other.statistic == base && other.n == row.n && other.trial == row.trial) CHECK(other.value <= row.value);
        }
    }
}

TEST_CASE("csv round trip") {
    const ScalingReport rep = run_experiment(small_config());
    std::istringstream in(csv_of(rep));
    const std::vector<TrialRecord> back = read_report_csv(in);
    CHECK(back == rep.rows);
    const ScalingReport again = summarize(back);
    CHECK(csv_of(again) == csv_of(rep));
    CHECK(report_summary_json(again).dump() == report_summary_json(rep).dump());
    std::istringstream bad("statistic,n\n");
    CHECK_THROWS_AS(read_report_csv(bad), Error);
    std::istringstream bad_row("statistic,n,trial,seed,value,normalized,certificate\nx,1,2,3,abc,0,certified\n");
    CHECK_THROWS_AS(read_report_csv(bad_row), Error);
}

TEST_CASE("occupancy rows match the empty-bin moments") {
    ExperimentConfig c;
    c.n_values = {2000, 10000};
    c.epsilon = 0.5;
    c.trials_per_n = 200;
    c.master_seed = 5;
    c.which = {"occupancy"};
    const ScalingReport rep = run_experiment(c);
    for (std::uint64_t n : c.n_values) {
        const auto k = static_cast<std::uint64_t>(std::llround(n / (0.5 * std::log(static_cast<double>(n)))));
        // Oracle: k (1 - 1/k)^n and its variance, computed directly here.
        const double kd = static_cast<double>(k), nd = static_cast<double>(n);
        const double mean = kd * std::pow(1 - 1 / kd, nd);
        const double var = mean + kd * (kd - 1) * std::pow(1 - 2 / kd, nd) - mean * mean;
        double sum = 0.0;
        int count = 0;
        for (const TrialRecord& r : rep.rows) {
            if (r.n != n) continue;
            CHECK(r.certificate == Certificate::certified);
            sum += r.value;
            ++count;
        }
        CHECK(count == 200);
        const double emp = sum / count;
        CAPTURE(n);
        CHECK(std::fabs(emp - mean) <= 4 * std::sqrt(var / count));
        CHECK(empty_bin_moments(k, n).expected_empty == Approx(mean).epsilon(1e-9));
    }
}

TEST_CASE("fit on planted curves") {
    const std::vector<std::uint64_t> ns{1 << 10, 1 << 14, 1 << 18, 1 << 22};
    SUBCASE("exact log n / n") {
        const ScalingFit f = fit_scaling(planted(ns, [](double n) { return std::log(n) / n; }), "x");
        CHECK(f.c_hat == Approx(1.0).epsilon(1e-12));
        CHECK(std::fabs(f.drift) < 1e-12);
        CHECK_FALSE(f.diverging);
    }
    SUBCASE("2 log n / n + 5 / n") {
        const auto curve = [](double n) { return 2 * std::log(n) / n + 5 / n; };
        const ScalingFit f = fit_scaling(planted(ns, curve), "x");
        // normalized = 2 + 5 / log n exactly.
        CHECK(f.c_hat == Approx(2 + 5 / std::log(double(1 << 22))).epsilon(1e-12));
        CHECK(f.drift == Approx(-5 / std::log(double(1 << 22))).epsilon(1e-9));
        CHECK_FALSE(f.diverging);
        const std::vector<std::uint64_t> bigger{1ull << 30, 1ull << 40, 1ull << 50, 1ull << 60};
        const ScalingFit g = fit_scaling(planted(bigger, curve), "x");
        CHECK(std::fabs(g.c_hat - 2) < std::fabs(f.c_hat - 2));
        CHECK(std::fabs(g.drift) < std::fabs(f.drift));
    }
    SUBCASE("constant area") {
        const ScalingFit f = fit_scaling(planted(ns, [](double) { return 0.01; }), "x");
        CHECK(f.diverging);
        CHECK(f.drift > 0);
        const ScalingReport r = planted(ns, [](double) { return 0.01; });
        CHECK_FALSE(r.non_increasing.at("x"));
    }
    SUBCASE("too few n values") {
        CHECK_THROWS_AS(fit_scaling(planted({100, 200}, [](double n) { return 1 / n; }), "x"), Error);
        try {
            fit_scaling(planted({100, 200}, [](double n) { return 1 / n; }), "x");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::InsufficientData);
        }
        CHECK_THROWS_AS(fit_scaling(planted(ns, [](double n) { return 1 / n; }), "y"), Error);
    }
}

TEST_CASE("failed trials are counted, not aggregated") {
    std::vector<TrialRecord> rows{{"s", 100, 0, 1, 0.1, 2.0, Certificate::certified},
                                  {"s", 100, 1, 2, 0.0, 0.0, Certificate::failed},
                                  {"s", 100, 2, 3, 0.2, 4.0, Certificate::lower_only}};
    const ScalingReport r = summarize(rows);
    REQUIRE(r.summaries.size() == 1);
    CHECK(r.summaries[0].count == 3);
    CHECK(r.summaries[0].failures == 1);
    CHECK(r.summaries[0].median == 3.0);
    CHECK(r.summaries[0].mean == 3.0);
    CHECK(r.summaries[0].stddev == Approx(std::sqrt(2.0)));
}
