// Monte Carlo checks of the per-module statistical examples. One line each.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cvxhole/convex_ops.hpp"
#include "cvxhole/error.hpp"
#include "cvxhole/holes.hpp"
#include "cvxhole/homothet.hpp"
#include "cvxhole/occupancy.hpp"
#include "cvxhole/partition.hpp"
#include "cvxhole/rect_nets.hpp"
#include "cvxhole/sampling.hpp"
#include "test_support.hpp"

using namespace cvxhole;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double log_ratio(double n) { return std::log(n) / n; }

// Empty-region counts over equal-area partitions of assorted bodies.
Outcome partition_occupancy(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    int within = 0;
    double worst_z = 0.0;
    for (int cfg = 0; cfg < 10; ++cfg) {
        const ConvexBody body = normalize_to_unit_area(testing::random_convex_polygon(rng, 4, 20)).body;
        const std::uint64_t n = 500 + 250 * cfg;
        const unsigned m = 40 + 10 * cfg;
        const OrientedRect cell = lassak_rectangles(body).circumscribed;
        std::vector<Region> regions;
        try {
            regions = equal_area_partition(body, m, cell);
        } catch (const Error&) {
            regions = vertical_strips(body, m);
        }
        const std::uint64_t trials = 200;
        const OccupancyRow row = run_occupancy(body, regions, n, trials, seed, 1000 * cfg);
        const double se = std::sqrt(row.variance / static_cast<double>(trials));
        const double z = se > 0 ? (row.empirical_mean - row.expected) / se : 0.0;
        within += std::fabs(z) <= 4;
        if (std::fabs(z) >= std::fabs(worst_z)) worst_z = z;
    }
    return {within == 10, fmt("%d/10 configurations within 4 standard errors (worst z %.2f)", within, worst_z)};
}

Outcome rect_net_certification(std::uint64_t seed) {
    const ConvexBody sq = ConvexBody::unit_square();
    const NetParams p = make_net_params(10000, 0.1, sq);
    int certified = 0;
    std::uint64_t frames = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const PointSample smp = sample_uniform(sq, 10000, {seed, 100 + s});
        const NetCertificate c = net_max_empty_rect(sq, smp, p);
        certified += c.status == NetStatus::certified;
        frames += c.frames_scanned;
    }
    return {certified >= 19, fmt("certified %d/20 (need 19), %llu of %llu frames scanned before stopping", certified,
                                 static_cast<unsigned long long>(frames),
                                 static_cast<unsigned long long>(20 * p.t_count))};
}

Outcome homothet_two_sided(std::uint64_t seed) {
    const ConvexBody sq = ConvexBody::unit_square();
    const Shape shape = Shape::square();
    const double eps = 0.1;
    const HomothetNet net = build_homothet_net(sq, shape, 10000, eps);
    int certified = 0, big = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const PointSample smp = sample_uniform(sq, 10000, {seed, 200 + s});
        const HomothetResult r = largest_empty_homothet(sq, shape, smp, net);
        certified += r.certified_upper.has_value();
        big += r.area >= (1 - eps) * log_ratio(1e4);
    }
    return {certified >= 19 && big >= 19,
            fmt("upper certified %d/20, empty homothet >= (1-eps) log n/n %d/20 (need 19 each)", certified, big)};
}

Outcome homothet_partition(std::uint64_t seed) {
    const ConvexBody sq = ConvexBody::unit_square();
    int found = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const LowerBoundPartition lb = lower_bound_partition(sq, Shape::square(), 10000, 0.5, SeedSpec{seed, 300 + s});
        found += lb.empty_homothet_found;
    }
    return {found >= 95, fmt("empty homothet region in %d/100 runs (need 95)", found)};
}

Outcome hole_bracket(std::uint64_t seed) {
    const ConvexBody sq = ConvexBody::unit_square();
    int ok = 0, certified = 0, lower_ok = 0;
    const double logr = log_ratio(1e4);
    for (std::uint64_t s = 0; s < 20; ++s) {
        const PointSample smp = sample_uniform(sq, 10000, {seed, 400 + s});
        HoleBoundsOptions opt;
        opt.use_polymax = false;
        const HoleBounds b = convex_hole_bounds(sq, smp.points, 10000, 0.1, opt);
        const bool up = b.upper && std::fabs(*b.upper / logr - 4.8) <= 1e-9;
        const bool lo = b.lower >= 0.9 * logr;
        certified += up;
        lower_ok += lo;
        ok += up && lo;
    }
    return {ok >= 19, fmt("both ends hold in %d/20 (need 19): upper certified %d/20, lower >= 0.9 %d/20", ok,
                          certified, lower_ok)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo examples"};
    std::uint64_t seed = 777;
    std::vector<std::string> only;
    app.add_option("--seed", seed, "master seed");
    app.add_option("--only", only, "checks to run");
    CLI11_PARSE(app, argc, argv);
    const std::vector<std::pair<std::string, std::function<Outcome(std::uint64_t)>>> checks{
        {"partition_occupancy", partition_occupancy},
        {"rect_net_certification", rect_net_certification},
        {"homothet_two_sided", homothet_two_sided},
        {"homothet_partition", homothet_partition},
        {"hole_bracket", hole_bracket}};
    int failed = 0;
    for (const auto& [name, fn] : checks) {
        if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome r;
        try {
            r = fn(seed);
        } catch (const std::exception& e) {
            r = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !r.pass;
        std::cout << name << ' ' << (r.pass ? "PASS" : "FAIL") << "  " << r.detail << fmt(", %.1f s", secs)
                  << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
