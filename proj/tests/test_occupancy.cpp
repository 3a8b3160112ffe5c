#include <cmath>
#include <sstream>

#include "cvxhole/error.hpp"
#include "cvxhole/occupancy.hpp"
#include "doctest.h"

using namespace cvxhole;
using doctest::Approx;

namespace {

struct Enumerated {
    __int128 s1 = 0;  // sum of Y over all assignments
    __int128 s2 = 0;  // sum of Y^2
    __int128 total = 0;
};

// Walks all k^n assignments of balls to bins.
Enumerated enumerate(unsigned k, unsigned n) {
    Enumerated e;
    std::vector<unsigned> ball(n, 0);
    for (;;) {
        std::vector<int> load(k, 0);
        for (unsigned b : ball) ++load[b];
        __int128 y = 0;
        for (int l : load) y += l == 0 ? 1 : 0;
        e.s1 += y;
        e.s2 += y * y;
        ++e.total;
        unsigned i = 0;
        while (i < n && ++ball[i] == k) ball[i++] = 0;
        if (i == n) break;
    }
    return e;
}

double to_double(__int128 num, __int128 den) { return static_cast<double>(num) / static_cast<double>(den); }

}  // namespace

TEST_CASE("moments on small examples") {
    const auto one = empty_bin_moments(1, 5);
    CHECK(one.expected_empty == 0.0);
    CHECK(one.variance_empty == 0.0);
    CHECK(empty_bin_moments(3, 1).expected_empty == Approx(2.0));
    const auto m = empty_bin_moments(2, 2);
    CHECK(m.expected_empty == Approx(0.5));
    CHECK(m.variance_empty == Approx(0.25));
    CHECK_THROWS_AS(empty_bin_moments(0, 3), Error);
}

TEST_CASE("moments equal exhaustive enumeration") {
    for (unsigned k = 1; k <= 4; ++k) {
        for (unsigned n = 0; n <= 8; ++n) {
            const Enumerated e = enumerate(k, n);
            const auto exact = empty_bin_moments_exact(k, n);
            // E = s1 / total; Var = (s2 * total - s1^2) / total^2.
            CHECK(exact.mean_den == e.total);
            CHECK(exact.mean_num == e.s1);
            CHECK(exact.var_den == e.total * e.total);
            CHECK(exact.var_num == e.s2 * e.total - e.s1 * e.s1);
            const auto approx = empty_bin_moments(k, n);
            CHECK(approx.expected_empty == Approx(to_double(e.s1, e.total)).epsilon(1e-14));
            const double var = to_double(e.s2 * e.total - e.s1 * e.s1, e.total * e.total);
            CHECK(std::fabs(approx.variance_empty - var) <= 1e-13 * std::max(1.0, var));
        }
    }
}

TEST_CASE("variance never exceeds the mean") {
    for (double kd = 2; kd <= 1000; kd *= 1.37) {
        const auto k = static_cast<std::uint64_t>(kd);
        for (double nd = static_cast<double>(k); nd <= 1e6; nd *= 1.61) {
            const auto n = static_cast<std::uint64_t>(nd);
            const auto m = empty_bin_moments(k, n);
            CHECK(m.variance_empty >= 0.0);
            CHECK(m.variance_empty <= m.expected_empty * (1 + 1e-12) + 1e-300);
        }
    }
    // Deep underflow regime stays finite.
    const auto tiny = empty_bin_moments(1000, 1'000'000);
    CHECK(std::isfinite(tiny.expected_empty));
    CHECK(tiny.expected_empty >= 0.0);
}

TEST_CASE("chebyshev bound values") {
    const auto b = chebyshev_empty_regions_bound(10'000, 0.5);
    CHECK(b.threshold == Approx(100.0 / (2 * 0.5 * std::log(1e4))));
    CHECK(b.threshold == Approx(10.857).epsilon(1e-4));
    CHECK(b.prob_bound == Approx(0.18421).epsilon(1e-4));
    CHECK(b.regions == 2171);
    CHECK(b.exact_bound <= b.prob_bound * 1.5);
    const auto hi = chebyshev_empty_regions_bound(1'000'000, 0.9);
    CHECK(hi.prob_bound == Approx(4 * 0.1 * std::log(1e6) / std::pow(1e6, 0.9)));
    CHECK(chebyshev_empty_regions_bound(1'000'000, 0.5).prob_bound < b.prob_bound);
    CHECK_THROWS_AS(chebyshev_empty_regions_bound(2, 0.5), Error);
    CHECK_THROWS_AS(chebyshev_empty_regions_bound(100, 1.0), Error);
}

TEST_CASE("simulated occupancy on quadrants") {
    const auto sq = ConvexBody::unit_square();
    const auto quads = equal_area_partition(sq, 4, OrientedRect::axis_aligned(0, 0, 1, 1));
    PointSample s;
    s.n = 1;
    s.points = {{0.25, 0.25}};
    CHECK(simulate_partition_occupancy(sq, quads, s).empty_count == 3);
    PointSample none;
    CHECK(simulate_partition_occupancy(sq, quads, none).empty_count == 4);
}

TEST_CASE("non-partitions are rejected") {
    const auto sq = ConvexBody::unit_square();
    auto strips = vertical_strips(sq, 5);
    strips.pop_back();
    PointSample none;
    try {
        simulate_partition_occupancy(sq, strips, none);
        FAIL("expected NotAPartition");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotAPartition);
    }
}

TEST_CASE("occupancy csv") {
    const auto sq = ConvexBody::unit_square();
    const auto strips = vertical_strips(sq, 10);
    const auto row = run_occupancy(sq, strips, 20, 50, 1);
    std::ostringstream out;
    write_occupancy_csv(out, std::vector<OccupancyRow>{row});
    CHECK(out.str().rfind("k,n,expected,variance,empirical_mean,empirical_var,trials\n10,20,", 0) == 0);
    // Same seed, different thread counts: same counts.
    const auto again = run_occupancy(sq, strips, 20, 50, 1, 0, 1);
    CHECK(again.counts == row.counts);
}
