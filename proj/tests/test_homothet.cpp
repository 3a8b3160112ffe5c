#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cvxhole/error.hpp"
#include "cvxhole/homothet.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace cvxhole;
using doctest::Approx;

namespace {

const ConvexBody& square() {
    static const ConvexBody body = ConvexBody::unit_square();
    return body;
}

Shape rect31() { return Shape::polygon(ConvexBody::axis_rectangle(0, 0, 3, 1), "rect31"); }

Shape random_hexagon(std::mt19937_64& rng) {
    return Shape::polygon(testing::random_convex_polygon(rng, 6, 6), "hexagon");
}

ConvexBody random_unit_body(std::mt19937_64& rng) {
    return normalize_to_unit_area(testing::random_convex_polygon(rng, 5, 12)).body;
}

// Largest empty disk by brute force over a (g+1) x (g+1) grid of centres.
double grid_disk(const std::vector<Point>& pts, int g) {
    double best = 0.0;
    for (int a = 0; a <= g; ++a) {
        for (int b = 0; b <= g; ++b) {
            const Point c{static_cast<double>(a) / g, static_cast<double>(b) / g};
            double r = std::min({c.x, 1 - c.x, c.y, 1 - c.y});
            for (const Point& q : pts) r = std::min(r, distance(c, q));
            best = std::max(best, r);
        }
    }
    return best;
}

// Placed copy of a net member, in the frame.
ConvexBody frame_member(const HomothetNet& net, std::int64_t i, std::int64_t j) {
    return net.frame_shrunken.translated(Point{i * net.omega, j * net.omega} - net.frame_p_centroid);
}

}  // namespace

TEST_CASE("shape normalization") {
    const Shape s = rect31();
    CHECK(area(s.outline()) == Approx(1.0).epsilon(1e-14));
    CHECK(norm(centroid(s.outline())) < 1e-14);
    const Shape d = Shape::disk();
    CHECK(std::numbers::pi * d.radius() * d.radius() == Approx(1.0).epsilon(1e-15));
    CHECK(d.support({0.0, 2.0}) == Approx(2 * d.radius()));
    CHECK(d.interior_contains({0.0, 0.999 * d.radius()}, 1.0));
    CHECK_FALSE(d.interior_contains({0.0, d.radius()}, 1.0));
    const Shape sq = Shape::square();
    CHECK(sq.interior_contains({0.49, 0.49}, 1.0));
    CHECK_FALSE(sq.interior_contains({0.5, 0.0}, 1.0));
    CHECK(sq.circumradius() == Approx(std::sqrt(0.5)));
}

TEST_CASE("net example: square in the unit square") {
    const HomothetNet net = build_homothet_net(square(), Shape::square(), 10000, 0.1);
    const double bound = 0.1 / 8 * std::sqrt(std::log(1e4) / 1e4);
    CHECK(bound == Approx(3.795e-4).epsilon(1e-3));
    CHECK(net.omega >= bound);
    // First-order relation: area gap = perimeter * omega.
    const double gap = 0.1 * std::log(1e4) / 1e4;
    CHECK(net.omega == Approx(gap / perimeter(net.frame_p)).epsilon(0.02));
    const double pack = 64 / 0.01 * (1e4 / std::log(1e4));
    CHECK(pack == Approx(6.95e6).epsilon(1e-3));
    CHECK(static_cast<double>(net.placement_count()) <= pack);
    CHECK(static_cast<double>(net.placement_count()) < 0.5 * pack);
    CHECK(area(net.frame_shrunken) == Approx(1.1 * std::log(1e4) / 1e4).epsilon(1e-12));
}

TEST_CASE("net invariants across shapes") {
    std::mt19937_64 rng(11);
    std::vector<Shape> shapes{Shape::square(), Shape::disk(64), rect31()};
    for (int k = 0; k < 3; ++k) shapes.push_back(random_hexagon(rng));
    const ConvexBody other = random_unit_body(rng);
    for (const Shape& shape : shapes) {
        for (const ConvexBody* body : {&square(), &other}) {
            for (std::uint64_t n : {1000u, 10000u}) {
                for (double eps : {0.1, 0.05}) {
                    CAPTURE(shape.id());
                    CAPTURE(n);
                    CAPTURE(eps);
                    const HomothetNet net = build_homothet_net(*body, shape, n, eps);
                    const double logr = std::log(static_cast<double>(n)) / static_cast<double>(n);
                    CHECK(net.omega >= eps / 8 * std::sqrt(logr));
                    CHECK(static_cast<double>(net.placement_count()) <= 64 / (eps * eps) / logr);
                    CHECK(area(net.frame_shrunken) == Approx((1 + eps) * logr).epsilon(1e-12));
                    CHECK(area(net.frame_p) == Approx((1 + 2 * eps) * logr).epsilon(1e-9));
                    CHECK(area(net.frame_body) == Approx(1.0).epsilon(1e-12));
                    // The frame map keeps areas.
                    const AffineMap& f = net.to_frame;
                    CHECK(f.a * f.d - f.b * f.c == Approx(1.0).epsilon(1e-12));
                    // P lies in the scaled copy of L.
                    const ConvexBody big = shape.outline().scaled(std::sqrt((1 + 3 * eps) * logr));
                    CHECK(contains_polygon(big, net.p_shape.translated(centroid(transform(net.frame_p, f.inverse()))).vertices()));
                    CHECK(norm(centroid(net.p_shape)) < 1e-12);
                    CHECK(net.placement_count() > 0);
                }
            }
        }
    }
}

TEST_CASE("lattice equals the grid points of the body") {
    std::mt19937_64 rng(5);
    const ConvexBody body = random_unit_body(rng);
    const HomothetNet net = build_homothet_net(body, Shape::disk(64), 400, 0.1);
    const Box box = bounding_box(net.frame_body);
    std::uint64_t brute = 0, mismatched_rows = 0;
    for (std::int64_t j = std::llround(std::floor(box.min_y / net.omega)) - 1; j * net.omega <= box.max_y + net.omega; ++j) {
        for (std::int64_t i = std::llround(std::floor(box.min_x / net.omega)) - 1; i * net.omega <= box.max_x + net.omega; ++i) {
            const Point p{i * net.omega, j * net.omega};
            const bool in = contains_point(net.frame_body, p, Boundary::closed);
            brute += in;
            bool listed = false;
            for (const LatticeRow& r : net.lattice) {
                if (r.j == j && i >= r.i0 && i <= r.i1) listed = true;
            }
            if (in != listed) ++mismatched_rows;
        }
    }
    CHECK(brute == net.lattice_size());
    CHECK(mismatched_rows == 0);
    CHECK(net.lattice_points().size() == net.lattice_size());
}

TEST_CASE("every placement lies in the body") {
    std::mt19937_64 rng(8);
    const ConvexBody body = random_unit_body(rng);
    const Shape shape = random_hexagon(rng);
    const HomothetNet net = build_homothet_net(body, shape, 300, 0.1);
    const auto placements = net.placements();
    REQUIRE(placements.size() == net.placement_count());
    std::size_t k = 0;
    for (const LatticeRow& r : net.placement_rows) {
        for (std::int64_t i = r.i0; i <= r.i1; ++i, ++k) {
            CHECK(net.has_placement(i, r.j));
            // World check on a subsample, frame check on all.
            REQUIRE(contains_polygon(net.frame_body, frame_member(net, i, r.j).vertices()));
            if (k % 97 == 0) {
                const ConvexBody world = net.shrunken_shape.translated(placements[k].offset);
                CHECK(contains_polygon(body.scaled(1 + 1e-12, centroid(body)), world.vertices()));
                CHECK(area(world) == Approx(1.1 * std::log(300.0) / 300).epsilon(1e-12));
            }
        }
    }
    // The row ends are tight: one step further leaves the body.
    for (const LatticeRow& r : net.placement_rows) {
        const bool left_in = contains_polygon(net.frame_body, frame_member(net, r.i0 - 1, r.j).vertices());
        const bool right_in = contains_polygon(net.frame_body, frame_member(net, r.i1 + 1, r.j).vertices());
        CHECK_FALSE((left_in && net.lattice.end() != std::find_if(net.lattice.begin(), net.lattice.end(), [&](const LatticeRow& l) {
                                   return l.j == r.j && r.i0 - 1 >= l.i0;
                               })));
        CHECK_FALSE((right_in && net.lattice.end() != std::find_if(net.lattice.begin(), net.lattice.end(), [&](const LatticeRow& l) {
                                    return l.j == r.j && r.i1 + 1 <= l.i1;
                                })));
    }
}

TEST_CASE("net preconditions") {
    CHECK_THROWS_AS(build_homothet_net(square(), Shape::square(), 15, 0.1), Error);
    try {
        build_homothet_net(square(), Shape::square(), 1000, 0.2);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::EpsilonTooLarge);
    }
    try {
        build_homothet_net(square(), Shape::square(), 1000, 0.0);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::PreconditionViolation);
    }
    try {
        build_homothet_net(square().scaled(2.0), Shape::square(), 1000, 0.1);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::PreconditionViolation);
    }
    // (1+3eps) log n / n stays below 1 from n = 16 on, so the body always has room.
    for (std::uint64_t n = 16; n < 100; ++n) {
        CHECK((1 + 0.3) * std::log(static_cast<double>(n)) / static_cast<double>(n) < 1.0);
    }
}

TEST_CASE("translate cover: unit square, 10^4 translates") {
    const HomothetNet net = build_homothet_net(square(), Shape::square(), 10000, 0.1);
    const CoverReport r = verify_translate_cover(net, 10000, {3, 0});
    CHECK(r.failures == 0);
    CHECK(r.trials >= 10000);
    // The nearest lattice point is at most half a diagonal away.
    CHECK(r.max_offset_ratio <= std::sqrt(0.5) + 1e-9);
}

TEST_CASE("translate cover: other shapes and bodies") {
    std::mt19937_64 rng(21);
    const ConvexBody body = random_unit_body(rng);
    for (const Shape& shape : {Shape::disk(64), rect31(), random_hexagon(rng)}) {
        CAPTURE(shape.id());
        const HomothetNet net = build_homothet_net(body, shape, 5000, 0.05);
        const CoverReport r = verify_translate_cover(net, 10000, {4, 1});
        CHECK(r.failures == 0);
        CHECK(r.max_offset_ratio <= std::sqrt(0.5) + 1e-9);
    }
}

TEST_CASE("co-centred translate") {
    const HomothetNet net = build_homothet_net(square(), Shape::disk(64), 2000, 0.1);
    const LatticeRow& row = net.placement_rows[net.placement_rows.size() / 2];
    const std::int64_t i = (row.i0 + row.i1) / 2;
    const Point c = net.placement_offset(i, row.j);
    double ratio = 1.0;
    CHECK(translate_covered(net, c, &ratio));
    CHECK(ratio < 1e-9);
    // s(P) and P share their centroid here; s(P) sits inside P.
    CHECK(contains_polygon(net.p_shape, net.shrunken_shape.vertices()));
}

TEST_CASE("extreme corner translates") {
    // The valid centres of P-translates form a polygon; its corners are the
    // extreme positions. Check each, and points just inside along both edges.
    std::mt19937_64 rng(2);
    for (int rep = 0; rep < 3; ++rep) {
        const ConvexBody body = rep == 0 ? square() : random_unit_body(rng);
        const Shape shape = rep == 2 ? random_hexagon(rng) : Shape::square();
        const HomothetNet net = build_homothet_net(body, shape, 3000, 0.1);
        const ConvexBody rel = net.frame_p.translated(-1.0 * net.frame_p_centroid);
        Polygon region = net.frame_body.vertices();
        for (const HalfPlane& hp : net.frame_body.halfplanes()) {
            region = clip_halfplane(region, hp.normal, hp.offset - rel.support(hp.normal));
        }
        REQUIRE(region.size() >= 3);
        const AffineMap back = net.to_frame.inverse();
        const Point mid = polygon_centroid(region);
        for (std::size_t k = 0; k < region.size(); ++k) {
            const Point v = region[k];
            const Point prev = region[(k + region.size() - 1) % region.size()];
            const Point next = region[(k + 1) % region.size()];
            for (const Point target : {v + 1e-9 * (mid - v), v + 0.3 * (prev - v) + 1e-9 * (mid - v),
                                       v + 0.3 * (next - v) + 1e-9 * (mid - v)}) {
                double ratio = 0.0;
                CHECK(translate_covered(net, back(target), &ratio));
                CHECK(ratio <= std::sqrt(0.5) + 1e-9);
            }
        }
    }
}

TEST_CASE("net emptiness agrees with brute force") {
    std::mt19937_64 rng(17);
    const ConvexBody body = random_unit_body(rng);
    const Shape shape = Shape::square();
    const HomothetNet net = build_homothet_net(body, shape, 200, 0.1);
    int certified = 0, refuted = 0;
    for (std::size_t count : {200u, 2000u, 20000u, 60000u}) {
        const PointSample s = sample_uniform(body, count, {9, count});
        std::vector<Point> frame;
        for (const Point& p : s.points) frame.push_back(net.to_frame(p));
        std::sort(frame.begin(), frame.end(), [](Point a, Point b) { return a.x < b.x; });
        bool brute_all = true;
        for (const LatticeRow& r : net.placement_rows) {
            for (std::int64_t i = r.i0; i <= r.i1 && brute_all; ++i) {
                const ConvexBody m = frame_member(net, i, r.j);
                const Box b = bounding_box(m);
                auto it = std::lower_bound(frame.begin(), frame.end(), b.min_x, [](Point p, double v) { return p.x < v; });
                bool hit = false;
                for (; it != frame.end() && it->x <= b.max_x && !hit; ++it) hit = contains_point(m, *it, Boundary::open);
                brute_all = hit;
            }
            if (!brute_all) break;
        }
        const NetEmptiness e = check_net_nonempty(net, s.points);
        CHECK(e.all_nonempty == brute_all);
        if (e.all_nonempty) {
            ++certified;
        } else {
            ++refuted;
            REQUIRE(e.empty_placement.has_value());
            const auto [i, j] = *e.empty_placement;
            CHECK(net.has_placement(i, j));
            const ConvexBody m = frame_member(net, i, j);
            for (const Point& q : frame) CHECK_FALSE(contains_point(m, q, Boundary::open));
        }
    }
    CHECK(certified >= 1);
    CHECK(refuted >= 1);
}

TEST_CASE("disk oracle examples") {
    const OrientedRect unit = OrientedRect::axis_aligned(0, 0, 1, 1);
    CHECK(largest_empty_disk_oracle(unit, {}) == Approx(0.5).epsilon(1e-12));
    // A centre point pushes the disk into a corner: r = (sqrt2/2 - r) gives
    // r = sqrt2/2 / (1 + sqrt2).
    const std::vector<Point> centre{{0.5, 0.5}};
    const double r1 = largest_empty_disk_oracle(unit, centre);
    CHECK(r1 == Approx(std::sqrt(0.5) / (1 + std::sqrt(2.0))).epsilon(1e-12));
    CHECK(std::fabs(r1 - grid_disk(centre, 2000)) < 1e-3);
    const std::vector<Point> two{{1.0 / 3, 0.5}, {2.0 / 3, 0.5}};
    CHECK(std::fabs(largest_empty_disk_oracle(unit, two) - grid_disk(two, 2000)) < 1e-3);
    std::vector<Point> many(501, Point{0.5, 0.5});
    CHECK_THROWS_AS(largest_empty_disk_oracle(unit, many), Error);
}

TEST_CASE("disk oracle against grid search on random points") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0, 1);
    const OrientedRect unit = OrientedRect::axis_aligned(0, 0, 1, 1);
    for (int rep = 0; rep < 4; ++rep) {
        std::vector<Point> pts;
        for (int k = 0; k < 5 + 10 * rep; ++k) pts.push_back({u(rng), u(rng)});
        const double exact = largest_empty_disk_oracle(unit, pts);
        const double grid = grid_disk(pts, 1000);
        CHECK(grid <= exact + 1e-12);
        CHECK(exact - grid < 1e-3);
    }
}

TEST_CASE("empty sample gives the inscribed homothet") {
    const PointSample none{{0, 0}, 1000, {}, "square"};
    const HomothetResult disk = largest_empty_homothet(square(), Shape::disk(), none, 0.1);
    CHECK(disk.area == Approx(std::numbers::pi / 4).epsilon(1e-9));
    CHECK_FALSE(disk.certified_upper.has_value());
    CHECK(disk.empty_net_member.has_value());
    const HomothetResult sq = largest_empty_homothet(square(), Shape::square(), none, 0.1);
    CHECK(sq.area == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("single centre point with a disk matches the oracle") {
    const std::vector<Point> centre{{0.5, 0.5}};
    const HomothetPlacement p = search_empty_homothet(square(), Shape::disk(), centre, 0.1);
    const double r = p.scale * Shape::disk().radius();
    const double oracle = largest_empty_disk_oracle(OrientedRect::axis_aligned(0, 0, 1, 1), centre);
    CHECK(r <= oracle * (1 + 1e-9));
    CHECK(r >= oracle * (1 - 1e-6));
}

TEST_CASE("disk search converges to the oracle for small samples") {
    const Shape disk = Shape::disk();
    const OrientedRect unit = OrientedRect::axis_aligned(0, 0, 1, 1);
    HomothetSearchOptions fine;
    fine.spacing_factor = 1.0 / 16;
    fine.iterations = 20;
    for (std::uint64_t n : {10u, 40u, 100u, 200u}) {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            CAPTURE(n);
            CAPTURE(seed);
            const PointSample s = sample_uniform(square(), n, {seed, 7});
            const double oracle = largest_empty_disk_oracle(unit, s.points);
            const HomothetPlacement p = search_empty_homothet(square(), disk, s.points, 0.1, fine);
            const double r = p.scale * disk.radius();
            CHECK(r <= oracle * (1 + 1e-9));
            CHECK(r >= oracle * (1 - 1e-6));
            for (const Point& q : s.points) CHECK(distance(q, p.offset) >= r);
        }
    }
}

TEST_CASE("search results are empty and inside, lower below certified upper") {
    std::mt19937_64 rng(30);
    const ConvexBody body = random_unit_body(rng);
    for (const Shape& shape : {Shape::square(), random_hexagon(rng), Shape::disk()}) {
        const HomothetNet net = build_homothet_net(body, shape, 3000, 0.1);
        int certified = 0;
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            CAPTURE(shape.id());
            CAPTURE(seed);
            const PointSample s = sample_uniform(body, 3000, {seed, 2});
            const HomothetResult r = largest_empty_homothet(body, shape, s, net);
            const ConvexBody placed = shape.outline().scaled(r.best.scale).translated(r.best.offset);
            CHECK(contains_polygon(body.scaled(1 + 1e-12, centroid(body)), placed.vertices()));
            for (const Point& q : s.points) {
                if (shape.kind() == Shape::Kind::disk) {
                    CHECK(distance(q, r.best.offset) >= r.best.scale * shape.radius());
                } else {
                    CHECK_FALSE(contains_point(placed, q, Boundary::open));
                }
            }
            CHECK(r.area == Approx(r.best.scale * r.best.scale));
            if (r.certified_upper) {
                ++certified;
                CHECK(r.area <= *r.certified_upper);
            }
            // The search lands near the log n / n scale.
            const double logr = std::log(3000.0) / 3000;
            CHECK(r.area > 0.5 * logr);
            CHECK(r.area < 5 * logr);
        }
        MESSAGE(shape.id() << " certified " << certified << "/4");
    }
}

TEST_CASE("lower-bound partition") {
    const std::uint64_t n = 10000;
    const double eps = 0.5;
    const PointSample s = sample_uniform(square(), n, {1, 0});
    const LowerBoundPartition part = lower_bound_partition(square(), Shape::square(), n, eps, s.points);
    const auto expected = static_cast<std::size_t>(std::llround(1e4 / (0.5 * std::log(1e4))));
    CHECK(part.regions.size() == expected);
    const auto homs = static_cast<std::size_t>(std::count(part.homothet_flags.begin(), part.homothet_flags.end(), true));
    CHECK(3 * homs >= part.regions.size());
    CHECK_NOTHROW(check_partition(square(), part.regions));
    for (const Region& r : part.regions) CHECK(r.area() == Approx(1.0 / expected).epsilon(1e-9));
    for (std::size_t k = 0; k < part.regions.size(); ++k) {
        if (!part.homothet_flags[k]) continue;
        REQUIRE(part.homothets[k].has_value());
        const HomothetPlacement& h = *part.homothets[k];
        CHECK(h.area() == Approx(1.0 / expected).epsilon(1e-9));
        const ConvexBody placed = Shape::square().outline().scaled(h.scale).translated(h.offset);
        CHECK(polygon_area(part.regions[k].pieces.front()) == Approx(area(placed)).epsilon(1e-12));
    }
    // Empty flags agree with a direct scan.
    for (std::size_t k = 0; k < part.regions.size(); k += 37) {
        bool any = false;
        for (const Point& p : s.points) any = any || part.regions[k].contains(p, Boundary::open);
        if (any) CHECK_FALSE(part.empty_flags[k]);
    }
}

TEST_CASE("lower-bound partition: disk in a random body") {
    std::mt19937_64 rng(12);
    const ConvexBody body = random_unit_body(rng);
    const LowerBoundPartition part = lower_bound_partition(body, Shape::disk(64), 5000, 0.5, SeedSpec{2, 0});
    const auto expected = static_cast<std::size_t>(std::llround(5000 / (0.5 * std::log(5000.0))));
    CHECK(part.regions.size() == expected);
    const auto homs = static_cast<std::size_t>(std::count(part.homothet_flags.begin(), part.homothet_flags.end(), true));
    CHECK(3 * homs >= part.regions.size());
    CHECK_NOTHROW(check_partition(body, part.regions));
}

TEST_CASE("lower-bound partition with no points") {
    const LowerBoundPartition part = lower_bound_partition(square(), rect31(), 2000, 0.5, std::span<const Point>{});
    CHECK(std::all_of(part.empty_flags.begin(), part.empty_flags.end(), [](bool b) { return b; }));
    CHECK(part.empty_homothet_found);
    CHECK_NOTHROW(check_partition(square(), part.regions));
}
