// Acceptance suite: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cvxhole/convex_ops.hpp"
#include "cvxhole/error.hpp"
#include "cvxhole/harness.hpp"
#include "cvxhole/holes.hpp"
#include "cvxhole/homothet.hpp"
#include "cvxhole/occupancy.hpp"
#include "cvxhole/partition.hpp"
#include "cvxhole/predicates.hpp"
#include "cvxhole/rect_nets.hpp"
#include "cvxhole/sampling.hpp"
#include "test_support.hpp"

using namespace cvxhole;

namespace {

struct Options {
    unsigned threads = 0;
    std::uint64_t seed = 20240611;
    // AC7: trials per n that get a full rectangle-net scan, and the frame
    // budget for the rest.
    std::uint64_t ac7_full_scans = 50;
    std::uint64_t ac7_frames = 1;
};

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double median(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// --- AC1 -------------------------------------------------------------------

Outcome ac1(const Options&) {
    const auto t0 = Clock::now();
    int mismatches = 0, cases = 0;
    for (unsigned k = 1; k <= 4; ++k) {
        for (unsigned n = 0; n <= 8; ++n) {
            // Walk all k^n assignments.
            __int128 s1 = 0, s2 = 0, total = 0;
            std::vector<unsigned> ball(n, 0);
            for (;;) {
                std::vector<int> load(k, 0);
                for (unsigned b : ball) ++load[b];
                __int128 y = std::count(load.begin(), load.end(), 0);
                s1 += y;
                s2 += y * y;
                ++total;
                unsigned i = 0;
                while (i < n && ++ball[i] == k) ball[i++] = 0;
                if (i == n) break;
            }
            const ExactMoments e = empty_bin_moments_exact(k, n);
            // Cross-multiplied so any common-factor choice is accepted.
            const bool mean_ok = e.mean_num * total == s1 * e.mean_den;
            const bool var_ok = e.var_num * total * total == (s2 * total - s1 * s1) * e.var_den;
            const OccupancyMoments m = empty_bin_moments(k, n);
            const double mean = static_cast<double>(s1) / static_cast<double>(total);
            const double var = static_cast<double>(s2 * total - s1 * s1) / static_cast<double>(total * total);
            const bool float_ok = std::fabs(m.expected_empty - mean) <= 1e-13 * std::max(1.0, mean) &&
                                  std::fabs(m.variance_empty - var) <= 1e-13 * std::max(1.0, var);
            mismatches += !(mean_ok && var_ok && float_ok);
            ++cases;
        }
    }
    const double secs = seconds_since(t0);
    return {mismatches == 0 && secs < 1.0, fmt("%d/%d (k,n) cases match enumeration, %.3f s (limit 1 s)",
                                               cases - mismatches, cases, secs)};
}

// --- AC2 -------------------------------------------------------------------

Outcome ac2(const Options& o) {
    const auto t0 = Clock::now();
    const std::uint64_t n = 10000, trials = 200;
    const double eps = 0.5;
    const ChebyshevBound cb = chebyshev_empty_regions_bound(n, eps);
    const ConvexBody sq = ConvexBody::unit_square();
    const OccupancyRow row = run_occupancy(sq, vertical_strips(sq, static_cast<unsigned>(cb.regions)), n, trials,
                                           o.seed, 0, o.threads);
    const double kd = static_cast<double>(cb.regions);
    const double mean = kd * std::pow(1 - 1 / kd, static_cast<double>(n));
    const double se = std::sqrt(cb.variance_empty / static_cast<double>(trials));
    std::size_t below = 0;
    for (std::size_t c : row.counts) below += static_cast<double>(c) < cb.threshold;
    const double frac = static_cast<double>(below) / static_cast<double>(trials);
    const double z = (row.empirical_mean - mean) / se;
    const double secs = seconds_since(t0);
    return {std::fabs(z) <= 4 && frac <= 0.25 && secs < 30,
            fmt("k=%llu, mean %.3f vs %.3f (z=%.2f, limit 4), below %.2f: %.3f (limit 0.25, bound %.3f), %.1f s",
                static_cast<unsigned long long>(cb.regions), row.empirical_mean, mean, z, cb.threshold, frac,
                cb.prob_bound, secs)};
}

// --- AC3 -------------------------------------------------------------------

Outcome ac3(const Options& o) {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(o.seed);
    int failures = 0;
    double worst_ratio = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const ConvexBody body = testing::random_convex_polygon(rng, 3, 40);
        const LassakPair lp = lassak_rectangles(body);
        const double a = area(body);
        bool ok = lp.ratio <= 2.0 + 1e-6;
        ok = ok && 0.5 * lp.circumscribed.area() <= a * (1 + 1e-9);
        ok = ok && a <= 2.0 * lp.inscribed.area() * (1 + 1e-9);
        // Sandwich: inscribed corners in the body, body vertices in the
        // circumscribed rectangle (local coordinates).
        for (const Point& p : lp.inscribed.corners()) {
            for (const auto& h : body.halfplanes()) ok = ok && dot(h.normal, p) <= h.offset + 1e-9;
        }
        const OrientedRect& c = lp.circumscribed;
        const Point u = c.width_axis();
        const Point v{-u.y, u.x};
        for (const Point& p : body.vertices()) {
            const Point d = p - c.center;
            ok = ok && std::fabs(dot(d, u)) <= 0.5 * c.width * (1 + 1e-9) + 1e-12;
            ok = ok && std::fabs(dot(d, v)) <= 0.5 * c.height * (1 + 1e-9) + 1e-12;
        }
        // Homothetic: same inclination and aspect.
        ok = ok && std::fabs(c.width * lp.inscribed.height - c.height * lp.inscribed.width) <=
                       1e-9 * c.width * lp.inscribed.height;
        failures += !ok;
        worst_ratio = std::max(worst_ratio, lp.ratio);
    }
    const double secs = seconds_since(t0);
    return {failures == 0 && secs < 60,
            fmt("%d/1000 failures, worst ratio %.9f (limit 2+1e-6), %.1f s", failures, worst_ratio, secs)};
}

// --- AC4 -------------------------------------------------------------------

Outcome ac4(const Options& o) {
    const auto t0 = Clock::now();
    const ConvexBody sq = ConvexBody::unit_square();
    const NetParams p = make_net_params(4096, 0.1, sq);
    std::mt19937_64 rng(o.seed + 4);
    int ok = 0;
    for (int k = 0; k < 1000; ++k) {
        const OrientedRect r = testing::random_rect_in_body(rng, sq, p.area_hi, p.rho);
        try {
            const OrientedRect q = shrink_to_area(quantize_rectangle(r, p, sq), p.area_mid);
            const OrientedRect w = net_witness(q, p, sq);
            // Corners of the witness inside r, in r's frame.
            const Point u = r.width_axis();
            const Point v{-u.y, u.x};
            bool inside = rect_contains_rect(r, w) && body_contains_rect(sq, w);
            for (const Point& c : w.corners()) {
                const Point d = c - r.center;
                inside = inside && std::fabs(dot(d, u)) <= 0.5 * r.width + 1e-12;
                inside = inside && std::fabs(dot(d, v)) <= 0.5 * r.height + 1e-12;
            }
            ok += inside;
        } catch (const Error&) {
        }
    }
    const double secs = seconds_since(t0);
    return {ok == 1000 && secs < 120, fmt("%d/1000 witnesses inside the original rectangle, %.1f s", ok, secs)};
}

// --- AC5 -------------------------------------------------------------------

Outcome ac5(const Options& o) {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(o.seed + 5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> count(0, 40);
    int agree = 0, bitwise = 0;
    for (int k = 0; k < 500; ++k) {
        const OrientedRect box = OrientedRect::axis_aligned(0, 0, 1, 1);
        std::vector<Point> pts;
        const int n = count(rng);
        for (int i = 0; i < n; ++i) {
            // Every third instance on a coarse grid, to force shared coordinates.
            if (k % 3 == 0) {
                pts.push_back({std::floor(unit(rng) * 8) / 8, std::floor(unit(rng) * 8) / 8});
            } else {
                pts.push_back({unit(rng), unit(rng)});
            }
        }
        const double fast = max_empty_axis_rect(box, pts).area;
        const double slow = max_empty_axis_rect_oracle(box, pts);
        agree += std::fabs(fast - slow) <= 1e-12 * slow;
        bitwise += fast == slow;
    }
    const double secs = seconds_since(t0);
    return {agree == 500 && secs < 60,
            fmt("%d/500 agree within 1e-12 relative (%d bit-identical), %.2f s", agree,
                bitwise, secs)};
}

// --- AC6 / AC7 --------------------------------------------------------------

const std::vector<std::uint64_t> kSweep{1u << 12, 1u << 14, 1u << 16};

Outcome ac6(const Options& o) {
    const auto t0 = Clock::now();
    ExperimentConfig c;
    c.n_values = kSweep;
    c.epsilon = 0.1;
    c.trials_per_n = 50;
    c.master_seed = o.seed;
    c.which = {"max_l"};
    const ScalingReport rep = run_experiment(c, o.threads);
    std::string detail;
    bool pass = true;
    std::vector<double> medians;
    for (std::uint64_t n : kSweep) {
        int certified = 0, big = 0, trials = 0;
        std::vector<double> norm;
        const double target = (1 - c.epsilon) * std::log(static_cast<double>(n)) / static_cast<double>(n);
        for (const TrialRecord& r : rep.rows) {
            if (r.n != n) continue;
            if (r.statistic == "max_l_upper") certified += r.certificate == Certificate::certified;
            if (r.statistic == "max_l") {
                ++trials;
                if (r.certificate == Certificate::failed) continue;
                big += r.value >= target;
                norm.push_back(r.normalized);
            }
        }
        const double med = median(norm);
        medians.push_back(med);
        const bool ok = certified >= 0.9 * trials && big >= 0.9 * trials && med >= 0.7 && med <= 1.8;
        pass = pass && ok;
        detail += fmt("n=%llu: (a) certified %d/%d, (b) >= (1-eps) log n/n %d/%d, median %.3f; ",
                      static_cast<unsigned long long>(n), certified, trials, big, trials, med);
    }
    const bool down = medians[1] <= medians[0] && medians[2] <= medians[1];
    const double secs = seconds_since(t0);
    pass = pass && down && secs < 1800;
    detail += fmt("(c) non-increasing: %s, %.0f s (limit 1800 s)", down ? "yes" : "no", secs);
    return {pass, detail};
}

Outcome ac7(const Options& o) {
    const auto t0 = Clock::now();
    const double eps = 0.1;
    const ConvexBody sq = ConvexBody::unit_square();
    std::string detail;
    bool pass = true;
    int certified_total = 0, within_total = 0;
    for (std::uint64_t n : kSweep) {
        std::vector<double> lower(50, 0.0);
        std::vector<int> certified(50, 0), within(50, 0);
        const double logr = std::log(static_cast<double>(n)) / static_cast<double>(n);
        for (std::uint64_t t = 0; t < 50; ++t) {
            const PointSample s = sample_uniform(sq, n, {o.seed, trial_stream(o.seed, n, t, "bounds")});
            HoleBoundsOptions opt;
            opt.use_polymax = false;
            // Full scans only where one finishes in minutes.
            const bool full = n == kSweep.front() && t < o.ac7_full_scans;
            opt.rect_frames = full ? 0 : o.ac7_frames;
            try {
                const HoleBounds b = convex_hole_bounds(sq, s.points, n, eps, opt);
                lower[t] = b.lower / logr;
                if (b.upper) {
                    certified[t] = 1;
                    within[t] = *b.upper / logr <= 4.9;
                }
            } catch (const Error&) {
            }
        }
        const double med = median(lower);
        const int cert = std::accumulate(certified.begin(), certified.end(), 0);
        const int in = std::accumulate(within.begin(), within.end(), 0);
        certified_total += cert;
        within_total += in;
        pass = pass && med >= 0.7;
        detail += fmt("n=%llu: median lower %.3f, certified upper %d/50; ", static_cast<unsigned long long>(n), med,
                      cert);
    }
    const bool upper_ok = certified_total > 0 && within_total >= 0.9 * certified_total;
    pass = pass && upper_ok;
    detail += fmt("upper <= 4.9 in %d/%d certified trials, %.0f s", within_total, certified_total,
                  seconds_since(t0));
    return {pass, detail};
}

// --- AC8 -------------------------------------------------------------------

Outcome ac8(const Options& o) {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(o.seed + 8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int agree = 0;
    for (int k = 0; k < 300; ++k) {
        std::vector<Point> pts;
        for (int i = 0; i < 10; ++i) pts.push_back({unit(rng), unit(rng)});
        agree += polymax(pts).area == polymax_oracle(pts);
    }
    const double secs = seconds_since(t0);
    return {agree == 300 && secs < 60, fmt("%d/300 exact agreements, %.2f s", agree, secs)};
}

// --- AC9 -------------------------------------------------------------------

// Strict interior test written out for a CCW polygon.
bool strictly_inside(const std::vector<Point>& poly, Point q) {
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point a = poly[i], b = poly[(i + 1) % poly.size()];
        if (orientation(a, b, q) <= 0) return false;
    }
    return true;
}

Outcome ac9(const Options& o) {
    const auto t0 = Clock::now();
    const std::size_t n = 100000;
    const double eps = 0.5, delta = 0.2;
    const double bound = (1 - 2 * delta) * (1 - eps) * std::log(static_cast<double>(n)) / static_cast<double>(n);
    int found = 0, violations = 0;
    std::vector<unsigned> p_values;
    std::vector<StripQuadResult> results(100);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const PointSample s = sample_uniform(ConvexBody::unit_square(), n, {o.seed, 9000 + seed});
        const StripQuadResult r = strip_quadrilateral(s.points, n, eps, delta);
        p_values.push_back(r.diagnostics.p);
        if (!r.quad) continue;
        ++found;
        std::vector<Point> poly = r.quad->vertices;
        double a2 = 0.0;
        for (std::size_t i = 0; i < poly.size(); ++i) a2 += cross(poly[i], poly[(i + 1) % poly.size()]);
        if (a2 < 0) std::reverse(poly.begin(), poly.end());
        bool ok = std::fabs(a2) / 2 >= bound;
        for (std::size_t i = 0; i < poly.size() && ok; ++i) {
            ok = orientation(poly[i], poly[(i + 1) % poly.size()], poly[(i + 2) % poly.size()]) > 0;
        }
        for (const Point& q : s.points) {
            if (!ok) break;
            ok = !strictly_inside(poly, q);
        }
        violations += !ok;
    }
    std::vector<double> pd(p_values.begin(), p_values.end());
    const double secs = seconds_since(t0);
    return {found >= 50 && violations == 0 && secs < 600,
            fmt("found %d/100 (limit 50), %d re-verification violations, median empty strips %.1f, %.1f s", found,
                violations, median(pd), secs)};
}

// --- AC10 ------------------------------------------------------------------

Outcome ac10(const Options& o) {
    const auto t0 = Clock::now();
    ExperimentConfig c;
    c.n_values = {500, 1000, 2000};
    c.trials_per_n = 4;
    c.master_seed = o.seed;
    c.epsilon = 0.1;
    c.which = {"max_l", "maxrect", "polymax", "stripquad", "occupancy", "bounds"};
    c.maxrect_frames = 50;
    c.bounds_polymax = false;
    c.polymax_exact_limit = 500;
    c.polymax_window_points = 150;
    const auto csv = [&](unsigned threads) {
        std::ostringstream out;
        write_report_csv(out, run_experiment(c, threads));
        return out.str();
    };
    const std::string one = csv(1);
    const std::string eight = csv(8);
    const std::string again = csv(1);
    const bool same = one == eight && one == again;
    return {same, fmt("%zu-byte reports %s across 1 and 8 threads and a rerun, %.1f s", one.size(),
                      same ? "identical" : "DIFFER", seconds_since(t0))};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    Options o;
    std::vector<std::string> only;
    app.add_option("--threads", o.threads, "worker threads (0 = all cores)");
    app.add_option("--seed", o.seed, "master seed");
    app.add_option("--only", only, "criteria to run, e.g. AC1 AC5");
    app.add_option("--ac7-full-scans", o.ac7_full_scans, "AC7 trials at the smallest n with a full net scan");
    app.add_option("--ac7-frames", o.ac7_frames, "AC7 frame budget for the remaining trials");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Outcome(const Options&)>>> criteria{
        {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
        {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}};
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
        Outcome r;
        try {
            r = fn(o);
        } catch (const std::exception& e) {
            r = {false, std::string("error: ") + e.what()};
        }
        failed += !r.pass;
        std::cout << name << ' ' << (r.pass ? "PASS" : "FAIL") << "  " << r.detail << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
