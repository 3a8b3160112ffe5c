#include "cvxhole/holes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "cvxhole/error.hpp"
#include "cvxhole/homothet.hpp"
#include "cvxhole/predicates.hpp"

namespace cvxhole {

bool in_convex_position(std::span<const Point> chain) {
    const std::size_t k = chain.size();
    if (k < 3) return false;
    for (std::size_t e = 0; e < k; ++e) {
        const Point a = chain[e], b = chain[(e + 1) % k];
        for (std::size_t v = 0; v < k; ++v) {
            if (v == e || v == (e + 1) % k) continue;
            if (orientation(a, b, chain[v]) <= 0) return false;
        }
    }
    return true;
}

bool chain_is_empty(std::span<const Point> chain, std::span<const Point> points) {
    if (chain.size() < 3) return true;
    const Box box = bounding_box(chain);
    const std::size_t k = chain.size();
    for (const Point& q : points) {
        if (q.x <= box.min_x || q.x >= box.max_x || q.y <= box.min_y || q.y >= box.max_y) continue;
        bool inside = true;
        for (std::size_t e = 0; e < k && inside; ++e) inside = orientation(chain[e], chain[(e + 1) % k], q) > 0;
        if (inside) return false;
    }
    return true;
}

namespace {

double tri_area(Point a, Point b, Point c) { return 0.5 * cross(b - a, c - a); }

// Shoelace area starting from the lowest, then leftmost vertex, so equal
// polygons give bit-equal areas whatever vertex they were listed from.
double canonical_area(std::span<const Point> chain) {
    if (chain.size() < 3) return 0.0;
    const auto start = std::min_element(chain.begin(), chain.end(), [](Point p, Point q) {
        return p.y < q.y || (p.y == q.y && p.x < q.x);
    });
    std::vector<Point> rotated(start, chain.end());
    rotated.insert(rotated.end(), chain.begin(), start);
    return polygon_area(rotated);
}

struct AnchorBest {
    double area = 0.0;
    std::vector<Point> chain;
};

// Largest empty convex polygon whose lowest (then leftmost) vertex is `a`.
// `above` holds the points after `a` in that order, `cutoff` is the best area
// found so far.
AnchorBest best_from_anchor(Point a, std::vector<Point> above, double cutoff) {
    AnchorBest out;
    std::sort(above.begin(), above.end(), [&](const Point& p, const Point& q) {
        const int o = orientation(a, p, q);
        if (o != 0) return o > 0;
        return dot(p - a, p - a) < dot(q - a, q - a);
    });
    const std::size_t m = above.size();
    if (m < 2) return out;
    // Groups of points on one ray from the anchor.
    std::vector<std::size_t> group_start(m);
    for (std::size_t k = 0; k < m; ++k) {
        group_start[k] = (k > 0 && orientation(a, above[k - 1], above[k]) == 0) ? group_start[k - 1] : k;
    }
    // Quick cut: the whole fan cannot beat the cutoff.
    if (cutoff > 0.0) {
        std::vector<Point> hull_pts(above);
        hull_pts.push_back(a);
        try {
            if (area(ConvexBody::hull_of(hull_pts)) <= cutoff) return out;
        } catch (const Error&) {
            return out;  // all on one line
        }
    }

    // valid[i*m+j]: open triangle (a, p_i, p_j) holds no point, i < j on different rays.
    std::vector<char> valid(m * m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        std::ptrdiff_t kstar = -1;
        std::size_t folded = i + 1;
        for (std::size_t j = i + 1; j < m; ++j) {
            if (group_start[j] == group_start[i]) continue;
            for (; folded < group_start[j]; ++folded) {
                if (kstar < 0 || orientation(above[i], above[kstar], above[folded]) > 0) {
                    kstar = static_cast<std::ptrdiff_t>(folded);
                }
            }
            valid[i * m + j] = kstar < 0 || orientation(above[i], above[kstar], above[j]) >= 0;
        }
    }

    std::vector<double> f(m * m, -1.0);
    std::vector<std::int32_t> next(m * m, -1);
    std::vector<std::size_t> outgoing;
    std::vector<double> suffix_best;
    std::vector<std::int32_t> suffix_arg;
    for (std::size_t j = m; j-- > 0;) {
        outgoing.clear();
        // A middle vertex needs a clear diagonal to the anchor.
        const bool visible = group_start[j] == j;
        if (visible) {
            for (std::size_t k = j + 1; k < m; ++k) {
                if (valid[j * m + k]) outgoing.push_back(k);
            }
            std::sort(outgoing.begin(), outgoing.end(), [&](std::size_t k1, std::size_t k2) {
                return orientation(above[j], above[k1], above[k2]) > 0;
            });
            suffix_best.assign(outgoing.size() + 1, 0.0);
            suffix_arg.assign(outgoing.size() + 1, -1);
            for (std::size_t s = outgoing.size(); s-- > 0;) {
                const double v = f[j * m + outgoing[s]];
                if (v > suffix_best[s + 1]) {
                    suffix_best[s] = v;
                    suffix_arg[s] = static_cast<std::int32_t>(outgoing[s]);
                } else {
                    suffix_best[s] = suffix_best[s + 1];
                    suffix_arg[s] = suffix_arg[s + 1];
                }
            }
        }
        for (std::size_t i = 0; i < j; ++i) {
            if (!valid[i * m + j]) continue;
            double ext = 0.0;
            std::int32_t arg = -1;
            if (visible && !outgoing.empty()) {
                // First outgoing edge making a strict left turn at p_j.
                const auto it = std::partition_point(outgoing.begin(), outgoing.end(), [&](std::size_t k) {
                    return orientation(above[i], above[j], above[k]) <= 0;
                });
                const std::size_t s = static_cast<std::size_t>(it - outgoing.begin());
                ext = suffix_best[s];
                arg = suffix_arg[s];
            }
            f[i * m + j] = tri_area(a, above[i], above[j]) + ext;
            next[i * m + j] = arg;
            if (f[i * m + j] > out.area) {
                out.area = f[i * m + j];
                out.chain.clear();
                out.chain.push_back(a);
                std::size_t u = i, v = j;
                out.chain.push_back(above[u]);
                for (;;) {
                    out.chain.push_back(above[v]);
                    const std::int32_t w = next[u * m + v];
                    if (w < 0) break;
                    u = v;
                    v = static_cast<std::size_t>(w);
                }
            }
        }
    }
    if (out.area <= cutoff) out.chain.clear();
    return out;
}

bool lower_left(const Point& p, const Point& q) { return p.y < q.y || (p.y == q.y && p.x < q.x); }

PolymaxResult polymax_exact(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end(), lower_left);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    PolymaxResult res;
    for (std::size_t s = 0; s + 2 < pts.size(); ++s) {
        std::vector<Point> above(pts.begin() + static_cast<std::ptrdiff_t>(s) + 1, pts.end());
        AnchorBest b = best_from_anchor(pts[s], std::move(above), res.area);
        if (!b.chain.empty() && b.area > res.area) {
            res.area = b.area;
            res.chain.vertices = std::move(b.chain);
        }
    }
    return res;
}

}  // namespace

PolymaxResult polymax(std::span<const Point> points, const PolymaxOptions& options) {
    if (points.size() < 3) throw Error(Errc::PreconditionViolation, "polymax needs at least three points");
    PolymaxResult res;
    bool collinear = true;
    for (std::size_t k = 2; k < points.size() && collinear; ++k) collinear = orientation(points[0], points[1], points[k]) == 0;
    if (collinear) {
        const auto [lo, hi] = std::minmax_element(points.begin(), points.end(), [](Point p, Point q) {
            return p.x < q.x || (p.x == q.x && p.y < q.y);
        });
        res.degenerate = true;
        res.chain.vertices = {*lo, *hi};
        res.chain.empty_verified = true;
        return res;
    }
    if (points.size() <= options.exact_limit) {
        res = polymax_exact(std::vector<Point>(points.begin(), points.end()));
        res.exact = true;
    } else {
        // Overlapping windows; a polygon on window points stays inside the window.
        const Box box = bounding_box(points);
        const double density = static_cast<double>(points.size()) / std::max(box.width() * box.height(), 1e-300);
        const double side = std::sqrt(static_cast<double>(options.window_points) / density);
        const double stride = side / 2;
        std::vector<Point> sorted(points.begin(), points.end());
        std::sort(sorted.begin(), sorted.end(), [](Point p, Point q) { return p.x < q.x; });
        res.exact = false;
        for (double x0 = box.min_x; x0 < box.max_x; x0 += stride) {
            const auto lo = std::lower_bound(sorted.begin(), sorted.end(), x0, [](Point p, double v) { return p.x < v; });
            const auto hi = std::upper_bound(sorted.begin(), sorted.end(), x0 + side, [](double v, Point p) { return v < p.x; });
            for (double y0 = box.min_y; y0 < box.max_y; y0 += stride) {
                std::vector<Point> win;
                for (auto it = lo; it != hi; ++it) {
                    if (it->y >= y0 && it->y <= y0 + side) win.push_back(*it);
                }
                if (win.size() < 3) continue;
                PolymaxResult w = polymax_exact(std::move(win));
                if (w.area > res.area) {
                    res.area = w.area;
                    res.chain = std::move(w.chain);
                }
            }
        }
    }
    res.area = canonical_area(res.chain.vertices);
    res.chain.empty_verified = in_convex_position(res.chain.vertices) && chain_is_empty(res.chain.vertices, points);
    if (!res.chain.empty_verified) {
        throw Error(Errc::CoverageViolation, "polymax produced a polygon that fails re-verification");
    }
    return res;
}

double polymax_oracle(std::span<const Point> points) {
    if (points.size() > 12) throw Error(Errc::TooManyPoints, "polymax oracle handles at most 12 points");
    const std::size_t n = points.size();
    double best = 0.0;
    std::vector<Point> subset, hull;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) < 3) continue;
        subset.clear();
        for (std::size_t k = 0; k < n; ++k) {
            if (mask & (1u << k)) subset.push_back(points[k]);
        }
        // Monotone chain hull without collinear points.
        std::sort(subset.begin(), subset.end(), [](Point p, Point q) { return p.x < q.x || (p.x == q.x && p.y < q.y); });
        hull.assign(2 * subset.size(), Point{});
        std::size_t h = 0;
        for (std::size_t k = 0; k < subset.size(); ++k) {
            while (h >= 2 && orientation(hull[h - 2], hull[h - 1], subset[k]) <= 0) --h;
            hull[h++] = subset[k];
        }
        for (std::size_t k = subset.size() - 1, lower = h + 1; k-- > 0;) {
            while (h >= lower && orientation(hull[h - 2], hull[h - 1], subset[k]) <= 0) --h;
            hull[h++] = subset[k];
        }
        hull.resize(h - 1);
        if (hull.size() != subset.size()) continue;
        if (!chain_is_empty(hull, points)) continue;
        best = std::max(best, canonical_area(hull));
    }
    return best;
}

// ---------------------------------------------------------------------------
// Strips

namespace {

unsigned strip_count(std::size_t n, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(Errc::PreconditionViolation, "epsilon must lie in (0, 1)");
    if (n < 2) throw Error(Errc::PreconditionViolation, "n must be at least 2");
    const double nd = static_cast<double>(n);
    return static_cast<unsigned>(std::max<long long>(1, std::llround(nd / ((1 - epsilon) * std::log(nd)))));
}

unsigned strip_of(double x, unsigned t) {
    const double s = std::floor(x * t);
    if (s < 0) return 0;
    if (s >= t) return t - 1;
    return static_cast<unsigned>(s);
}

struct AttemptIndices {
    std::ptrdiff_t l1 = -1, l2 = -1, r1 = -1, r2 = -1;
};

StripAttempt attempt(std::span<const Point> sorted_x, unsigned t, unsigned strip, double delta,
                     AttemptIndices* idx_out) {
    StripAttempt at;
    at.strip = strip;
    const double left = static_cast<double>(strip) / t;
    const double right = static_cast<double>(strip + 1) / t;
    const auto lo = std::lower_bound(sorted_x.begin(), sorted_x.end(), left, [](Point p, double v) { return p.x < v; });
    const auto ro = std::lower_bound(sorted_x.begin(), sorted_x.end(), right, [](Point p, double v) { return p.x < v; });
    AttemptIndices idx;
    const std::ptrdiff_t lpos = lo - sorted_x.begin();
    const std::ptrdiff_t rpos = ro - sorted_x.begin();
    const auto size = static_cast<std::ptrdiff_t>(sorted_x.size());
    if (lpos >= 1) idx.l1 = lpos - 1;
    if (lpos >= 2) idx.l2 = lpos - 2;
    if (rpos < size) idx.r1 = rpos;
    if (rpos + 1 < size) idx.r2 = rpos + 1;
    if (idx.l1 >= 0) at.l1 = sorted_x[idx.l1];
    if (idx.l2 >= 0) at.l2 = sorted_x[idx.l2];
    if (idx.r1 >= 0) at.r1 = sorted_x[idx.r1];
    if (idx.r2 >= 0) at.r2 = sorted_x[idx.r2];
    if (idx_out) *idx_out = idx;
    if (!at.l1 || !at.l2 || !at.r1 || !at.r2) return at;
    at.y_event = at.l1->y > 1 - delta && at.r1->y > 1 - delta && at.l2->y < delta && at.r2->y < delta;
    const std::vector<Point> quad{*at.l1, *at.l2, *at.r2, *at.r1};
    at.convex = in_convex_position(quad);
    if (at.convex) {
        at.area = polygon_area(quad);
        const Box box = bounding_box(quad);
        const auto a = std::lower_bound(sorted_x.begin(), sorted_x.end(), box.min_x, [](Point p, double v) { return p.x < v; });
        const auto b = std::upper_bound(sorted_x.begin(), sorted_x.end(), box.max_x, [](double v, Point p) { return v < p.x; });
        at.empty = chain_is_empty(quad, std::span<const Point>(&*a, static_cast<std::size_t>(b - a)));
    }
    return at;
}

}  // namespace

StripDecomposition strip_decomposition(std::span<const Point> points, std::size_t n, double epsilon) {
    StripDecomposition d;
    d.t = strip_count(n, epsilon);
    std::vector<std::uint32_t> counts(d.t, 0);
    for (const Point& p : points) ++counts[strip_of(p.x, d.t)];
    for (unsigned k = 0; k < d.t; ++k) {
        if (counts[k] == 0) d.empty_indices.push_back(k);
    }
    return d;
}

StripAttempt quadrilateral_at_strip(std::span<const Point> sorted_x, unsigned t, unsigned strip, double delta) {
    return attempt(sorted_x, t, strip, delta, nullptr);
}

StripQuadResult strip_quadrilateral(std::span<const Point> points, std::size_t n, double epsilon, double delta) {
    if (!(delta > 0.0 && delta < 0.5)) throw Error(Errc::PreconditionViolation, "delta must lie in (0, 1/2)");
    StripQuadResult res;
    const StripDecomposition d = strip_decomposition(points, n, epsilon);
    std::vector<Point> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end(), [](Point p, Point q) { return p.x < q.x || (p.x == q.x && p.y < q.y); });
    StripDiagnostics& diag = res.diagnostics;
    diag.t = d.t;
    diag.p = static_cast<unsigned>(d.empty_indices.size());
    diag.q = diag.p >= 6 ? (diag.p - 2) / 4 : 0;
    for (std::size_t k = 1; k < d.empty_indices.size(); ++k) {
        if (d.empty_indices[k] == d.empty_indices[k - 1] + 1) diag.consecutive_empty = true;
    }
    const double nd = static_cast<double>(n);
    const double floor_area = (1 - 2 * delta) * (1 - epsilon) * std::log(nd) / nd;
    std::vector<std::ptrdiff_t> used;
    for (unsigned j = 1; j <= diag.q; ++j) {
        AttemptIndices idx;
        StripAttempt at = attempt(sorted, d.t, d.empty_indices[4 * j - 1], delta, &idx);
        for (std::ptrdiff_t v : {idx.l1, idx.l2, idx.r1, idx.r2}) {
            if (v < 0) continue;
            if (std::find(used.begin(), used.end(), v) != used.end()) diag.event_a = false;
        }
        for (std::ptrdiff_t v : {idx.l1, idx.l2, idx.r1, idx.r2}) {
            if (v >= 0) used.push_back(v);
        }
        if (!res.quad && at.success() && at.area >= floor_area) {
            res.quad = ConvexChain{{*at.l1, *at.l2, *at.r2, *at.r1}, true};
            res.area = at.area;
        }
        diag.attempts.push_back(at);
    }
    return res;
}

// ---------------------------------------------------------------------------
// Bounds on the largest empty convex set

HoleBounds convex_hole_bounds(const ConvexBody& body, std::span<const Point> points, std::size_t n, double epsilon,
                              const HoleBoundsOptions& options) {
    HoleBounds hb;
    const std::vector<std::pair<Shape, std::string>> shapes{
        {Shape::square(), "square"},
        {Shape::polygon(ConvexBody::regular_polygon(64, 1.0), "disk64"), "disk64"},
        {Shape::polygon(ConvexBody::axis_rectangle(0, 0, 2, 1), "rect21"), "rect21"},
    };
    for (const auto& [shape, name] : shapes) {
        const HomothetPlacement p = search_empty_homothet(body, shape, points, epsilon);
        if (p.area() > hb.lower) {
            hb.lower = p.area();
            hb.lower_source = name;
        }
    }
    if (options.use_polymax && points.size() >= 3) {
        const PolymaxResult pm = polymax(points, options.polymax);
        if (pm.area > hb.lower) {
            hb.lower = pm.area;
            hb.lower_source = pm.exact ? "polymax" : "polymax_windowed";
        }
    }
    if (n >= 16 && epsilon <= 0.1) {
        const NetParams params = make_net_params(n, epsilon, body);
        PointSample sample;
        sample.n = n;
        sample.points.assign(points.begin(), points.end());
        const NetCertificate cert = net_max_empty_rect(body, sample, params, NetScanOptions{options.rect_frames});
        hb.rect_status = cert.status;
        if (cert.status == NetStatus::certified) hb.upper = 2 * cert.upper_certified;
    }
    if (hb.upper && hb.lower > *hb.upper) {
        throw Error(Errc::CoverageViolation, "convex hole bounds crossed");
    }
    return hb;
}

}  // namespace cvxhole
