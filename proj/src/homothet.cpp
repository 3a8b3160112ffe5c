#include "cvxhole/homothet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cvxhole/convex_ops.hpp"
#include "cvxhole/error.hpp"
#include "cvxhole/predicates.hpp"
#include "cvxhole/small_lp.hpp"

namespace cvxhole {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Horizontal chords of a convex polygon: x-range at height y.
class Chords {
public:
    explicit Chords(const std::vector<Point>& poly) {
        const std::size_t k = poly.size();
        std::size_t bottom = 0, top = 0;
        for (std::size_t i = 1; i < k; ++i) {
            if (poly[i].y < poly[bottom].y || (poly[i].y == poly[bottom].y && poly[i].x > poly[bottom].x)) bottom = i;
            if (poly[i].y > poly[top].y || (poly[i].y == poly[top].y && poly[i].x > poly[top].x)) top = i;
        }
        for (std::size_t i = bottom;; i = (i + 1) % k) {
            right_.push_back(poly[i]);
            if (i == top) break;
        }
        std::size_t top_left = top, bottom_left = bottom;
        for (std::size_t i = 0; i < k; ++i) {
            if (poly[i].y == poly[top].y && poly[i].x < poly[top_left].x) top_left = i;
            if (poly[i].y == poly[bottom].y && poly[i].x < poly[bottom_left].x) bottom_left = i;
        }
        for (std::size_t i = top_left;; i = (i + 1) % k) {
            left_.push_back(poly[i]);
            if (i == bottom_left) break;
        }
        std::reverse(left_.begin(), left_.end());
        y0_ = poly[bottom].y;
        y1_ = poly[top].y;
    }

    double y_min() const { return y0_; }
    double y_max() const { return y1_; }

    std::pair<double, double> at(double y) const { return {eval(left_, y), eval(right_, y)}; }

private:
    static double eval(const std::vector<Point>& chain, double y) {
        if (y <= chain.front().y) return chain.front().x;
        if (y >= chain.back().y) return chain.back().x;
        const auto it = std::upper_bound(chain.begin(), chain.end(), y, [](double v, const Point& p) { return v < p.y; });
        const Point& b = *it;
        const Point& a = *(it - 1);
        return a.x + (b.x - a.x) * ((y - a.y) / (b.y - a.y));
    }

    std::vector<Point> left_, right_;
    double y0_ = 0.0, y1_ = 0.0;
};

// x-range of centres c with c + offsets inside every half-plane, on the line
// y = cy. `reach[k]` is how far the shape extends along halfplane k's normal.
std::pair<double, double> row_interval(const std::vector<HalfPlane>& hps, const std::vector<double>& reach,
                                       double cy) {
    double lo = -kInf, hi = kInf;
    for (std::size_t k = 0; k < hps.size(); ++k) {
        const HalfPlane& hp = hps[k];
        const double rhs = hp.offset - reach[k] - hp.normal.y * cy;
        if (hp.normal.x > 1e-15) {
            hi = std::min(hi, rhs / hp.normal.x);
        } else if (hp.normal.x < -1e-15) {
            lo = std::max(lo, rhs / hp.normal.x);
        } else if (rhs < 0.0) {
            return {1.0, 0.0};
        }
    }
    return {lo, hi};
}

std::int64_t ceil_i(double x) { return static_cast<std::int64_t>(std::ceil(x)); }
std::int64_t floor_i(double x) { return static_cast<std::int64_t>(std::floor(x)); }

// Rows of lattice points (i*step, j*step) with centres admissible for the
// half-planes shifted by `reach`.
std::vector<LatticeRow> lattice_rows(const ConvexBody& region_of, const std::vector<double>& reach, double step,
                                     double y_lo, double y_hi) {
    const std::vector<HalfPlane> hps = region_of.halfplanes();
    std::vector<LatticeRow> rows;
    for (std::int64_t j = ceil_i(y_lo / step); static_cast<double>(j) * step <= y_hi; ++j) {
        const auto [lo, hi] = row_interval(hps, reach, static_cast<double>(j) * step);
        if (!(lo <= hi)) continue;
        LatticeRow row{j, ceil_i(lo / step), floor_i(hi / step)};
        if (row.size() > 0) rows.push_back(row);
    }
    return rows;
}

struct Interval {
    double lo, hi;
};

// First integer i in [i0, i1] with i*step outside every open interval (shrunk
// by `margin`). Sorts `intervals`.
std::optional<std::int64_t> first_uncovered(std::vector<Interval>& intervals, std::int64_t i0, std::int64_t i1,
                                            double step, double margin, std::int64_t start) {
    std::sort(intervals.begin(), intervals.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::int64_t i = std::max(i0, start);
    std::size_t k = 0;
    double reach = -kInf;
    while (i <= i1) {
        const double x = static_cast<double>(i) * step;
        while (k < intervals.size() && intervals[k].lo + margin < x) {
            reach = std::max(reach, intervals[k].hi - margin);
            ++k;
        }
        if (reach > x) {
            // Covered; jump past the current reach.
            const std::int64_t next = ceil_i(reach / step);
            i = next > i ? next : i + 1;
            continue;
        }
        return i;
    }
    return std::nullopt;
}

std::vector<Point> sorted_by_y(std::span<const Point> pts) {
    std::vector<Point> out(pts.begin(), pts.end());
    std::sort(out.begin(), out.end(), [](const Point& a, const Point& b) { return a.y < b.y; });
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Shape

Shape Shape::polygon(const ConvexBody& body, std::string id) {
    Shape s;
    s.kind_ = Kind::polygon;
    s.id_ = std::move(id);
    const double a = area(body);
    s.outline_ = body.translated(-1.0 * centroid(body)).scaled(1.0 / std::sqrt(a));
    return s;
}

Shape Shape::disk(int sides) {
    Shape s;
    s.kind_ = Kind::disk;
    s.id_ = "disk";
    s.radius_ = 1.0 / std::sqrt(std::numbers::pi);
    s.outline_ = ConvexBody::regular_polygon(sides, s.radius_);
    return s;
}

Shape Shape::square() { return polygon(ConvexBody::axis_rectangle(-0.5, -0.5, 0.5, 0.5), "square"); }

double Shape::support(Point direction) const {
    if (kind_ == Kind::disk) return radius_ * norm(direction);
    return outline_.support(direction);
}

double Shape::circumradius() const {
    if (kind_ == Kind::disk) return radius_;
    double r = 0.0;
    for (const Point& v : outline_.vertices()) r = std::max(r, norm(v));
    return r;
}

bool Shape::interior_contains(Point p, double scale) const {
    if (kind_ == Kind::disk) return norm(p) < radius_ * scale;
    const auto& v = outline_.vertices();
    for (std::size_t k = 0; k < v.size(); ++k) {
        const Point a = scale * v[k];
        const Point b = scale * v[(k + 1) % v.size()];
        if (orientation(a, b, p) <= 0) return false;
    }
    return true;
}

namespace {

bool placement_empty(const Shape& shape, double scale, Point offset, std::span<const Point> pts) {
    if (shape.kind() == Shape::Kind::disk) {
        const double r = shape.radius() * scale;
        return std::none_of(pts.begin(), pts.end(), [&](const Point& q) { return distance(q, offset) < r; });
    }
    const ConvexBody placed = shape.outline().scaled(scale).translated(offset);
    return std::none_of(pts.begin(), pts.end(),
                        [&](const Point& q) { return contains_point(placed, q, Boundary::open); });
}

bool placement_inside(const ConvexBody& body, const Shape& shape, double scale, Point offset) {
    if (shape.kind() == Shape::Kind::disk) {
        for (const HalfPlane& hp : body.halfplanes()) {
            if (dot(hp.normal, offset) + scale * shape.radius() > hp.offset * (1 + 1e-15) + 1e-15) return false;
        }
        return true;
    }
    const ConvexBody placed = shape.outline().scaled(scale).translated(offset);
    return contains_polygon(body, placed.vertices());
}

double net_log_ratio(std::uint64_t n) { return std::log(static_cast<double>(n)) / static_cast<double>(n); }

}  // namespace

// ---------------------------------------------------------------------------
// Net

double HomothetNet::area_p() const { return (1 + 2 * epsilon) * net_log_ratio(n); }
double HomothetNet::area_shrunken() const { return (1 + epsilon) * net_log_ratio(n); }
double HomothetNet::area_target() const { return (1 + 3 * epsilon) * net_log_ratio(n); }
double HomothetNet::omega_bound() const { return epsilon / 8 * std::sqrt(net_log_ratio(n)); }
double HomothetNet::placement_bound() const { return 64 / (epsilon * epsilon) / net_log_ratio(n); }

std::uint64_t HomothetNet::lattice_size() const {
    std::uint64_t s = 0;
    for (const auto& r : lattice) s += r.size();
    return s;
}

std::uint64_t HomothetNet::placement_count() const {
    std::uint64_t s = 0;
    for (const auto& r : placement_rows) s += r.size();
    return s;
}

std::vector<Point> HomothetNet::lattice_points() const {
    const AffineMap back = to_frame.inverse();
    std::vector<Point> out;
    out.reserve(lattice_size());
    for (const auto& r : lattice) {
        for (std::int64_t i = r.i0; i <= r.i1; ++i) {
            out.push_back(back({static_cast<double>(i) * omega, static_cast<double>(r.j) * omega}));
        }
    }
    return out;
}

Point HomothetNet::placement_offset(std::int64_t i, std::int64_t j) const {
    return to_frame.inverse()({static_cast<double>(i) * omega, static_cast<double>(j) * omega});
}

bool HomothetNet::has_placement(std::int64_t i, std::int64_t j) const {
    const auto it = std::lower_bound(placement_rows.begin(), placement_rows.end(), j,
                                     [](const LatticeRow& r, std::int64_t v) { return r.j < v; });
    return it != placement_rows.end() && it->j == j && i >= it->i0 && i <= it->i1;
}

std::vector<HomothetPlacement> HomothetNet::placements() const {
    std::vector<HomothetPlacement> out;
    out.reserve(placement_count());
    for (const auto& r : placement_rows) {
        for (std::int64_t i = r.i0; i <= r.i1; ++i) out.push_back({1.0, placement_offset(i, r.j), shape_id + ":s(P)"});
    }
    return out;
}

HomothetNet build_homothet_net(const ConvexBody& body, const Shape& shape, std::uint64_t n, double epsilon) {
    if (epsilon > 0.1) throw Error(Errc::EpsilonTooLarge, "epsilon must not exceed 0.1");
    if (!(epsilon > 0.0)) throw Error(Errc::PreconditionViolation, "epsilon must be positive");
    if (n < 16) throw Error(Errc::PreconditionViolation, "n must be at least 16");
    if (std::fabs(area(body) - 1.0) > 1e-9) throw Error(Errc::PreconditionViolation, "body must have area 1");
    HomothetNet net;
    net.n = n;
    net.epsilon = epsilon;
    net.shape_id = shape.id();
    if (!(net.area_target() < 1.0)) throw Error(Errc::PreconditionViolation, "target hole larger than the body");

    const ConvexBody big = shape.outline().scaled(std::sqrt(net.area_target()));
    const ConvexBody p_world = solve_inner_offset(big, net.area_p()).shrunken;
    const OrientedRect q = lassak_rectangles(p_world).circumscribed;
    const double stretch = std::sqrt(q.height / q.width);
    const AffineMap squash{stretch, 0.0, 0.0, 1.0 / stretch, {}};
    net.to_frame = squash.compose(AffineMap::rotation(-q.inclination));

    net.frame_body = transform(body, net.to_frame);
    net.frame_p = transform(p_world, net.to_frame);
    net.frame_p_centroid = centroid(net.frame_p);
    const OffsetSolution s = solve_inner_offset(net.frame_p, net.area_shrunken());
    net.omega = s.omega;
    net.frame_shrunken = s.shrunken;
    if (net.omega < net.omega_bound()) {
        throw Error(Errc::ShapeTooEccentric, "inner-offset distance below the perimeter bound");
    }

    const AffineMap back = net.to_frame.inverse();
    const Point c_world = back(net.frame_p_centroid);
    net.p_shape = p_world.translated(-1.0 * c_world);
    net.shrunken_shape = transform(net.frame_shrunken, back).translated(-1.0 * c_world);

    const Box fb = bounding_box(net.frame_body);
    const std::vector<HalfPlane> hps = net.frame_body.halfplanes();
    std::vector<double> zero(hps.size(), 0.0), reach(hps.size());
    const ConvexBody rel = net.frame_shrunken.translated(-1.0 * net.frame_p_centroid);
    for (std::size_t k = 0; k < hps.size(); ++k) reach[k] = rel.support(hps[k].normal);
    net.lattice = lattice_rows(net.frame_body, zero, net.omega, fb.min_y, fb.max_y);
    for (const LatticeRow& row : lattice_rows(net.frame_body, reach, net.omega, fb.min_y, fb.max_y)) {
        // Centres must also be lattice points of the body.
        const auto it = std::lower_bound(net.lattice.begin(), net.lattice.end(), row.j,
                                         [](const LatticeRow& r, std::int64_t v) { return r.j < v; });
        if (it == net.lattice.end() || it->j != row.j) continue;
        LatticeRow clipped{row.j, std::max(row.i0, it->i0), std::min(row.i1, it->i1)};
        // Settle the ends with the exact containment test.
        const auto fits = [&](std::int64_t i) {
            const Point c{static_cast<double>(i) * net.omega, static_cast<double>(row.j) * net.omega};
            return contains_polygon(net.frame_body, rel.translated(c).vertices());
        };
        while (clipped.i0 <= clipped.i1 && !fits(clipped.i0)) ++clipped.i0;
        while (clipped.i1 >= clipped.i0 && !fits(clipped.i1)) --clipped.i1;
        if (clipped.size() > 0) net.placement_rows.push_back(clipped);
    }
    if (static_cast<double>(net.placement_count()) > net.placement_bound()) {
        throw Error(Errc::NetTooLarge, "S_H exceeds its packing bound");
    }
    return net;
}

bool translate_covered(const HomothetNet& net, Point center, double* offset_ratio) {
    const Point c = net.to_frame(center);
    const std::int64_t i = std::llround(c.x / net.omega);
    const std::int64_t j = std::llround(c.y / net.omega);
    const Point p{static_cast<double>(i) * net.omega, static_cast<double>(j) * net.omega};
    if (offset_ratio) *offset_ratio = distance(p, c) / net.omega;
    if (!net.has_placement(i, j)) return false;
    // s(P) moved to p must sit inside P moved to c.
    const ConvexBody t = net.frame_p.translated(c - net.frame_p_centroid);
    const ConvexBody s = net.frame_shrunken.translated(p - net.frame_p_centroid);
    return contains_polygon(t, s.vertices());
}

CoverReport verify_translate_cover(const HomothetNet& net, std::uint64_t trials, SeedSpec seed) {
    // Centres of translates of P inside the body, in the frame.
    const ConvexBody rel = net.frame_p.translated(-1.0 * net.frame_p_centroid);
    Polygon region = net.frame_body.vertices();
    for (const HalfPlane& hp : net.frame_body.halfplanes()) {
        region = clip_halfplane(region, hp.normal, hp.offset - rel.support(hp.normal));
    }
    CoverReport report;
    if (region.size() < 3) return report;
    const AffineMap back = net.to_frame.inverse();
    const auto check = [&](Point frame_centre) {
        double ratio = 0.0;
        const bool ok = translate_covered(net, back(frame_centre), &ratio);
        ++report.trials;
        report.max_offset_ratio = std::max(report.max_offset_ratio, ratio);
        if (!ok) ++report.failures;
    };
    // Extreme positions: vertices of the centre region, nudged inward.
    const Point mid = polygon_centroid(region);
    for (const Point& v : region) check(v + 1e-9 * (mid - v));
    const auto region_body = ConvexBody::from_convex_chain(region);
    if (region_body) {
        const PointSample s = sample_uniform(*region_body, trials, seed, "centres");
        for (const Point& c : s.points) check(c);
    }
    if (report.failures > 0) {
        throw Error(Errc::CoverageViolation, "a translate of P contains no element of S_H");
    }
    return report;
}

NetEmptiness check_net_nonempty(const HomothetNet& net, std::span<const Point> points) {
    NetEmptiness out;
    std::vector<Point> frame;
    frame.reserve(points.size());
    for (const Point& p : points) frame.push_back(net.to_frame(p));
    frame = sorted_by_y(frame);
    const ConvexBody rel = net.frame_shrunken.translated(-1.0 * net.frame_p_centroid);
    const Chords chords(rel.vertices());
    const double w = net.omega;
    std::vector<Interval> intervals;
    std::size_t lo_idx = 0;
    for (const LatticeRow& row : net.placement_rows) {
        const double cy = static_cast<double>(row.j) * w;
        // Points with y - cy strictly inside the shape's height.
        while (lo_idx < frame.size() && frame[lo_idx].y - cy <= chords.y_min()) ++lo_idx;
        intervals.clear();
        std::size_t k = lo_idx;
        for (; k < frame.size() && frame[k].y - cy < chords.y_max(); ++k) {
            const auto [xl, xr] = chords.at(frame[k].y - cy);
            if (xr > xl) intervals.push_back({frame[k].x - xr, frame[k].x - xl});
        }
        const std::span<const Point> window(frame.data() + lo_idx, k - lo_idx);
        std::int64_t start = row.i0;
        while (start <= row.i1) {
            const auto i = first_uncovered(intervals, row.i0, row.i1, w, 1e-12 * w, start);
            if (!i) break;
            // Confirm with the exact predicate; rounding may have lost a cover.
            const ConvexBody placed = rel.translated({static_cast<double>(*i) * w, cy});
            const bool empty = std::none_of(window.begin(), window.end(), [&](const Point& q) {
                return contains_point(placed, q, Boundary::open);
            });
            if (empty) {
                out.empty_placement = std::make_pair(*i, row.j);
                return out;
            }
            start = *i + 1;
        }
    }
    out.all_nonempty = true;
    return out;
}

// ---------------------------------------------------------------------------
// Lower-bound search

namespace {

struct Candidate {
    double scale = 0.0;
    Point offset{};
};

// Largest homothet of the shape inside the body.
Candidate largest_inside(const ConvexBody& body, const Shape& shape) {
    const Point c0 = centroid(body);
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (const HalfPlane& hp : body.halfplanes()) {
        rows.push_back({hp.normal.x, hp.normal.y, shape.support(hp.normal)});
        rhs.push_back(std::max(0.0, hp.offset - dot(hp.normal, c0)));
    }
    const lp::Solution sol = lp::maximize({0.0, 0.0, 1.0}, rows, rhs);
    if (sol.status != lp::Status::optimal) throw Error(Errc::ConvergenceFailure, "inscribed homothet program failed");
    Candidate c{sol.x[2], c0 + Point{sol.x[0], sol.x[1]}};
    // Back off a hair so the closed containment test passes after rounding.
    c.scale *= 1 - 1e-12;
    return c;
}

class HomothetSearch {
public:
    HomothetSearch(const ConvexBody& body, const Shape& shape, std::span<const Point> points, double epsilon,
                   const HomothetSearchOptions& options)
        : body_(body), shape_(shape), pts_(sorted_by_y(points)), options_(options), hps_(body.halfplanes()) {
        unit_reach_.resize(hps_.size());
        for (std::size_t k = 0; k < hps_.size(); ++k) unit_reach_[k] = shape.support(hps_[k].normal);
        if (shape.kind() == Shape::Kind::disk) {
            gap_ = shape.radius() * (1 - std::sqrt(1 - epsilon));
        } else {
            gap_ = solve_inner_offset(shape.outline(), (1 - epsilon) * area(shape.outline())).omega;
        }
        if (shape.kind() == Shape::Kind::polygon) chords_.emplace(shape.outline().vertices());
        box_ = bounding_box(body);
    }

    /// Up to `limit` empty lattice placements of the shape scaled by `scale`.
    std::vector<Candidate> find(double scale, std::size_t limit = 1) const {
        std::vector<Candidate> found;
        const double step = options_.spacing_factor * gap_ * scale;
        std::vector<double> reach(unit_reach_.size());
        for (std::size_t k = 0; k < reach.size(); ++k) reach[k] = scale * unit_reach_[k];
        const double y_lo = shape_.kind() == Shape::Kind::disk ? -shape_.radius() : chords_->y_min();
        const double y_hi = shape_.kind() == Shape::Kind::disk ? shape_.radius() : chords_->y_max();
        std::vector<Interval> intervals;
        std::size_t lo_idx = 0;
        for (std::int64_t j = ceil_i(box_.min_y / step); static_cast<double>(j) * step <= box_.max_y; ++j) {
            const double cy = static_cast<double>(j) * step;
            const auto [xlo, xhi] = row_interval(hps_, reach, cy);
            if (!(xlo <= xhi)) continue;
            const std::int64_t i0 = ceil_i(xlo / step), i1 = floor_i(xhi / step);
            if (i0 > i1) continue;
            while (lo_idx < pts_.size() && pts_[lo_idx].y - cy <= scale * y_lo) ++lo_idx;
            intervals.clear();
            std::size_t k = lo_idx;
            for (; k < pts_.size() && pts_[k].y - cy < scale * y_hi; ++k) {
                const double dy = pts_[k].y - cy;
                double xl, xr;
                if (shape_.kind() == Shape::Kind::disk) {
                    const double r = scale * shape_.radius();
                    const double half = std::sqrt(std::max(0.0, r * r - dy * dy));
                    xl = -half;
                    xr = half;
                } else {
                    const auto ch = chords_->at(dy / scale);
                    xl = scale * ch.first;
                    xr = scale * ch.second;
                }
                if (xr > xl) intervals.push_back({pts_[k].x - xr, pts_[k].x - xl});
            }
            const std::span<const Point> window(pts_.data() + lo_idx, k - lo_idx);
            std::int64_t start = i0;
            while (start <= i1) {
                const auto i = first_uncovered(intervals, i0, i1, step, 1e-12 * step, start);
                if (!i) break;
                const Point c{static_cast<double>(*i) * step, cy};
                if (placement_empty(shape_, scale, c, window) && placement_inside(body_, shape_, scale, c)) {
                    found.push_back({scale, c});
                    if (found.size() >= limit) return found;
                }
                start = *i + 1;
            }
        }
        return found;
    }

    bool empty(const Candidate& c) const { return placement_empty(shape_, c.scale, c.offset, near(c)); }
    bool inside(const Candidate& c) const { return placement_inside(body_, shape_, c.scale, c.offset); }

    /// Iterated linear programs in (centre, scale): each point keeps out of the
    /// placement through one linearized constraint, so every step stays empty.
    Candidate polish(Candidate cur) const {
        const double circ = shape_.circumradius();
        for (int iter = 0; iter < 40; ++iter) {
            const double trust = cur.scale * circ;
            const double radius = trust + 2 * cur.scale * circ;
            std::vector<std::vector<double>> rows;
            std::vector<double> rhs;
            for (std::size_t k = 0; k < hps_.size(); ++k) {
                rows.push_back({hps_[k].normal.x, hps_[k].normal.y, unit_reach_[k]});
                rhs.push_back(std::max(0.0, hps_[k].offset - dot(hps_[k].normal, cur.offset) - cur.scale * unit_reach_[k]));
            }
            rows.push_back({1, 0, 0});
            rhs.push_back(trust);
            rows.push_back({-1, 0, 0});
            rhs.push_back(trust);
            rows.push_back({0, 1, 0});
            rhs.push_back(trust);
            rows.push_back({0, -1, 0});
            rhs.push_back(trust);
            rows.push_back({0, 0, 1});
            rhs.push_back(cur.scale);
            for (const Point& q : window(cur.offset.y, radius)) {
                const Point d = q - cur.offset;
                if (norm(d) > radius) continue;
                if (shape_.kind() == Shape::Kind::disk) {
                    const double len = norm(d);
                    if (len == 0.0) return cur;
                    const Point u = (1.0 / len) * d;
                    rows.push_back({u.x, u.y, shape_.radius()});
                    rhs.push_back(std::max(0.0, len - cur.scale * shape_.radius()));
                } else {
                    const auto out_hps = shape_.outline().halfplanes();
                    std::size_t best = 0;
                    double best_gap = -kInf;
                    for (std::size_t k = 0; k < out_hps.size(); ++k) {
                        const double g = dot(out_hps[k].normal, d) - cur.scale * out_hps[k].offset;
                        if (g > best_gap) {
                            best_gap = g;
                            best = k;
                        }
                    }
                    rows.push_back({out_hps[best].normal.x, out_hps[best].normal.y, out_hps[best].offset});
                    rhs.push_back(std::max(0.0, best_gap));
                }
            }
            const lp::Solution sol = lp::maximize({0.0, 0.0, 1.0}, rows, rhs);
            if (sol.status != lp::Status::optimal || sol.x[2] <= 1e-15 * cur.scale) break;
            const Candidate next{cur.scale + sol.x[2], cur.offset + Point{sol.x[0], sol.x[1]}};
            if (!empty(next) || !inside(next)) break;
            const bool small_step = sol.x[2] < 1e-13 * cur.scale;
            cur = next;
            if (small_step) break;
        }
        return cur;
    }

private:
    std::span<const Point> window(double cy, double half) const {
        const auto lo = std::lower_bound(pts_.begin(), pts_.end(), cy - half,
                                         [](const Point& p, double v) { return p.y < v; });
        const auto hi = std::upper_bound(pts_.begin(), pts_.end(), cy + half,
                                         [](double v, const Point& p) { return v < p.y; });
        return {pts_.data() + (lo - pts_.begin()), static_cast<std::size_t>(hi - lo)};
    }

    std::span<const Point> near(const Candidate& c) const {
        return window(c.offset.y, c.scale * shape_.circumradius() * (1 + 1e-9));
    }

    const ConvexBody& body_;
    const Shape& shape_;
    std::vector<Point> pts_;
    HomothetSearchOptions options_;
    std::vector<HalfPlane> hps_;
    std::vector<double> unit_reach_;
    std::optional<Chords> chords_;
    double gap_ = 0.0;
    Box box_{};
};

}  // namespace

HomothetPlacement search_empty_homothet(const ConvexBody& body, const Shape& shape, std::span<const Point> points,
                                        double epsilon, const HomothetSearchOptions& options) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(Errc::PreconditionViolation, "epsilon must lie in (0, 1)");
    const HomothetSearch search(body, shape, points, epsilon, options);
    const Candidate top = largest_inside(body, shape);
    Candidate best{0.0, centroid(body)};
    if (search.empty(top)) {
        best = top;
    } else {
        // Halve until something fits, then bisect the scale geometrically.
        double hi = top.scale;
        double lo = hi;
        std::vector<Candidate> found;
        for (int k = 0; k < 60 && found.empty(); ++k) {
            hi = lo;
            lo *= 0.5;
            found = search.find(lo);
        }
        if (!found.empty()) {
            best = found.front();
            for (int it = 0; it < options.iterations; ++it) {
                const double mid = std::sqrt(lo * hi);
                const auto c = search.find(mid);
                if (!c.empty()) {
                    lo = mid;
                    best = c.front();
                } else {
                    hi = mid;
                }
            }
        }
        if (options.polish && best.scale > 0.0) {
            // Several survivors at the final scale may sit in different local optima.
            for (const Candidate& c : search.find(lo, options.polish_starts)) {
                const Candidate p = search.polish(c);
                if (p.scale > best.scale) best = p;
            }
            const Candidate p = search.polish(best);
            if (p.scale > best.scale) best = p;
        }
    }
    return {best.scale, best.offset, shape.id()};
}

HomothetResult largest_empty_homothet(const ConvexBody& body, const Shape& shape, const PointSample& sample,
                                      const HomothetNet& net, const HomothetSearchOptions& options) {
    HomothetResult out;
    out.best = search_empty_homothet(body, shape, sample.points, net.epsilon, options);
    out.area = out.best.area();
    const NetEmptiness e = check_net_nonempty(net, sample.points);
    if (e.all_nonempty) {
        out.certified_upper = net.area_target();
    } else {
        out.empty_net_member = e.empty_placement;
    }
    return out;
}

HomothetResult largest_empty_homothet(const ConvexBody& body, const Shape& shape, const PointSample& sample,
                                      double epsilon, const HomothetSearchOptions& options) {
    if (sample.n < 16) {
        HomothetResult out;
        out.best = search_empty_homothet(body, shape, sample.points, epsilon, options);
        out.area = out.best.area();
        return out;
    }
    const HomothetNet net = build_homothet_net(body, shape, sample.n, epsilon);
    return largest_empty_homothet(body, shape, sample, net, options);
}

// ---------------------------------------------------------------------------
// Disk oracle

double largest_empty_disk_oracle(const OrientedRect& container, std::span<const Point> points) {
    if (points.size() > 500) throw Error(Errc::TooManyPoints, "disk oracle handles at most 500 points");
    const auto corners = container.corners();
    const Box box = bounding_box(std::span<const Point>(corners.data(), corners.size()));
    const std::vector<Point> pts(points.begin(), points.end());
    double best = 0.0;
    const auto wall_distance = [&](Point c) {
        return std::min({c.x - box.min_x, box.max_x - c.x, c.y - box.min_y, box.max_y - c.y});
    };
    const auto consider = [&](Point c) {
        if (!is_finite(c)) return;
        double r = wall_distance(c);
        if (r <= best) return;
        for (const Point& q : pts) {
            r = std::min(r, distance(c, q));
            if (r <= best) return;
        }
        best = r;
    };
    // Walls as lines: x = const (vertical) or y = const.
    struct Wall {
        bool vertical;
        double value;
    };
    const Wall walls[4] = {{true, box.min_x}, {true, box.max_x}, {false, box.min_y}, {false, box.max_y}};

    // Three walls and two opposite walls with one point.
    for (int a = 0; a < 4; a += 2) {
        const Wall& w0 = walls[a];
        const Wall& w1 = walls[a + 1];
        const double mid = 0.5 * (w0.value + w1.value);
        const double r = 0.5 * (w1.value - w0.value);
        for (const Wall& w2 : walls) {
            if (w2.vertical == w0.vertical) continue;
            for (double s : {-1.0, 1.0}) {
                const double along = w2.value + s * r;
                consider(w0.vertical ? Point{mid, along} : Point{along, mid});
            }
        }
        for (const Point& p : pts) {
            const double off = (w0.vertical ? p.x : p.y) - mid;
            const double rest = r * r - off * off;
            if (rest < 0) continue;
            for (double s : {-1.0, 1.0}) {
                const double along = (w0.vertical ? p.y : p.x) + s * std::sqrt(rest);
                consider(w0.vertical ? Point{mid, along} : Point{along, mid});
            }
        }
    }
    // Corners (two adjacent walls) with one point: c = corner + t (sx, sy).
    for (double cx : {box.min_x, box.max_x}) {
        for (double cy : {box.min_y, box.max_y}) {
            const double sx = cx == box.min_x ? 1.0 : -1.0;
            const double sy = cy == box.min_y ? 1.0 : -1.0;
            for (const Point& p : pts) {
                // |corner + t s - p|^2 = t^2
                const Point d{cx - p.x, cy - p.y};
                const double b = 2 * (sx * d.x + sy * d.y);
                const double cc = dot(d, d);
                // t^2 + b t + cc = 0
                const double disc = b * b - 4 * cc;
                if (disc < 0) continue;
                for (double s : {-1.0, 1.0}) {
                    const double t = (-b + s * std::sqrt(disc)) / 2;
                    if (t > 0) consider({cx + sx * t, cy + sy * t});
                }
            }
        }
    }
    // One wall and two points: on the bisector of p, q at equal distance to the wall.
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const Point m = 0.5 * (pts[i] + pts[j]);
            const Point e = pts[j] - pts[i];
            const double len = norm(e);
            if (len == 0.0) continue;
            const Point u{-e.y / len, e.x / len};
            const double h2 = 0.25 * len * len;
            for (const Wall& w : walls) {
                // |c - p|^2 = h2 + t^2 and the wall distance is linear in t.
                const double base = (w.vertical ? m.x : m.y) - w.value;
                const double slope = w.vertical ? u.x : u.y;
                // (base + slope t)^2 = h2 + t^2
                const double A = slope * slope - 1;
                const double B = 2 * base * slope;
                const double C = base * base - h2;
                if (std::fabs(A) < 1e-15) {
                    if (std::fabs(B) > 0) consider(m + (-C / B) * u);
                    continue;
                }
                const double disc = B * B - 4 * A * C;
                if (disc < 0) continue;
                for (double s : {-1.0, 1.0}) consider(m + ((-B + s * std::sqrt(disc)) / (2 * A)) * u);
            }
        }
    }
    // Three points: circumcentres.
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            for (std::size_t k = j + 1; k < pts.size(); ++k) {
                const Point a = pts[i], b = pts[j] - a, c = pts[k] - a;
                const double d = 2 * cross(b, c);
                if (d == 0.0) continue;
                const double bb = dot(b, b), cc2 = dot(c, c);
                const Point o{(c.y * bb - b.y * cc2) / d, (b.x * cc2 - c.x * bb) / d};
                if (norm(o) <= best) continue;
                consider(a + o);
            }
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Lower-bound partition

namespace {

// Convex pieces of rect minus a convex polygon inside it, in the rectangle's
// frame (rect centred at the origin, axis-parallel).
std::vector<Polygon> rect_minus_convex(double w, double h, const std::vector<Point>& hole) {
    std::vector<Polygon> out;
    const auto add = [&](Polygon p) {
        if (polygon_area(p) > 1e-18 * w * h) out.push_back(std::move(p));
    };
    // Split the hole into x-monotone lower and upper chains, left to right.
    const std::size_t k = hole.size();
    const auto pick = [&](auto better) {
        std::size_t b = 0;
        for (std::size_t i = 1; i < k; ++i) {
            if (better(hole[i], hole[b])) b = i;
        }
        return b;
    };
    const std::size_t left_low = pick([](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    const std::size_t left_high = pick([](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y > b.y); });
    const std::size_t right_low = pick([](Point a, Point b) { return a.x > b.x || (a.x == b.x && a.y < b.y); });
    const std::size_t right_high = pick([](Point a, Point b) { return a.x > b.x || (a.x == b.x && a.y > b.y); });
    std::vector<Point> lower, upper;
    for (std::size_t i = left_low;; i = (i + 1) % k) {
        lower.push_back(hole[i]);
        if (i == right_low) break;
    }
    for (std::size_t i = right_high;; i = (i + 1) % k) {
        upper.push_back(hole[i]);
        if (i == left_high) break;
    }
    std::reverse(upper.begin(), upper.end());
    const auto eval = [](const std::vector<Point>& chain, double x) {
        if (x <= chain.front().x) return chain.front().y;
        if (x >= chain.back().x) return chain.back().y;
        const auto it = std::upper_bound(chain.begin(), chain.end(), x, [](double v, const Point& p) { return v < p.x; });
        const Point b = *it, a = *(it - 1);
        return a.y + (b.y - a.y) * ((x - a.x) / (b.x - a.x));
    };
    std::vector<double> xs;
    for (const Point& v : hole) xs.push_back(v.x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    const double x0 = -w / 2, x1 = w / 2, y0 = -h / 2, y1 = h / 2;
    add({{x0, y0}, {xs.front(), y0}, {xs.front(), y1}, {x0, y1}});
    add({{xs.back(), y0}, {x1, y0}, {x1, y1}, {xs.back(), y1}});
    for (std::size_t s = 0; s + 1 < xs.size(); ++s) {
        const double a = xs[s], b = xs[s + 1];
        add({{a, y0}, {b, y0}, {b, eval(lower, b)}, {a, eval(lower, a)}});
        add({{a, eval(upper, a)}, {b, eval(upper, b)}, {b, y1}, {a, y1}});
    }
    return out;
}

}  // namespace

LowerBoundPartition lower_bound_partition(const ConvexBody& body, const Shape& shape, std::uint64_t n,
                                          double epsilon, std::span<const Point> points) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(Errc::PreconditionViolation, "epsilon must lie in (0, 1)");
    if (n < 3) throw Error(Errc::PreconditionViolation, "n must be at least 3");
    const double nd = static_cast<double>(n);
    const auto regions_total = static_cast<unsigned>(std::llround(nd / ((1 - epsilon) * std::log(nd))));
    if (regions_total < 2) throw Error(Errc::TooFewCells, "too few regions for the construction");
    const double region_area = area(body) / regions_total;
    const ConvexBody& l = shape.outline();
    const OrientedRect r = lassak_rectangles(l).circumscribed;
    const double fill = area(l) / r.area();
    unsigned m = (regions_total + 1) / 2;
    if (fill / m * area(body) < region_area * (1 + 1e-12)) m = regions_total / 2;

    LowerBoundPartition out;
    const std::vector<Region> first = equal_area_partition(body, m, r);
    std::vector<Polygon> rest;
    std::vector<Point> sweeps;
    for (const Region& reg : first) {
        if (!reg.is_homothet || !reg.cell) {
            for (const Polygon& p : reg.pieces) {
                rest.push_back(p);
                sweeps.push_back({1, 0});
            }
            continue;
        }
        const OrientedRect& cell = *reg.cell;
        const double k = std::sqrt(cell.area() / r.area());
        // L sits inside R, so k L + (cell.center - k R.center) sits inside the cell.
        const Point anchor = cell.center - k * r.center;
        const double sigma = std::sqrt(region_area / (k * k * area(l)));
        const double scale = k * sigma;
        const ConvexBody placed = l.scaled(scale).translated(anchor);
        Region hom;
        hom.pieces.push_back(placed.vertices());
        hom.is_homothet = true;
        out.regions.push_back(std::move(hom));
        out.homothet_flags.push_back(true);
        out.homothets.push_back(HomothetPlacement{scale, anchor, shape.id()});
        ++out.cells;
        // Remainder of the cell, cut in the cell's own frame.
        const AffineMap to_cell = AffineMap::rotation(-cell.inclination).compose(AffineMap::translation(-1.0 * cell.center));
        const AffineMap from_cell = to_cell.inverse();
        const Polygon local = transform(placed.vertices(), to_cell);
        const Point axis = cell.width_axis();
        for (const Polygon& piece : rect_minus_convex(cell.width, cell.height, local)) {
            rest.push_back(transform(piece, from_cell));
            sweeps.push_back(axis);
        }
    }
    const unsigned others = regions_total - out.cells;
    if (others > 0) {
        for (Region& reg : slice_equal_area(rest, sweeps, others)) {
            out.regions.push_back(std::move(reg));
            out.homothet_flags.push_back(false);
            out.homothets.emplace_back();
        }
    }
    out.empty_flags.assign(out.regions.size(), true);
    if (!out.regions.empty()) {
        const RegionIndex index(out.regions);
        for (const Point& p : points) out.empty_flags[index.locate(p)] = false;
    }
    for (std::size_t k = 0; k < out.regions.size(); ++k) {
        if (out.homothet_flags[k] && out.empty_flags[k]) out.empty_homothet_found = true;
    }
    return out;
}

LowerBoundPartition lower_bound_partition(const ConvexBody& body, const Shape& shape, std::uint64_t n,
                                          double epsilon, SeedSpec seed) {
    const PointSample s = sample_uniform(body, n, seed);
    return lower_bound_partition(body, shape, n, epsilon, s.points);
}

}  // namespace cvxhole
