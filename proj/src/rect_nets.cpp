#include "cvxhole/rect_nets.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>

#include "cvxhole/convex_ops.hpp"
#include "cvxhole/error.hpp"
#include "cvxhole/io.hpp"

namespace cvxhole {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::int64_t ceil_i(double x) { return static_cast<std::int64_t>(std::ceil(x)); }
std::int64_t floor_i(double x) { return static_cast<std::int64_t>(std::floor(x)); }

// Rectangle with side_u along theta, keeping theta as the inclination when
// side_u is the short side.
OrientedRect rect_along(Point center, double side_u, double side_v, double theta) {
    if (side_u <= side_v) return OrientedRect{center, side_u, side_v, theta};
    return OrientedRect::make(center, side_u, side_v, theta);
}

}  // namespace

double NetParams::width(int m) const { return std::pow(gamma, m) * w0; }
double NetParams::height(int m) const { return rho / std::pow(gamma, m + 3); }
double NetParams::dx(int m) const { return std::pow(gamma, m) * (gamma - 1.0) * w0 / 2.0; }
double NetParams::dy(int m) const { return rho * (gamma - 1.0) / (2.0 * std::pow(gamma, m + 3)); }

double NetParams::level_bound() const {
    // dx(m) * dy(m) does not depend on m.
    return 1.0 / (dx(0) * dy(0));
}

double NetParams::size_bound() const {
    return static_cast<double>(M) * static_cast<double>(t_count) * level_bound();
}

NetParams make_net_params(std::uint64_t n, double epsilon, const ConvexBody& body) {
    if (epsilon > 0.1) throw Error(Errc::EpsilonTooLarge, "epsilon must not exceed 0.1");
    if (!(epsilon > 0.0)) throw Error(Errc::PreconditionViolation, "epsilon must be positive");
    if (n < 16) throw Error(Errc::PreconditionViolation, "n must be at least 16");
    if (std::fabs(area(body) - 1.0) > 1e-9) throw Error(Errc::PreconditionViolation, "body must have area 1");
    if (!((2 + 4 * epsilon) * (1 - epsilon / 2) > 2 + 2 * epsilon)) {
        throw Error(Errc::EpsilonTooLarge, "quantization loss exceeds the area gap");
    }
    NetParams p;
    p.n = n;
    p.epsilon = epsilon;
    p.rho = diameter(body);
    const double nd = static_cast<double>(n);
    const double logn = std::log(nd);
    p.area_lo = (2 + epsilon) * logn / nd;
    p.area_mid = (2 + 2 * epsilon) * logn / nd;
    p.area_hi = (2 + 4 * epsilon) * logn / nd;
    p.theta0 = epsilon * (2 + 4 * epsilon) * logn / (4 * p.rho * p.rho * nd);
    p.gamma = std::cbrt((2 + 2 * epsilon) / (2 + epsilon));
    p.w0 = (2 + 2 * epsilon) * logn / (p.rho * nd);
    const double top = std::sqrt(p.area_mid);
    int M = static_cast<int>(std::ceil(std::log(top / p.w0) / std::log(p.gamma)));
    while (p.width(M - 1) >= top) --M;
    while (p.width(M) < top) ++M;
    p.M = std::max(M, 0);
    const double tc = std::ceil(std::numbers::pi / p.theta0);
    p.t_count = static_cast<std::uint64_t>(tc);
    if (static_cast<double>(p.t_count - 1) * p.theta0 >= std::numbers::pi) --p.t_count;
    return p;
}

OrientedRect quantize_rectangle(const OrientedRect& r, const NetParams& params, const ConvexBody& body) {
    if (std::fabs(r.area() - params.area_hi) > 1e-9 * params.area_hi) {
        throw Error(Errc::PreconditionViolation, "rectangle area must be (2+4eps) log n / n");
    }
    if (!body_contains_rect(body, r)) throw Error(Errc::PreconditionViolation, "rectangle escapes the body");
    const double theta = r.inclination;
    const double steps = std::floor(theta / params.theta0);
    const auto t = static_cast<std::uint64_t>(steps);
    const double phi = theta - steps * params.theta0;
    if (phi == 0.0) return r;
    const double w = r.width;
    const double h = r.height;
    const double tn = std::tan(phi);
    // Local frame: x along the width axis, y along the height axis. Corners in
    // clockwise order with ab, cd the long sides.
    const Point a{-w / 2, -h / 2}, b{-w / 2, h / 2}, c{w / 2, h / 2}, d{w / 2, -h / 2};
    const Point a1{-w / 2 + h * tn, h / 2};
    const Point b1{w / 2, h / 2 - w * tn};
    const Point c1{w / 2 - h * tn, -h / 2};
    const Point d1{-w / 2, -h / 2 + w * tn};
    const auto meet = [](Point p, Point p1, Point q, Point q1) {
        const Point e = p1 - p;
        const Point f = q1 - q;
        const double s = cross(q - p, f) / cross(e, f);
        return p + s * e;
    };
    // aa' and cc' meet bb' and dd' in the corners of the new rectangle.
    const Point k0 = meet(a, a1, d, d1);
    const Point k1 = meet(a, a1, b, b1);
    const Point k2 = meet(c, c1, b, b1);
    const Point k3 = meet(c, c1, d, d1);
    const double new_w = distance(k1, k2);
    const double new_h = distance(k0, k1);
    if (!(new_w > 0.0 && new_h > 0.0) || cross(k1 - k0, k2 - k1) >= 0.0) {
        throw Error(Errc::PreconditionViolation, "rotation collapses the rectangle");
    }
    const Point centre_local = 0.25 * (k0 + k1 + k2 + k3);
    const Point centre = r.center + centre_local.x * r.width_axis() + centre_local.y * r.height_axis();
    // The shrink by 1e-12 keeps rounded corners inside r.
    constexpr double kShrink = 1.0 - 1e-12;
    return rect_along(centre, new_w * kShrink, new_h * kShrink, params.inclination(t));
}

OrientedRect member_rect(const NetParams& params, const NetMember& member) {
    const double theta = params.inclination(member.t);
    const Point u{std::cos(theta), std::sin(theta)};
    const Point v{-u.y, u.x};
    const Point centre = (static_cast<double>(member.i) * params.dx(member.m)) * u +
                         (static_cast<double>(member.j) * params.dy(member.m)) * v;
    return rect_along(centre, params.width(member.m), params.height(member.m), theta);
}

namespace detail {

LevelFrame level_frame(const ConvexBody& body, const NetParams& params, int m, std::uint64_t t) {
    LevelFrame f;
    f.w = params.width(m);
    f.h = params.height(m);
    f.dx = params.dx(m);
    f.dy = params.dy(m);
    const double theta = params.inclination(t);
    f.u = {std::cos(theta), std::sin(theta)};
    f.v = {-f.u.y, f.u.x};
    for (const HalfPlane& hp : body.halfplanes()) {
        const Point n{dot(f.u, hp.normal), dot(f.v, hp.normal)};
        f.shifted.push_back({n, hp.offset - (std::fabs(n.x) * f.w / 2 + std::fabs(n.y) * f.h / 2)});
    }
    return f;
}

std::pair<std::int64_t, std::int64_t> row_range(const LevelFrame& f, std::int64_t j) {
    const double cy = static_cast<double>(j) * f.dy;
    double lo = -kInf, hi = kInf;
    for (const HalfPlane& hp : f.shifted) {
        const double rhs = hp.offset - hp.normal.y * cy;
        if (hp.normal.x > 1e-15) {
            hi = std::min(hi, rhs / hp.normal.x);
        } else if (hp.normal.x < -1e-15) {
            lo = std::max(lo, rhs / hp.normal.x);
        } else if (rhs < 0.0) {
            return {1, 0};
        }
    }
    if (!(lo <= hi)) return {1, 0};
    return {ceil_i(lo / f.dx), floor_i(hi / f.dx)};
}

std::pair<std::int64_t, std::int64_t> rows(const LevelFrame& f, const ConvexBody& body) {
    double ymin = kInf, ymax = -kInf;
    for (const Point& p : body.vertices()) {
        ymin = std::min(ymin, dot(f.v, p));
        ymax = std::max(ymax, dot(f.v, p));
    }
    return {ceil_i((ymin + f.h / 2) / f.dy) - 1, floor_i((ymax - f.h / 2) / f.dy) + 1};
}

}  // namespace detail

std::uint64_t count_level_members(const ConvexBody& body, const NetParams& params, int m, std::uint64_t t) {
    const detail::LevelFrame f = detail::level_frame(body, params, m, t);
    const auto [j0, j1] = detail::rows(f, body);
    std::uint64_t total = 0;
    const auto inside = [&](std::int64_t i, std::int64_t j) {
        return body_contains_rect(body, member_rect(params, {m, t, i, j}));
    };
    for (std::int64_t j = j0; j <= j1; ++j) {
        auto [i0, i1] = detail::row_range(f, j);
        if (i0 > i1) {
            // Rounding may hide a single member; probe it exactly.
            if (i0 == i1 + 1 && (inside(i1, j) || inside(i0, j))) ++total;
            continue;
        }
        // Members inside a convex body form an interval along a row; settle the
        // end points exactly.
        while (i0 <= i1 && !inside(i0, j)) ++i0;
        while (i1 >= i0 && !inside(i1, j)) --i1;
        if (i0 > i1) continue;
        while (inside(i0 - 1, j)) --i0;
        while (inside(i1 + 1, j)) ++i1;
        total += static_cast<std::uint64_t>(i1 - i0 + 1);
    }
    return total;
}

RectNet build_rect_net(const ConvexBody& body, const NetParams& params, LevelRange range, std::size_t max_rects) {
    RectNet net;
    net.params = params;
    const int m_lo = std::max(range.m_lo, params.min_level());
    const int m_hi = range.m_hi == -2 || range.m_hi > params.max_level() ? params.max_level() : range.m_hi;
    const std::uint64_t t_hi = range.t_hi == 0 ? params.t_count : std::min(range.t_hi, params.t_count);
    const double bound = params.level_bound();
    for (int m = m_lo; m <= m_hi; ++m) {
        for (std::uint64_t t = range.t_lo; t < t_hi; ++t) {
            const std::size_t begin = net.rects.size();
            for_each_level_member(body, params, m, t, [&](const NetMember& member, const OrientedRect& r) {
                if (net.rects.size() >= max_rects) {
                    throw Error(Errc::PreconditionViolation, "net exceeds the materialization limit");
                }
                net.rects.push_back(r);
                net.members.push_back(member);
            });
            if (static_cast<double>(net.rects.size() - begin) > bound) {
                throw Error(Errc::NetTooLarge, "level holds more members than the packing bound");
            }
            net.level_index[{m, t}] = {begin, net.rects.size()};
        }
    }
    return net;
}

NetMember net_witness_member(const OrientedRect& q, const NetParams& params) {
    const double width = q.width;
    // Level with gamma^(m+1) w0 <= w(q) < gamma^(m+2) w0.
    int m = static_cast<int>(std::floor(std::log(width / params.w0) / std::log(params.gamma))) - 1;
    while (params.width(m + 1) > width && m > params.min_level()) --m;
    while (params.width(m + 2) <= width && m < params.max_level()) ++m;
    m = std::clamp(m, params.min_level(), params.max_level());
    double steps = std::round(q.inclination / params.theta0);
    auto t = static_cast<std::uint64_t>(steps);
    if (t >= params.t_count) t -= params.t_count;
    const double theta = params.inclination(t);
    const Point u{std::cos(theta), std::sin(theta)};
    const Point v{-u.y, u.x};
    return {m, t, static_cast<std::int64_t>(std::llround(dot(u, q.center) / params.dx(m))),
            static_cast<std::int64_t>(std::llround(dot(v, q.center) / params.dy(m)))};
}

OrientedRect net_witness(const OrientedRect& q, const NetParams& params, const ConvexBody& body) {
    const NetMember member = net_witness_member(q, params);
    const OrientedRect r = member_rect(params, member);
    if (!rect_contains_rect(q, r) || !body_contains_rect(body, r)) {
        throw Error(Errc::WitnessNotFound, "prescribed net member is not inside the query rectangle");
    }
    return r;
}

OrientedRect net_contains_witness(const OrientedRect& q, const RectNet& net, const ConvexBody& body) {
    const NetMember member = net_witness_member(q, net.params);
    const OrientedRect r = net_witness(q, net.params, body);
    const auto it = net.level_index.find({member.m, member.t});
    if (it != net.level_index.end()) {
        // Materialized level: the witness must be one of its members.
        const auto [b, e] = it->second;
        if (std::find(net.members.begin() + static_cast<std::ptrdiff_t>(b),
                      net.members.begin() + static_cast<std::ptrdiff_t>(e), member) ==
            net.members.begin() + static_cast<std::ptrdiff_t>(e)) {
            throw Error(Errc::WitnessNotFound, "witness missing from the materialized level");
        }
    }
    return r;
}

OrientedRect shrink_to_area(const OrientedRect& r, double target_area) {
    const double s = std::sqrt(target_area / r.area());
    return OrientedRect{r.center, r.width * s, r.height * s, r.inclination};
}

std::optional<ConvexBody> rect_center_region(const ConvexBody& body, double side_u, double side_v, double theta) {
    const Point u{std::cos(theta), std::sin(theta)};
    const Point v{-u.y, u.x};
    Polygon poly = body.vertices();
    for (const HalfPlane& hp : body.halfplanes()) {
        const double reach = std::fabs(dot(hp.normal, u)) * side_u / 2 + std::fabs(dot(hp.normal, v)) * side_v / 2;
        poly = clip_halfplane(poly, hp.normal, hp.offset - reach);
        if (poly.size() < 3) return std::nullopt;
    }
    return ConvexBody::from_convex_chain(poly);
}

void write_net_jsonl(std::ostream& out, const RectNet& net) {
    for (std::size_t k = 0; k < net.rects.size(); ++k) {
        auto j = rect_to_json(net.rects[k]);
        if (k < net.members.size()) {
            j["m"] = net.members[k].m;
            j["t"] = net.members[k].t;
            j["i"] = net.members[k].i;
            j["j"] = net.members[k].j;
        }
        out << j.dump() << '\n';
    }
}

std::vector<OrientedRect> read_net_jsonl(std::istream& in) {
    std::vector<OrientedRect> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(rect_from_json(parse_json(line)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Largest empty axis-parallel rectangle.

namespace {

struct XY {
    double x, y;
};

// Maximal empty boxes whose left side passes through pts[a] (strictly inside
// that side). visit(x0, x1, lo, hi) gets each one; prune(px, lo, hi) is asked
// whenever the strip narrows and ends the scan when it returns true.
template <class Prune, class Visit>
void scan_right(const std::vector<XY>& pts, std::size_t a, const Box& box, Prune&& prune, Visit&& visit) {
    const double px = pts[a].x;
    const double py = pts[a].y;
    double lo = box.min_y, hi = box.max_y;
    if (!(py > lo && py < hi)) return;
    if (prune(px, lo, hi)) return;
    const std::size_t n = pts.size();
    std::size_t b = a + 1;
    while (b < n && pts[b].x == px) ++b;
    double visited_x = px;
    for (; b < n; ++b) {
        const double y = pts[b].y;
        if (y <= lo || y >= hi) continue;
        const double x = pts[b].x;
        if (x != visited_x) {
            visit(px, x, lo, hi);
            visited_x = x;
        }
        if (y > py) {
            hi = y;
        } else if (y < py) {
            lo = y;
        } else {
            return;
        }
        if (prune(px, lo, hi)) return;
    }
    visit(px, box.max_x, lo, hi);
}

std::vector<XY> sorted_by_x(std::span<const Point> points) {
    std::vector<XY> pts;
    pts.reserve(points.size());
    for (const Point& p : points) pts.push_back({p.x, p.y});
    std::sort(pts.begin(), pts.end(), [](const XY& a, const XY& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    return pts;
}

std::vector<XY> mirrored(const std::vector<XY>& pts) {
    std::vector<XY> out(pts.rbegin(), pts.rend());
    for (auto& p : out) p.x = -p.x;
    return out;
}

Box mirrored(const Box& b) { return {-b.max_x, b.min_y, -b.min_x, b.max_y}; }

// Full-width slabs between consecutive y values.
template <class Visit>
void scan_slabs(const std::vector<XY>& pts, const Box& box, Visit&& visit) {
    std::vector<double> ys;
    ys.reserve(pts.size() + 2);
    ys.push_back(box.min_y);
    for (const auto& p : pts) ys.push_back(p.y);
    ys.push_back(box.max_y);
    std::sort(ys.begin(), ys.end());
    for (std::size_t k = 0; k + 1 < ys.size(); ++k) {
        if (ys[k + 1] > ys[k]) visit(box.min_x, box.max_x, ys[k], ys[k + 1]);
    }
}

}  // namespace

EmptyRect max_empty_axis_rect(const Box& box, std::span<const Point> points) {
    const std::vector<XY> pts = sorted_by_x(points);
    double best = box.width() * box.height();
    Box best_box = box;
    if (pts.empty()) return {OrientedRect::axis_aligned(box.min_x, box.min_y, box.max_x, box.max_y), best, box};
    best = 0.0;
    const auto consider = [&](double x0, double x1, double y0, double y1) {
        const double a = (x1 - x0) * (y1 - y0);
        if (a > best) {
            best = a;
            best_box = {x0, y0, x1, y1};
        }
    };
    scan_slabs(pts, box, consider);
    for (std::size_t a = 0; a < pts.size(); ++a) {
        scan_right(
            pts, a, box, [&](double px, double lo, double hi) { return (hi - lo) * (box.max_x - px) <= best; },
            consider);
    }
    const std::vector<XY> mir = mirrored(pts);
    const Box mbox = mirrored(box);
    for (std::size_t a = 0; a < mir.size(); ++a) {
        scan_right(
            mir, a, mbox, [&](double px, double lo, double hi) { return (hi - lo) * (mbox.max_x - px) <= best; },
            [&](double x0, double x1, double y0, double y1) {
                if (x1 == mbox.max_x) consider(-x1, -x0, y0, y1);
            });
    }
    return {OrientedRect::axis_aligned(best_box.min_x, best_box.min_y, best_box.max_x, best_box.max_y), best,
            best_box};
}

EmptyRect max_empty_axis_rect(const OrientedRect& container, std::span<const Point> points) {
    const auto c = container.corners();
    return max_empty_axis_rect(bounding_box(std::span<const Point>(c.data(), c.size())), points);
}

double max_empty_axis_rect_oracle(const OrientedRect& container, std::span<const Point> points) {
    if (points.size() > 60) throw Error(Errc::TooManyPoints, "oracle handles at most 60 points");
    const auto corners = container.corners();
    const Box box = bounding_box(std::span<const Point>(corners.data(), corners.size()));
    std::vector<double> xs{box.min_x, box.max_x}, ys{box.min_y, box.max_y};
    for (const Point& p : points) {
        xs.push_back(p.x);
        ys.push_back(p.y);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    double best = 0.0;
    for (std::size_t i0 = 0; i0 < xs.size(); ++i0) {
        for (std::size_t i1 = i0 + 1; i1 < xs.size(); ++i1) {
            for (std::size_t j0 = 0; j0 < ys.size(); ++j0) {
                for (std::size_t j1 = j0 + 1; j1 < ys.size(); ++j1) {
                    const double a = (xs[i1] - xs[i0]) * (ys[j1] - ys[j0]);
                    if (a <= best) continue;
                    bool empty = true;
                    for (const Point& p : points) {
                        if (p.x > xs[i0] && p.x < xs[i1] && p.y > ys[j0] && p.y < ys[j1]) {
                            empty = false;
                            break;
                        }
                    }
                    if (empty) best = a;
                }
            }
        }
    }
    return best;
}

EmptyRect lassak_frame_empty_rect(const ConvexBody& body, std::span<const Point> points) {
    const OrientedRect s = lassak_rectangles(body).inscribed;
    const AffineMap to_frame = AffineMap::rotation(-s.inclination);
    const Point c = to_frame(s.center);
    const Box box{c.x - s.width / 2, c.y - s.height / 2, c.x + s.width / 2, c.y + s.height / 2};
    std::vector<Point> inside;
    for (const Point& p : points) {
        const Point q = to_frame(p);
        if (q.x >= box.min_x && q.x <= box.max_x && q.y >= box.min_y && q.y <= box.max_y) inside.push_back(q);
    }
    EmptyRect e = max_empty_axis_rect(box, inside);
    const AffineMap back = to_frame.inverse();
    e.rect = OrientedRect::make(back(e.rect.center), e.rect.width, e.rect.height,
                                e.rect.inclination + s.inclination);
    return e;
}

const char* net_status_name(NetStatus s) {
    switch (s) {
        case NetStatus::certified: return "certified";
        case NetStatus::not_certified: return "not_certified";
        case NetStatus::undecided: return "undecided";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Certification scan.

namespace {

class FrameScanner {
public:
    FrameScanner(const ConvexBody& body, std::span<const Point> points, const NetParams& params)
        : body_(body), world_(points.begin(), points.end()), params_(params) {
        w_max_ = params.width(params.max_level());
        h_min_ = params.height(params.max_level());
        a_min_ = params.area_lo * (1.0 - 1e-9);
        h_floor_ = params.area_lo / w_max_ * (1.0 - 1e-9);
        log_gamma_ = std::log(params.gamma);
        order_.resize(world_.size());
        for (std::size_t k = 0; k < order_.size(); ++k) order_[k] = k;
    }

    /// Returns an empty member of frame t if there is one.
    std::optional<NetMember> scan(std::uint64_t t, bool continues_previous) {
        t_ = t;
        const double theta = params_.inclination(t);
        u_ = {std::cos(theta), std::sin(theta)};
        v_ = {-u_.y, u_.x};
        frame_body_.clear();
        for (const Point& p : body_.vertices()) frame_body_.push_back({dot(u_, p), dot(v_, p)});
        frame_planes_.clear();
        for (const HalfPlane& hp : body_.halfplanes()) {
            frame_planes_.push_back({{dot(u_, hp.normal), dot(v_, hp.normal)}, hp.offset});
        }
        box_ = bounding_box(frame_body_);
        build_chains();
        rotate_and_sort(continues_previous);

        found_.reset();
        const auto prune = [&](double px, double lo, double hi) {
            const double hgt = hi - lo;
            return found_.has_value() || hgt < h_floor_ || hgt * (box_.max_x - px) < a_min_ ||
                   hgt * (right_extent(lo, hi) - px) < a_min_;
        };
        for (std::size_t a = 0; a < pts_.size() && !found_; ++a) {
            scan_right(pts_, a, box_, prune, [&](double x0, double x1, double y0, double y1) {
                candidate(x0, x1, y0, y1);
            });
        }
        if (found_) return found_;
        mir_ = mirrored(pts_);
        const Box mbox = mirrored(box_);
        const auto mprune = [&](double px, double lo, double hi) {
            const double hgt = hi - lo;
            return found_.has_value() || hgt < h_floor_ || hgt * (mbox.max_x - px) < a_min_ ||
                   hgt * (-left_extent(lo, hi) - px) < a_min_;
        };
        for (std::size_t a = 0; a < mir_.size() && !found_; ++a) {
            // Boxes between two points were seen by the forward scan.
            scan_right(mir_, a, mbox, mprune, [&](double x0, double x1, double y0, double y1) {
                if (x1 == mbox.max_x) candidate(-x1, -x0, y0, y1);
            });
        }
        if (found_) return found_;
        scan_slabs(pts_, box_, [&](double x0, double x1, double y0, double y1) {
            if (!found_ && y1 - y0 >= h_min_ * (1 - 1e-9)) candidate(x0, x1, y0, y1);
        });
        return found_;
    }

private:
    // Right and left boundary of the rotated body, each by increasing y.
    void build_chains() {
        const std::size_t k = frame_body_.size();
        std::size_t bottom = 0, top = 0;
        for (std::size_t i = 1; i < k; ++i) {
            const Point& p = frame_body_[i];
            const Point& b = frame_body_[bottom];
            const Point& t = frame_body_[top];
            if (p.y < b.y || (p.y == b.y && p.x > b.x)) bottom = i;
            if (p.y > t.y || (p.y == t.y && p.x > t.x)) top = i;
        }
        right_.clear();
        for (std::size_t i = bottom;; i = (i + 1) % k) {
            right_.push_back(frame_body_[i]);
            if (i == top) break;
        }
        std::size_t top_left = top, bottom_left = bottom;
        for (std::size_t i = 0; i < k; ++i) {
            const Point& p = frame_body_[i];
            if (p.y == frame_body_[top].y && p.x < frame_body_[top_left].x) top_left = i;
            if (p.y == frame_body_[bottom].y && p.x < frame_body_[bottom_left].x) bottom_left = i;
        }
        left_.clear();
        for (std::size_t i = top_left;; i = (i + 1) % k) {
            left_.push_back(frame_body_[i]);
            if (i == bottom_left) break;
        }
        std::reverse(left_.begin(), left_.end());
        right_peak_ = *std::max_element(right_.begin(), right_.end(), [](Point a, Point b) { return a.x < b.x; });
        left_peak_ = *std::min_element(left_.begin(), left_.end(), [](Point a, Point b) { return a.x < b.x; });
    }

    static double chain_x(const std::vector<Point>& chain, double y) {
        if (y <= chain.front().y) return chain.front().x;
        if (y >= chain.back().y) return chain.back().x;
        const auto it = std::upper_bound(chain.begin(), chain.end(), y, [](double v, const Point& p) { return v < p.y; });
        const Point& b = *it;
        const Point& a = *(it - 1);
        return a.x + (b.x - a.x) * ((y - a.y) / (b.y - a.y));
    }

    // Largest x of the body within the strip lo <= y <= hi (slightly padded).
    double right_extent(double lo, double hi) const {
        double x;
        if (right_peak_.y >= lo && right_peak_.y <= hi) {
            x = right_peak_.x;
        } else {
            x = chain_x(right_, right_peak_.y < lo ? lo : hi);
        }
        return x + 1e-12 * (box_.max_x - box_.min_x);
    }

    double left_extent(double lo, double hi) const {
        double x;
        if (left_peak_.y >= lo && left_peak_.y <= hi) {
            x = left_peak_.x;
        } else {
            x = chain_x(left_, left_peak_.y < lo ? lo : hi);
        }
        return x - 1e-12 * (box_.max_x - box_.min_x);
    }

    void rotate_and_sort(bool incremental) {
        const std::size_t n = world_.size();
        pts_.resize(n);
        if (!incremental) {
            std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
                return dot(u_, world_[a]) < dot(u_, world_[b]);
            });
        }
        for (std::size_t k = 0; k < n; ++k) {
            const Point& p = world_[order_[k]];
            pts_[k] = {dot(u_, p), dot(v_, p)};
        }
        // Small rotations only swap a few neighbours.
        for (std::size_t k = 1; k < n; ++k) {
            std::size_t j = k;
            while (j > 0 && (pts_[j - 1].x > pts_[j].x || (pts_[j - 1].x == pts_[j].x && pts_[j - 1].y > pts_[j].y))) {
                std::swap(pts_[j - 1], pts_[j]);
                std::swap(order_[j - 1], order_[j]);
                --j;
            }
        }
    }

    double clipped_area(double x0, double x1, double y0, double y1) const {
        bool inside = true;
        const Point corners[4] = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
        for (const auto& hp : frame_planes_) {
            for (const Point& c : corners) {
                if (dot(hp.normal, c) > hp.offset) inside = false;
            }
        }
        if (inside) return (x1 - x0) * (y1 - y0);
        Polygon poly = frame_body_;
        poly = clip_halfplane(poly, {1, 0}, x1);
        poly = clip_halfplane(poly, {-1, 0}, -x0);
        poly = clip_halfplane(poly, {0, 1}, y1);
        poly = clip_halfplane(poly, {0, -1}, -y0);
        return polygon_area(poly);
    }

    void candidate(double x0, double x1, double y0, double y1) {
        if (found_) return;
        const double ew = x1 - x0;
        const double eh = y1 - y0;
        if (ew * eh < a_min_) return;
        if ((std::min(x1, right_extent(y0, y1)) - std::max(x0, left_extent(y0, y1))) * eh < a_min_) return;
        // The body's width inside the box is concave in y; when it is positive
        // at both ends its mean is at most its value at the middle.
        const auto span = [&](double y) { return std::min(x1, chain_x(right_, y)) - std::max(x0, chain_x(left_, y)); };
        if (span(y0) >= 0 && span(y1) >= 0 && span(0.5 * (y0 + y1)) * eh * (1 - 1e-12) < a_min_) return;
        if (clipped_area(x0, x1, y0, y1) < a_min_) return;
        const int m_hi = std::min(params_.max_level(),
                                  static_cast<int>(std::floor(std::log(ew / params_.w0) / log_gamma_)) + 1);
        const int m_lo = std::max(params_.min_level(),
                                  static_cast<int>(std::ceil(std::log(params_.rho / eh) / log_gamma_)) - 4);
        for (int m = m_lo; m <= m_hi && !found_; ++m) {
            const double w = params_.width(m);
            const double h = params_.height(m);
            if (w > ew * (1 + 1e-12) || h > eh * (1 + 1e-12)) continue;
            const double dx = params_.dx(m);
            const double dy = params_.dy(m);
            const std::int64_t j0 = ceil_i((y0 + h / 2) / dy) - 1;
            const std::int64_t j1 = floor_i((y1 - h / 2) / dy) + 1;
            for (std::int64_t j = j0; j <= j1 && !found_; ++j) {
                const double cy = static_cast<double>(j) * dy;
                if (cy - h / 2 < y0 - 1e-12 * eh || cy + h / 2 > y1 + 1e-12 * eh) continue;
                double lo = x0 + w / 2, hi = x1 - w / 2;
                for (const auto& hp : frame_planes_) {
                    const double rhs = hp.offset - std::fabs(hp.normal.x) * w / 2 - std::fabs(hp.normal.y) * h / 2 -
                                       hp.normal.y * cy;
                    if (hp.normal.x > 1e-15) {
                        hi = std::min(hi, rhs / hp.normal.x);
                    } else if (hp.normal.x < -1e-15) {
                        lo = std::max(lo, rhs / hp.normal.x);
                    } else if (rhs < 0) {
                        hi = -kInf;
                    }
                }
                const double slack = 1e-12 * ew;
                for (std::int64_t i = ceil_i((lo - slack) / dx); static_cast<double>(i) * dx <= hi + slack; ++i) {
                    const NetMember member{m, t_, i, j};
                    if (verify(member)) {
                        found_ = member;
                        break;
                    }
                }
            }
        }
    }

    bool verify(const NetMember& member) const {
        const OrientedRect r = member_rect(params_, member);
        if (!body_contains_rect(body_, r)) return false;
        const double cx = static_cast<double>(member.i) * params_.dx(member.m);
        const double cy = static_cast<double>(member.j) * params_.dy(member.m);
        const double hw = params_.width(member.m) / 2 * (1 + 1e-9);
        const double hh = params_.height(member.m) / 2 * (1 + 1e-9);
        auto it = std::lower_bound(pts_.begin(), pts_.end(), cx - hw, [](const XY& p, double x) { return p.x < x; });
        for (; it != pts_.end() && it->x <= cx + hw; ++it) {
            if (std::fabs(it->y - cy) > hh) continue;
            const Point world = it->x * u_ + it->y * v_;
            (void)world;
            // Decide with the exact predicate on the original point.
            const std::size_t k = static_cast<std::size_t>(it - pts_.begin());
            if (contains_point(r, world_[order_[k]], Boundary::open)) return false;
        }
        return true;
    }

    const ConvexBody& body_;
    std::vector<Point> world_;
    const NetParams& params_;
    double w_max_, h_min_, a_min_, h_floor_, log_gamma_;
    std::uint64_t t_ = 0;
    Point u_{}, v_{};
    Polygon frame_body_;
    std::vector<HalfPlane> frame_planes_;
    Box box_{};
    std::vector<Point> right_, left_;
    Point right_peak_{}, left_peak_{};
    std::vector<std::size_t> order_;
    std::vector<XY> pts_, mir_;
    std::optional<NetMember> found_;
};

// Visiting order: blocks of consecutive inclinations (cheap re-sorting), the
// blocks themselves in bit-reversed order so early frames spread out.
std::vector<std::uint64_t> frame_order(std::uint64_t count) {
    constexpr std::uint64_t kBlock = 64;
    const std::uint64_t blocks = (count + kBlock - 1) / kBlock;
    int bits = 0;
    while ((std::uint64_t{1} << bits) < blocks) ++bits;
    std::vector<std::uint64_t> order;
    order.reserve(count);
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << bits) || (bits == 0 && k < 1); ++k) {
        std::uint64_t r = 0;
        for (int b = 0; b < bits; ++b) r |= ((k >> b) & 1u) << (bits - 1 - b);
        if (r >= blocks) continue;
        for (std::uint64_t t = r * kBlock; t < std::min(count, (r + 1) * kBlock); ++t) order.push_back(t);
    }
    return order;
}

}  // namespace

NetCertificate net_max_empty_rect(const ConvexBody& body, const PointSample& sample, const NetParams& params,
                                  const NetScanOptions& options) {
    NetCertificate cert;
    cert.upper_certified = kInf;
    const EmptyRect axis = lassak_frame_empty_rect(body, sample.points);
    cert.lower = axis.area;
    cert.lower_rect = axis.rect;
    if (params.M <= 0) return cert;

    FrameScanner scanner(body, sample.points, params);
    const std::vector<std::uint64_t> order = frame_order(params.t_count);
    const std::uint64_t budget = options.max_frames == 0 ? params.t_count : std::min(options.max_frames, params.t_count);
    std::uint64_t prev = std::numeric_limits<std::uint64_t>::max();
    for (std::uint64_t k = 0; k < budget; ++k) {
        const std::uint64_t t = order[k];
        const auto member = scanner.scan(t, prev != std::numeric_limits<std::uint64_t>::max() && t == prev + 1);
        prev = t;
        ++cert.frames_scanned;
        if (member) {
            cert.status = NetStatus::not_certified;
            cert.empty_member = member;
            if (params.area_lo > cert.lower) {
                cert.lower = params.area_lo;
                cert.lower_rect = member_rect(params, *member);
            }
            return cert;
        }
    }
    if (cert.frames_scanned == params.t_count) {
        cert.status = NetStatus::certified;
        cert.upper_certified = params.area_hi;
    }
    return cert;
}

}  // namespace cvxhole
