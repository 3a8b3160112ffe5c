#include "cvxhole/geometry.hpp"

#include <algorithm>
#include <numbers>

#include "cvxhole/error.hpp"
#include "cvxhole/predicates.hpp"

namespace cvxhole {

double signed_area(std::span<const Point> poly) {
    const std::size_t n = poly.size();
    if (n < 3) return 0.0;
    // Shoelace relative to the first vertex keeps cancellation small.
    double acc = 0.0;
    const Point o = poly[0];
    for (std::size_t i = 1; i + 1 < n; ++i) acc += cross(poly[i] - o, poly[i + 1] - o);
    return 0.5 * acc;
}

double polygon_area(std::span<const Point> poly) { return std::fabs(signed_area(poly)); }

Point polygon_centroid(std::span<const Point> poly) {
    const std::size_t n = poly.size();
    if (n == 0) return {};
    const Point o = poly[0];
    double a2 = 0.0;
    Point acc{};
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const Point p = poly[i] - o;
        const Point q = poly[i + 1] - o;
        const double c = cross(p, q);
        a2 += c;
        acc = acc + c * (p + q);
    }
    if (a2 == 0.0) {
        Point mean{};
        for (const Point& p : poly) mean = mean + p;
        return (1.0 / static_cast<double>(n)) * mean;
    }
    return o + (1.0 / (3.0 * a2)) * acc;
}

Polygon clip_halfplane(std::span<const Point> poly, Point normal, double offset) {
    Polygon out;
    const std::size_t n = poly.size();
    if (n == 0) return out;
    out.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const Point& p = poly[i];
        const Point& q = poly[(i + 1) % n];
        const double dp = dot(normal, p) - offset;
        const double dq = dot(normal, q) - offset;
        if (dp <= 0.0) out.push_back(p);
        if ((dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0)) {
            const double t = dp / (dp - dq);
            out.push_back(p + t * (q - p));
        }
    }
    return out;
}

Box bounding_box(std::span<const Point> pts) {
    Box b{INFINITY, INFINITY, -INFINITY, -INFINITY};
    for (const Point& p : pts) {
        b.min_x = std::min(b.min_x, p.x);
        b.min_y = std::min(b.min_y, p.y);
        b.max_x = std::max(b.max_x, p.x);
        b.max_y = std::max(b.max_y, p.y);
    }
    return b;
}

namespace {

bool locally_convex(const std::vector<Point>& v) {
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (orientation(v[i], v[(i + 1) % n], v[(i + 2) % n]) <= 0) return false;
    }
    return true;
}

// Total turning of the edge directions; 2*pi for a simple convex chain.
double total_turning(const std::vector<Point>& v) {
    const std::size_t n = v.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point e0 = v[(i + 1) % n] - v[i];
        const Point e1 = v[(i + 2) % n] - v[(i + 1) % n];
        total += std::atan2(cross(e0, e1), dot(e0, e1));
    }
    return total;
}

}  // namespace

ConvexBody::ConvexBody(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 3) throw Error(Errc::InvalidBody, "fewer than three vertices");
    for (const Point& p : vertices_) {
        if (!is_finite(p)) throw Error(Errc::InvalidBody, "non-finite coordinate");
    }
    if (!locally_convex(vertices_)) {
        throw Error(Errc::InvalidBody, "vertex chain is not strictly convex counter-clockwise");
    }
    if (std::fabs(total_turning(vertices_) - 2.0 * std::numbers::pi) > 1e-6) {
        throw Error(Errc::InvalidBody, "vertex chain winds more than once");
    }
}

std::optional<ConvexBody> ConvexBody::from_convex_chain(std::span<const Point> chain,
                                                        double rel_tol) {
    std::vector<Point> v(chain.begin(), chain.end());
    if (v.size() < 3) return std::nullopt;
    const Box box = bounding_box(chain);
    const double scale = std::max(box.width(), box.height());
    if (!(scale > 0.0)) return std::nullopt;
    const double len_tol = rel_tol * scale;
    const double area_tol = rel_tol * scale * scale;

    bool changed = true;
    while (changed && v.size() >= 3) {
        changed = false;
        std::vector<Point> kept;
        kept.reserve(v.size());
        const std::size_t n = v.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point& prev = kept.empty() ? v[(i + n - 1) % n] : kept.back();
            const Point& cur = v[i];
            const Point& next = v[(i + 1) % n];
            const bool duplicate = distance(prev, cur) <= len_tol;
            const bool flat = orient2d_approx(prev, cur, next) <= area_tol ||
                              orientation(prev, cur, next) <= 0;
            if (duplicate || flat) {
                changed = true;
                continue;
            }
            kept.push_back(cur);
        }
        v = std::move(kept);
    }
    if (v.size() < 3 || !locally_convex(v)) return std::nullopt;
    if (std::fabs(total_turning(v) - 2.0 * std::numbers::pi) > 1e-6) return std::nullopt;
    return ConvexBody(std::move(v), Unchecked{});
}

ConvexBody ConvexBody::hull_of(std::span<const Point> pts) {
    std::vector<Point> p(pts.begin(), pts.end());
    std::sort(p.begin(), p.end(), [](const Point& a, const Point& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() < 3) throw Error(Errc::InvalidBody, "hull of fewer than three distinct points");
    std::vector<Point> h(2 * p.size());
    std::size_t k = 0;
    for (const Point& q : p) {
        while (k >= 2 && orientation(h[k - 2], h[k - 1], q) <= 0) --k;
        h[k++] = q;
    }
    for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && orientation(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    h.resize(k - 1);
    return ConvexBody(std::move(h));
}

ConvexBody ConvexBody::regular_polygon(int sides, double circumradius, Point center,
                                       double phase) {
    std::vector<Point> v;
    v.reserve(static_cast<std::size_t>(sides));
    for (int i = 0; i < sides; ++i) {
        const double a = phase + 2.0 * std::numbers::pi * i / sides;
        v.push_back({center.x + circumradius * std::cos(a), center.y + circumradius * std::sin(a)});
    }
    return ConvexBody(std::move(v));
}

ConvexBody ConvexBody::axis_rectangle(double min_x, double min_y, double max_x, double max_y) {
    return ConvexBody({{min_x, min_y}, {max_x, min_y}, {max_x, max_y}, {min_x, max_y}});
}

std::vector<HalfPlane> ConvexBody::halfplanes() const {
    std::vector<HalfPlane> hp;
    const std::size_t n = vertices_.size();
    hp.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Point e = vertices_[(i + 1) % n] - vertices_[i];
        const double len = norm(e);
        const Point nrm{e.y / len, -e.x / len};
        hp.push_back({nrm, dot(nrm, vertices_[i])});
    }
    return hp;
}

double ConvexBody::support(Point direction) const {
    double best = -INFINITY;
    for (const Point& v : vertices_) best = std::max(best, dot(v, direction));
    return best;
}

ConvexBody ConvexBody::translated(Point offset) const {
    std::vector<Point> v;
    v.reserve(vertices_.size());
    for (const Point& p : vertices_) v.push_back(p + offset);
    if (auto b = from_convex_chain(v, 1e-15)) return *b;
    throw Error(Errc::InvalidBody, "translation collapsed the body");
}

ConvexBody ConvexBody::scaled(double factor, Point about) const {
    std::vector<Point> v;
    v.reserve(vertices_.size());
    for (const Point& p : vertices_) v.push_back(about + factor * (p - about));
    if (auto b = from_convex_chain(v, 1e-15)) return *b;
    throw Error(Errc::InvalidBody, "scaling collapsed the body");
}

double area(const ConvexBody& body) { return signed_area(body.vertices()); }

double perimeter(const ConvexBody& body) {
    const auto& v = body.vertices();
    double total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) total += distance(v[i], v[(i + 1) % v.size()]);
    return total;
}

Point centroid(const ConvexBody& body) { return polygon_centroid(body.vertices()); }

double diameter(const ConvexBody& body) {
    const auto& v = body.vertices();
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = i + 1; j < v.size(); ++j) best = std::max(best, distance(v[i], v[j]));
    }
    return best;
}

Box bounding_box(const ConvexBody& body) { return bounding_box(std::span<const Point>(body.vertices())); }

bool contains_point(const ConvexBody& body, Point p, Boundary mode) {
    const auto& v = body.vertices();
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const int o = orientation(v[i], v[(i + 1) % n], p);
        if (o < 0 || (o == 0 && mode == Boundary::open)) return false;
    }
    return true;
}

bool contains_polygon(const ConvexBody& body, std::span<const Point> poly) {
    return std::all_of(poly.begin(), poly.end(),
                       [&](const Point& p) { return contains_point(body, p, Boundary::closed); });
}

Point direction(double theta) {
    // Quarter turns are kept exact so axis-aligned data stays axis-aligned.
    const double quarters = std::round(theta / (0.5 * std::numbers::pi));
    if (std::fabs(theta - quarters * 0.5 * std::numbers::pi) <= 4e-16 * std::max(1.0, std::fabs(theta))) {
        static constexpr double kCos[4] = {1.0, 0.0, -1.0, 0.0};
        static constexpr double kSin[4] = {0.0, 1.0, 0.0, -1.0};
        const int k = ((static_cast<int>(quarters) % 4) + 4) % 4;
        return {kCos[k], kSin[k]};
    }
    return {std::cos(theta), std::sin(theta)};
}

AffineMap AffineMap::rotation(double theta) {
    const Point d = direction(theta);
    return {d.x, -d.y, d.y, d.x, {}};
}

AffineMap AffineMap::inverse() const {
    const double det = determinant();
    AffineMap inv{d / det, -b / det, -c / det, a / det, {}};
    const Point o = inv.linear(offset);
    inv.offset = {-o.x, -o.y};
    return inv;
}

AffineMap AffineMap::compose(const AffineMap& inner) const {
    AffineMap out{a * inner.a + b * inner.c, a * inner.b + b * inner.d,
                  c * inner.a + d * inner.c, c * inner.b + d * inner.d, {}};
    out.offset = linear(inner.offset) + offset;
    return out;
}

Polygon transform(std::span<const Point> poly, const AffineMap& map) {
    Polygon out;
    out.reserve(poly.size());
    for (const Point& p : poly) out.push_back(map(p));
    if (map.determinant() < 0.0) std::reverse(out.begin(), out.end());
    return out;
}

ConvexBody transform(const ConvexBody& body, const AffineMap& map) {
    const Polygon v = transform(std::span<const Point>(body.vertices()), map);
    if (auto b = ConvexBody::from_convex_chain(v, 1e-15)) return *b;
    throw Error(Errc::InvalidBody, "affine map collapsed the body");
}

Normalized normalize_to_unit_area(const ConvexBody& body) {
    const double a = area(body);
    if (std::fabs(a - 1.0) <= 1e-15) return {body, AffineMap::identity()};
    const AffineMap map = AffineMap::scaling(std::sqrt(1.0 / a));
    return {transform(body, map), map};
}

double wrap_half_turn(double theta) {
    constexpr double pi = std::numbers::pi;
    double t = std::fmod(theta, pi);
    if (t < 0.0) t += pi;
    if (t >= pi) t -= pi;
    return t;
}

OrientedRect OrientedRect::make(Point center, double side_u, double side_v, double theta) {
    if (side_u <= side_v) return {center, side_u, side_v, wrap_half_turn(theta)};
    return {center, side_v, side_u, wrap_half_turn(theta + 0.5 * std::numbers::pi)};
}

OrientedRect OrientedRect::axis_aligned(double min_x, double min_y, double max_x, double max_y) {
    return make({0.5 * (min_x + max_x), 0.5 * (min_y + max_y)}, max_x - min_x, max_y - min_y, 0.0);
}

OrientedRect OrientedRect::from_corners(const std::array<Point, 4>& c) {
    const Point center = 0.25 * (c[0] + c[1] + c[2] + c[3]);
    const Point u = 0.5 * ((c[1] - c[0]) + (c[2] - c[3]));
    const Point v = 0.5 * ((c[3] - c[0]) + (c[2] - c[1]));
    return make(center, norm(u), norm(v), std::atan2(u.y, u.x));
}

std::array<Point, 4> OrientedRect::corners() const {
    const Point u = (0.5 * width) * width_axis();
    const Point v = (0.5 * height) * height_axis();
    return {center - u - v, center + u - v, center + u + v, center - u + v};
}

ConvexBody OrientedRect::as_body() const {
    const auto c = corners();
    return ConvexBody(std::vector<Point>(c.begin(), c.end()));
}

bool contains_point(const OrientedRect& rect, Point p, Boundary mode) {
    const auto c = rect.corners();
    for (std::size_t i = 0; i < 4; ++i) {
        const int o = orientation(c[i], c[(i + 1) % 4], p);
        if (o < 0 || (o == 0 && mode == Boundary::open)) return false;
    }
    return true;
}

bool rect_contains_rect(const OrientedRect& outer, const OrientedRect& inner) {
    const auto c = inner.corners();
    return std::all_of(c.begin(), c.end(),
                       [&](const Point& p) { return contains_point(outer, p, Boundary::closed); });
}

bool body_contains_rect(const ConvexBody& body, const OrientedRect& rect) {
    const auto c = rect.corners();
    return contains_polygon(body, c);
}

}  // namespace cvxhole
