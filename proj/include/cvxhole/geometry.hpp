#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace cvxhole {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
    friend Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
    friend bool operator==(const Point&, const Point&) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }
inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Unvalidated counter-clockwise polygon; used for pieces of regions and
/// intermediate clipping results.
using Polygon = std::vector<Point>;

double signed_area(std::span<const Point> poly);
double polygon_area(std::span<const Point> poly);
Point polygon_centroid(std::span<const Point> poly);

/// Keeps the part of a convex polygon with dot(normal, p) <= offset.
Polygon clip_halfplane(std::span<const Point> poly, Point normal, double offset);

struct HalfPlane {
    Point normal;   // outward unit normal
    double offset;  // dot(normal, p) <= offset inside
};

struct Box {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;

    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
};

Box bounding_box(std::span<const Point> pts);

enum class Boundary { open, closed };

/// Strictly convex polygon, vertices counter-clockwise, at least three of them.
class ConvexBody {
public:
    /// Throws Error(InvalidBody) unless the chain is strictly convex and CCW.
    explicit ConvexBody(std::vector<Point> vertices);

    /// Drops duplicate and (nearly) collinear vertices of a convex CCW chain,
    /// then validates. Returns nullopt when nothing with interior is left.
    static std::optional<ConvexBody> from_convex_chain(std::span<const Point> chain,
                                                       double rel_tol = 1e-13);
    static ConvexBody hull_of(std::span<const Point> pts);
    static ConvexBody regular_polygon(int sides, double circumradius, Point center = {},
                                      double phase = 0.0);
    static ConvexBody axis_rectangle(double min_x, double min_y, double max_x, double max_y);
    static ConvexBody unit_square() { return axis_rectangle(0.0, 0.0, 1.0, 1.0); }

    const std::vector<Point>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    const Point& operator[](std::size_t i) const { return vertices_[i]; }

    std::vector<HalfPlane> halfplanes() const;
    double support(Point direction) const;

    ConvexBody translated(Point offset) const;
    ConvexBody scaled(double factor, Point about = {}) const;

private:
    struct Unchecked {};
    ConvexBody(std::vector<Point> vertices, Unchecked) : vertices_(std::move(vertices)) {}

    std::vector<Point> vertices_;
};

double area(const ConvexBody& body);
double perimeter(const ConvexBody& body);
Point centroid(const ConvexBody& body);
double diameter(const ConvexBody& body);
Box bounding_box(const ConvexBody& body);
bool contains_point(const ConvexBody& body, Point p, Boundary mode);
bool contains_polygon(const ConvexBody& body, std::span<const Point> poly);

/// Linear part [[a, b], [c, d]] followed by a translation.
struct AffineMap {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
    Point offset{};

    static AffineMap identity() { return {}; }
    static AffineMap scaling(double s) { return {s, 0.0, 0.0, s, {}}; }
    static AffineMap rotation(double theta);
    static AffineMap translation(Point t) { return {1.0, 0.0, 0.0, 1.0, t}; }

    Point operator()(Point p) const { return {a * p.x + b * p.y + offset.x, c * p.x + d * p.y + offset.y}; }
    Point linear(Point p) const { return {a * p.x + b * p.y, c * p.x + d * p.y}; }
    double determinant() const { return a * d - b * c; }
    AffineMap inverse() const;
    /// (this ∘ inner)(p) = this(inner(p)).
    AffineMap compose(const AffineMap& inner) const;
};

ConvexBody transform(const ConvexBody& body, const AffineMap& map);
Polygon transform(std::span<const Point> poly, const AffineMap& map);

/// (cos theta, sin theta), exact at multiples of pi/2.
Point direction(double theta);

struct Normalized {
    ConvexBody body;
    AffineMap map;
};

/// Uniform scaling about the origin to area 1.
Normalized normalize_to_unit_area(const ConvexBody& body);

/// Rectangle with `width <= height`; `inclination` in [0, pi) is the angle of
/// the minor axis, i.e. the direction along which `width` is measured.
struct OrientedRect {
    Point center{};
    double width = 0.0;
    double height = 0.0;
    double inclination = 0.0;

    /// Builds a rectangle with side `side_u` along direction `theta` and side
    /// `side_v` perpendicular to it, then normalizes to the width <= height
    /// convention.
    static OrientedRect make(Point center, double side_u, double side_v, double theta);
    static OrientedRect axis_aligned(double min_x, double min_y, double max_x, double max_y);
    /// Reconstructs a rectangle from four corners in cyclic order.
    static OrientedRect from_corners(const std::array<Point, 4>& corners);

    Point width_axis() const { return direction(inclination); }
    Point height_axis() const {
        const Point d = direction(inclination);
        return {-d.y, d.x};
    }
    double area() const { return width * height; }
    /// Corners in counter-clockwise order.
    std::array<Point, 4> corners() const;
    ConvexBody as_body() const;
};

bool contains_point(const OrientedRect& rect, Point p, Boundary mode);
bool rect_contains_rect(const OrientedRect& outer, const OrientedRect& inner);
bool body_contains_rect(const ConvexBody& body, const OrientedRect& rect);

/// Angle normalized into [0, pi).
double wrap_half_turn(double theta);

}  // namespace cvxhole
