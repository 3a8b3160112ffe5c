#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cvxhole/geometry.hpp"
#include "cvxhole/rect_nets.hpp"

namespace cvxhole {

/// Convex polygon with vertices taken from a sample, counter-clockwise.
struct ConvexChain {
    std::vector<Point> vertices;
    bool empty_verified = false;
};

/// True when every vertex is a strict left turn (at least three vertices).
bool in_convex_position(std::span<const Point> chain);
/// True when no point lies in the open interior of the convex chain.
bool chain_is_empty(std::span<const Point> chain, std::span<const Point> points);

struct PolymaxOptions {
    /// Exact dynamic programming up to this many points; beyond it the
    /// search runs on overlapping windows and gives a lower bound.
    std::size_t exact_limit = 2000;
    /// Expected points per window in the windowed mode.
    std::size_t window_points = 200;
};

struct PolymaxResult {
    ConvexChain chain;
    double area = 0.0;
    bool exact = true;
    /// All points collinear: area 0 and a two-point chain.
    bool degenerate = false;
};

/// Largest convex polygon with vertices in `points` whose open interior holds
/// no point. Cubic dynamic programming per bottom vertex.
PolymaxResult polymax(std::span<const Point> points, const PolymaxOptions& options = {});

/// Subset enumeration, at most 12 points. Throws TooManyPoints.
double polymax_oracle(std::span<const Point> points);

struct StripDecomposition {
    unsigned t = 0;
    /// Empty strips (0-based, left to right); strip k is [k/t, (k+1)/t).
    std::vector<unsigned> empty_indices;
};

/// t = round(n / ((1-eps) log n)) vertical strips of the unit square.
StripDecomposition strip_decomposition(std::span<const Point> points, std::size_t n, double epsilon);

struct StripAttempt {
    unsigned strip = 0;  // 0-based strip index
    /// Two nearest points on each side: l1 has the larger x, r1 the smaller.
    std::optional<Point> l1, l2, r1, r2;
    /// l1 and r1 above 1 - delta, l2 and r2 below delta.
    bool y_event = false;
    bool convex = false;
    bool empty = false;
    double area = 0.0;
    bool success() const { return y_event && convex && empty; }
};

struct StripDiagnostics {
    unsigned t = 0;
    unsigned p = 0;  // number of empty strips
    unsigned q = 0;  // floor((p - 2) / 4), 0 when p < 6
    bool consecutive_empty = false;
    /// Point sets of different attempts are pairwise disjoint.
    bool event_a = true;
    std::vector<StripAttempt> attempts;
};

struct StripQuadResult {
    std::optional<ConvexChain> quad;  // l1 l2 r2 r1
    double area = 0.0;
    StripDiagnostics diagnostics;
};

/// The quadrilateral attempt on one strip of a t-strip decomposition of the
/// unit square. `sorted_x` must be sorted by x.
StripAttempt quadrilateral_at_strip(std::span<const Point> sorted_x, unsigned t, unsigned strip, double delta);

/// Empty-strip construction in the unit square: tries strips e_4, e_8, ...
/// and returns the first quadrilateral that passes every check.
StripQuadResult strip_quadrilateral(std::span<const Point> points, std::size_t n, double epsilon, double delta);

struct HoleBoundsOptions {
    PolymaxOptions polymax;
    /// Frame budget for the rectangle-net scan (0 = no limit).
    std::uint64_t rect_frames = 0;
    bool use_polymax = true;
};

struct HoleBounds {
    double lower = 0.0;
    /// 2 (2+4eps) log n / n when the rectangle net certifies.
    std::optional<double> upper;
    std::string lower_source;
    NetStatus rect_status = NetStatus::undecided;
};

/// Brackets the largest empty convex set: lower bound from empty homothets of
/// a square, a 64-gon and a 2:1 rectangle and from polymax; upper bound from
/// the rectangle net and the half-area rectangle inside every convex set.
HoleBounds convex_hole_bounds(const ConvexBody& body, std::span<const Point> points, std::size_t n, double epsilon,
                              const HoleBoundsOptions& options = {});

}  // namespace cvxhole
