#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cvxhole/geometry.hpp"
#include "cvxhole/sampling.hpp"

namespace cvxhole {

struct NetParams {
    std::uint64_t n = 0;
    double epsilon = 0.0;
    double rho = 0.0;     // diameter of the body
    double theta0 = 0.0;  // inclination step
    double gamma = 0.0;   // width ratio between consecutive levels
    double w0 = 0.0;      // smallest width of an area_mid rectangle in the body
    int M = 0;            // levels are m = -1 .. M-2
    std::uint64_t t_count = 0;  // inclinations t = 0 .. t_count-1
    double area_lo = 0.0;   // (2+eps) log n / n, area of net members
    double area_mid = 0.0;  // (2+2eps) log n / n
    double area_hi = 0.0;   // (2+4eps) log n / n

    int min_level() const { return -1; }
    int max_level() const { return M - 2; }
    double width(int m) const;
    double height(int m) const;
    double dx(int m) const;
    double dy(int m) const;
    double inclination(std::uint64_t t) const { return static_cast<double>(t) * theta0; }
    /// a(K) / (dx * dy): packing bound on members per (m, t) level.
    double level_bound() const;
    /// levels * t_count * level_bound().
    double size_bound() const;
};

/// Throws EpsilonTooLarge for eps > 0.1 and PreconditionViolation for
/// n < 16, eps <= 0 or a body whose area is not 1.
NetParams make_net_params(std::uint64_t n, double epsilon, const ConvexBody& body);

/// Rotates the four side lines of `r` clockwise about its corners by the
/// angle phi that brings the inclination down to a multiple of theta0 and
/// returns the rectangle they bound. Throws PreconditionViolation unless
/// area(r) = area_hi and r lies in `body`.
OrientedRect quantize_rectangle(const OrientedRect& r, const NetParams& params, const ConvexBody& body);

/// Net member index: level m, inclination t, grid position (i, j).
struct NetMember {
    int m = 0;
    std::uint64_t t = 0;
    std::int64_t i = 0;
    std::int64_t j = 0;

    friend bool operator==(const NetMember&, const NetMember&) = default;
};

OrientedRect member_rect(const NetParams& params, const NetMember& member);

/// Calls fn(member, rect) for every member of level (m, t) that lies in the
/// body, row by row.
template <class Fn>
void for_each_level_member(const ConvexBody& body, const NetParams& params, int m, std::uint64_t t, Fn&& fn);

std::uint64_t count_level_members(const ConvexBody& body, const NetParams& params, int m, std::uint64_t t);

struct LevelRange {
    int m_lo = -1;
    int m_hi = -1;  // inclusive; -2 means max_level()
    std::uint64_t t_lo = 0;
    std::uint64_t t_hi = 0;  // exclusive; 0 means t_count
};

struct RectNet {
    NetParams params;
    std::vector<OrientedRect> rects;
    std::vector<NetMember> members;
    /// (m, t) -> [begin, end) into rects.
    std::map<std::pair<int, std::uint64_t>, std::pair<std::size_t, std::size_t>> level_index;
};

/// Materializes the members of the requested levels. Throws NetTooLarge if the
/// count exceeds the packing bound for those levels, PreconditionViolation if
/// it exceeds `max_rects`.
RectNet build_rect_net(const ConvexBody& body, const NetParams& params, LevelRange range = {},
                       std::size_t max_rects = 20'000'000);

/// Witness: the level with w(q) in [gamma^(m+1) w0, gamma^(m+2) w0)
/// and the grid point nearest the centre of q. Throws WitnessNotFound if that
/// member is not inside q or the body.
OrientedRect net_witness(const OrientedRect& q, const NetParams& params, const ConvexBody& body);
NetMember net_witness_member(const OrientedRect& q, const NetParams& params);
OrientedRect net_contains_witness(const OrientedRect& q, const RectNet& net, const ConvexBody& body);

/// Concentric shrink of `r` to the given area.
OrientedRect shrink_to_area(const OrientedRect& r, double target_area);

/// Centres c for which the rectangle (c, side_u along theta, side_v) lies in
/// the body; nullopt when there are none.
std::optional<ConvexBody> rect_center_region(const ConvexBody& body, double side_u, double side_v, double theta);

/// One JSON object per line: {"m","t","i","j","center","w","h","theta"}.
void write_net_jsonl(std::ostream& out, const RectNet& net);
std::vector<OrientedRect> read_net_jsonl(std::istream& in);

struct EmptyRect {
    OrientedRect rect;
    double area = 0.0;
    /// The same rectangle as exact bounds in the container's frame.
    Box box{};
};

/// Largest axis-parallel rectangle inside the container (an axis-aligned
/// rectangle) whose open interior avoids all points. Points must lie in the
/// closed container.
EmptyRect max_empty_axis_rect(const OrientedRect& container, std::span<const Point> points);
EmptyRect max_empty_axis_rect(const Box& container, std::span<const Point> points);

/// Brute-force candidate enumeration; throws TooManyPoints above 60 points.
double max_empty_axis_rect_oracle(const OrientedRect& container, std::span<const Point> points);

enum class NetStatus { certified, not_certified, undecided };
const char* net_status_name(NetStatus s);

struct NetScanOptions {
    /// Inclinations to scan; 0 means all t_count of them.
    std::uint64_t max_frames = 0;
};

struct NetCertificate {
    double lower = 0.0;
    /// area_hi when certified, +inf otherwise.
    double upper_certified = 0.0;
    NetStatus status = NetStatus::undecided;
    std::uint64_t frames_scanned = 0;
    std::optional<NetMember> empty_member;
    std::optional<OrientedRect> lower_rect;
};

/// Looks for an empty net member frame by frame. Within a frame (fixed t) the
/// points are rotated so members are axis-parallel, and empty axis rectangles
/// of area >= area_lo are enumerated by a stair sweep; net members inside them
/// are checked exactly. Certified only when every frame was scanned.
NetCertificate net_max_empty_rect(const ConvexBody& body, const PointSample& sample, const NetParams& params,
                                  const NetScanOptions& options = {});

/// Lower bound alone: exact axis-parallel maximum within the body's Lassak
/// inscribed rectangle.
EmptyRect lassak_frame_empty_rect(const ConvexBody& body, std::span<const Point> points);

// ---------------------------------------------------------------------------

namespace detail {
struct LevelFrame {
    double w, h, dx, dy;
    Point u, v;
    std::vector<HalfPlane> shifted;  // body half-planes in frame coords, moved in by the member
};
LevelFrame level_frame(const ConvexBody& body, const NetParams& params, int m, std::uint64_t t);
/// Inclusive range of i at row j; empty when lo > hi.
std::pair<std::int64_t, std::int64_t> row_range(const LevelFrame& f, std::int64_t j);
std::pair<std::int64_t, std::int64_t> rows(const LevelFrame& f, const ConvexBody& body);
}  // namespace detail

template <class Fn>
void for_each_level_member(const ConvexBody& body, const NetParams& params, int m, std::uint64_t t, Fn&& fn) {
    const detail::LevelFrame f = detail::level_frame(body, params, m, t);
    const auto [j0, j1] = detail::rows(f, body);
    for (std::int64_t j = j0; j <= j1; ++j) {
        const auto [i0, i1] = detail::row_range(f, j);
        for (std::int64_t i = i0; i <= i1; ++i) {
            const NetMember member{m, t, i, j};
            const OrientedRect r = member_rect(params, member);
            if (body_contains_rect(body, r)) fn(member, r);
        }
    }
}

}  // namespace cvxhole
