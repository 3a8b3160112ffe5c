#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cvxhole/geometry.hpp"
#include "cvxhole/partition.hpp"
#include "cvxhole/sampling.hpp"

namespace cvxhole {

/// Shape L for homothets: stored with area 1 and its centroid at the origin.
/// A disk keeps an exact representation for emptiness tests and a regular
/// inscribed polygon wherever polygons are required.
class Shape {
public:
    enum class Kind { polygon, disk };

    static Shape polygon(const ConvexBody& body, std::string id = "polygon");
    static Shape disk(int sides = 256);
    static Shape square();

    Kind kind() const { return kind_; }
    const std::string& id() const { return id_; }
    /// Polygonal form (for a disk: the inscribed regular polygon).
    const ConvexBody& outline() const { return outline_; }
    /// Radius of the unit-area disk, 0 for polygons.
    double radius() const { return radius_; }
    /// Support function of the exact shape.
    double support(Point direction) const;
    /// Largest distance from the origin to the shape.
    double circumradius() const;
    /// Open-interior membership of p in scale * L.
    bool interior_contains(Point p, double scale) const;

private:
    Kind kind_ = Kind::polygon;
    std::string id_;
    ConvexBody outline_ = ConvexBody::unit_square();
    double radius_ = 0.0;
};

struct HomothetPlacement {
    double scale = 0.0;
    Point offset{};
    std::string shape_id;
    double area() const { return scale * scale; }  // shapes have unit area
};

/// Contiguous run of lattice columns i0..i1 on lattice row j.
struct LatticeRow {
    std::int64_t j = 0;
    std::int64_t i0 = 0;
    std::int64_t i1 = -1;
    std::uint64_t size() const { return i1 >= i0 ? static_cast<std::uint64_t>(i1 - i0 + 1) : 0; }
};

/// Lattice certificate for one (K, L, n, eps). Everything lattice-related lives
/// in the frame given by `to_frame`, an area-preserving affine map under which
/// the Lassak rectangle of P becomes an axis-parallel square.
struct HomothetNet {
    std::uint64_t n = 0;
    double epsilon = 0.0;
    std::string shape_id;
    double omega = 0.0;
    AffineMap to_frame;
    /// Images under to_frame.
    ConvexBody frame_body = ConvexBody::unit_square();
    ConvexBody frame_p = ConvexBody::unit_square();         // P
    ConvexBody frame_shrunken = ConvexBody::unit_square();  // s(P), inner offset of P at distance omega
    Point frame_p_centroid{};    // c(P); placements put this point on lattice points
    /// P and s(P) in world coordinates, translated so that c(P) is the origin.
    ConvexBody p_shape = ConvexBody::unit_square();
    ConvexBody shrunken_shape = ConvexBody::unit_square();
    /// Lattice points (i omega, j omega) in the frame body.
    std::vector<LatticeRow> lattice;
    /// Lattice points whose s(P) translate lies in the body.
    std::vector<LatticeRow> placement_rows;

    double area_p() const;         // (1+2eps) log n / n
    double area_shrunken() const;  // (1+eps) log n / n
    double area_target() const;    // (1+3eps) log n / n
    double omega_bound() const;    // (eps/8) sqrt(log n / n)
    double placement_bound() const;  // (64/eps^2) (n / log n)
    std::uint64_t lattice_size() const;
    std::uint64_t placement_count() const;
    /// World coordinates of lattice points, in row order.
    std::vector<Point> lattice_points() const;
    /// S_H as world placements of shrunken_shape (scale 1).
    std::vector<HomothetPlacement> placements() const;
    /// World offset of the placement centred on lattice point (i, j).
    Point placement_offset(std::int64_t i, std::int64_t j) const;
    bool has_placement(std::int64_t i, std::int64_t j) const;
};

/// Throws PreconditionViolation for n < 16, eps outside (0, 0.1], a body whose
/// area is not 1 or a target hole that cannot fit; EpsilonTooLarge for eps >
/// 0.1; ShapeTooEccentric when omega falls below (eps/8) sqrt(log n / n);
/// NetTooLarge when S_H exceeds its packing bound.
HomothetNet build_homothet_net(const ConvexBody& body, const Shape& shape, std::uint64_t n, double epsilon);

struct CoverReport {
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;
    /// Largest frame distance from c(T) to the lattice point used, over omega.
    double max_offset_ratio = 0.0;
};

/// Checks that the translate T of P centred at `center` (world) contains the
/// placement at the lattice point nearest to c(T). Returns false on failure.
bool translate_covered(const HomothetNet& net, Point center, double* offset_ratio = nullptr);

/// Random translates of P inside the body, plus the extreme positions (the
/// vertices of the region of valid centres). Throws CoverageViolation if any
/// translate fails.
CoverReport verify_translate_cover(const HomothetNet& net, std::uint64_t trials, SeedSpec seed);

/// First placement of S_H without a sample point in its open interior.
struct NetEmptiness {
    bool all_nonempty = false;
    std::optional<std::pair<std::int64_t, std::int64_t>> empty_placement;
};
NetEmptiness check_net_nonempty(const HomothetNet& net, std::span<const Point> points);

struct HomothetSearchOptions {
    /// Lattice spacing of the lower-bound search as a fraction of the shape's
    /// inner-offset gap at the current scale.
    double spacing_factor = 0.5;
    int iterations = 12;
    /// Run the local linear-programming polish on the best placement.
    bool polish = true;
    /// Empty placements at the final scale that get polished.
    std::size_t polish_starts = 16;
};

struct HomothetResult {
    HomothetPlacement best;
    double area = 0.0;
    /// (1+3eps) log n / n when every member of S_H holds a point.
    std::optional<double> certified_upper;
    std::optional<std::pair<std::int64_t, std::int64_t>> empty_net_member;
};

/// Lower bound: largest verified empty homothet found by the lattice search;
/// upper bound from the net when it certifies.
HomothetResult largest_empty_homothet(const ConvexBody& body, const Shape& shape, const PointSample& sample,
                                      double epsilon, const HomothetSearchOptions& options = {});
/// Same with a prebuilt net (must match body, shape, sample.n and epsilon).
HomothetResult largest_empty_homothet(const ConvexBody& body, const Shape& shape, const PointSample& sample,
                                      const HomothetNet& net, const HomothetSearchOptions& options = {});
/// Lower-bound search alone.
HomothetPlacement search_empty_homothet(const ConvexBody& body, const Shape& shape, std::span<const Point> points,
                                        double epsilon, const HomothetSearchOptions& options = {});

/// Radius of the largest disk with centre in the axis-parallel container that
/// stays inside it and has no point in its interior. Enumerates all centres
/// fixed by three constraints among points and container sides.
/// Throws TooManyPoints above 500 points.
double largest_empty_disk_oracle(const OrientedRect& container, std::span<const Point> points);

struct LowerBoundPartition {
    std::vector<Region> regions;
    std::vector<bool> homothet_flags;
    /// The L-homothet of each flagged region.
    std::vector<std::optional<HomothetPlacement>> homothets;
    std::vector<bool> empty_flags;
    bool empty_homothet_found = false;
    unsigned cells = 0;  // homothets of the Lassak rectangle in the first partition
};

/// Partition of the body into round(n / ((1-eps) log n)) equal-area regions,
/// at least about a third of them homothets of L, tested against a fresh
/// sample of n points drawn with `seed`.
LowerBoundPartition lower_bound_partition(const ConvexBody& body, const Shape& shape, std::uint64_t n,
                                          double epsilon, SeedSpec seed);
/// Same construction tested against the given points.
LowerBoundPartition lower_bound_partition(const ConvexBody& body, const Shape& shape, std::uint64_t n,
                                          double epsilon, std::span<const Point> points);

}  // namespace cvxhole
