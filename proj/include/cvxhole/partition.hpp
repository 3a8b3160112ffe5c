#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cvxhole/geometry.hpp"

namespace cvxhole {

/// One cell of a partition: a union of convex pieces with disjoint interiors.
struct Region {
    std::vector<Polygon> pieces;
    bool is_homothet = false;
    /// Set when the region is a single homothet of the cell shape.
    std::optional<OrientedRect> cell;

    double area() const;
    bool contains(Point p, Boundary mode) const;
};

/// Splits `body` into `m` regions of equal area, at least ceil(2m/3) of them
/// homothets of `cell_shape` (only its aspect ratio and inclination matter).
///
/// A grid of cell homothets is laid over the body in the cell's frame and the
/// cells lying inside are kept; each grid column's leftover (below and above its
/// run of cells) is then cut by vertical lines into equal-area pieces.
/// Throws Error(TooFewCells) when the grid yields too few interior cells.
std::vector<Region> equal_area_partition(const ConvexBody& body, unsigned m,
                                         const OrientedRect& cell_shape);

/// Number of homothet cells the construction places for `m` regions.
unsigned partition_cell_count(const ConvexBody& body, unsigned m, const OrientedRect& cell_shape);

/// Smallest m for which equal_area_partition succeeds. Searches up to `limit`
/// and throws Error(TooFewCells) beyond it.
unsigned min_partition_cells(const ConvexBody& body, const OrientedRect& cell_shape,
                             unsigned limit = 1u << 20);

/// Cuts an ordered list of convex pieces into `count` consecutive regions of
/// equal area. Pieces are consumed in order; a piece is split by a line
/// perpendicular to `sweep` (the part with smaller dot(sweep, p) goes first).
std::vector<Region> slice_equal_area(std::span<const Polygon> pieces, std::span<const Point> sweeps,
                                     unsigned count);

/// `k` vertical slabs of equal area, left to right.
std::vector<Region> vertical_strips(const ConvexBody& body, unsigned k);

/// Throws Error(NotAPartition) unless the regions are inside `body`, pairwise
/// interior-disjoint and add up to its area, all within `tol` (relative to
/// area(body)).
void check_partition(const ConvexBody& body, std::span<const Region> regions, double tol = 1e-9);

/// Locates regions for point queries. Each point goes to the lowest-index
/// region whose closed set contains it.
class RegionIndex {
public:
    explicit RegionIndex(std::span<const Region> regions);
    /// Region index, or the region nearest to `p` when rounding leaves it in
    /// no closed piece.
    std::size_t locate(Point p) const;

private:
    struct Piece {
        std::size_t region;
        Polygon poly;
        Box box;
    };
    std::vector<Piece> pieces_;
    Box bounds_{};
    std::size_t nx_ = 1, ny_ = 1;
    std::vector<std::vector<std::size_t>> buckets_;

    std::size_t bucket_of(Point p) const;
};

}  // namespace cvxhole
