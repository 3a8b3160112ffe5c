#pragma once

#include <optional>

#include "cvxhole/geometry.hpp"

namespace cvxhole {

/// Points of `body` at distance >= omega from its boundary: every edge
/// half-plane moved inward by omega. nullopt when nothing with interior remains.
std::optional<ConvexBody> inner_offset(const ConvexBody& body, double omega);

/// Radius of the largest disk inside `body` (the offset at which it vanishes).
double inradius(const ConvexBody& body);

struct OffsetSolution {
    double omega = 0.0;
    ConvexBody shrunken;
};

/// Bisection on omega so that area(inner_offset(body, omega)) == target_area
/// to within 1e-10 * area(body). Throws Error(InvalidTarget) unless
/// 0 < target_area < area(body).
OffsetSolution solve_inner_offset(const ConvexBody& body, double target_area);

struct LassakPair {
    OrientedRect inscribed;
    OrientedRect circumscribed;
    /// Homothety ratio circumscribed / inscribed.
    double ratio = 0.0;
};

/// Inscribed rectangle with a homothetic circumscribed copy of ratio <= 2.
/// Searches directions; for each, the circumscribed rectangle is the bounding
/// box in that frame and the inscribed one the largest homothet of it that
/// fits (a three-variable linear program). Throws Error(ConvergenceFailure)
/// if no direction meets the guarantee.
LassakPair lassak_rectangles(const ConvexBody& body);

/// Largest t such that `shape` scaled by t about `anchor`, then translated by
/// some vector, fits inside `container`. Returns (t, translation).
struct Fit {
    double scale = 0.0;
    Point translation{};
};
Fit largest_homothet_inside(const ConvexBody& container, const ConvexBody& shape);

}  // namespace cvxhole
