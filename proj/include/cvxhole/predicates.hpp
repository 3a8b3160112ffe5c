#pragma once

namespace cvxhole {

struct Point;

/// Sign of the orientation determinant of (a, b, c): +1 for a counter-clockwise
/// turn, -1 for clockwise, 0 when the three points are exactly collinear.
/// A floating-point filter answers most queries; ambiguous ones fall back to
/// exact expansion arithmetic, so the sign never flips because of rounding.
int orientation(const Point& a, const Point& b, const Point& c);

/// Plain double evaluation of twice the signed triangle area.
double orient2d_approx(const Point& a, const Point& b, const Point& c);

}  // namespace cvxhole
