#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cvxhole/geometry.hpp"
#include "cvxhole/rect_nets.hpp"

namespace cvxhole::testing {

/// Random convex polygon: hull of points on a randomly stretched ellipse with
/// radial jitter, keeping between `min_v` and `max_v` vertices.
inline ConvexBody random_convex_polygon(std::mt19937_64& rng, int min_v = 5, int max_v = 50) {
    std::uniform_int_distribution<int> count(min_v, max_v);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (;;) {
        const int k = count(rng);
        const double ax = 0.2 + 2.0 * unit(rng);
        const double ay = 0.2 + 2.0 * unit(rng);
        const double rot = std::numbers::pi * unit(rng);
        std::vector<Point> pts;
        for (int i = 0; i < k; ++i) {
            const double t = 2.0 * std::numbers::pi * unit(rng);
            const double r = 0.8 + 0.2 * unit(rng);
            const Point p{ax * r * std::cos(t), ay * r * std::sin(t)};
            pts.push_back({std::cos(rot) * p.x - std::sin(rot) * p.y + unit(rng),
                           std::sin(rot) * p.x + std::cos(rot) * p.y + unit(rng)});
        }
        try {
            ConvexBody body = ConvexBody::hull_of(pts);
            if (static_cast<int>(body.size()) >= std::min(min_v, 3)) return body;
        } catch (...) {
        }
    }
}

inline Point random_point_in_box(std::mt19937_64& rng, const Box& box) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    return {box.min_x + box.width() * unit(rng), box.min_y + box.height() * unit(rng)};
}

/// Random rectangle of the given area inside the body: width log-uniform up to
/// the square side, uniform inclination, centre uniform among valid centres.
inline OrientedRect random_rect_in_body(std::mt19937_64& rng, const ConvexBody& body, double rect_area, double rho) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double w_lo = rect_area / (0.95 * rho);
    const double w_hi = std::sqrt(rect_area);
    for (;;) {
        const double w = w_lo * std::pow(w_hi / w_lo, unit(rng));
        const double h = rect_area / w;
        const double theta = std::numbers::pi * unit(rng);
        const auto region = rect_center_region(body, w, h, theta);
        if (!region) continue;
        const Box box = bounding_box(*region);
        for (int tries = 0; tries < 100; ++tries) {
            const Point c = random_point_in_box(rng, box);
            if (!contains_point(*region, c, Boundary::closed)) continue;
            const OrientedRect r = OrientedRect::make(c, w, h, theta);
            if (body_contains_rect(body, r)) return r;
        }
    }
}

}  // namespace cvxhole::testing
