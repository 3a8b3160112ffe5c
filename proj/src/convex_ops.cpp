#include "cvxhole/convex_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cvxhole/error.hpp"
#include "cvxhole/small_lp.hpp"

namespace cvxhole {

std::optional<ConvexBody> inner_offset(const ConvexBody& body, double omega) {
    if (omega <= 0.0) return body;
    Polygon poly = body.vertices();
    for (const HalfPlane& h : body.halfplanes()) {
        poly = clip_halfplane(poly, h.normal, h.offset - omega);
        if (poly.size() < 3) return std::nullopt;
    }
    return ConvexBody::from_convex_chain(poly);
}

double inradius(const ConvexBody& body) {
    const Point c0 = centroid(body);
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (const HalfPlane& h : body.halfplanes()) {
        rows.push_back({h.normal.x, h.normal.y, 1.0});
        rhs.push_back(std::max(0.0, h.offset - dot(h.normal, c0)));
    }
    const lp::Solution sol = lp::maximize({0.0, 0.0, 1.0}, rows, rhs);
    return sol.value;
}

OffsetSolution solve_inner_offset(const ConvexBody& body, double target_area) {
    const double full = area(body);
    if (!(target_area > 0.0 && target_area < full)) {
        throw Error(Errc::InvalidTarget, "target area must lie strictly between 0 and the body area");
    }
    const double tol = 1e-12 * full;
    double lo = 0.0;
    double hi = inradius(body);
    std::optional<ConvexBody> best_body;
    double best_omega = 0.0;
    double best_err = INFINITY;
    for (int iter = 0; iter < 200 && hi - lo > 0.0; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const auto shrunk = inner_offset(body, mid);
        const double a = shrunk ? area(*shrunk) : 0.0;
        if (shrunk && std::fabs(a - target_area) < best_err) {
            best_err = std::fabs(a - target_area);
            best_body = shrunk;
            best_omega = mid;
        }
        if (best_err <= tol) break;
        if (a > target_area) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (!best_body || best_err > 1e-10 * full) {
        throw Error(Errc::ConvergenceFailure, "inner offset bisection did not reach the target area");
    }
    return {best_omega, *best_body};
}

Fit largest_homothet_inside(const ConvexBody& container, const ConvexBody& shape) {
    const Point c0 = centroid(container);
    const Point s0 = centroid(shape);
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (const HalfPlane& h : container.halfplanes()) {
        // translation = c0 - s * s0 + t', shape scaled about the origin.
        const double sup = shape.support(h.normal) - dot(h.normal, s0);
        rows.push_back({h.normal.x, h.normal.y, sup});
        rhs.push_back(std::max(0.0, h.offset - dot(h.normal, c0)));
    }
    const lp::Solution sol = lp::maximize({0.0, 0.0, 1.0}, rows, rhs);
    if (sol.status != lp::Status::optimal) {
        throw Error(Errc::ConvergenceFailure, "homothet fit program did not converge");
    }
    const double s = sol.x[2];
    return {s, c0 + Point{sol.x[0], sol.x[1]} - s * s0};
}

namespace {

struct DirectionFit {
    double phi = 0.0;
    double scale = 0.0;  // inscribed / circumscribed
    OrientedRect inscribed;
    OrientedRect circumscribed;
};

DirectionFit fit_direction(const ConvexBody& body, const std::vector<HalfPlane>& hps, Point c0,
                           double phi) {
    const Point u{std::cos(phi), std::sin(phi)};
    const Point v{-u.y, u.x};
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const Point& p : body.vertices()) {
        x0 = std::min(x0, dot(p, u));
        x1 = std::max(x1, dot(p, u));
        y0 = std::min(y0, dot(p, v));
        y1 = std::max(y1, dot(p, v));
    }
    const double w = x1 - x0;
    const double h = y1 - y0;

    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    rows.reserve(hps.size());
    rhs.reserve(hps.size());
    for (const HalfPlane& hp : hps) {
        const double reach = 0.5 * (std::fabs(dot(hp.normal, u)) * w + std::fabs(dot(hp.normal, v)) * h);
        rows.push_back({hp.normal.x, hp.normal.y, reach});
        rhs.push_back(std::max(0.0, hp.offset - dot(hp.normal, c0)));
    }
    const lp::Solution sol = lp::maximize({0.0, 0.0, 1.0}, rows, rhs);

    DirectionFit fit;
    fit.phi = phi;
    fit.scale = sol.status == lp::Status::optimal ? std::min(1.0, sol.x[2]) : 0.0;
    const Point center = c0 + Point{sol.x[0], sol.x[1]};
    fit.inscribed = OrientedRect::make(center, fit.scale * w, fit.scale * h, phi);
    fit.circumscribed =
        OrientedRect::make((0.5 * (x0 + x1)) * u + (0.5 * (y0 + y1)) * v, w, h, phi);
    return fit;
}

bool meets_guarantee(const DirectionFit& f, double body_area) {
    if (!(f.scale > 0.0)) return false;
    const double ratio = 1.0 / f.scale;
    const double circ = f.circumscribed.area();
    const double insc = f.inscribed.area();
    return ratio <= 2.0 + 1e-6 && 0.5 * circ <= body_area * (1.0 + 1e-9) &&
           body_area <= 2.0 * insc * (1.0 + 1e-9);
}

}  // namespace

LassakPair lassak_rectangles(const ConvexBody& body) {
    constexpr double half_pi = 0.5 * std::numbers::pi;
    constexpr int kDirections = 720;
    const auto hps = body.halfplanes();
    const Point c0 = centroid(body);
    const double body_area = area(body);

    std::vector<double> dirs;
    dirs.reserve(kDirections + body.size());
    for (int k = 0; k < kDirections; ++k) dirs.push_back(half_pi * k / kDirections);
    const auto& v = body.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point e = v[(i + 1) % v.size()] - v[i];
        dirs.push_back(std::fmod(std::atan2(e.y, e.x) + 2.0 * std::numbers::pi, half_pi));
    }

    std::optional<DirectionFit> best;
    auto consider = [&](const DirectionFit& f) {
        if (!meets_guarantee(f, body_area)) return;
        if (!best || f.scale > best->scale) best = f;
    };
    DirectionFit top{};
    for (double phi : dirs) {
        const DirectionFit f = fit_direction(body, hps, c0, phi);
        consider(f);
        if (f.scale > top.scale) top = f;
    }

    // Golden-section refinement of the scale around the best sampled direction.
    {
        constexpr double g = 0.6180339887498949;
        double a = top.phi - half_pi / kDirections;
        double b = top.phi + half_pi / kDirections;
        double c = b - g * (b - a);
        double d = a + g * (b - a);
        DirectionFit fc = fit_direction(body, hps, c0, c);
        DirectionFit fd = fit_direction(body, hps, c0, d);
        for (int it = 0; it < 40; ++it) {
            if (fc.scale > fd.scale) {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = fit_direction(body, hps, c0, c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = fit_direction(body, hps, c0, d);
            }
        }
        consider(fc);
        consider(fd);
    }

    if (!best) {
        throw Error(Errc::ConvergenceFailure, "no direction met the ratio-2 rectangle guarantee");
    }
    return {best->inscribed, best->circumscribed, 1.0 / best->scale};
}

}  // namespace cvxhole
