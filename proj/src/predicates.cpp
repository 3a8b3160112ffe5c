#include "cvxhole/predicates.hpp"

#include <array>
#include <cmath>

#include "cvxhole/geometry.hpp"

namespace cvxhole {
namespace {

// Error-free transformations (Knuth two-sum, FMA two-product).
inline void two_sum(double a, double b, double& s, double& err) {
    s = a + b;
    const double bv = s - a;
    const double av = s - bv;
    err = (a - av) + (b - bv);
}

inline void two_product(double a, double b, double& p, double& err) {
    p = a * b;
    err = std::fma(a, b, -p);
}

// Exact sign of sum(terms) using an expansion grown term by term.
template <std::size_t N>
int expansion_sign(const std::array<double, N>& terms) {
    std::array<double, N> expansion{};
    std::size_t len = 0;
    for (double t : terms) {
        double q = t;
        std::size_t out = 0;
        for (std::size_t i = 0; i < len; ++i) {
            double s, e;
            two_sum(q, expansion[i], s, e);
            q = s;
            if (e != 0.0) expansion[out++] = e;
        }
        // The expansion stays nonoverlapping and sorted by magnitude, so the
        // running head q is the most significant component.
        if (out < N) expansion[out++] = q;
        len = out;
    }
    for (std::size_t i = len; i-- > 0;) {
        if (expansion[i] > 0.0) return 1;
        if (expansion[i] < 0.0) return -1;
    }
    return 0;
}

int orientation_exact(const Point& a, const Point& b, const Point& c) {
    // (ax - cx)(by - cy) - (ay - cy)(bx - cx), expanded into six products.
    std::array<double, 12> t{};
    two_product(a.x, b.y, t[0], t[1]);
    two_product(-a.x, c.y, t[2], t[3]);
    two_product(-c.x, b.y, t[4], t[5]);
    two_product(-a.y, b.x, t[6], t[7]);
    two_product(a.y, c.x, t[8], t[9]);
    two_product(c.y, b.x, t[10], t[11]);
    return expansion_sign(t);
}

}  // namespace

double orient2d_approx(const Point& a, const Point& b, const Point& c) {
    return (a.x - c.x) * (b.y - c.y) - (a.y - c.y) * (b.x - c.x);
}

int orientation(const Point& a, const Point& b, const Point& c) {
    const double detleft = (a.x - c.x) * (b.y - c.y);
    const double detright = (a.y - c.y) * (b.x - c.x);
    const double det = detleft - detright;
    // Shewchuk's ccwerrboundA = (3 + 16 eps) eps.
    constexpr double kErrBound = 3.3306690738754716e-16;
    const double bound = kErrBound * (std::fabs(detleft) + std::fabs(detright));
    if (det > bound) return 1;
    if (-det > bound) return -1;
    return orientation_exact(a, b, c);
}

}  // namespace cvxhole
