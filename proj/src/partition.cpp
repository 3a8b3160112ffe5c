#include "cvxhole/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cvxhole/error.hpp"
#include "cvxhole/predicates.hpp"

namespace cvxhole {

namespace {

bool polygon_contains(std::span<const Point> poly, Point p, Boundary mode) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const int o = orientation(poly[i], poly[(i + 1) % n], p);
        if (o < 0 || (o == 0 && mode == Boundary::open)) return false;
    }
    return true;
}

// Largest distance by which `p` lies outside the polygon's edge lines.
double polygon_violation(const Polygon& poly, Point p) {
    double worst = -std::numeric_limits<double>::infinity();
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point e = poly[(i + 1) % n] - poly[i];
        const double len = norm(e);
        if (len == 0.0) continue;
        worst = std::max(worst, -cross(e, p - poly[i]) / len);
    }
    return worst;
}

// Part of a convex polygon with dot(dir, p) <= c whose area equals `target`.
double find_cut(const Polygon& poly, Point dir, double target) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Point& p : poly) {
        lo = std::min(lo, dot(dir, p));
        hi = std::max(hi, dot(dir, p));
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (polygon_area(clip_halfplane(poly, dir, mid)) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct GridLayout {
    double ox = 0.0, oy = 0.0;
    unsigned cells = 0;
};

struct Column {
    double x0, x1;
    Polygon slab;  // body ∩ column, cell frame
    int j_lo = 0, j_hi = -1;  // inclusive run of interior cells
};

// Everything below happens in the cell frame, where cells are axis-aligned
// w x h boxes.
struct Frame {
    ConvexBody body;
    double w, h;
    Box box;
};

std::vector<Column> layout_columns(const Frame& f, double ox, double oy) {
    std::vector<Column> cols;
    const auto& verts = f.body.vertices();
    const long i0 = static_cast<long>(std::floor((f.box.min_x - ox) / f.w));
    for (long i = i0;; ++i) {
        const double x0 = ox + static_cast<double>(i) * f.w;
        const double x1 = ox + static_cast<double>(i + 1) * f.w;
        if (x0 >= f.box.max_x) break;
        Column c{x0, x1, {}, 0, -1};
        c.slab = clip_halfplane(clip_halfplane(verts, {1.0, 0.0}, x1), {-1.0, 0.0}, -x0);
        if (polygon_area(c.slab) <= 0.0) continue;
        // Interior cells of a column form a contiguous run.
        const long j0 = static_cast<long>(std::floor((f.box.min_y - oy) / f.h));
        bool in_run = false;
        for (long j = j0;; ++j) {
            const double y0 = oy + static_cast<double>(j) * f.h;
            const double y1 = oy + static_cast<double>(j + 1) * f.h;
            if (y0 >= f.box.max_y) break;
            const bool inside = x0 >= f.box.min_x && x1 <= f.box.max_x && y0 >= f.box.min_y &&
                                y1 <= f.box.max_y && polygon_contains(verts, {x0, y0}, Boundary::closed) &&
                                polygon_contains(verts, {x1, y0}, Boundary::closed) &&
                                polygon_contains(verts, {x1, y1}, Boundary::closed) &&
                                polygon_contains(verts, {x0, y1}, Boundary::closed);
            if (inside && !in_run) {
                c.j_lo = static_cast<int>(j);
                in_run = true;
            }
            if (inside) c.j_hi = static_cast<int>(j);
            if (!inside && in_run) break;
        }
        cols.push_back(std::move(c));
    }
    return cols;
}

unsigned count_cells(const std::vector<Column>& cols) {
    unsigned total = 0;
    for (const auto& c : cols) {
        if (c.j_hi >= c.j_lo) total += static_cast<unsigned>(c.j_hi - c.j_lo + 1);
    }
    return total;
}

struct Construction {
    Frame frame;
    AffineMap to_body;  // cell frame -> body frame
    std::vector<Column> columns;
    double oy = 0.0;
    unsigned cells = 0;
};

Construction construct(const ConvexBody& body, unsigned m, const OrientedRect& cell_shape) {
    if (m == 0) throw Error(Errc::TooFewCells, "need at least one region");
    const double a = area(body);
    const double aspect = cell_shape.width / cell_shape.height;
    const double h = std::sqrt(a / m / aspect);
    const double w = aspect * h;
    // Rotate so that the cell's width axis becomes the x axis.
    const AffineMap to_frame = AffineMap::rotation(-cell_shape.inclination);
    Construction best{{transform(body, to_frame), w, h, {}}, to_frame.inverse(), {}, 0.0, 0};
    best.frame.box = bounding_box(best.frame.body);
    constexpr int kOffsets = 4;
    bool have = false;
    for (int sx = 0; sx < kOffsets; ++sx) {
        for (int sy = 0; sy < kOffsets; ++sy) {
            const double ox = best.frame.box.min_x + w * sx / kOffsets;
            const double oy = best.frame.box.min_y + h * sy / kOffsets;
            auto cols = layout_columns(best.frame, ox, oy);
            const unsigned cells = count_cells(cols);
            if (!have || cells > best.cells) {
                best.columns = std::move(cols);
                best.oy = oy;
                best.cells = cells;
                have = true;
            }
        }
    }
    return best;
}

unsigned required_cells(unsigned m) { return (2 * m + 2) / 3; }

Polygon map_polygon(const Polygon& poly, const AffineMap& map) {
    Polygon out;
    out.reserve(poly.size());
    for (const Point& p : poly) out.push_back(map(p));
    return out;
}

}  // namespace

double Region::area() const {
    double total = 0.0;
    for (const auto& p : pieces) total += polygon_area(p);
    return total;
}

bool Region::contains(Point p, Boundary mode) const {
    for (const auto& piece : pieces) {
        if (polygon_contains(piece, p, mode)) return true;
    }
    return false;
}

std::vector<Region> slice_equal_area(std::span<const Polygon> pieces, std::span<const Point> sweeps,
                                     unsigned count) {
    std::vector<Region> out;
    if (count == 0) return out;
    double total = 0.0;
    for (const auto& p : pieces) total += polygon_area(p);
    const double each = total / count;
    Region current;
    double need = each;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        Polygon piece = pieces[k];
        const Point dir = sweeps[k];
        for (;;) {
            const double a = polygon_area(piece);
            if (a <= 0.0) break;
            if (out.size() + 1 == count || a <= need) {
                current.pieces.push_back(std::move(piece));
                need -= a;
                break;
            }
            const double c = find_cut(piece, dir, need);
            Polygon head = clip_halfplane(piece, dir, c);
            Polygon tail = clip_halfplane(piece, -1.0 * dir, -c);
            if (polygon_area(head) > 0.0) current.pieces.push_back(std::move(head));
            out.push_back(std::move(current));
            current = Region{};
            need = each;
            piece = std::move(tail);
        }
        if (need <= 1e-14 * each && out.size() + 1 < count) {
            out.push_back(std::move(current));
            current = Region{};
            need = each;
        }
    }
    if (!current.pieces.empty() || out.size() < count) out.push_back(std::move(current));
    while (out.size() > count) {
        // Rounding produced an extra sliver region; fold it into the previous one.
        auto last = std::move(out.back());
        out.pop_back();
        for (auto& p : last.pieces) out.back().pieces.push_back(std::move(p));
    }
    return out;
}

unsigned partition_cell_count(const ConvexBody& body, unsigned m, const OrientedRect& cell_shape) {
    return construct(body, m, cell_shape).cells;
}

std::vector<Region> equal_area_partition(const ConvexBody& body, unsigned m,
                                         const OrientedRect& cell_shape) {
    Construction con = construct(body, m, cell_shape);
    if (con.cells < required_cells(m) || con.cells > m) {
        throw Error(Errc::TooFewCells, "grid construction placed " + std::to_string(con.cells) +
                                           " cells, need " + std::to_string(required_cells(m)) +
                                           " of " + std::to_string(m));
    }
    const double body_area = area(body);
    const double drop = 1e-15 * body_area;
    std::vector<Region> regions;
    std::vector<Polygon> below, above;
    for (const Column& c : con.columns) {
        if (c.j_hi < c.j_lo) {
            below.push_back(c.slab);
            continue;
        }
        const double y_lo = con.oy + c.j_lo * con.frame.h;
        const double y_hi = con.oy + (c.j_hi + 1) * con.frame.h;
        for (int j = c.j_lo; j <= c.j_hi; ++j) {
            const double y0 = con.oy + j * con.frame.h;
            const double y1 = con.oy + (j + 1) * con.frame.h;
            Region r;
            r.pieces.push_back(map_polygon({{c.x0, y0}, {c.x1, y0}, {c.x1, y1}, {c.x0, y1}}, con.to_body));
            r.is_homothet = true;
            r.cell = OrientedRect::make(con.to_body({0.5 * (c.x0 + c.x1), 0.5 * (y0 + y1)}), c.x1 - c.x0,
                                        y1 - y0, cell_shape.inclination);
            regions.push_back(std::move(r));
        }
        Polygon lo = clip_halfplane(c.slab, {0.0, 1.0}, y_lo);
        Polygon hi = clip_halfplane(c.slab, {0.0, -1.0}, -y_hi);
        if (polygon_area(lo) > drop) below.push_back(std::move(lo));
        if (polygon_area(hi) > drop) above.push_back(std::move(hi));
    }
    // Walk the leftover ring: bottom pieces left to right, then top pieces back.
    std::vector<Polygon> ring;
    std::vector<Point> sweeps;
    const Point right = con.to_body.linear({1.0, 0.0});
    for (auto& p : below) {
        ring.push_back(map_polygon(p, con.to_body));
        sweeps.push_back(right);
    }
    for (auto it = above.rbegin(); it != above.rend(); ++it) {
        ring.push_back(map_polygon(*it, con.to_body));
        sweeps.push_back(-1.0 * right);
    }
    const unsigned rest = m - con.cells;
    if (rest > 0) {
        for (auto& r : slice_equal_area(ring, sweeps, rest)) regions.push_back(std::move(r));
    }
    return regions;
}

unsigned min_partition_cells(const ConvexBody& body, const OrientedRect& cell_shape, unsigned limit) {
    for (unsigned m = 1; m <= limit; ++m) {
        const unsigned cells = partition_cell_count(body, m, cell_shape);
        if (cells >= required_cells(m) && cells <= m) return m;
    }
    throw Error(Errc::TooFewCells, "no region count up to the search limit admits the construction");
}

std::vector<Region> vertical_strips(const ConvexBody& body, unsigned k) {
    std::vector<Region> out;
    if (k == 0) return out;
    const Polygon poly = body.vertices();
    const double total = area(body);
    double prev = bounding_box(body).min_x;
    const double last = bounding_box(body).max_x;
    for (unsigned i = 0; i < k; ++i) {
        double next = last;
        if (i + 1 < k) next = find_cut(poly, {1.0, 0.0}, total * (i + 1) / k);
        Polygon slab = clip_halfplane(clip_halfplane(poly, {1.0, 0.0}, next), {-1.0, 0.0}, -prev);
        Region r;
        r.pieces.push_back(std::move(slab));
        out.push_back(std::move(r));
        prev = next;
    }
    return out;
}

namespace {

double overlap_area(const Polygon& a, const Polygon& b) {
    Polygon clipped = a;
    const std::size_t n = b.size();
    for (std::size_t i = 0; i < n && clipped.size() >= 3; ++i) {
        const Point e = b[(i + 1) % n] - b[i];
        const Point normal{e.y, -e.x};
        clipped = clip_halfplane(clipped, normal, dot(normal, b[i]));
    }
    return polygon_area(clipped);
}

}  // namespace

void check_partition(const ConvexBody& body, std::span<const Region> regions, double tol) {
    const double a = area(body);
    const double slack = tol * a;
    struct Item {
        Box box;
        const Polygon* poly;
        std::size_t region;
    };
    std::vector<Item> items;
    double total = 0.0;
    const Polygon outer = body.vertices();
    for (std::size_t r = 0; r < regions.size(); ++r) {
        for (const auto& piece : regions[r].pieces) {
            const double pa = polygon_area(piece);
            total += pa;
            if (pa - overlap_area(piece, outer) > slack) {
                throw Error(Errc::NotAPartition, "region " + std::to_string(r) + " leaves the body");
            }
            items.push_back({bounding_box(piece), &piece, r});
        }
    }
    if (std::fabs(total - a) > slack * std::max<std::size_t>(1, regions.size())) {
        throw Error(Errc::NotAPartition, "region areas do not add up to the body area");
    }
    std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) { return x.box.min_x < y.box.min_x; });
    double overlap = 0.0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        for (std::size_t j = i + 1; j < items.size() && items[j].box.min_x < items[i].box.max_x; ++j) {
            if (items[j].box.min_y >= items[i].box.max_y || items[j].box.max_y <= items[i].box.min_y) continue;
            overlap += overlap_area(*items[i].poly, *items[j].poly);
        }
    }
    if (overlap > slack * std::max<std::size_t>(1, regions.size())) {
        throw Error(Errc::NotAPartition, "regions overlap");
    }
}

RegionIndex::RegionIndex(std::span<const Region> regions) {
    for (std::size_t r = 0; r < regions.size(); ++r) {
        for (const auto& piece : regions[r].pieces) {
            if (piece.size() < 3) continue;
            pieces_.push_back({r, piece, bounding_box(piece)});
        }
    }
    bounds_ = {INFINITY, INFINITY, -INFINITY, -INFINITY};
    for (const auto& p : pieces_) {
        bounds_.min_x = std::min(bounds_.min_x, p.box.min_x);
        bounds_.min_y = std::min(bounds_.min_y, p.box.min_y);
        bounds_.max_x = std::max(bounds_.max_x, p.box.max_x);
        bounds_.max_y = std::max(bounds_.max_y, p.box.max_y);
    }
    if (pieces_.empty()) return;
    const double side = std::ceil(2.0 * std::sqrt(static_cast<double>(pieces_.size())));
    nx_ = ny_ = static_cast<std::size_t>(std::clamp(side, 1.0, 1024.0));
    buckets_.resize(nx_ * ny_);
    const double bw = bounds_.width() / nx_;
    const double bh = bounds_.height() / ny_;
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        const Box& b = pieces_[k].box;
        const auto clampi = [](double v, std::size_t n) {
            return static_cast<std::size_t>(std::clamp(v, 0.0, static_cast<double>(n - 1)));
        };
        const std::size_t ix0 = clampi(std::floor((b.min_x - bounds_.min_x) / bw), nx_);
        const std::size_t ix1 = clampi(std::floor((b.max_x - bounds_.min_x) / bw), nx_);
        const std::size_t iy0 = clampi(std::floor((b.min_y - bounds_.min_y) / bh), ny_);
        const std::size_t iy1 = clampi(std::floor((b.max_y - bounds_.min_y) / bh), ny_);
        for (std::size_t ix = ix0; ix <= ix1; ++ix) {
            for (std::size_t iy = iy0; iy <= iy1; ++iy) buckets_[ix * ny_ + iy].push_back(k);
        }
    }
}

std::size_t RegionIndex::bucket_of(Point p) const {
    const double fx = (p.x - bounds_.min_x) / bounds_.width() * nx_;
    const double fy = (p.y - bounds_.min_y) / bounds_.height() * ny_;
    const auto ix = static_cast<std::size_t>(std::clamp(std::floor(fx), 0.0, static_cast<double>(nx_ - 1)));
    const auto iy = static_cast<std::size_t>(std::clamp(std::floor(fy), 0.0, static_cast<double>(ny_ - 1)));
    return ix * ny_ + iy;
}

std::size_t RegionIndex::locate(Point p) const {
    if (pieces_.empty()) throw Error(Errc::NotAPartition, "no regions to locate in");
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::size_t k : buckets_[bucket_of(p)]) {
        const Piece& piece = pieces_[k];
        if (piece.region >= best) continue;
        if (polygon_contains(piece.poly, p, Boundary::closed)) best = piece.region;
    }
    if (best != std::numeric_limits<std::size_t>::max()) return best;
    double least = std::numeric_limits<double>::infinity();
    for (const Piece& piece : pieces_) {
        const double v = polygon_violation(piece.poly, p);
        if (v < least) {
            least = v;
            best = piece.region;
        }
    }
    return best;
}

}  // namespace cvxhole
