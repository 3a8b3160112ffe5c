#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cvxhole/error.hpp"
#include "cvxhole/harness.hpp"
#include "cvxhole/holes.hpp"
#include "cvxhole/homothet.hpp"
#include "cvxhole/io.hpp"
#include "cvxhole/occupancy.hpp"
#include "cvxhole/partition.hpp"
#include "cvxhole/rect_nets.hpp"
#include "cvxhole/sampling.hpp"

using namespace cvxhole;
using nlohmann::json;

namespace {

struct Common {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::uint64_t n = 1000;
    double eps = 0.1;
    double delta = 0.2;
    std::uint64_t trials = 1;
    std::string out;
    std::string format = "json";
    std::string body = "unit_square";
    std::string sample_path;
    unsigned threads = 0;
};

json spec_json(const std::string& s) {
    if (!s.empty() && (s.front() == '{' || s.front() == '[' || s.front() == '"')) return parse_json(s);
    return s;
}

ConvexBody body_of(const Common& c) { return resolve_body(spec_json(c.body)); }

PointSample sample_of(const Common& c, const ConvexBody& body) {
    if (c.sample_path.empty()) return sample_uniform(body, c.n, {c.seed, c.stream});
    std::ifstream in(c.sample_path);
    if (!in) throw Error(Errc::ParseError, "cannot open " + c.sample_path);
    if (c.sample_path.ends_with(".json")) return sample_from_json(read_file(c.sample_path));
    return read_sample_csv(in);
}

// Writes to --out or stdout.
template <class Fn>
void emit(const Common& c, Fn&& fn) {
    if (c.out.empty()) {
        fn(std::cout);
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw Error(Errc::ParseError, "cannot write " + c.out);
    fn(f);
}

void emit_json(const Common& c, const json& j) {
    emit(c, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
}

json points_json(std::span<const Point> pts) {
    json a = json::array();
    for (const Point& p : pts) a.push_back({p.x, p.y});
    return a;
}

json placement_json(const HomothetPlacement& p) {
    return {{"scale", p.scale}, {"offset", {p.offset.x, p.offset.y}}, {"shape", p.shape_id}, {"area", p.area()}};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void add_common(CLI::App* app, Common& c, bool with_sample = true) {
    app->add_option("--seed", c.seed, "master seed");
    app->add_option("--n", c.n, "number of sample points");
    app->add_option("--eps", c.eps, "epsilon");
    app->add_option("--out", c.out, "output path (default stdout)");
    app->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--body", c.body, "unit_square, JSON body spec or path to a body file");
    if (with_sample) {
        app->add_option("--stream", c.stream, "stream index under the seed");
        app->add_option("--sample", c.sample_path, "read points from a CSV or JSON sample instead of drawing them");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Large empty convex sets in random point samples"};
    app.require_subcommand(1);
    Common c;

    auto* sample = app.add_subcommand("sample", "draw a uniform sample from the body");
    add_common(sample, c, false);
    sample->add_option("--stream", c.stream, "stream index under the seed");
    sample->callback([&] {
        const PointSample s = sample_uniform(body_of(c), c.n, {c.seed, c.stream});
        if (c.format == "csv") {
            emit(c, [&](std::ostream& o) { write_sample_csv(o, s); });
        } else {
            emit(c, [&](std::ostream& o) { o << sample_to_json(s) << '\n'; });
        }
    });

    auto* occ = app.add_subcommand("occupancy", "empty vertical strips over repeated samples");
    add_common(occ, c, false);
    occ->add_option("--trials", c.trials, "number of samples");
    occ->add_option("--threads", c.threads, "worker threads (0 = all cores)");
    std::uint64_t strips = 0;
    occ->add_option("--strips", strips, "strip count (default round(n / ((1-eps) log n)))");
    occ->callback([&] {
        const ConvexBody body = body_of(c);
        const ChebyshevBound cb = chebyshev_empty_regions_bound(c.n, c.eps);
        const std::uint64_t k = strips ? strips : cb.regions;
        const OccupancyRow row =
            run_occupancy(body, vertical_strips(body, static_cast<unsigned>(k)), c.n, c.trials, c.seed, 0, c.threads);
        if (c.format == "csv") {
            emit(c, [&](std::ostream& o) { write_occupancy_csv(o, std::span<const OccupancyRow>(&row, 1)); });
            return;
        }
        std::size_t below = 0;
        for (std::size_t v : row.counts) below += static_cast<double>(v) < cb.threshold;
        emit_json(c, {{"k", row.k},
                      {"n", row.n},
                      {"trials", row.trials},
                      {"expected", row.expected},
                      {"variance", row.variance},
                      {"empirical_mean", row.empirical_mean},
                      {"empirical_var", row.empirical_var},
                      {"threshold", cb.threshold},
                      {"below_threshold", below},
                      {"counts", row.counts}});
    });

    auto* maxrect = app.add_subcommand("maxrect", "largest empty rectangle with a net certificate");
    add_common(maxrect, c);
    std::uint64_t frames = 0;
    maxrect->add_option("--frames", frames, "inclinations to scan (0 = all)");
    maxrect->callback([&] {
        const ConvexBody body = body_of(c);
        const PointSample s = sample_of(c, body);
        const NetParams p = make_net_params(s.n, c.eps, body);
        const NetCertificate cert = net_max_empty_rect(body, s, p, {frames});
        json j{{"lower", cert.lower},
               {"upper", cert.status == NetStatus::certified ? json(cert.upper_certified) : json(nullptr)},
               {"status", net_status_name(cert.status)},
               {"frames_scanned", cert.frames_scanned},
               {"t_count", p.t_count}};
        if (cert.lower_rect) j["rect"] = rect_to_json(*cert.lower_rect);
        if (cert.empty_member) {
            const NetMember& m = *cert.empty_member;
            j["empty_member"] = {{"m", m.m}, {"t", m.t}, {"i", m.i}, {"j", m.j}};
        }
        emit_json(c, j);
    });

    auto* net = app.add_subcommand("net", "rectangle nets");
    net->require_subcommand(1);
    auto* build = net->add_subcommand("build", "write net members as JSON lines");
    add_common(build, c, false);
    LevelRange range;
    std::size_t max_rects = 20'000'000;
    build->add_option("--m-lo", range.m_lo, "lowest level");
    build->add_option("--m-hi", range.m_hi, "highest level (-2 = top)");
    build->add_option("--t-lo", range.t_lo, "first inclination");
    build->add_option("--t-hi", range.t_hi, "end inclination (0 = all)");
    build->add_option("--max-rects", max_rects, "refuse to materialize more members");
    build->callback([&] {
        const ConvexBody body = body_of(c);
        const NetParams p = make_net_params(c.n, c.eps, body);
        const RectNet r = build_rect_net(body, p, range, max_rects);
        emit(c, [&](std::ostream& o) { write_net_jsonl(o, r); });
        std::cerr << r.rects.size() << " members, packing bound " << p.size_bound() << '\n';
    });
    auto* verify = net->add_subcommand("verify", "check a net file against its body and a sample");
    add_common(verify, c);
    std::string net_path;
    verify->add_option("net", net_path, "JSON lines net file")->required();
    verify->callback([&] {
        const ConvexBody body = body_of(c);
        const NetParams p = make_net_params(c.n, c.eps, body);
        std::ifstream in(net_path);
        if (!in) throw Error(Errc::ParseError, "cannot open " + net_path);
        const std::vector<OrientedRect> rects = read_net_jsonl(in);
        const PointSample s = sample_of(c, body);
        std::uint64_t bad_area = 0, outside = 0, bad_incl = 0, empty = 0;
        for (const OrientedRect& r : rects) {
            bad_area += std::fabs(r.area() - p.area_lo) > 1e-12 * p.area_lo;
            outside += !body_contains_rect(body, r);
            const double t = std::round(r.inclination / p.theta0);
            bad_incl += std::fabs(r.inclination - t * p.theta0) > 1e-9 * p.theta0;
            const auto corners = r.corners();
            const auto poly = ConvexBody::from_convex_chain(corners);
            bool hit = false;
            for (const Point& q : s.points) {
                if (poly && contains_point(*poly, q, Boundary::open)) {
                    hit = true;
                    break;
                }
            }
            empty += !hit;
        }
        emit_json(c, {{"members", rects.size()},
                      {"bad_area", bad_area},
                      {"outside_body", outside},
                      {"bad_inclination", bad_incl},
                      {"empty_members", empty},
                      {"sound", bad_area + outside + bad_incl == 0}});
    });

    auto* maxhole = app.add_subcommand("maxhole", "largest empty homothet of a shape");
    add_common(maxhole, c);
    std::string shape = "square";
    maxhole->add_option("--shape", shape, "square, disk, disk64, rect:<aspect> or a shape file");
    maxhole->callback([&] {
        const ConvexBody body = body_of(c);
        const PointSample s = sample_of(c, body);
        const HomothetResult r = largest_empty_homothet(body, resolve_shape(spec_json(shape)), s, c.eps);
        emit_json(c, {{"lower", r.area},
                      {"upper", optional_json(r.certified_upper)},
                      {"placement", placement_json(r.best)},
                      {"certified", r.certified_upper.has_value()}});
    });

    auto* poly = app.add_subcommand("polymax", "largest empty convex polygon on sample points");
    add_common(poly, c);
    PolymaxOptions popt;
    poly->add_option("--exact-limit", popt.exact_limit, "exact search up to this many points");
    poly->add_option("--window", popt.window_points, "points per window above the limit");
    poly->callback([&] {
        const ConvexBody body = body_of(c);
        const PointSample s = sample_of(c, body);
        const PolymaxResult r = polymax(s.points, popt);
        emit_json(c, {{"area", r.area},
                      {"exact", r.exact},
                      {"degenerate", r.degenerate},
                      {"vertices", points_json(r.chain.vertices)}});
    });

    auto* strip = app.add_subcommand("stripquad", "empty-strip quadrilateral in the unit square");
    add_common(strip, c);
    strip->add_option("--delta", c.delta, "corner band height");
    strip->callback([&] {
        const PointSample s = sample_of(c, ConvexBody::unit_square());
        const StripQuadResult r = strip_quadrilateral(s.points, s.n, c.eps, c.delta);
        const StripDiagnostics& d = r.diagnostics;
        emit_json(c, {{"found", r.quad.has_value()},
                      {"area", r.area},
                      {"quad", r.quad ? points_json(r.quad->vertices) : json(nullptr)},
                      {"t", d.t},
                      {"empty_strips", d.p},
                      {"attempts", d.q},
                      {"consecutive_empty", d.consecutive_empty},
                      {"disjoint_attempts", d.event_a}});
    });

    auto* bounds = app.add_subcommand("holebounds", "bracket the largest empty convex set");
    add_common(bounds, c);
    HoleBoundsOptions hopt;
    bool no_polymax = false;
    bounds->add_option("--frames", hopt.rect_frames, "inclinations to scan for the upper bound (0 = all)");
    bounds->add_flag("--no-polymax", no_polymax, "skip the polygon search");
    bounds->callback([&] {
        const ConvexBody body = body_of(c);
        const PointSample s = sample_of(c, body);
        hopt.use_polymax = !no_polymax;
        const HoleBounds b = convex_hole_bounds(body, s.points, s.n, c.eps, hopt);
        const double logr = std::log(static_cast<double>(s.n)) / static_cast<double>(s.n);
        emit_json(c, {{"lower", b.lower},
                      {"upper", optional_json(b.upper)},
                      {"lower_source", b.lower_source},
                      {"rect_status", net_status_name(b.rect_status)},
                      {"lower_normalized", b.lower / logr},
                      {"upper_normalized", b.upper ? json(*b.upper / logr) : json(nullptr)}});
    });

    auto* exp = app.add_subcommand("experiment", "scaling experiments");
    exp->require_subcommand(1);
    auto* run = exp->add_subcommand("run", "run a config and write the per-trial report");
    std::string config_path;
    run->add_option("config", config_path, "experiment config JSON")->required();
    run->add_option("--out", c.out, "output path (default stdout)");
    run->add_option("--format", c.format, "csv rows or json summary")->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--threads", c.threads, "worker threads (0 = all cores)");
    std::optional<std::uint64_t> seed_override, trials_override;
    run->add_option("--seed", seed_override, "override master_seed");
    run->add_option("--trials", trials_override, "override trials_per_n");
    run->callback([&] {
        ExperimentConfig cfg = config_from_json(parse_json(read_file(config_path)));
        if (seed_override) cfg.master_seed = *seed_override;
        if (trials_override) cfg.trials_per_n = *trials_override;
        cfg.validate();
        const ScalingReport rep = run_experiment(cfg, c.threads);
        if (c.format == "json") {
            emit_json(c, report_summary_json(rep));
        } else {
            emit(c, [&](std::ostream& o) { write_report_csv(o, rep); });
        }
    });
    auto* fit = exp->add_subcommand("fit", "fit c log n / n to a report");
    std::string report_path;
    std::vector<std::string> stats;
    fit->add_option("report", report_path, "per-trial CSV report")->required();
    fit->add_option("--statistic", stats, "statistics to fit (default: all)");
    fit->add_option("--out", c.out, "output path (default stdout)");
    fit->callback([&] {
        std::ifstream in(report_path);
        if (!in) throw Error(Errc::ParseError, "cannot open " + report_path);
        const ScalingReport rep = summarize(read_report_csv(in));
        if (stats.empty()) {
            for (const auto& [name, trend] : rep.trend) stats.push_back(name);
        }
        json j = json::object();
        for (const std::string& s : stats) {
            try {
                const ScalingFit f = fit_scaling(rep, s);
                j[s] = {{"c_hat", f.c_hat}, {"drift", f.drift}, {"diverging", f.diverging},
                        {"non_increasing", rep.non_increasing.at(s)}};
            } catch (const Error& e) {
                j[s] = {{"error", e.what()}};
            }
        }
        emit_json(c, j);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
