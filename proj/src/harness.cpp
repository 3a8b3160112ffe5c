#include "cvxhole/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "cvxhole/error.hpp"
#include "cvxhole/holes.hpp"
#include "cvxhole/io.hpp"
#include "cvxhole/occupancy.hpp"
#include "cvxhole/parallel.hpp"
#include "cvxhole/partition.hpp"
#include "cvxhole/rect_nets.hpp"
#include "cvxhole/sampling.hpp"

namespace cvxhole {

namespace {

const std::vector<std::string>& known_statistics() {
    static const std::vector<std::string> names{"max_l", "maxrect", "polymax", "stripquad", "occupancy", "bounds"};
    return names;
}

double log_ratio(std::uint64_t n) { return std::log(static_cast<double>(n)) / static_cast<double>(n); }

std::string format_double(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

}  // namespace

ConvexBody resolve_body(const nlohmann::json& spec) {
    if (spec.is_string()) {
        const std::string s = spec.get<std::string>();
        if (s == "unit_square" || s == "square") return ConvexBody::unit_square();
        return resolve_body(parse_json(read_file(s)));
    }
    if (spec.is_object() && spec.contains("regular")) {
        const int k = spec.at("regular").get<int>();
        return normalize_to_unit_area(ConvexBody::regular_polygon(k, 1.0)).body;
    }
    const ConvexBody raw = body_from_json(spec);
    return std::fabs(area(raw) - 1.0) <= 1e-12 ? raw : normalize_to_unit_area(raw).body;
}

Shape resolve_shape(const nlohmann::json& spec) {
    if (spec.is_string()) {
        const std::string s = spec.get<std::string>();
        if (s == "square") return Shape::square();
        if (s == "disk") return Shape::disk();
        if (s == "disk64") return Shape::polygon(ConvexBody::regular_polygon(64, 1.0), "disk64");
        if (s.rfind("rect:", 0) == 0) {
            const double aspect = std::stod(s.substr(5));
            if (!(aspect > 0.0)) throw Error(Errc::ParseError, "bad rectangle aspect: " + s);
            return Shape::polygon(ConvexBody::axis_rectangle(0, 0, aspect, 1), s);
        }
        return Shape::polygon(body_from_json(parse_json(read_file(s))), s);
    }
    return Shape::polygon(body_from_json(spec), "polygon");
}

void ExperimentConfig::validate() const {
    if (n_values.empty()) throw Error(Errc::PreconditionViolation, "n_values is empty");
    for (std::size_t k = 1; k < n_values.size(); ++k) {
        if (n_values[k] <= n_values[k - 1]) throw Error(Errc::PreconditionViolation, "n_values must increase strictly");
    }
    if (trials_per_n < 1) throw Error(Errc::PreconditionViolation, "trials_per_n must be at least 1");
    if (shapes.empty()) throw Error(Errc::PreconditionViolation, "no shapes given");
    for (const std::string& w : which) {
        const auto& names = known_statistics();
        if (std::find(names.begin(), names.end(), w) == names.end()) {
            throw Error(Errc::PreconditionViolation, "unknown statistic: " + w);
        }
    }
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    try {
        ExperimentConfig c;
        if (j.contains("body")) c.body = j.at("body");
        if (j.contains("shapes")) c.shapes = j.at("shapes").get<std::vector<nlohmann::json>>();
        c.n_values = j.at("n_values").get<std::vector<std::uint64_t>>();
        c.epsilon = j.value("epsilon", c.epsilon);
        c.delta = j.value("delta", c.delta);
        c.trials_per_n = j.value("trials_per_n", c.trials_per_n);
        c.master_seed = j.value("master_seed", c.master_seed);
        c.which = j.at("which").get<std::vector<std::string>>();
        c.maxrect_frames = j.value("maxrect_frames", c.maxrect_frames);
        c.polymax_exact_limit = j.value("polymax_exact_limit", c.polymax_exact_limit);
        c.polymax_window_points = j.value("polymax_window_points", c.polymax_window_points);
        c.bounds_polymax = j.value("bounds_polymax", c.bounds_polymax);
        c.validate();
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, std::string("bad experiment config: ") + e.what());
    }
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
    return {{"body", c.body},
            {"shapes", c.shapes},
            {"n_values", c.n_values},
            {"epsilon", c.epsilon},
            {"delta", c.delta},
            {"trials_per_n", c.trials_per_n},
            {"master_seed", c.master_seed},
            {"which", c.which},
            {"maxrect_frames", c.maxrect_frames},
            {"polymax_exact_limit", c.polymax_exact_limit},
            {"polymax_window_points", c.polymax_window_points},
            {"bounds_polymax", c.bounds_polymax}};
}

const char* certificate_name(Certificate c) {
    switch (c) {
        case Certificate::certified: return "certified";
        case Certificate::lower_only: return "lower_only";
        case Certificate::failed: return "failed";
    }
    return "failed";
}

Certificate certificate_from_name(const std::string& s) {
    if (s == "certified") return Certificate::certified;
    if (s == "lower_only") return Certificate::lower_only;
    if (s == "failed") return Certificate::failed;
    throw Error(Errc::ParseError, "unknown certificate: " + s);
}

std::uint64_t trial_stream(std::uint64_t master_seed, std::uint64_t n, std::uint64_t trial,
                           const std::string& statistic) {
    // FNV-1a of the name, then a chain of splitmix finalizers.
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : statistic) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::uint64_t s = mix64(master_seed ^ 0x9e3779b97f4a7c15ull);
    s = mix64(s ^ n);
    s = mix64(s ^ (trial + 0x632be59bd9b4e019ull));
    return mix64(s ^ h);
}

// ---------------------------------------------------------------------------

namespace {

struct Task {
    std::uint64_t n;
    std::uint64_t trial;
    std::string statistic;  // as in config.which
};

// Per-n data shared by every trial.
struct NCache {
    std::vector<std::optional<HomothetNet>> nets;  // per shape
    std::optional<NetParams> rect_params;
    std::unique_ptr<OccupancyCounter> strips;
};

TrialRecord make_row(const std::string& stat, const Task& t, std::uint64_t seed, double value, Certificate c) {
    TrialRecord r;
    r.statistic = stat;
    r.n = t.n;
    r.trial = t.trial;
    r.seed = seed;
    r.value = value;
    r.normalized = value / log_ratio(t.n);
    r.certificate = c;
    return r;
}

std::string shape_stat(const std::string& base, const ExperimentConfig& c, const Shape& s) {
    return c.shapes.size() == 1 ? base : base + ":" + s.id();
}

std::vector<TrialRecord> run_task(const ExperimentConfig& config, const ConvexBody& body,
                                  const std::vector<Shape>& shapes, const NCache& cache, const Task& t) {
    const std::uint64_t stream = trial_stream(config.master_seed, t.n, t.trial, t.statistic);
    std::vector<TrialRecord> rows;
    const auto fail = [&](const std::string& stat) { rows.push_back(make_row(stat, t, stream, 0.0, Certificate::failed)); };
    if (t.statistic == "max_l") {
        for (std::size_t k = 0; k < shapes.size(); ++k) {
            const std::string stat = shape_stat("max_l", config, shapes[k]);
            try {
                const PointSample s = sample_uniform(body, t.n, {config.master_seed, stream});
                HomothetResult r;
                if (cache.nets[k]) {
                    r = largest_empty_homothet(body, shapes[k], s, *cache.nets[k]);
                } else {
                    r.best = search_empty_homothet(body, shapes[k], s.points, config.epsilon);
                    r.area = r.best.area();
                }
                rows.push_back(make_row(stat, t, stream, r.area,
                                        r.certified_upper ? Certificate::certified : Certificate::lower_only));
                rows.push_back(make_row(stat + "_upper", t, stream, r.certified_upper.value_or(0.0),
                                        r.certified_upper ? Certificate::certified : Certificate::failed));
            } catch (const Error&) {
                fail(stat);
            }
        }
    } else if (t.statistic == "maxrect") {
        try {
            if (!cache.rect_params) throw Error(Errc::PreconditionViolation, "no rectangle net for this n");
            const PointSample s = sample_uniform(body, t.n, {config.master_seed, stream});
            const NetCertificate c = net_max_empty_rect(body, s, *cache.rect_params, {config.maxrect_frames});
            const bool ok = c.status == NetStatus::certified;
            rows.push_back(make_row("maxrect", t, stream, c.lower, ok ? Certificate::certified : Certificate::lower_only));
            rows.push_back(make_row("maxrect_upper", t, stream, ok ? c.upper_certified : 0.0,
                                    ok ? Certificate::certified : Certificate::failed));
        } catch (const Error&) {
            fail("maxrect");
        }
    } else if (t.statistic == "polymax") {
        try {
            const PointSample s = sample_uniform(body, t.n, {config.master_seed, stream});
            const PolymaxResult r = polymax(s.points, {config.polymax_exact_limit, config.polymax_window_points});
            rows.push_back(make_row("polymax", t, stream, r.area, r.exact ? Certificate::certified : Certificate::lower_only));
        } catch (const Error&) {
            fail("polymax");
        }
    } else if (t.statistic == "stripquad") {
        try {
            const PointSample s = sample_uniform(body, t.n, {config.master_seed, stream});
            const StripQuadResult r = strip_quadrilateral(s.points, t.n, config.epsilon, config.delta);
            rows.push_back(make_row("stripquad", t, stream, r.area, r.quad ? Certificate::certified : Certificate::failed));
        } catch (const Error&) {
            fail("stripquad");
        }
    } else if (t.statistic == "occupancy") {
        try {
            if (!cache.strips) throw Error(Errc::PreconditionViolation, "no strip partition for this n");
            const PointSample s = sample_uniform(body, t.n, {config.master_seed, stream});
            const OccupancyResult r = cache.strips->count(s.points);
            rows.push_back(make_row("occupancy", t, stream, static_cast<double>(r.empty_count), Certificate::certified));
        } catch (const Error&) {
            fail("occupancy");
        }
    } else if (t.statistic == "bounds") {
        try {
            const PointSample s = sample_uniform(body, t.n, {config.master_seed, stream});
            HoleBoundsOptions opt;
            opt.polymax = {config.polymax_exact_limit, config.polymax_window_points};
            opt.rect_frames = config.maxrect_frames;
            opt.use_polymax = config.bounds_polymax;
            const HoleBounds b = convex_hole_bounds(body, s.points, t.n, config.epsilon, opt);
            rows.push_back(make_row("bounds_lower", t, stream, b.lower, Certificate::lower_only));
            rows.push_back(make_row("bounds_upper", t, stream, b.upper.value_or(0.0),
                                    b.upper ? Certificate::certified : Certificate::failed));
        } catch (const Error&) {
            fail("bounds_lower");
        }
    }
    return rows;
}

}  // namespace

ScalingReport run_experiment(const ExperimentConfig& config, unsigned threads) {
    config.validate();
    const ConvexBody body = resolve_body(config.body);
    std::vector<Shape> shapes;
    for (const auto& s : config.shapes) shapes.push_back(resolve_shape(s));
    const auto wants = [&](const char* name) {
        return std::find(config.which.begin(), config.which.end(), name) != config.which.end();
    };

    std::vector<NCache> caches(config.n_values.size());
    parallel_for(config.n_values.size(), threads, [&](std::size_t k) {
        const std::uint64_t n = config.n_values[k];
        NCache& c = caches[k];
        if (wants("max_l")) {
            for (const Shape& s : shapes) {
                try {
                    c.nets.emplace_back(build_homothet_net(body, s, n, config.epsilon));
                } catch (const Error&) {
                    c.nets.emplace_back();  // lower bound only
                }
            }
        }
        if (wants("maxrect")) {
            try {
                c.rect_params = make_net_params(n, config.epsilon, body);
            } catch (const Error&) {
            }
        }
        if (wants("occupancy")) {
            try {
                const ChebyshevBound cb = chebyshev_empty_regions_bound(n, config.epsilon);
                c.strips = std::make_unique<OccupancyCounter>(
                    body, vertical_strips(body, static_cast<unsigned>(cb.regions)));
            } catch (const Error&) {
            }
        }
    });

    std::vector<Task> tasks;
    std::vector<std::size_t> cache_of;
    for (std::size_t k = 0; k < config.n_values.size(); ++k) {
        for (std::uint64_t trial = 0; trial < config.trials_per_n; ++trial) {
            for (const std::string& w : config.which) {
                tasks.push_back({config.n_values[k], trial, w});
                cache_of.push_back(k);
            }
        }
    }
    std::vector<std::vector<TrialRecord>> slots(tasks.size());
    parallel_for(tasks.size(), threads, [&](std::size_t i) {
        slots[i] = run_task(config, body, shapes, caches[cache_of[i]], tasks[i]);
    });
    std::vector<TrialRecord> rows;
    for (auto& s : slots) {
        for (auto& r : s) rows.push_back(std::move(r));
    }
    return summarize(std::move(rows));
}

ScalingReport summarize(std::vector<TrialRecord> rows) {
    ScalingReport rep;
    std::stable_sort(rows.begin(), rows.end(), [](const TrialRecord& a, const TrialRecord& b) {
        if (a.n != b.n) return a.n < b.n;
        return a.trial < b.trial;
    });
    rep.rows = std::move(rows);
    std::map<std::string, std::map<std::uint64_t, std::vector<const TrialRecord*>>> groups;
    for (const TrialRecord& r : rep.rows) groups[r.statistic][r.n].push_back(&r);
    for (const auto& [stat, by_n] : groups) {
        std::vector<double>& trend = rep.trend[stat];
        for (const auto& [n, list] : by_n) {
            StatSummary s;
            s.statistic = stat;
            s.n = n;
            s.count = list.size();
            std::vector<double> v;
            for (const TrialRecord* r : list) {
                if (r->certificate == Certificate::failed) {
                    ++s.failures;
                } else {
                    v.push_back(r->normalized);
                }
            }
            if (v.empty()) {
                s.mean = s.median = s.stddev = std::numeric_limits<double>::quiet_NaN();
            } else {
                double sum = 0.0;
                for (double x : v) sum += x;
                s.mean = sum / static_cast<double>(v.size());
                double sq = 0.0;
                for (double x : v) sq += (x - s.mean) * (x - s.mean);
                s.stddev = v.size() > 1 ? std::sqrt(sq / static_cast<double>(v.size() - 1)) : 0.0;
                std::sort(v.begin(), v.end());
                const std::size_t h = v.size() / 2;
                s.median = v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
            }
            trend.push_back(s.median);
            rep.summaries.push_back(s);
        }
        bool down = true;
        double prev = std::numeric_limits<double>::infinity();
        for (double m : trend) {
            if (std::isnan(m)) continue;  // every trial failed at this n
            down = down && m <= prev + 1e-12 * std::fabs(prev);
            prev = m;
        }
        rep.non_increasing[stat] = down;
    }
    return rep;
}

void write_report_csv(std::ostream& out, const ScalingReport& report) {
    out << "statistic,n,trial,seed,value,normalized,certificate\n";
    for (const TrialRecord& r : report.rows) {
        out << r.statistic << ',' << r.n << ',' << r.trial << ',' << r.seed << ',' << format_double(r.value) << ','
            << format_double(r.normalized) << ',' << certificate_name(r.certificate) << '\n';
    }
}

std::vector<TrialRecord> read_report_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "statistic,n,trial,seed,value,normalized,certificate") {
        throw Error(Errc::ParseError, "missing report header");
    }
    std::vector<TrialRecord> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 7) throw Error(Errc::ParseError, "bad report row: " + line);
        TrialRecord r;
        r.statistic = f[0];
        const auto num = [&](const std::string& s, auto& v) {
            const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
                throw Error(Errc::ParseError, "bad number in report row: " + line);
            }
        };
        num(f[1], r.n);
        num(f[2], r.trial);
        num(f[3], r.seed);
        num(f[4], r.value);
        num(f[5], r.normalized);
        r.certificate = certificate_from_name(f[6]);
        rows.push_back(std::move(r));
    }
    return rows;
}

nlohmann::json report_summary_json(const ScalingReport& report) {
    nlohmann::json j;
    j["summaries"] = nlohmann::json::array();
    for (const StatSummary& s : report.summaries) {
        j["summaries"].push_back({{"statistic", s.statistic},
                                  {"n", s.n},
                                  {"count", s.count},
                                  {"failures", s.failures},
                                  {"mean", s.mean},
                                  {"median", s.median},
                                  {"stddev", s.stddev}});
    }
    j["trend"] = report.trend;
    j["non_increasing"] = report.non_increasing;
    return j;
}

ScalingFit fit_scaling(const ScalingReport& report, const std::string& statistic) {
    std::vector<std::pair<double, double>> pts;  // (1/log n, median)
    double n_max = 0.0;
    for (const StatSummary& s : report.summaries) {
        if (s.statistic != statistic || s.count == s.failures) continue;
        pts.emplace_back(1.0 / std::log(static_cast<double>(s.n)), s.median);
        n_max = std::max(n_max, static_cast<double>(s.n));
    }
    if (pts.size() < 3) throw Error(Errc::InsufficientData, "fit needs at least three n values for " + statistic);
    ScalingFit fit;
    fit.statistic = statistic;
    double best_n = -1.0;
    for (const StatSummary& s : report.summaries) {
        if (s.statistic == statistic && s.count != s.failures && static_cast<double>(s.n) > best_n) {
            best_n = static_cast<double>(s.n);
            fit.c_hat = s.median;
        }
    }
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.drift = -slope / std::log(n_max);
    fit.diverging = fit.drift > 0.25 * std::fabs(fit.c_hat);
    return fit;
}

}  // namespace cvxhole
