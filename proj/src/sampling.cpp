#include "cvxhole/sampling.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "cvxhole/error.hpp"
#include "json.hpp"

namespace cvxhole {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

CounterRng::CounterRng(SeedSpec seed, std::uint64_t counter)
    : key_(mix64(mix64(seed.master_seed) ^ (seed.stream_index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL))),
      counter_(counter) {}

CounterRng::result_type CounterRng::operator()() {
    const std::uint64_t c = counter_++;
    return mix64(key_ ^ mix64(c));
}

double CounterRng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

PointSample sample_uniform(const ConvexBody& body, std::size_t n, SeedSpec seed, std::string body_id) {
    PointSample out;
    out.seed = seed;
    out.n = n;
    out.body_id = std::move(body_id);
    out.points.reserve(n);
    const auto& v = body.vertices();
    std::vector<double> cumulative;
    double total = 0.0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        total += 0.5 * cross(v[i] - v[0], v[i + 1] - v[0]);
        cumulative.push_back(total);
    }
    CounterRng rng(seed);
    for (std::size_t k = 0; k < n; ++k) {
        const double pick = rng.uniform() * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
        if (it == cumulative.end()) --it;
        const std::size_t t = static_cast<std::size_t>(it - cumulative.begin()) + 1;
        double a = rng.uniform();
        double b = rng.uniform();
        if (a + b > 1.0) {
            a = 1.0 - a;
            b = 1.0 - b;
        }
        out.points.push_back(v[0] + a * (v[t] - v[0]) + b * (v[t + 1] - v[0]));
    }
    return out;
}

namespace {

std::string format_double(double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
    double x = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw Error(Errc::ParseError, "bad number '" + std::string(s) + "'");
    }
    return x;
}

}  // namespace

void write_sample_csv(std::ostream& out, const PointSample& sample) {
    out << "# seed=" << sample.seed.master_seed << ':' << sample.seed.stream_index << " n=" << sample.n
        << " body=" << sample.body_id << '\n';
    out << "x,y\n";
    for (const Point& p : sample.points) out << format_double(p.x) << ',' << format_double(p.y) << '\n';
}

PointSample read_sample_csv(std::istream& in) {
    PointSample s;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
        throw Error(Errc::ParseError, "missing sample header line");
    }
    std::istringstream header(line.substr(2));
    std::string field;
    while (header >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw Error(Errc::ParseError, "bad header field " + field);
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "seed") {
            const auto colon = value.find(':');
            if (colon == std::string::npos) throw Error(Errc::ParseError, "bad seed field");
            s.seed.master_seed = std::stoull(value.substr(0, colon));
            s.seed.stream_index = std::stoull(value.substr(colon + 1));
        } else if (key == "n") {
            s.n = std::stoull(value);
        } else if (key == "body") {
            s.body_id = value;
        }
    }
    if (!std::getline(in, line) || line != "x,y") throw Error(Errc::ParseError, "missing x,y header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw Error(Errc::ParseError, "bad point line " + line);
        s.points.push_back({parse_double(std::string_view(line).substr(0, comma)),
                            parse_double(std::string_view(line).substr(comma + 1))});
    }
    if (s.points.size() != s.n) throw Error(Errc::ParseError, "point count does not match header");
    return s;
}

std::string sample_to_json(const PointSample& sample) {
    nlohmann::json j;
    j["seed"] = {{"master", sample.seed.master_seed}, {"stream", sample.seed.stream_index}};
    j["n"] = sample.n;
    j["body_id"] = sample.body_id;
    auto pts = nlohmann::json::array();
    for (const Point& p : sample.points) pts.push_back({p.x, p.y});
    j["points"] = std::move(pts);
    return j.dump();
}

PointSample sample_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        PointSample s;
        s.seed.master_seed = j.at("seed").at("master").get<std::uint64_t>();
        s.seed.stream_index = j.at("seed").at("stream").get<std::uint64_t>();
        s.n = j.at("n").get<std::size_t>();
        s.body_id = j.value("body_id", std::string{});
        for (const auto& p : j.at("points")) s.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        if (s.points.size() != s.n) throw Error(Errc::ParseError, "point count does not match n");
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, e.what());
    }
}

}  // namespace cvxhole
