#include "cvxhole/io.hpp"

#include <fstream>
#include <sstream>

#include "cvxhole/error.hpp"

namespace cvxhole {

nlohmann::json body_to_json(const ConvexBody& body) {
    auto verts = nlohmann::json::array();
    for (const Point& p : body.vertices()) verts.push_back({p.x, p.y});
    return {{"vertices", verts}};
}

ConvexBody body_from_json(const nlohmann::json& j) {
    try {
        std::vector<Point> v;
        for (const auto& p : j.at("vertices")) v.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        return ConvexBody(std::move(v));
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, e.what());
    }
}

nlohmann::json rect_to_json(const OrientedRect& rect) {
    return {{"center", {rect.center.x, rect.center.y}},
            {"w", rect.width},
            {"h", rect.height},
            {"theta", rect.inclination}};
}

OrientedRect rect_from_json(const nlohmann::json& j) {
    try {
        const Point c{j.at("center").at(0).get<double>(), j.at("center").at(1).get<double>()};
        const double w = j.at("w").get<double>();
        const double h = j.at("h").get<double>();
        if (!(w > 0.0 && h > 0.0)) throw Error(Errc::ParseError, "rectangle sides must be positive");
        return OrientedRect::make(c, w, h, j.at("theta").get<double>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, e.what());
    }
}

nlohmann::json parse_json(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ParseError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace cvxhole
