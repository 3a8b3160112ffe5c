#pragma once

#include <string>

#include "cvxhole/geometry.hpp"
#include "json.hpp"

namespace cvxhole {

/// {"vertices": [[x, y], ...]}
nlohmann::json body_to_json(const ConvexBody& body);
ConvexBody body_from_json(const nlohmann::json& j);

/// {"center": [x, y], "w": .., "h": .., "theta": ..}
nlohmann::json rect_to_json(const OrientedRect& rect);
OrientedRect rect_from_json(const nlohmann::json& j);

/// Parses JSON text, turning library exceptions into Error(ParseError).
nlohmann::json parse_json(const std::string& text);
std::string read_file(const std::string& path);

}  // namespace cvxhole
