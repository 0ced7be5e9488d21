#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hookwalk/diagram.hpp"

namespace hookwalk {

struct ConstantSlopeSpec {
  double slope = 0.0;
  Interval interval;
};

struct PolynomialSpec {
  std::vector<double> coeffs;
  Interval interval;
};

//! Serialized diagram: one alternative per JSON "kind".
using DiagramSpec = std::variant<RectangularDiagram, PiecewiseLinearDiagram,
                                 ConstantSlopeSpec, PolynomialSpec>;

//! Integral values below 2^53 become JSON integers so "0" re-serializes as
//! "0"; everything else uses the shortest round-trip representation.
nlohmann::ordered_json json_number(double v);
nlohmann::ordered_json json_numbers(const std::vector<double>& v);

//! Parses and validates; throws InvalidInput on malformed or invalid specs.
DiagramSpec parse_diagram_spec(const nlohmann::json& j);
DiagramSpec read_diagram_spec(const std::string& path);
nlohmann::ordered_json to_json(const DiagramSpec& spec);
std::string kind_name(const DiagramSpec& spec);

//! Rotated diagram of a spec; unrotated specs are rotated.
Diagram to_diagram(const DiagramSpec& spec);
//! Unrotated view, available for unrotated_poly specs only.
std::optional<UnrotatedDiagram> to_unrotated(const DiagramSpec& spec);

}  // namespace hookwalk
