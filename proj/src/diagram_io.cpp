#include "hookwalk/diagram_io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>

namespace hookwalk {

namespace {

using nlohmann::json;

const json& field(const json& j, const char* key) {
  if (!j.contains(key))
    throw InvalidInput(std::string("diagram spec is missing \"") + key + "\"");
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw InvalidInput(std::string(what) + " must be a number");
  return j.get<double>();
}

std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

Interval parse_interval(const json& j) {
  const auto v = numbers(j, "interval");
  if (v.size() != 2) throw InvalidInput("interval must be [a, b]");
  Interval I{v[0], v[1]};
  I.validate();
  return I;
}

nlohmann::ordered_json interval_json(const Interval& I) {
  return json_numbers({I.a, I.b});
}

}  // namespace

nlohmann::ordered_json json_number(double v) {
  if (std::isfinite(v) && v == std::trunc(v) && std::abs(v) < 9007199254740992.0 &&
      !(v == 0.0 && std::signbit(v)))
    return static_cast<std::int64_t>(v);
  return v;
}

nlohmann::ordered_json json_numbers(const std::vector<double>& v) {
  auto out = nlohmann::ordered_json::array();
  for (double x : v) out.push_back(json_number(x));
  return out;
}

DiagramSpec parse_diagram_spec(const json& j) {
  if (!j.is_object()) throw InvalidInput("diagram spec must be a JSON object");
  const json& kind = field(j, "kind");
  if (!kind.is_string()) throw InvalidInput("\"kind\" must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "rectangular") {
    std::optional<Interval> I;
    if (j.contains("interval")) I = parse_interval(j.at("interval"));
    return RectangularDiagram(numbers(field(j, "minima"), "minima"),
                              numbers(field(j, "maxima"), "maxima"), I);
  }
  if (k == "piecewise_linear") {
    const json& bp = field(j, "breakpoints");
    if (!bp.is_array()) throw InvalidInput("breakpoints must be an array");
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : bp) {
      const auto v = numbers(p, "breakpoint");
      if (v.size() != 2) throw InvalidInput("breakpoint must be [t, value]");
      pts.emplace_back(v[0], v[1]);
    }
    return PiecewiseLinearDiagram(std::move(pts));
  }
  if (k == "constant_slope") {
    ConstantSlopeSpec s{number(field(j, "slope"), "slope"),
                        parse_interval(field(j, "interval"))};
    SmoothDiagram::constant_slope(s.slope, s.interval);
    return s;
  }
  if (k == "unrotated_poly") {
    PolynomialSpec s{numbers(field(j, "coeffs"), "coeffs"),
                     parse_interval(field(j, "interval"))};
    UnrotatedDiagram::polynomial(s.coeffs, s.interval);
    return s;
  }
  throw InvalidInput("unknown diagram kind \"" + k + "\"");
}

DiagramSpec read_diagram_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open diagram file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidInput("diagram file " + path + " is not valid JSON: " +
                       e.what());
  }
  return parse_diagram_spec(j);
}

std::string kind_name(const DiagramSpec& spec) {
  static const char* names[] = {"rectangular", "piecewise_linear",
                                "constant_slope", "unrotated_poly"};
  return names[spec.index()];
}

nlohmann::ordered_json to_json(const DiagramSpec& spec) {
  nlohmann::ordered_json j;
  j["kind"] = kind_name(spec);
  if (const auto* r = std::get_if<RectangularDiagram>(&spec)) {
    j["minima"] = json_numbers(r->minima());
    j["maxima"] = json_numbers(r->maxima());
    j["interval"] = interval_json(r->interval());
  } else if (const auto* p = std::get_if<PiecewiseLinearDiagram>(&spec)) {
    auto bp = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < p->knots().size(); ++i)
      bp.push_back(json_numbers({p->knots()[i], p->values()[i]}));
    j["breakpoints"] = bp;
  } else if (const auto* c = std::get_if<ConstantSlopeSpec>(&spec)) {
    j["slope"] = json_number(c->slope);
    j["interval"] = interval_json(c->interval);
  } else {
    const auto& u = std::get<PolynomialSpec>(spec);
    j["coeffs"] = json_numbers(u.coeffs);
    j["interval"] = interval_json(u.interval);
  }
  return j;
}

Diagram to_diagram(const DiagramSpec& spec) {
  switch (spec.index()) {
    case 0:
      return std::get<RectangularDiagram>(spec);
    case 1:
      return std::get<PiecewiseLinearDiagram>(spec);
    case 2: {
      const auto& c = std::get<ConstantSlopeSpec>(spec);
      return SmoothDiagram::constant_slope(c.slope, c.interval);
    }
    default: {
      const auto& u = std::get<PolynomialSpec>(spec);
      return rotate(UnrotatedDiagram::polynomial(u.coeffs, u.interval));
    }
  }
}

std::optional<UnrotatedDiagram> to_unrotated(const DiagramSpec& spec) {
  if (const auto* u = std::get_if<PolynomialSpec>(&spec))
    return UnrotatedDiagram::polynomial(u->coeffs, u->interval);
  return std::nullopt;
}

}  // namespace hookwalk
