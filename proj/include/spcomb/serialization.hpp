#pragma once

// JSON encoding of the core types.
//
//   Point               [x1, ..., xd]
//   Box                 {"lo": Point, "hi": Point}
//   FiniteConfiguration {"points": [Point, ...]}
//   DiscreteMeasure     {"atoms": [{"loc": Point, "w": number}, ...]}
//   TestFunction        {"kind": "indicator_box" | "gaussian_bump" | "scaled" | "sum", ...}
//   SymmetricKernel     {"kind": "tensor_power" | "symmetrized_product" | "constant" | "scaled" | "sum", ...}
//
// Doubles are written in shortest round-trip form, so decode(encode(x)) == x
// bit for bit.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spcomb/configuration.hpp"
#include "spcomb/errors.hpp"
#include "spcomb/kernel.hpp"
#include "spcomb/point.hpp"
#include "spcomb/test_function.hpp"

namespace spcomb {

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline const nlohmann::json& member(const nlohmann::json& j, const char* key) {
  if (!j.is_object()) throw FormatError(std::string("expected an object with field '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string("missing field '") + key + "'");
  return *it;
}

inline double number(const nlohmann::json& j, const char* what) {
  if (!j.is_number()) throw FormatError(std::string(what) + " must be a number");
  return j.get<double>();
}

inline std::size_t count(const nlohmann::json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    throw FormatError(std::string(what) + " must be a nonnegative integer");
  }
  return j.get<std::size_t>();
}

inline const nlohmann::json& array(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string(what) + " must be an array");
  return j;
}

}  // namespace detail

inline nlohmann::json to_json_value(const Point& p) {
  return nlohmann::json(std::vector<double>(p.coords().begin(), p.coords().end()));
}

inline Point point_from_json(const nlohmann::json& j) {
  detail::array(j, "point");
  std::vector<double> coords;
  for (const auto& c : j) coords.push_back(detail::number(c, "point coordinate"));
  return Point(std::move(coords));
}

inline nlohmann::json to_json_value(const Box& b) {
  return {{"lo", to_json_value(b.lo())}, {"hi", to_json_value(b.hi())}};
}

inline Box box_from_json(const nlohmann::json& j) {
  return Box(point_from_json(detail::member(j, "lo")), point_from_json(detail::member(j, "hi")));
}

inline nlohmann::json to_json_value(const FiniteConfiguration& c) {
  nlohmann::json pts = nlohmann::json::array();
  for (const Point& p : c) pts.push_back(to_json_value(p));
  return {{"points", pts}};
}

inline FiniteConfiguration configuration_from_json(const nlohmann::json& j) {
  std::vector<Point> pts;
  for (const auto& p : detail::array(detail::member(j, "points"), "points")) pts.push_back(point_from_json(p));
  return FiniteConfiguration(std::move(pts));
}

inline nlohmann::json to_json_value(const DiscreteMeasure& m) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const Atom& a : m) atoms.push_back({{"loc", to_json_value(a.location)}, {"w", a.weight}});
  return {{"atoms", atoms}};
}

inline DiscreteMeasure measure_from_json(const nlohmann::json& j) {
  std::vector<Atom> atoms;
  for (const auto& a : detail::array(detail::member(j, "atoms"), "atoms")) {
    atoms.push_back({point_from_json(detail::member(a, "loc")), detail::number(detail::member(a, "w"), "w")});
  }
  return DiscreteMeasure(std::move(atoms));
}

inline nlohmann::json to_json_value(const TestFunction& f) {
  return std::visit(
      Overloaded{
          [](const IndicatorBox& d) -> nlohmann::json {
            return {{"kind", "indicator_box"}, {"lo", to_json_value(d.box.lo())}, {"hi", to_json_value(d.box.hi())}};
          },
          [](const GaussianBump& d) -> nlohmann::json {
            return {{"kind", "gaussian_bump"},
                    {"center", to_json_value(d.center)},
                    {"width", d.width},
                    {"amplitude", d.amplitude}};
          },
          [](const ScaledFunction& d) -> nlohmann::json {
            return {{"kind", "scaled"}, {"factor", d.factor}, {"inner", to_json_value(d.inner)}};
          },
          [](const SumFunction& d) -> nlohmann::json {
            nlohmann::json terms = nlohmann::json::array();
            for (const TestFunction& t : d.terms) terms.push_back(to_json_value(t));
            return {{"kind", "sum"}, {"terms", terms}};
          },
      },
      f.node().value);
}

inline TestFunction test_function_from_json(const nlohmann::json& j) {
  const auto& kind = detail::member(j, "kind");
  if (!kind.is_string()) throw FormatError("test function 'kind' must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "indicator_box") {
    return TestFunction::indicator_box(point_from_json(detail::member(j, "lo")),
                                       point_from_json(detail::member(j, "hi")));
  }
  if (k == "gaussian_bump") {
    return TestFunction::gaussian_bump(point_from_json(detail::member(j, "center")),
                                       detail::number(detail::member(j, "width"), "width"),
                                       detail::number(detail::member(j, "amplitude"), "amplitude"));
  }
  if (k == "scaled") {
    return TestFunction::scaled(detail::number(detail::member(j, "factor"), "factor"),
                                test_function_from_json(detail::member(j, "inner")));
  }
  if (k == "sum") {
    std::vector<TestFunction> terms;
    for (const auto& t : detail::array(detail::member(j, "terms"), "terms")) terms.push_back(test_function_from_json(t));
    return TestFunction::sum(std::move(terms));
  }
  throw FormatError("unknown test function kind '" + k + "'");
}

inline nlohmann::json to_json_value(const SymmetricKernel& f) {
  return std::visit(
      Overloaded{
          [&](const TensorPowerKernel& d) -> nlohmann::json {
            return {{"kind", "tensor_power"}, {"order", f.order()}, {"phi", to_json_value(d.phi)}};
          },
          [](const SymmetrizedProductKernel& d) -> nlohmann::json {
            nlohmann::json factors = nlohmann::json::array();
            for (const TestFunction& t : d.factors) factors.push_back(to_json_value(t));
            return {{"kind", "symmetrized_product"}, {"factors", factors}};
          },
          [&](const ConstantKernel& d) -> nlohmann::json {
            return {{"kind", "constant"}, {"order", f.order()}, {"value", d.value}};
          },
          [](const ScaledKernel& d) -> nlohmann::json {
            return {{"kind", "scaled"}, {"factor", d.factor}, {"inner", to_json_value(d.inner)}};
          },
          [](const SumKernel& d) -> nlohmann::json {
            nlohmann::json terms = nlohmann::json::array();
            for (const SymmetricKernel& t : d.terms) terms.push_back(to_json_value(t));
            return {{"kind", "sum"}, {"terms", terms}};
          },
      },
      f.node().value);
}

inline SymmetricKernel kernel_from_json(const nlohmann::json& j) {
  const auto& kind = detail::member(j, "kind");
  if (!kind.is_string()) throw FormatError("kernel 'kind' must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "tensor_power") {
    return SymmetricKernel::tensor_power(test_function_from_json(detail::member(j, "phi")),
                                         detail::count(detail::member(j, "order"), "order"));
  }
  if (k == "symmetrized_product") {
    std::vector<TestFunction> factors;
    for (const auto& t : detail::array(detail::member(j, "factors"), "factors")) {
      factors.push_back(test_function_from_json(t));
    }
    return SymmetricKernel::symmetrized_product(std::move(factors));
  }
  if (k == "constant") {
    return SymmetricKernel::constant(detail::number(detail::member(j, "value"), "value"),
                                     detail::count(detail::member(j, "order"), "order"));
  }
  if (k == "scaled") {
    return SymmetricKernel::scaled(detail::number(detail::member(j, "factor"), "factor"),
                                   kernel_from_json(detail::member(j, "inner")));
  }
  if (k == "sum") {
    std::vector<SymmetricKernel> terms;
    for (const auto& t : detail::array(detail::member(j, "terms"), "terms")) terms.push_back(kernel_from_json(t));
    return SymmetricKernel::sum(std::move(terms));
  }
  throw FormatError("unknown kernel kind '" + k + "'");
}

/// Parses text, mapping parse failures to FormatError.
inline nlohmann::json parse_json(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace spcomb
