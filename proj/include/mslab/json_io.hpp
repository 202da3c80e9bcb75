#pragma once

// JSON forms of parents, types and codebooks.
//   parent:   {"family": "uniform|gaussian|exponential|discrete", "params": {...}}
//   type:     {"counts": [...]}
//   codebook: {"K": k, "points": [[...], ...], "space": "ordered|unordered"}

#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "mslab/distributions.hpp"
#include "mslab/error.hpp"
#include "mslab/multiset_core.hpp"
#include "mslab/quantizer.hpp"

namespace mslab::json_io {

using nlohmann::json;

using Parent = std::variant<ContinuousParent, DiscretePMF>;

/// Parses `text` as JSON if it starts with '{' or '[', otherwise reads it as a file path.
inline json load(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  try {
    if (first != std::string::npos && (text[first] == '{' || text[first] == '['))
      return json::parse(text);
    std::ifstream in(text);
    if (!in) throw invalid_argument("cannot open '" + text + "'");
    return json::parse(in);
  } catch (const json::exception& e) {
    throw invalid_argument(std::string("malformed JSON: ") + e.what());
  }
}

namespace detail {

inline double number(const json& params, const char* key) {
  if (!params.contains(key) || !params.at(key).is_number())
    throw invalid_argument(std::string("parent params: missing numeric '") + key + "'");
  return params.at(key).get<double>();
}

}  // namespace detail

inline Parent parent_from_json(const json& j) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
    throw invalid_argument("parent: expected an object with a string 'family'");
  const auto family = j.at("family").get<std::string>();
  const json params = j.value("params", json::object());
  if (family == "uniform")
    return ContinuousParent::uniform(detail::number(params, "a"), detail::number(params, "b"));
  if (family == "gaussian")
    return ContinuousParent::gaussian(detail::number(params, "mean"), detail::number(params, "variance"));
  if (family == "exponential") return ContinuousParent::exponential(detail::number(params, "rate"));
  if (family == "discrete") {
    if (!params.contains("probs") || !params.at("probs").is_array())
      throw invalid_argument("discrete parent: 'params.probs' must be an array");
    std::vector<double> p;
    for (const auto& v : params.at("probs")) {
      if (!v.is_number()) throw invalid_argument("discrete parent: probabilities must be numbers");
      p.push_back(v.get<double>());
    }
    return DiscretePMF(std::move(p));
  }
  throw invalid_argument("parent: unknown family '" + family + "'");
}

inline json to_json(const ContinuousParent& p) {
  const auto v = p.params();
  switch (p.family()) {
    case Family::uniform:
      return {{"family", "uniform"}, {"params", {{"a", v[0]}, {"b", v[1]}}}};
    case Family::gaussian:
      return {{"family", "gaussian"}, {"params", {{"mean", v[0]}, {"variance", v[1]}}}};
    case Family::exponential:
      return {{"family", "exponential"}, {"params", {{"rate", v[0]}}}};
  }
  return {};
}

inline json to_json(const DiscretePMF& p) {
  return {{"family", "discrete"},
          {"params", {{"probs", std::vector<double>(p.probs().begin(), p.probs().end())}}}};
}

inline ContinuousParent continuous_parent(const std::string& text) {
  auto p = parent_from_json(load(text));
  if (auto* c = std::get_if<ContinuousParent>(&p)) return *c;
  throw invalid_argument("expected a continuous parent (uniform, gaussian or exponential)");
}

inline DiscretePMF discrete_parent(const std::string& text) {
  auto p = parent_from_json(load(text));
  if (auto* d = std::get_if<DiscretePMF>(&p)) return *d;
  throw invalid_argument("expected a discrete parent");
}

inline json to_json(const TypeVector& t) {
  return {{"counts", std::vector<std::uint64_t>(t.counts().begin(), t.counts().end())}};
}

inline TypeVector type_from_json(const json& j) {
  if (!j.is_object() || !j.contains("counts") || !j.at("counts").is_array())
    throw invalid_argument("type: expected {\"counts\": [...]}");
  std::vector<std::uint64_t> c;
  for (const auto& v : j.at("counts")) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      throw invalid_argument("type: counts must be nonnegative integers");
    c.push_back(v.get<std::uint64_t>());
  }
  return TypeVector(std::move(c));
}

inline json to_json(const Codebook& cb) {
  return {{"K", cb.K}, {"points", cb.points}, {"space", to_string(cb.space)}};
}

inline Codebook codebook_from_json(const json& j) {
  try {
    const unsigned K = j.at("K").get<unsigned>();
    auto pts = j.at("points").get<std::vector<std::vector<double>>>();
    const auto space = parse_codebook_space(j.value("space", std::string("unordered")));
    return Codebook(K, std::move(pts), space);
  } catch (const json::exception& e) {
    throw invalid_argument(std::string("codebook: ") + e.what());
  }
}

}  // namespace mslab::json_io
