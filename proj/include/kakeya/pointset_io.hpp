#pragma once

#include <string>

#include <json.hpp>

#include "kakeya/finite_kakeya.hpp"

namespace kakeya {

/// PointSet JSON schema:
/// { "ring": "<spec string>",
///   "points": [[x, y], ...],
///   "provenance": { "<dx>|<dy>": {"alpha": "...", "b": "...", "form": "xy"|"yx"}, ... } }
/// Elements use the ring's textual serialization. "xy" means the line
/// α x + y = b; "yx" means x + α y = b (used for (a,1)-type directions,
/// which the α x + y = b form cannot express).
inline nlohmann::json pointset_to_json(const PointSet& E) {
  const Ring& R = E.ring();
  nlohmann::json j;
  j["ring"] = R.spec_string();
  j["points"] = nlohmann::json::array();
  for (const Point& p : E.points())
    j["points"].push_back({R.elem_to_string(p.first), R.elem_to_string(p.second)});
  nlohmann::json prov = nlohmann::json::object();
  for (const auto& [dir, base] : E.provenance()) {
    std::string key = R.elem_to_string(dir[0]) + "|" + R.elem_to_string(dir[1]);
    nlohmann::json entry;
    if (dir[0] == R.one()) {
      // (1, b): points (s, c + s b) form the line (-b) x + y = c.
      entry["form"] = "xy";
      entry["alpha"] = R.elem_to_string(R.neg(dir[1]));
      entry["b"] = R.elem_to_string(base.second);
    } else {
      entry["form"] = "yx";
      entry["alpha"] = R.elem_to_string(R.neg(dir[0]));
      entry["b"] = R.elem_to_string(base.first);
    }
    prov[key] = entry;
  }
  j["provenance"] = prov;
  return j;
}

inline PointSet pointset_from_json(const nlohmann::json& j) {
  Ring R = Ring::parse(j.at("ring").get<std::string>());
  PointSet E(R);
  for (const auto& pt : j.at("points"))
    E.insert({R.elem_from_string(pt.at(0).get<std::string>()),
              R.elem_from_string(pt.at(1).get<std::string>())});
  if (j.contains("provenance")) {
    for (const auto& [key, entry] : j.at("provenance").items()) {
      auto bar = key.find('|');
      if (bar == std::string::npos) throw std::invalid_argument("bad direction key: " + key);
      DirVec dir{R.elem_from_string(key.substr(0, bar)), R.elem_from_string(key.substr(bar + 1))};
      Ring::Elem b = R.elem_from_string(entry.at("b").get<std::string>());
      Point base = entry.value("form", "xy") == std::string("xy") ? Point{0, b} : Point{b, 0};
      E.set_provenance(dir, base);
    }
  }
  return E;
}

inline nlohmann::json bound_report_to_json(const BoundReport& rep) {
  nlohmann::json j;
  j["set_size"] = rep.set_size;
  j["lines_used"] = rep.lines_used;
  j["union_actual"] = rep.union_actual;
  j["inclusion_exclusion_sum"] = rep.ie_sum;
  j["analytic_sum"] = rep.analytic_sum;
  j["bound"] = rep.bound.get_str();
  j["bound_decimal"] = rep.bound.get_d();
  j["satisfied"] = rep.satisfied;
  j["chain_ok"] = rep.chain_ok;
  return j;
}

}  // namespace kakeya
