#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "typact/action.hpp"
#include "typact/chacon.hpp"
#include "typact/classify.hpp"
#include "typact/duality.hpp"
#include "typact/extend.hpp"
#include "typact/group_expr.hpp"
#include "typact/metric.hpp"

namespace typact {

using Json = nlohmann::json;

inline Json extent_to_json(Extent e) {
  if (e.is_omega()) return Json("inf");
  return Json(e.value());
}

inline Extent extent_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return Extent::omega();
    throw ParseError("expected a number or \"inf\"");
  }
  return Extent(j.get<std::uint64_t>());
}

inline Json rat_to_json(const Rat& r) { return Json(rat_str(r)); }

inline Rat rat_from_json(const Json& j) {
  if (j.is_number_integer()) return Rat(j.get<long long>());
  return parse_rat(j.get<std::string>());
}

inline Json metric_to_json(const MetricValue& m) {
  return Json{{"a", rat_str(m.a)}, {"b", rat_str(m.b)}, {"approx", m.approx()}};
}

// Permutations are serialized as 1-indexed one-line arrays.
inline Json perm_to_json(const Permutation& p) {
  Json arr = Json::array();
  for (std::uint32_t i = 0; i < p.size(); ++i) arr.push_back(p(i) + 1);
  return arr;
}

inline Permutation perm_from_json(const Json& j) {
  std::vector<std::uint32_t> img;
  for (const auto& v : j) {
    std::uint64_t x = v.get<std::uint64_t>();
    if (x == 0) throw ParseError("permutations are 1-indexed");
    img.push_back(static_cast<std::uint32_t>(x - 1));
  }
  return Permutation(img);
}

inline Json action_to_json(const FiniteAction& a) {
  Json gens = Json::array();
  for (std::size_t i = 0; i < a.arity(); ++i)
    gens.push_back(Json{{"order", extent_to_json(a.pres.orders[i])},
                        {"perm", perm_to_json(a.perms[i])}});
  Json out{{"q", a.q}, {"generators", gens}, {"marked_block", a.marked + 1}};
  if (!a.pres.relations.empty()) out["relations"] = a.pres.relations;
  return out;
}

inline FiniteAction action_from_json(const Json& j) {
  FiniteAction a;
  a.q = j.at("q").get<std::uint64_t>();
  for (const auto& g : j.at("generators")) {
    a.pres.orders.push_back(extent_from_json(g.at("order")));
    a.perms.push_back(perm_from_json(g.at("perm")));
  }
  if (j.contains("marked_block")) {
    std::uint64_t m = j.at("marked_block").get<std::uint64_t>();
    if (m == 0) throw ParseError("marked_block is 1-indexed");
    a.marked = static_cast<std::uint32_t>(m - 1);
  }
  if (j.contains("relations"))
    a.pres.relations = j.at("relations").get<std::vector<std::vector<long long>>>();
  a.validate();
  return a;
}

inline Json decision_to_json(const std::string& question, const std::string& h,
                             const std::string& g, const Decision& d) {
  Json out{{"question", question}, {"h", h}, {"g", g},
           {"answer", d.answer ? "yes" : "no"}, {"rule", d.rule}};
  if (d.witness) {
    GroupDesc w;
    w.cyclic = *d.witness;
    out["witness"] = serialize_group(w);
  }
  return out;
}

inline Json chacon_to_json(const ChaconInstance& inst) {
  Json b = Json::array(), h = Json::array();
  for (const Rat& w : inst.b) b.push_back(rat_str(w));
  for (std::size_t i : inst.columns) h.push_back(i + 1);
  return Json{{"matrix", inst.x}, {"b", b}, {"H", h}, {"eta", rat_str(inst.eta)}};
}

inline ChaconInstance chacon_from_json(const Json& j) {
  ChaconInstance inst;
  inst.x = j.at("matrix").get<std::vector<std::vector<int>>>();
  for (const auto& w : j.at("b")) inst.b.push_back(rat_from_json(w));
  for (const auto& i : j.at("H")) {
    std::uint64_t col = i.get<std::uint64_t>();
    if (col == 0) throw ParseError("H is 1-indexed");
    inst.columns.push_back(col - 1);
  }
  inst.eta = rat_from_json(j.at("eta"));
  inst.validate();
  return inst;
}

}  // namespace typact
