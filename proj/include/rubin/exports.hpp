#pragma once

#include <string>

#include <json.hpp>

#include "rubin/disjointness.hpp"
#include "rubin/finite_group.hpp"

namespace rubin {

using ordered_json = nlohmann::ordered_json;

inline ordered_json matrix_to_json(const FiniteGroup& G, const DisjointnessMatrix& m) {
  ordered_json j;
  j["order"] = m.order;
  ordered_json elems = ordered_json::array();
  for (const Perm& p : G.elements()) elems.push_back(p.to_cycle_string());
  j["elements"] = std::move(elems);
  ordered_json rows = ordered_json::array();
  for (uint32_t gi = 0; gi < m.order; ++gi) {
    ordered_json row = ordered_json::array();
    for (uint32_t fi = 0; fi < m.order; ++fi) row.push_back(m.at(gi, fi));
    rows.push_back(std::move(row));
  }
  j["disjoint"] = std::move(rows);
  return j;
}

inline ordered_json poset_to_json(const FiniteGroup& G, const RubinPoset& poset) {
  ordered_json j;
  j["group_order"] = G.order();
  ordered_json nodes = ordered_json::array();
  for (const auto& n : poset.nodes) {
    ordered_json jn;
    jn["elements"] = n.elems;
    jn["witness"] = n.witness;
    nodes.push_back(std::move(jn));
  }
  j["nodes"] = std::move(nodes);
  ordered_json edges = ordered_json::array();
  for (auto [a, b] : poset.hasse) edges.push_back(ordered_json::array({a, b}));
  j["hasse"] = std::move(edges);
  return j;
}

inline RubinPoset poset_from_json(const ordered_json& j) {
  RubinPoset poset;
  for (const auto& jn : j.at("nodes")) {
    RubinPoset::Node n;
    n.elems = jn.at("elements").get<std::vector<uint32_t>>();
    n.witness = jn.at("witness").get<std::vector<uint32_t>>();
    poset.nodes.push_back(std::move(n));
  }
  for (const auto& je : j.at("hasse"))
    poset.hasse.emplace_back(je.at(0).get<uint32_t>(), je.at(1).get<uint32_t>());
  return poset;
}

/// Hasse diagram in DOT form. Nodes are labeled with subgroup order and one
/// witnessing f-tuple (cycle notation).
inline std::string poset_to_dot(const FiniteGroup& G, const RubinPoset& poset) {
  std::string out = "digraph rubin_poset {\n  rankdir=BT;\n  node [shape=box];\n";
  for (uint32_t i = 0; i < poset.nodes.size(); ++i) {
    const auto& n = poset.nodes[i];
    std::string wit;
    for (size_t k = 0; k < n.witness.size(); ++k) {
      if (k) wit += ", ";
      wit += G.element(n.witness[k]).to_cycle_string();
    }
    if (wit.empty()) wit = "-";
    out += "  n" + std::to_string(i) + " [label=\"order " + std::to_string(n.elems.size()) +
           "\\nf: " + wit + "\"];\n";
  }
  for (auto [a, b] : poset.hasse)
    out += "  n" + std::to_string(a) + " -> n" + std::to_string(b) + ";\n";
  out += "}\n";
  return out;
}

}  // namespace rubin
