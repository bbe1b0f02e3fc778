#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ospace/automorphism.hpp"
#include "ospace/graph.hpp"
#include "ospace/rational.hpp"
#include "ospace/word.hpp"

namespace ospace {

using Json = nlohmann::json;

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Parse, path + ": " + e.what());
  }
}

inline Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number_float()) return parse_rational(j.dump());
  throw Error(ErrorKind::Parse, "expected a rational, got " + j.dump());
}

inline Json rational_list(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& q : v) out.push_back(to_string(q));
  return out;
}

inline std::vector<Rational> metric_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorKind::Parse, "metric must be a JSON list");
  std::vector<Rational> out;
  for (const auto& e : j) out.push_back(rational_from_json(e));
  return out;
}

inline FiniteGroupTable table_from_json(const Json& j) {
  if (j.is_string()) {
    if (auto g = builtin_group(j.get<std::string>())) return *g;
    throw Error(ErrorKind::Parse, "unknown group name " + j.get<std::string>());
  }
  if (!j.is_object() || !j.contains("table")) throw Error(ErrorKind::Parse, "group needs a table: " + j.dump());
  auto table = j.at("table").get<std::vector<std::vector<int>>>();
  if (j.contains("order") && j.at("order").get<int>() != static_cast<int>(table.size()))
    throw Error(ErrorKind::Structural, "group order does not match its table");
  return FiniteGroupTable(std::move(table), j.value("name", std::string{}));
}

inline VertexGroup group_from_json(const Json& j) {
  if (j.is_null() || (j.is_string() && j.get<std::string>() == "trivial")) return {};
  if (j.is_object() && j.contains("free_product")) {
    VertexGroup g;
    for (const auto& f : j.at("free_product")) g.factors.push_back(table_from_json(f));
    return g;
  }
  return VertexGroup{{table_from_json(j)}};
}

inline Json table_to_json(const FiniteGroupTable& t) {
  Json j{{"order", t.order()}, {"table", t.table()}};
  if (!t.name().empty()) j["name"] = t.name();
  return j;
}

inline Json group_to_json(const VertexGroup& g) {
  if (g.is_trivial()) return "trivial";
  if (!g.is_formal_product()) return table_to_json(g.factors[0]);
  Json f = Json::array();
  for (const auto& t : g.factors) f.push_back(table_to_json(t));
  return Json{{"free_product", f}};
}

inline GraphOfGroups graph_from_json(const Json& j) {
  try {
    SerreGraph g;
    std::vector<VertexGroup> groups;
    for (const auto& v : j.at("vertices")) {
      g.add_vertex(v.at("id").get<std::string>());
      groups.push_back(group_from_json(v.contains("group") ? v.at("group") : Json()));
    }
    std::vector<Rational> lengths;
    for (const auto& e : j.at("edges")) {
      const auto id = e.at("id").get<std::string>();
      const auto rev = e.value("reverse", id + "'");
      auto from = g.find_vertex(e.at("from").get<std::string>());
      auto to = g.find_vertex(e.at("to").get<std::string>());
      if (!from || !to) throw Error(ErrorKind::UnknownSymbol, "edge " + id + " has an unknown endpoint");
      const int u = g.add_edge(id, rev, *from, *to);
      lengths.resize(u + 1);
      lengths[u] = e.contains("length") ? rational_from_json(e.at("length")) : Rational(1);
    }
    std::vector<int> tree;
    if (j.contains("spanning_tree"))
      for (const auto& id : j.at("spanning_tree")) {
        auto e = g.find_edge(id.get<std::string>());
        if (!e) throw Error(ErrorKind::UnknownSymbol, "unknown tree edge " + id.get<std::string>());
        tree.push_back(SerreGraph::unoriented(*e));
      }
    return GraphOfGroups(std::move(g), std::move(lengths), std::move(groups), std::move(tree));
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("graph JSON: ") + e.what());
  }
}

inline Json graph_to_json(const GraphOfGroups& x) {
  const auto& g = x.graph();
  Json vertices = Json::array(), edges = Json::array(), tree = Json::array();
  for (int v = 0; v < g.vertex_count(); ++v)
    vertices.push_back({{"id", g.vertex_id(v)}, {"group", group_to_json(x.group(v))}});
  for (int u = 0; u < g.unoriented_count(); ++u)
    edges.push_back({{"id", g.edge_id(2 * u)},
                     {"reverse", g.edge_id(2 * u + 1)},
                     {"from", g.vertex_id(g.initial(2 * u))},
                     {"to", g.vertex_id(g.terminal(2 * u))},
                     {"length", to_string(x.lengths()[u])}});
  for (int u : x.spanning_tree()) tree.push_back(g.unoriented_id(u));
  return {{"vertices", vertices}, {"edges", edges}, {"spanning_tree", tree}};
}

inline std::map<Syllable, Word> images_from_json(const Json& j, const GraphOfGroups& x) {
  if (!j.is_object()) throw Error(ErrorKind::Parse, "images must be a JSON object");
  std::map<Syllable, Word> out;
  for (const auto& [key, value] : j.items()) out[parse_syllable(key, x)] = parse_word(value.get<std::string>(), x);
  return out;
}

inline Json homomorphism_to_json(const Homomorphism& h, const GraphOfGroups& source, const GraphOfGroups& target) {
  Json out = Json::object();
  for (const auto& s : standard_generators(source)) out[format_syllable(s, source)] = format(h.image(s, source), target);
  return out;
}

inline Json homomorphism_to_json(const Homomorphism& h, const GraphOfGroups& x) { return homomorphism_to_json(h, x, x); }

inline OuterAutomorphism automorphism_from_json(const Json& j, const GraphOfGroups& x) {
  if (!j.contains("images") || !j.contains("inverse_images"))
    throw Error(ErrorKind::Parse, "automorphism needs \"images\" and \"inverse_images\"");
  auto forward = complete_homomorphism(images_from_json(j.at("images"), x), x, x);
  auto backward = complete_homomorphism(images_from_json(j.at("inverse_images"), x), x, x);
  std::optional<int> bound;
  if (j.contains("inner_bound")) bound = j.at("inner_bound").get<int>();
  return OuterAutomorphism(x, std::move(forward), std::move(backward), bound);
}

inline Json automorphism_to_json(const OuterAutomorphism& a) {
  return {{"images", homomorphism_to_json(a.forward(), a.graph())},
          {"inverse_images", homomorphism_to_json(a.backward(), a.graph())}};
}

}  // namespace ospace
