// Command-line front end: one command per process, JSON reports on stdout or --out.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ospace/ospace.hpp"

using namespace ospace;

namespace {

enum Exit { Ok = 0, Invalid = 1, Inconclusive = 2, IoError = 3 };

struct Options {
  std::string graph, automorphism, word, metric, out, edges;
  std::vector<std::string> factors;
  std::string tolerance = "1/1000";
  int word_bound = 0;
  int bound = 6;
  int rank = 0;
  std::string radius;
  int grid = 0;
};

void emit(const std::string& text, const Options& o) {
  if (o.out.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw Error(ErrorKind::Parse, "cannot write " + o.out);
  f << text << "\n";
}

void emit(const Json& j, const Options& o) { emit(j.dump(), o); }

GraphOfGroups load_graph(const Options& o) {
  if (o.graph.empty()) throw Error(ErrorKind::Parse, "--graph is required");
  return graph_from_json(read_json_file(o.graph));
}

OuterAutomorphism load_auto(const GraphOfGroups& x, const Options& o) {
  if (o.automorphism.empty()) throw Error(ErrorKind::Parse, "--auto is required");
  return automorphism_from_json(read_json_file(o.automorphism), x);
}

std::vector<Rational> load_metric(const GraphOfGroups& x, const Options& o) {
  if (o.metric.empty()) return x.lengths();
  Json j;
  try {
    j = o.metric.front() == '[' ? Json::parse(o.metric) : read_json_file(o.metric);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("--metric: ") + e.what());
  }
  auto m = metric_from_json(j);
  check_metric(m, x);
  return m;
}

Json words(const std::vector<Word>& ws, const GraphOfGroups& x) {
  Json out = Json::array();
  for (const auto& w : ws) out.push_back(format(w, x));
  return out;
}

Json rep_json(const GraphMapRep& rep, const GraphOfGroups& x) {
  const auto& g = x.graph();
  Json vmap = Json::object(), emap = Json::object(), iso = Json::object(), deco = Json::object();
  for (int v = 0; v < g.vertex_count(); ++v) {
    vmap[g.vertex_id(v)] = g.vertex_id(rep.vertex_map[v]);
    if (!rep.vertex_iso[v].empty()) iso[g.vertex_id(v)] = rep.vertex_iso[v];
  }
  for (int e = 0; e < g.edge_count(); ++e) emap[g.edge_id(e)] = g.edge_id(rep.edge_map[e]);
  for (int u = 0; u < g.unoriented_count(); ++u) {
    const auto [h, h2] = rep.decoration[u];
    const int img = rep.edge_map[2 * u];
    auto end = [&](int v, int el) -> Json {
      if (el < 0) return nullptr;
      return format(Word{Syllable::vertex(v, el)}, x);
    };
    if ((h >= 0 && h != x.group(g.initial(img)).factors[0].identity()) ||
        (h2 >= 0 && h2 != x.group(g.terminal(img)).factors[0].identity()))
      deco[g.unoriented_id(u)] = {end(g.initial(img), h), end(g.terminal(img), h2)};
  }
  const auto cycles = edge_orbit_cycle_check(rep);
  return {{"vertex_map", vmap},
          {"edge_map", emap},
          {"vertex_isomorphisms", iso},
          {"decorations", deco},
          {"conjugator", format(rep.conjugator, x)},
          {"induced", homomorphism_to_json(rep.induced, x)},
          {"edge_cycle", format_cycles(cycles, x)},
          {"single_cycle", cycles.single_cycle}};
}

Json component_json(const ComponentInfo& c, const GraphOfGroups& x) {
  Json edges = Json::array(), vertices = Json::array();
  for (int u : c.edges) edges.push_back(x.graph().unoriented_id(u));
  for (int v : c.vertices) vertices.push_back(x.graph().vertex_id(v));
  return {{"edges", edges},
          {"vertices", vertices},
          {"tree", c.is_tree},
          {"non_free", c.non_free},
          {"class", c.elliptic() ? "elliptic" : "hyperbolic"}};
}

int cmd_validate(const Options& o) {
  auto x = load_graph(o);
  auto report = validate(x);
  Json j{{"valid", report.ok()}, {"violations", report.violations}};
  if (report.ok()) {
    auto rf = rank_and_factors(x);
    j["factors"] = rf.factors;
    j["rank"] = rf.rank;
    j["covolume"] = to_string(covolume(x));
  }
  emit(j, o);
  return report.ok() ? Ok : Invalid;
}

int cmd_pi1(const Options& o) {
  auto x = load_graph(o);
  require_valid(x);
  Json gens = Json::array(), groups = Json::object(), tree = Json::array();
  for (const auto& s : standard_generators(x)) gens.push_back(format_syllable(s, x));
  for (int v = 0; v < x.graph().vertex_count(); ++v)
    if (!x.is_free(v)) groups[x.graph().vertex_id(v)] = x.group(v).describe();
  for (int u : x.spanning_tree()) tree.push_back(x.graph().unoriented_id(u));
  emit(Json{{"basepoint", x.graph().vertex_id(x.basepoint())},
            {"generators", gens},
            {"vertex_groups", groups},
            {"spanning_tree", tree},
            {"free_rank", rank_and_factors(x).rank},
            {"free_factor_system", ffs_of(x).describe()}},
       o);
  return Ok;
}

int cmd_thistle(const Options& o) {
  std::vector<FiniteGroupTable> factors;
  for (const auto& f : o.factors) {
    if (auto g = builtin_group(f)) {
      factors.push_back(*g);
      continue;
    }
    Json j;
    try {
      j = f.front() == '{' ? Json::parse(f) : read_json_file(f);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorKind::Parse, "factor " + f + ": " + e.what());
    }
    factors.push_back(table_from_json(j));
  }
  emit(graph_to_json(build_thistle(factors, o.rank)), o);
  return Ok;
}

int cmd_tlen(const Options& o) {
  auto x0 = load_graph(o);
  auto x = x0.with_lengths(load_metric(x0, o));
  require_valid(x);
  const Word u = parse_word(o.word, x);
  Json j{{"length", to_string(translation_length(u, x))}};
  if (!o.radius.empty()) {
    auto ball = build_ball(x, parse_rational(o.radius));
    auto oracle = oracle_translation_length(u, ball);
    j["oracle_length"] = oracle.length ? Json(to_string(*oracle.length)) : Json(nullptr);
    j["fixed_vertices"] = oracle.fixed_vertices;
  }
  emit(j, o);
  return Ok;
}

int cmd_ball(const Options& o) {
  auto x0 = load_graph(o);
  auto x = x0.with_lengths(load_metric(x0, o));
  require_valid(x);
  emit(build_ball(x, parse_rational(o.radius.empty() ? "3" : o.radius)).to_dot(), o);
  return Ok;
}

Json stretch_json(const StretchReport& r, const GraphOfGroups& x) {
  return {{"lambdaR", to_string(r.lambda_r)},
          {"lambdaL", to_string(r.lambda_l)},
          {"lambdaSym", to_string(r.lambda_sym)},
          {"witnessR", format(r.witness_r, x)},
          {"witnessL", format(r.witness_l, x)}};
}

int cmd_stretch(const Options& o) {
  auto x = load_graph(o);
  auto alpha = load_auto(x, o);
  auto metric = load_metric(x, o);
  Json j = stretch_json(stretch_factor(alpha, metric), x);
  if (o.word_bound) {
    auto b = brute_force_stretch(alpha, metric, o.word_bound);
    j["bruteForce"] = stretch_json(b, x);
    j["agrees"] = b.lambda_r == stretch_factor(alpha, metric).lambda_r;
  }
  emit(j, o);
  return Ok;
}

Json grid_json(const GridScan& g) {
  return {{"resolution", g.resolution},
          {"points", g.points},
          {"min_off_center", g.min_point.empty() ? Json(nullptr) : Json(to_string(g.min_off_center))},
          {"min_point", rational_list(g.min_point)},
          {"off_center_above_one", g.off_center_above_one}};
}

int cmd_displacement(const Options& o) {
  auto x = load_graph(o);
  auto alpha = load_auto(x, o);
  auto table = candidate_table(alpha);
  auto d = displacement_on_simplex(table, x, parse_rational(o.tolerance));
  Json j{{"value", to_string(d.value)},
         {"lower_bound", to_string(d.lower_bound)},
         {"exact", d.exact},
         {"argmin", rational_list(d.argmin)},
         {"active", words(d.active, x)},
         {"feasibility_checks", d.feasibility_checks}};
  if (o.grid) {
    auto g = grid_scan(table, x, o.grid);
    j["grid"] = grid_json(g);
    j["grid"]["consistent"] = g.min_point.empty() || g.min_off_center >= d.lower_bound;
  }
  emit(j, o);
  return d.exact ? Ok : Inconclusive;
}

int cmd_fixpoint(const Options& o) {
  auto x = load_graph(o);
  auto alpha = load_auto(x, o);
  auto c = is_fixed_point(alpha, load_metric(x, o));
  emit(Json{{"fixed", c.fixed}, {"stretch", stretch_json(c.stretch, x)}}, o);
  return Ok;
}

int cmd_fixrep(const Options& o) {
  auto x = load_graph(o);
  auto alpha = load_auto(x, o);
  auto metric = load_metric(x, o);
  auto search = find_isometric_representative(alpha, metric, o.bound);
  Json j{{"found", search.found()}, {"lambdaR", to_string(search.lambda_r)}};
  if (search.rep) j["representative"] = rep_json(*search.rep, x.with_lengths(metric));
  emit(j, o);
  return search.found() ? Ok : Inconclusive;
}

int cmd_redscan(const Options& o) {
  auto x0 = load_graph(o);
  auto alpha = load_auto(x0, o);
  auto metric = load_metric(x0, o);
  auto x = x0.with_lengths(metric);
  auto search = find_isometric_representative(alpha, metric, o.bound);
  if (!search.rep) {
    emit(Json{{"found", false}, {"lambdaR", to_string(search.lambda_r)}, {"certificate", Json(nullptr)}}, o);
    return Inconclusive;
  }
  auto cert = reducibility_scan(*search.rep, x);
  const auto cycles = edge_orbit_cycle_check(*search.rep);
  Json j{{"found", true}, {"edge_cycle", format_cycles(cycles, x)}, {"certificate", Json(nullptr)}};
  if (cert) {
    Json edges = Json::array(), comps = Json::array();
    for (int u : cert->edges) edges.push_back(x.graph().unoriented_id(u));
    for (const auto& c : cert->components) comps.push_back(component_json(c, x));
    j["certificate"] = {{"edges", edges}, {"components", comps}, {"class", "hyperbolic"}};
  }
  emit(j, o);
  return Ok;
}

int cmd_collapse(const Options& o) {
  auto x = load_graph(o);
  std::vector<int> forest;
  std::stringstream ss(o.edges);
  for (std::string id; std::getline(ss, id, ',');) {
    auto e = x.graph().find_edge(id);
    if (!e) throw Error(ErrorKind::UnknownSymbol, "unknown edge " + id);
    forest.push_back(SerreGraph::unoriented(*e));
  }
  auto r = collapse_subforest(x, forest);
  const auto old_ffs = ffs_of(x), new_ffs = ffs_of(r.graph);
  emit(Json{{"graph", graph_to_json(r.graph)},
            {"forward", homomorphism_to_json(r.forward, x, r.graph)},
            {"backward", homomorphism_to_json(r.backward, r.graph, x)},
            {"old_leq_new", ffs_leq(old_ffs, new_ffs, r.forward)},
            {"new_leq_old", ffs_leq(new_ffs, old_ffs, r.backward)},
            {"valid", validate(r.graph).ok()}},
       o);
  return Ok;
}

int cmd_certify_unique(const Options& o) {
  auto x = load_graph(o);
  auto alpha = load_auto(x, o);
  auto table = candidate_table(alpha);
  auto d = displacement_on_simplex(table, x, parse_rational(o.tolerance));
  const bool center = is_simplex_center(d.argmin);
  auto fixed = is_fixed_point(table, x, d.argmin);
  auto grid = grid_scan(table, x, o.grid ? o.grid : 60);
  auto search = find_isometric_representative(alpha, d.argmin, o.bound);
  const bool unique = d.exact && d.value == 1 && center && fixed.fixed && grid.off_center_above_one;
  Json j{{"displacement", to_string(d.value)},
         {"exact", d.exact},
         {"argmin", rational_list(d.argmin)},
         {"argmin_is_center", center},
         {"fixed_at_argmin", fixed.fixed},
         {"grid", grid_json(grid)},
         {"representative_found", search.found()},
         {"edge_cycle", search.rep ? Json(format_cycles(edge_orbit_cycle_check(*search.rep), x)) : Json(nullptr)},
         {"unique_center", unique}};
  emit(j, o);
  return unique && search.found() ? Ok : Inconclusive;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deformation spaces of free products: graphs of groups, stretch factors, displacement."};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* c) {
    c->add_option("--graph", o.graph, "graph of groups JSON");
    c->add_option("--auto", o.automorphism, "automorphism JSON");
    c->add_option("--metric", o.metric, "edge lengths as a JSON list, or a file holding one");
    c->add_option("--out", o.out, "write the report here instead of stdout");
    c->add_option("--bound", o.bound, "search bound for inner-automorphism conjugators");
  };
  struct Cmd {
    const char* name;
    const char* help;
    int (*run)(const Options&);
  };
  const Cmd cmds[] = {
      {"validate", "check the graph of groups", cmd_validate},
      {"pi1", "presentation of the fundamental group", cmd_pi1},
      {"thistle", "build the thistle for factor groups", cmd_thistle},
      {"tlen", "translation length of a word", cmd_tlen},
      {"ball", "DOT export of a ball in the Bass-Serre tree", cmd_ball},
      {"stretch", "stretching factors to the twisted tree", cmd_stretch},
      {"displacement", "minimal displacement over the simplex", cmd_displacement},
      {"fixpoint", "is the metric fixed by the automorphism", cmd_fixpoint},
      {"fixrep", "isometric representative at a metric", cmd_fixrep},
      {"redscan", "scan invariant subgraphs for a reduction", cmd_redscan},
      {"collapse", "collapse a subforest", cmd_collapse},
      {"certify-unique", "certify the unique fixed center", cmd_certify_unique},
  };
  int (*chosen)(const Options&) = nullptr;
  for (const auto& c : cmds) {
    auto* sub = app.add_subcommand(c.name, c.help);
    add_common(sub);
    const std::string name = c.name;
    if (name == "tlen") sub->add_option("--word", o.word, "word such as v1.g1*e3*v2.g2*e3'")->required();
    if (name == "tlen" || name == "ball") sub->add_option("--radius", o.radius, "ball radius");
    if (name == "stretch") sub->add_option("--word-bound", o.word_bound, "also brute-force words up to this length");
    if (name == "displacement" || name == "certify-unique") {
      sub->add_option("--tolerance", o.tolerance, "bisection tolerance");
      sub->add_option("--grid", o.grid, "grid resolution for the cross-check");
    }
    if (name == "thistle") {
      sub->add_option("factors", o.factors, "factor groups: Z2..Z12, S3, or JSON tables")->required();
      sub->add_option("--rank", o.rank, "number of petals");
    }
    if (name == "collapse") sub->add_option("--edges", o.edges, "comma-separated edge ids")->required();
    sub->callback([&chosen, run = c.run] { chosen = run; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? Ok : IoError;
  }
  if (o.word_bound && o.word_bound < 2) {
    std::cerr << "--word-bound must be at least 2\n";
    return Invalid;
  }
  try {
    return chosen(o);
  } catch (const Error& e) {
    std::cerr << to_string(e.kind()) << ": " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::Parse:
      case ErrorKind::UnknownSymbol:
        return IoError;
      case ErrorKind::TooLarge:
        return Inconclusive;
      default:
        return Invalid;
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return IoError;
  }
}
