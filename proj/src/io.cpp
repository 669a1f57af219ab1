#include "pmstate/io.hpp"

#include <CLI11.hpp>
#include <optional>
#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

namespace pmstate {

namespace {

using nlohmann::json;

std::string where(const std::string& origin) {
  return origin.empty() ? std::string{} : origin + ": ";
}

std::string fmt(double x, int precision) {
  std::ostringstream os;
  os << std::setprecision(precision) << x;
  return os.str();
}

std::string fmt(Complex z, int precision) {
  std::ostringstream os;
  os << std::setprecision(precision) << z.real();
  os << (z.imag() < 0 ? " - " : " + ");
  os << std::setprecision(precision) << std::abs(z.imag()) << "i";
  return os.str();
}

const json* find_field(const json& j, const char* name,
                       const std::string& origin) {
  auto it = j.find(name);
  if (it == j.end()) {
    throw ParseError(where(origin) + "missing field \"" + name + "\"");
  }
  return &*it;
}

}  // namespace

BiColoredGraph parse_graph_document(const std::string& text,
                                    const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(where(origin) + e.what());
  }
  if (!j.is_object()) {
    throw ParseError(where(origin) + "the document must be a JSON object");
  }
  const json& jn = *find_field(j, "n", origin);
  if (!jn.is_number_integer()) {
    throw ParseError(where(origin) + "field \"n\" must be an integer");
  }
  int n = jn.get<int>();

  const json& jp = *find_field(j, "palette", origin);
  if (!jp.is_array() || jp.empty()) {
    throw ParseError(where(origin) + "field \"palette\" must be a non-empty list");
  }
  std::vector<std::string> palette;
  for (const json& item : jp) {
    if (!item.is_string()) {
      throw ParseError(where(origin) + "palette entries must be strings");
    }
    palette.push_back(item.get<std::string>());
  }
  int d = static_cast<int>(palette.size());

  auto color_of = [&](const std::string& label, size_t record) -> Color {
    for (int i = 0; i < d; ++i) {
      if (palette[static_cast<size_t>(i)] == label) return Color{i};
    }
    throw ParseError(where(origin) + "edges[" + std::to_string(record) +
                     "]: unknown color label \"" + label + "\"");
  };

  const json& je = *find_field(j, "edges", origin);
  if (!je.is_array()) {
    throw ParseError(where(origin) + "field \"edges\" must be a list");
  }
  std::vector<EdgeSpec> specs;
  specs.reserve(je.size());
  for (size_t i = 0; i < je.size(); ++i) {
    const json& rec = je[i];
    std::string at = where(origin) + "edges[" + std::to_string(i) + "]: ";
    if (!rec.is_array() || rec.size() != 6) {
      throw ParseError(at + "expected [u, v, color_at_u, color_at_v, re, im]");
    }
    if (!rec[0].is_number_integer() || !rec[1].is_number_integer()) {
      throw ParseError(at + "vertices must be integers");
    }
    if (!rec[2].is_string() || !rec[3].is_string()) {
      throw ParseError(at + "colors must be palette labels");
    }
    if (!rec[4].is_number() || !rec[5].is_number()) {
      throw ParseError(at + "weight parts must be numbers");
    }
    int u = rec[0].get<int>();
    int v = rec[1].get<int>();
    if (u < 1 || u > n || v < 1 || v > n) {
      throw ParseError(at + "vertices are 1-based and must lie in 1.." +
                       std::to_string(n));
    }
    EdgeSpec spec;
    spec.u = u - 1;
    spec.v = v - 1;
    spec.color_at_u = color_of(rec[2].get<std::string>(), i);
    spec.color_at_v = color_of(rec[3].get<std::string>(), i);
    spec.weight = Complex{rec[4].get<double>(), rec[5].get<double>()};
    specs.push_back(spec);
  }
  return build_graph(n, d, std::move(specs), std::move(palette));
}

std::string serialize_graph_document(const BiColoredGraph& g) {
  json j;
  j["n"] = g.vertex_count();
  j["palette"] = g.palette();
  json edges = json::array();
  for (const Edge& e : g.edges()) {
    edges.push_back(json::array({e.u + 1, e.v + 1, g.color_label(e.color_at_u),
                                 g.color_label(e.color_at_v), e.weight.real(),
                                 e.weight.imag()}));
  }
  j["edges"] = std::move(edges);
  return j.dump(2) + "\n";
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

BiColoredGraph load_graph(const std::filesystem::path& path) {
  return parse_graph_document(read_file(path), path.string());
}

void save_graph(const BiColoredGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot write " + path.string());
  }
  out << serialize_graph_document(g);
}

TargetDocument parse_target_document(const std::string& text,
                                     const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(where(origin) + e.what());
  }
  if (!j.is_object()) {
    throw ParseError(where(origin) + "the document must be a JSON object");
  }
  TargetDocument doc;
  const json& jc = *find_field(j, "colorings", origin);
  if (!jc.is_array() || jc.empty()) {
    throw ParseError(where(origin) +
                     "field \"colorings\" must be a non-empty list");
  }
  for (size_t i = 0; i < jc.size(); ++i) {
    const json& seq = jc[i];
    std::string at = where(origin) + "colorings[" + std::to_string(i) + "]: ";
    if (!seq.is_array() || seq.empty()) {
      throw ParseError(at + "expected a list of color labels");
    }
    std::vector<std::string> labels;
    for (const json& item : seq) {
      if (!item.is_string()) {
        throw ParseError(at + "labels must be strings");
      }
      labels.push_back(item.get<std::string>());
    }
    doc.colorings.push_back(std::move(labels));
  }
  const json& jw = *find_field(j, "weights", origin);
  if (!jw.is_array() || jw.size() != jc.size()) {
    throw ParseError(where(origin) +
                     "field \"weights\" must list one [re, im] pair per coloring");
  }
  for (size_t i = 0; i < jw.size(); ++i) {
    const json& pair = jw[i];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
        !pair[1].is_number()) {
      throw ParseError(where(origin) + "weights[" + std::to_string(i) +
                       "]: expected [re, im]");
    }
    doc.weights.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  if (auto it = j.find("mode"); it != j.end()) {
    std::string mode = it->get<std::string>();
    if (mode == "conjugated") {
      doc.mode = TargetSpec::Mode::conjugated;
    } else if (mode == "literal") {
      doc.mode = TargetSpec::Mode::literal;
    } else {
      throw ParseError(where(origin) +
                       "mode must be \"conjugated\" or \"literal\"");
    }
  }
  return doc;
}

std::string serialize_target_document(const TargetDocument& doc) {
  json j;
  json colorings = json::array();
  for (const auto& seq : doc.colorings) {
    colorings.push_back(seq);
  }
  j["colorings"] = std::move(colorings);
  json weights = json::array();
  for (Complex w : doc.weights) {
    weights.push_back(json::array({w.real(), w.imag()}));
  }
  j["weights"] = std::move(weights);
  j["mode"] =
      doc.mode == TargetSpec::Mode::conjugated ? "conjugated" : "literal";
  return j.dump(2) + "\n";
}

TargetDocument load_target_document(const std::filesystem::path& path) {
  return parse_target_document(read_file(path), path.string());
}

TargetSpec resolve_target(const TargetDocument& doc,
                          const std::vector<std::string>& palette) {
  TargetSpec spec;
  spec.mode = doc.mode;
  spec.weights = doc.weights;
  for (const auto& seq : doc.colorings) {
    VertexColoring c;
    for (const std::string& label : seq) {
      auto it = std::find(palette.begin(), palette.end(), label);
      if (it == palette.end()) {
        throw ParseError("target color label \"" + label +
                         "\" is not in the palette");
      }
      c.colors.push_back(Color{static_cast<int>(it - palette.begin())});
    }
    spec.colorings.push_back(std::move(c));
  }
  return spec;
}

std::vector<std::string> palette_from_target(const TargetDocument& doc, int d) {
  std::vector<std::string> palette;
  for (const auto& seq : doc.colorings) {
    for (const std::string& label : seq) {
      if (std::find(palette.begin(), palette.end(), label) == palette.end()) {
        palette.push_back(label);
      }
    }
  }
  if (static_cast<int>(palette.size()) > d) {
    throw ValidationError("target uses " + std::to_string(palette.size()) +
                          " colors but d = " + std::to_string(d));
  }
  for (const std::string& candidate : default_palette(
           d + static_cast<int>(palette.size()))) {
    if (static_cast<int>(palette.size()) >= d) break;
    if (std::find(palette.begin(), palette.end(), candidate) == palette.end()) {
      palette.push_back(candidate);
    }
  }
  return palette;
}

std::string coloring_to_string(const VertexColoring& c,
                               const std::vector<std::string>& palette) {
  std::string out;
  for (size_t i = 0; i < c.colors.size(); ++i) {
    if (i > 0) out += ' ';
    int id = c.colors[i].id;
    if (id >= 0 && id < static_cast<int>(palette.size())) {
      out += palette[static_cast<size_t>(id)];
    } else {
      out += "?" + std::to_string(id);
    }
  }
  return out;
}

std::string to_dot(const BiColoredGraph& g) {
  std::ostringstream os;
  os << "graph state {\n";
  for (int v = 0; v < g.vertex_count(); ++v) {
    os << "  " << (v + 1) << ";\n";
  }
  for (const Edge& e : g.edges()) {
    os << "  " << (e.u + 1) << " -- " << (e.v + 1) << " [label=\""
       << g.color_label(e.color_at_u) << ":" << g.color_label(e.color_at_v)
       << " w=" << fmt(e.weight, 12) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

void write_state_report(std::ostream& os, const BiColoredGraph& g,
                        const StateMap& s, int precision) {
  os << "n: " << s.vertex_count() << "\n";
  os << "d: " << s.palette_size() << "\n";
  os << "edges: " << g.edge_count() << "\n";
  os << "matchings: " << s.matching_count() << "\n";
  os << "zero-tolerance: " << fmt(s.zero_tolerance(), precision) << "\n";
  os << "N: " << fmt(s.norm_squared(), precision) << "\n";
  os << "terms: " << s.terms().size() << " (cancelled: " << s.cancelled_count()
     << ")\n";
  for (const StateTerm& t : s.terms()) {
    os << "w(" << coloring_to_string(t.coloring, s.palette())
       << ") = " << fmt(t.weight, precision)
       << "  [matchings: " << t.matching_ids.size() << "]"
       << (t.cancelled ? "  cancelled" : "") << "\n";
  }
  if (s.terms().empty()) {
    os << "warning: the graph has no perfect matchings\n";
  } else if (s.degenerate()) {
    os << "warning: every coloring cancels; the post-selected state is empty\n";
  }
}

std::string state_report_json(const BiColoredGraph& g, const StateMap& s) {
  json j;
  j["n"] = s.vertex_count();
  j["d"] = s.palette_size();
  j["edges"] = g.edge_count();
  j["matchings"] = s.matching_count();
  j["zero_tolerance"] = s.zero_tolerance();
  j["N"] = s.norm_squared();
  json terms = json::array();
  for (const StateTerm& t : s.terms()) {
    json term;
    json labels = json::array();
    for (Color c : t.coloring.colors) {
      labels.push_back(s.palette()[static_cast<size_t>(c.id)]);
    }
    term["coloring"] = std::move(labels);
    term["re"] = t.weight.real();
    term["im"] = t.weight.imag();
    term["matchings"] = t.matching_ids.size();
    term["cancelled"] = t.cancelled;
    terms.push_back(std::move(term));
  }
  j["terms"] = std::move(terms);
  return j.dump(2) + "\n";
}

namespace {

const char* kind_name(FidelityReport::Kind kind) {
  switch (kind) {
    case FidelityReport::Kind::mono:
      return "monochromatic";
    case FidelityReport::Kind::k_mono:
      return "k-monochromatic";
    case FidelityReport::Kind::general:
      return "general";
  }
  return "?";
}

}  // namespace

void write_fidelity_report(std::ostream& os, const FidelityReport& report,
                           const std::vector<std::string>& palette,
                           int precision) {
  os << "kind: " << kind_name(report.kind) << "\n";
  os << "d: " << report.d << "\n";
  if (report.kind == FidelityReport::Kind::k_mono) {
    os << "k: " << report.k << "\n";
    os << "red: " << palette[static_cast<size_t>(report.red.id)] << "\n";
  }
  if (report.kind == FidelityReport::Kind::general) {
    os << "mode: "
       << (report.mode == TargetSpec::Mode::conjugated ? "conjugated"
                                                       : "literal")
       << "\n";
    os << "N1: " << fmt(report.target_norm, precision) << "\n";
    os << "N2: " << fmt(report.state_norm, precision) << "\n";
  } else {
    os << "N: " << fmt(report.state_norm, precision) << "\n";
  }
  os << "zero-tolerance: " << fmt(report.tolerance, precision) << "\n";
  os << "value: " << fmt(report.value, precision) << "\n";
  for (const auto& [coloring, weight] : report.matched_terms) {
    os << "w(" << coloring_to_string(coloring, palette)
       << ") = " << fmt(weight, precision) << "\n";
  }
}

std::string fidelity_report_json(const FidelityReport& report,
                                 const std::vector<std::string>& palette) {
  json j;
  j["kind"] = kind_name(report.kind);
  j["d"] = report.d;
  if (report.kind == FidelityReport::Kind::k_mono) {
    j["k"] = report.k;
    j["red"] = palette[static_cast<size_t>(report.red.id)];
  }
  if (report.kind == FidelityReport::Kind::general) {
    j["mode"] = report.mode == TargetSpec::Mode::conjugated ? "conjugated"
                                                            : "literal";
    j["N1"] = report.target_norm;
    j["N2"] = report.state_norm;
  } else {
    j["N"] = report.state_norm;
  }
  j["zero_tolerance"] = report.tolerance;
  j["value"] = report.value;
  json matched = json::array();
  for (const auto& [coloring, weight] : report.matched_terms) {
    json item;
    json labels = json::array();
    for (Color c : coloring.colors) {
      labels.push_back(palette[static_cast<size_t>(c.id)]);
    }
    item["coloring"] = std::move(labels);
    item["re"] = weight.real();
    item["im"] = weight.imag();
    matched.push_back(std::move(item));
  }
  j["matched_terms"] = std::move(matched);
  return j.dump(2) + "\n";
}

void write_verify_report(std::ostream& os, const VerifyReport& report,
                         const std::vector<std::string>& palette,
                         int precision) {
  os << "verdict: " << (report.ok ? "pass" : "fail") << "\n";
  os << "tolerance: " << fmt(report.tolerance, precision) << "\n";
  if (!report.violations.empty()) {
    os << "violations: " << report.violations.size() << "\n";
    for (const auto& v : report.violations) {
      os << "w(" << coloring_to_string(v.coloring, palette)
         << ") = " << fmt(v.achieved, precision)
         << "  required " << fmt(v.required, precision) << "\n";
    }
  }
}

void write_search_report(std::ostream& os, const SearchResult& result,
                         int precision) {
  os << "fidelity: " << fmt(result.fidelity, precision) << "\n";
  os << "exact: " << (result.exact ? "yes" : "no") << "\n";
  os << "restarts: " << result.restarts_used << "\n";
  os << "evaluations: " << result.evaluations << "\n";
  os << "seed: " << result.seed << "\n";
  os << "edges: " << result.graph.edge_count() << "\n";
}

namespace {

struct CliOptions {
  double tol = 1e-9;
  int precision = 12;
  std::uint64_t seed = 1;
};

Objective make_objective(bool mono, int kmono, const std::string& red_label,
                         const std::string& target_path,
                         const std::string& mode_override,
                         const std::string& constraint_name,
                         const BiColoredGraph* graph, int search_d,
                         std::vector<std::string>* palette_out) {
  Objective obj;
  if (constraint_name == "real") {
    obj.constraint = Objective::Constraint::real_weights;
  } else if (constraint_name == "positive") {
    obj.constraint = Objective::Constraint::positive_real;
  } else if (constraint_name == "complex") {
    obj.constraint = Objective::Constraint::complex_weights;
  } else {
    throw ValidationError("unknown constraint \"" + constraint_name + "\"");
  }

  int picked = (mono ? 1 : 0) + (kmono > 0 ? 1 : 0) + (!target_path.empty() ? 1 : 0);
  if (picked != 1) {
    throw ValidationError(
        "pick exactly one objective: --mono, --kmono K, or --general FILE");
  }

  std::vector<std::string> palette;
  if (graph != nullptr) {
    palette = graph->palette();
  }

  if (mono) {
    obj.kind = Objective::Kind::mono;
  } else if (kmono > 0) {
    obj.kind = Objective::Kind::k_mono;
    obj.k = kmono;
    if (palette.empty()) {
      palette = default_palette(search_d);
    }
    if (red_label.empty()) {
      obj.red = Color{0};
    } else {
      auto it = std::find(palette.begin(), palette.end(), red_label);
      if (it == palette.end()) {
        throw ValidationError("red label \"" + red_label +
                              "\" is not in the palette");
      }
      obj.red = Color{static_cast<int>(it - palette.begin())};
    }
  } else {
    obj.kind = Objective::Kind::general;
    TargetDocument doc = load_target_document(target_path);
    if (!mode_override.empty()) {
      if (mode_override == "conjugated") {
        doc.mode = TargetSpec::Mode::conjugated;
      } else if (mode_override == "literal") {
        doc.mode = TargetSpec::Mode::literal;
      } else {
        throw ValidationError("mode must be conjugated or literal");
      }
    }
    if (palette.empty()) {
      palette = palette_from_target(doc, search_d);
    }
    obj.target = resolve_target(doc, palette);
  }
  if (palette_out != nullptr) {
    *palette_out = palette;
  }
  return obj;
}

int dispatch(CLI::App& app, const CliOptions& global,
             const std::string& graph_path, bool json_out, bool mono,
             int kmono, const std::string& red_label,
             const std::string& target_path, const std::string& mode_override,
             const std::string& constraint_name,
             const std::vector<int>& search_nd, int restarts, int max_iters,
             int max_edges, int max_mult, bool unit_weights,
             const std::string& out_path, const std::string& trace_path,
             long max_topologies) {
  StateOptions sopts;
  sopts.zero_tol = global.tol;

  if (app.got_subcommand("state")) {
    BiColoredGraph g = load_graph(graph_path);
    StateMap s = compute_state(g, sopts);
    if (json_out) {
      std::cout << state_report_json(g, s);
    } else {
      write_state_report(std::cout, g, s, global.precision);
    }
    return 0;
  }

  if (app.got_subcommand("fidelity")) {
    BiColoredGraph g = load_graph(graph_path);
    StateMap s = compute_state(g, sopts);
    Objective obj = make_objective(mono, kmono, red_label, target_path,
                                   mode_override, constraint_name, &g, 0,
                                   nullptr);
    FidelityReport report;
    switch (obj.kind) {
      case Objective::Kind::mono:
        report = monochromatic_fidelity(s);
        break;
      case Objective::Kind::k_mono:
        report = k_monochromatic_fidelity(s, obj.k, obj.red);
        break;
      case Objective::Kind::general:
        report = general_fidelity(s, *obj.target);
        break;
    }
    if (json_out) {
      std::cout << fidelity_report_json(report, g.palette());
    } else {
      write_fidelity_report(std::cout, report, g.palette(), global.precision);
    }
    return 0;
  }

  if (app.got_subcommand("verify")) {
    BiColoredGraph g = load_graph(graph_path);
    StateMap s = compute_state(g, sopts);
    Objective obj = make_objective(mono, kmono, red_label, target_path,
                                   mode_override, constraint_name, &g, 0,
                                   nullptr);
    VerifyReport report;
    switch (obj.kind) {
      case Objective::Kind::mono:
        report = verify_monochromatic(s, global.tol);
        break;
      case Objective::Kind::k_mono:
        report = verify_k_monochromatic(s, obj.k, obj.red, global.tol);
        break;
      case Objective::Kind::general:
        report = verify_target(s, *obj.target, global.tol);
        break;
    }
    write_verify_report(std::cout, report, g.palette(), global.precision);
    return report.ok ? 0 : 1;
  }

  if (app.got_subcommand("optimize")) {
    OptimizeConfig cfg;
    cfg.restarts = restarts;
    cfg.max_iters = max_iters;
    cfg.seed = global.seed;
    cfg.zero_tol = global.tol;
    std::ofstream trace;
    if (!trace_path.empty()) {
      trace.open(trace_path);
      if (!trace) throw ParseError("cannot write " + trace_path);
      cfg.trace = &trace;
    }

    std::optional<SearchResult> best;
    if (!search_nd.empty()) {
      int n = search_nd[0];
      int d = search_nd[1];
      std::vector<std::string> palette;
      Objective obj = make_objective(mono, kmono, red_label, target_path,
                                     mode_override, constraint_name, nullptr,
                                     d, &palette);
      SearchBudget budget;
      budget.max_edges = max_edges > 0 ? max_edges : n + 3;
      budget.max_multiplicity = max_mult;
      budget.max_topologies = max_topologies;
      if (unit_weights) {
        budget.weight_set = std::vector<Complex>{Complex{1.0, 0.0}};
      }
      std::vector<SearchResult> results =
          search_topologies(n, d, budget, obj, cfg, palette);
      if (results.empty()) {
        std::cout << "no result: no candidate topology has a perfect matching\n";
        return 1;
      }
      best = std::move(results.front());
    } else {
      BiColoredGraph g = load_graph(graph_path);
      Objective obj = make_objective(mono, kmono, red_label, target_path,
                                     mode_override, constraint_name, &g, 0,
                                     nullptr);
      best = optimize_weights(g, obj, cfg);
    }
    write_search_report(std::cout, *best, global.precision);
    if (!out_path.empty()) {
      save_graph(best->graph, out_path);
      std::cout << "wrote: " << out_path << "\n";
    }
    return 0;
  }

  if (app.got_subcommand("export")) {
    BiColoredGraph g = load_graph(graph_path);
    std::string dot = to_dot(g);
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      if (!out) throw ParseError("cannot write " + out_path);
      out << dot;
    } else {
      std::cout << dot;
    }
    return 0;
  }

  return 2;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"state engine for edge-bi-colored weighted multigraphs"};
  app.fallthrough();
  app.require_subcommand(1);

  CliOptions global;
  app.add_option("--tol", global.tol, "zero / verification tolerance");
  app.add_option("--precision", global.precision, "significant digits in reports");
  app.add_option("--seed", global.seed, "seed for stochastic commands");

  std::string graph_path;
  std::string target_path;
  std::string red_label;
  std::string mode_override;
  std::string constraint_name = "complex";
  std::string out_path;
  std::string trace_path;
  bool json_out = false;
  bool mono = false;
  bool dot = false;
  bool unit_weights = false;
  int kmono = 0;
  int restarts = 10;
  int max_iters = 400;
  int max_edges = 0;
  int max_mult = 1;
  long max_topologies = 5'000'000;
  std::vector<int> search_nd;

  CLI::App* state = app.add_subcommand("state", "print matchings, colorings and weights");
  state->add_option("graph", graph_path, "graph file")->required();
  state->add_flag("--json", json_out, "machine-readable output");

  CLI::App* fidelity = app.add_subcommand("fidelity", "evaluate a fidelity functional");
  fidelity->add_option("graph", graph_path, "graph file")->required();
  fidelity->add_flag("--mono", mono, "monochromatic fidelity");
  fidelity->add_option("--kmono", kmono, "k-monochromatic fidelity with this k");
  fidelity->add_option("--red", red_label, "heralding color label (default: first palette color)");
  fidelity->add_option("--general", target_path, "general fidelity against a target file");
  fidelity->add_option("--mode", mode_override, "conjugated|literal override for --general");
  fidelity->add_flag("--json", json_out, "machine-readable output");

  CLI::App* verify = app.add_subcommand("verify", "check an exactness predicate");
  verify->add_option("graph", graph_path, "graph file")->required();
  verify->add_flag("--mono", mono, "every single-color coloring has unit weight, everything else cancels");
  verify->add_option("--kmono", kmono, "k-monochromatic predicate with this k");
  verify->add_option("--red", red_label, "heralding color label");
  verify->add_option("--target", target_path, "target-realization predicate");
  verify->add_option("--mode", mode_override, "conjugated|literal for the target");

  CLI::App* optimize = app.add_subcommand("optimize", "maximize a fidelity over edge weights or topologies");
  optimize->add_option("graph", graph_path, "topology file (weights are re-optimized)");
  optimize->add_option("--search", search_nd, "search topologies on N vertices with D colors")
      ->expected(2);
  optimize->add_flag("--mono", mono, "monochromatic objective");
  optimize->add_option("--kmono", kmono, "k-monochromatic objective with this k");
  optimize->add_option("--red", red_label, "heralding color label");
  optimize->add_option("--general", target_path, "general objective against a target file");
  optimize->add_option("--mode", mode_override, "conjugated|literal override");
  optimize->add_option("--constraint", constraint_name, "complex|real|positive weight domain");
  optimize->add_option("--restarts", restarts, "random restarts");
  optimize->add_option("--max-iters", max_iters, "ascent iterations per restart");
  optimize->add_option("--max-edges", max_edges, "search: edge budget per topology");
  optimize->add_option("--max-mult", max_mult, "search: per-type multiplicity cap");
  optimize->add_option("--max-topologies", max_topologies, "search: enumeration budget");
  optimize->add_flag("--unit-weights", unit_weights, "search: fix all weights to 1 instead of optimizing");
  optimize->add_option("--out", out_path, "write the best graph here");
  optimize->add_option("--trace", trace_path, "write per-iteration objective values here");

  CLI::App* exporter = app.add_subcommand("export", "emit a render-source description");
  exporter->add_option("graph", graph_path, "graph file")->required();
  exporter->add_flag("--dot", dot, "Graphviz DOT output (default)");
  exporter->add_option("--out", out_path, "write to this file instead of stdout");

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!search_nd.empty() && !graph_path.empty() &&
        app.got_subcommand("optimize")) {
      throw ValidationError("give either a topology file or --search, not both");
    }
    if (app.got_subcommand("optimize") && search_nd.empty() &&
        graph_path.empty()) {
      throw ValidationError("optimize needs a topology file or --search N D");
    }
    return dispatch(app, global, graph_path, json_out, mono, kmono, red_label,
                    target_path, mode_override, constraint_name, search_nd,
                    restarts, max_iters, max_edges, max_mult, unit_weights,
                    out_path, trace_path, max_topologies);
  } catch (const UndefinedFidelityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> full;
  full.emplace_back("pmstate");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const std::string& s : full) {
    argv.push_back(s.c_str());
  }
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace pmstate
