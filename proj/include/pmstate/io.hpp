#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pmstate/fidelity.hpp"
#include "pmstate/graph.hpp"
#include "pmstate/optimizer.hpp"
#include "pmstate/state.hpp"

namespace pmstate {

// Graph files are JSON documents with fields `n` (integer), `palette` (list
// of color labels; its length is d) and `edges` (records
// [u, v, color_at_u, color_at_v, re, im] with 1-based vertices).
// Target files carry `colorings` (label sequences), `weights` ([re, im]
// pairs) and an optional `mode` ("conjugated" | "literal").

BiColoredGraph parse_graph_document(const std::string& text,
                                    const std::string& origin = "");
std::string serialize_graph_document(const BiColoredGraph& g);
BiColoredGraph load_graph(const std::filesystem::path& path);
void save_graph(const BiColoredGraph& g, const std::filesystem::path& path);

/// Intermediate target form: labels not yet resolved against a palette.
struct TargetDocument {
  std::vector<std::vector<std::string>> colorings;
  std::vector<Complex> weights;
  TargetSpec::Mode mode = TargetSpec::Mode::conjugated;
};

TargetDocument parse_target_document(const std::string& text,
                                     const std::string& origin = "");
std::string serialize_target_document(const TargetDocument& doc);
TargetDocument load_target_document(const std::filesystem::path& path);

/// Resolves color labels against an explicit palette.
TargetSpec resolve_target(const TargetDocument& doc,
                          const std::vector<std::string>& palette);

/// Palette implied by a target document alone: labels in order of first
/// appearance, padded with default labels up to d.
std::vector<std::string> palette_from_target(const TargetDocument& doc, int d);

std::string coloring_to_string(const VertexColoring& c,
                               const std::vector<std::string>& palette);

/// Graphviz DOT rendering with color-pair and weight annotations; parallel
/// edges stay distinct records. Deterministic output.
std::string to_dot(const BiColoredGraph& g);

void write_state_report(std::ostream& os, const BiColoredGraph& g,
                        const StateMap& s, int precision = 12);
std::string state_report_json(const BiColoredGraph& g, const StateMap& s);

void write_fidelity_report(std::ostream& os, const FidelityReport& report,
                           const std::vector<std::string>& palette,
                           int precision = 12);
std::string fidelity_report_json(const FidelityReport& report,
                                 const std::vector<std::string>& palette);

void write_verify_report(std::ostream& os, const VerifyReport& report,
                         const std::vector<std::string>& palette,
                         int precision = 12);

void write_search_report(std::ostream& os, const SearchResult& result,
                         int precision = 12);

/// Full command-line interface. Returns the process exit code:
/// 0 success / predicate pass, 1 predicate fail, 2 input error,
/// 3 resource guard tripped.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);

}  // namespace pmstate
