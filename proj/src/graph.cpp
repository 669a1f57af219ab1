#include "pmstate/graph.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace pmstate {

std::vector<std::string> default_palette(int d) {
  static const char* names[] = {"red",  "green",   "blue",   "yellow",
                                "cyan", "magenta", "orange", "violet"};
  std::vector<std::string> out;
  out.reserve(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    if (i < 8) {
      out.emplace_back(names[i]);
    } else {
      out.push_back("c" + std::to_string(i));
    }
  }
  return out;
}

BiColoredGraph::BiColoredGraph(int n, int d, std::vector<EdgeSpec> specs,
                               std::vector<std::string> palette)
    : n_(n), d_(d) {
  if (n < 1) {
    throw ValidationError("vertex count must be at least 1, got " +
                          std::to_string(n));
  }
  if (d < 2) {
    throw ValidationError("palette size must be at least 2, got " +
                          std::to_string(d));
  }
  if (palette.empty()) {
    palette = default_palette(d);
  }
  if (static_cast<int>(palette.size()) != d) {
    throw ValidationError("palette has " + std::to_string(palette.size()) +
                          " labels but d = " + std::to_string(d));
  }
  std::set<std::string> seen(palette.begin(), palette.end());
  if (static_cast<int>(seen.size()) != d) {
    throw ValidationError("palette labels must be unique");
  }
  palette_ = std::move(palette);

  edges_.reserve(specs.size());
  incident_.assign(static_cast<size_t>(n), {});
  int next_id = 0;
  for (EdgeSpec spec : specs) {
    if (spec.u == spec.v) {
      throw LoopEdgeError("loop edge at vertex " + std::to_string(spec.u));
    }
    if (spec.u < 0 || spec.u >= n || spec.v < 0 || spec.v >= n) {
      throw VertexOutOfRangeError("edge (" + std::to_string(spec.u) + "," +
                                  std::to_string(spec.v) +
                                  ") outside 0.." + std::to_string(n - 1));
    }
    if (spec.color_at_u.id < 0 || spec.color_at_u.id >= d ||
        spec.color_at_v.id < 0 || spec.color_at_v.id >= d) {
      throw ColorOutOfPaletteError(
          "edge (" + std::to_string(spec.u) + "," + std::to_string(spec.v) +
          ") uses a color outside the palette of size " + std::to_string(d));
    }
    if (spec.u > spec.v) {
      std::swap(spec.u, spec.v);
      std::swap(spec.color_at_u, spec.color_at_v);
    }
    Edge e;
    e.id = next_id++;
    e.u = spec.u;
    e.v = spec.v;
    e.color_at_u = spec.color_at_u;
    e.color_at_v = spec.color_at_v;
    e.weight = spec.weight;
    incident_[static_cast<size_t>(e.u)].push_back(e.id);
    incident_[static_cast<size_t>(e.v)].push_back(e.id);
    edges_.push_back(e);
  }
}

const std::string& BiColoredGraph::color_label(Color c) const {
  if (c.id < 0 || c.id >= d_) {
    throw ColorOutOfPaletteError("color id " + std::to_string(c.id) +
                                 " outside palette of size " +
                                 std::to_string(d_));
  }
  return palette_[static_cast<size_t>(c.id)];
}

Color BiColoredGraph::color_by_label(const std::string& label) const {
  for (int i = 0; i < d_; ++i) {
    if (palette_[static_cast<size_t>(i)] == label) {
      return Color{i};
    }
  }
  throw ColorOutOfPaletteError("unknown color label \"" + label + "\"");
}

BiColoredGraph BiColoredGraph::with_weights(
    std::span<const Complex> weights) const {
  if (static_cast<int>(weights.size()) != edge_count()) {
    throw LengthMismatchError("expected " + std::to_string(edge_count()) +
                              " weights, got " +
                              std::to_string(weights.size()));
  }
  BiColoredGraph out = *this;
  for (size_t i = 0; i < out.edges_.size(); ++i) {
    out.edges_[i].weight = weights[i];
  }
  return out;
}

BiColoredGraph build_graph(int n, int d, std::vector<EdgeSpec> specs,
                           std::vector<std::string> palette) {
  return BiColoredGraph(n, d, std::move(specs), std::move(palette));
}

BiColoredGraph alternating_cycle(int n, Color a, Color b) {
  if (n < 4 || n % 2 != 0) {
    throw OddCycleError("alternating cycle needs an even vertex count >= 4, got " +
                        std::to_string(n));
  }
  std::vector<EdgeSpec> specs;
  specs.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Color c = (i % 2 == 0) ? a : b;
    specs.push_back({i, (i + 1) % n, c, c, Complex{1.0, 0.0}});
  }
  return BiColoredGraph(n, 2, std::move(specs));
}

BiColoredGraph k4_ghz() {
  std::vector<EdgeSpec> specs = {
      {0, 1, Color{0}, Color{0}, Complex{1.0, 0.0}},
      {2, 3, Color{0}, Color{0}, Complex{1.0, 0.0}},
      {0, 2, Color{1}, Color{1}, Complex{1.0, 0.0}},
      {1, 3, Color{1}, Color{1}, Complex{1.0, 0.0}},
      {0, 3, Color{2}, Color{2}, Complex{1.0, 0.0}},
      {1, 2, Color{2}, Color{2}, Complex{1.0, 0.0}},
  };
  return BiColoredGraph(4, 3, std::move(specs));
}

BiColoredGraph disjoint_union(const BiColoredGraph& a, const BiColoredGraph& b) {
  if (a.palette_size() != b.palette_size() || a.palette() != b.palette()) {
    throw ValidationError("disjoint union requires identical palettes");
  }
  std::vector<EdgeSpec> specs;
  specs.reserve(a.edges().size() + b.edges().size());
  for (const Edge& e : a.edges()) {
    specs.push_back({e.u, e.v, e.color_at_u, e.color_at_v, e.weight});
  }
  int shift = a.vertex_count();
  for (const Edge& e : b.edges()) {
    specs.push_back({e.u + shift, e.v + shift, e.color_at_u, e.color_at_v,
                     e.weight});
  }
  return BiColoredGraph(a.vertex_count() + b.vertex_count(), a.palette_size(),
                        std::move(specs), a.palette());
}

}  // namespace pmstate
