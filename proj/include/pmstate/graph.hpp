#pragma once

#include <compare>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "pmstate/errors.hpp"

namespace pmstate {

using Complex = std::complex<double>;

/// Index into a graph's color palette.
struct Color {
  int id = 0;
  friend auto operator<=>(const Color&, const Color&) = default;
};

/// Undirected edge with an ordered color pair (one color per endpoint) and a
/// complex weight. Endpoints are normalized so that u < v; the color pair is
/// stored in endpoint order (color_at_u belongs to u).
struct Edge {
  int id = 0;
  int u = 0;
  int v = 0;
  Color color_at_u;
  Color color_at_v;
  Complex weight{1.0, 0.0};

  bool monochromatic() const { return color_at_u == color_at_v; }
};

/// Raw edge description accepted by build_graph. Endpoints may come in either
/// order; construction swaps them (and the color pair) into u < v form.
struct EdgeSpec {
  int u = 0;
  int v = 0;
  Color color_at_u;
  Color color_at_v;
  Complex weight{1.0, 0.0};
};

/// Loopless multigraph on vertices 0..n-1 with a fixed vertex ordering, a
/// declared palette of d >= 2 colors, and edges carrying complex weights and
/// ordered color pairs. Parallel edges (including exact duplicates) are kept
/// as distinct edges. Immutable after construction.
class BiColoredGraph {
 public:
  BiColoredGraph(int n, int d, std::vector<EdgeSpec> specs,
                 std::vector<std::string> palette = {});

  int vertex_count() const { return n_; }
  int palette_size() const { return d_; }
  const std::vector<std::string>& palette() const { return palette_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int id) const { return edges_[static_cast<size_t>(id)]; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  /// Edge ids incident to each vertex, in ascending id order.
  const std::vector<std::vector<int>>& incident() const { return incident_; }

  const std::string& color_label(Color c) const;
  /// Palette index for a label; throws ColorOutOfPaletteError if unknown.
  Color color_by_label(const std::string& label) const;

  /// Copy of this graph with the edge weights replaced (same topology).
  BiColoredGraph with_weights(std::span<const Complex> weights) const;

 private:
  int n_;
  int d_;
  std::vector<std::string> palette_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> incident_;
};

/// Validating constructor. Specs with u > v are normalized by swapping the
/// endpoints and the color pair. Throws LoopEdgeError, VertexOutOfRangeError,
/// ColorOutOfPaletteError, or ValidationError.
BiColoredGraph build_graph(int n, int d, std::vector<EdgeSpec> specs,
                           std::vector<std::string> palette = {});

/// Even cycle 0-1-...-(n-1)-0 whose edges alternate between two monochromatic
/// colors, all weights one. Throws OddCycleError unless n is even and >= 4.
BiColoredGraph alternating_cycle(int n, Color a = Color{0}, Color b = Color{1});

/// K4 with its three perfect matchings {01,23}, {02,13}, {03,12} drawn as
/// monochromatic edges of colors 0, 1, 2, all weights one.
BiColoredGraph k4_ghz();

/// Disjoint union: vertices of b are shifted by a.vertex_count(). Both graphs
/// must declare the same palette.
BiColoredGraph disjoint_union(const BiColoredGraph& a, const BiColoredGraph& b);

/// Default label set used when no palette is supplied ("red", "green", ...).
std::vector<std::string> default_palette(int d);

}  // namespace pmstate
