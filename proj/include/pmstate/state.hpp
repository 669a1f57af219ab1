#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "pmstate/graph.hpp"
#include "pmstate/matching.hpp"

namespace pmstate {

/// Length-n sequence of colors; entry i is the color of vertex i. Compares by
/// exact sequence equality (the fixed vertex ordering is significant).
struct VertexColoring {
  std::vector<Color> colors;

  friend auto operator<=>(const VertexColoring&, const VertexColoring&) = default;

  int size() const { return static_cast<int>(colors.size()); }
  Color at(int v) const { return colors[static_cast<size_t>(v)]; }

  static VertexColoring uniform(int n, Color c);
  static VertexColoring from_ids(std::initializer_list<int> ids);
  static VertexColoring from_ids(const std::vector<int>& ids);

  bool monochromatic() const;
};

/// One term of a graph's state: a coloring, its coherent weight, and the
/// matchings that produced it. Terms with |weight| <= zero tolerance are kept
/// and flagged cancelled rather than dropped.
struct StateTerm {
  VertexColoring coloring;
  Complex weight{0.0, 0.0};
  std::vector<int> matching_ids;  // indices into the enumeration order
  bool cancelled = false;
};

struct StateOptions {
  double zero_tol = 1e-9;
  std::size_t max_matchings = 10'000'000;
};

/// The state of a graph: every inherited vertex coloring that arises from at
/// least one perfect matching, mapped to its coherent weight w(c). Terms are
/// ordered by coloring key.
class StateMap {
 public:
  StateMap() = default;

  /// Synthetic constructor: builds a state directly from (coloring, weight)
  /// pairs. Colorings must be distinct, length n, palette-valid.
  static StateMap from_terms(
      int n, int d, std::vector<std::pair<VertexColoring, Complex>> terms,
      double zero_tol = 1e-9, std::vector<std::string> palette = {});

  int vertex_count() const { return n_; }
  int palette_size() const { return d_; }
  double zero_tolerance() const { return zero_tol_; }
  const std::vector<std::string>& palette() const { return palette_; }
  const std::vector<StateTerm>& terms() const { return terms_; }
  std::size_t matching_count() const { return matching_count_; }

  /// Term for a coloring, or nullptr if no matching induces it.
  const StateTerm* find(const VertexColoring& c) const;

  /// w(c); exact zero for colorings with no contributing matching.
  Complex weight_of(const VertexColoring& c) const;

  /// Sum of |w(c)|^2 over all terms, computed from the exact weights (before
  /// any cancelled-flag rounding).
  double norm_squared() const;

  /// True when the state has no term with |w| above the zero tolerance.
  bool degenerate() const;

  std::size_t cancelled_count() const;

 private:
  friend StateMap compute_state(const BiColoredGraph&, const StateOptions&);

  int n_ = 0;
  int d_ = 0;
  double zero_tol_ = 1e-9;
  std::vector<std::string> palette_;
  std::vector<StateTerm> terms_;
  std::size_t matching_count_ = 0;
};

/// The coloring a perfect matching hands down to the vertices: each vertex
/// takes the color of its matching edge at that endpoint. Throws
/// NotAMatchingError if pm does not cover every vertex exactly once.
VertexColoring inherited_coloring(const BiColoredGraph& g,
                                  const PerfectMatching& pm);

/// Enumerates all perfect matchings, groups them by inherited coloring and
/// coherently sums the matching weights per group.
StateMap compute_state(const BiColoredGraph& g, const StateOptions& options = {});

/// w(c) for a single coloring, computed directly from the matchings of g.
/// Throws BadColoringError on length or palette mismatch.
Complex weight_of_coloring(const BiColoredGraph& g, const VertexColoring& c,
                           const StateOptions& options = {});

}  // namespace pmstate
