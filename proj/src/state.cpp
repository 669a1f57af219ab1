#include "pmstate/state.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace pmstate {

VertexColoring VertexColoring::uniform(int n, Color c) {
  VertexColoring out;
  out.colors.assign(static_cast<size_t>(n), c);
  return out;
}

VertexColoring VertexColoring::from_ids(std::initializer_list<int> ids) {
  VertexColoring out;
  out.colors.reserve(ids.size());
  for (int id : ids) out.colors.push_back(Color{id});
  return out;
}

VertexColoring VertexColoring::from_ids(const std::vector<int>& ids) {
  VertexColoring out;
  out.colors.reserve(ids.size());
  for (int id : ids) out.colors.push_back(Color{id});
  return out;
}

bool VertexColoring::monochromatic() const {
  if (colors.empty()) return false;
  return std::all_of(colors.begin(), colors.end(),
                     [&](Color c) { return c == colors.front(); });
}

namespace {

void check_coloring(const VertexColoring& c, int n, int d) {
  if (c.size() != n) {
    throw BadColoringError("coloring has length " + std::to_string(c.size()) +
                           " but the graph has " + std::to_string(n) +
                           " vertices");
  }
  for (Color col : c.colors) {
    if (col.id < 0 || col.id >= d) {
      throw BadColoringError("coloring uses color id " +
                             std::to_string(col.id) +
                             " outside the palette of size " +
                             std::to_string(d));
    }
  }
}

}  // namespace

StateMap StateMap::from_terms(
    int n, int d, std::vector<std::pair<VertexColoring, Complex>> terms,
    double zero_tol, std::vector<std::string> palette) {
  StateMap s;
  s.n_ = n;
  s.d_ = d;
  s.zero_tol_ = zero_tol;
  s.palette_ = palette.empty() ? default_palette(d) : std::move(palette);
  if (static_cast<int>(s.palette_.size()) != d) {
    throw ValidationError("palette size does not match d");
  }
  std::map<VertexColoring, Complex> grouped;
  for (auto& [coloring, weight] : terms) {
    check_coloring(coloring, n, d);
    if (!grouped.emplace(coloring, weight).second) {
      throw ValidationError("duplicate coloring in synthetic state");
    }
  }
  for (auto& [coloring, weight] : grouped) {
    StateTerm term;
    term.coloring = coloring;
    term.weight = weight;
    term.cancelled = std::abs(weight) <= zero_tol;
    s.terms_.push_back(std::move(term));
  }
  return s;
}

const StateTerm* StateMap::find(const VertexColoring& c) const {
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), c,
      [](const StateTerm& t, const VertexColoring& key) {
        return t.coloring < key;
      });
  if (it == terms_.end() || !(it->coloring == c)) return nullptr;
  return &*it;
}

Complex StateMap::weight_of(const VertexColoring& c) const {
  const StateTerm* t = find(c);
  return t ? t->weight : Complex{0.0, 0.0};
}

double StateMap::norm_squared() const {
  double n2 = 0.0;
  for (const StateTerm& t : terms_) {
    n2 += std::norm(t.weight);
  }
  return n2;
}

bool StateMap::degenerate() const {
  for (const StateTerm& t : terms_) {
    if (!t.cancelled) return false;
  }
  return true;
}

std::size_t StateMap::cancelled_count() const {
  std::size_t k = 0;
  for (const StateTerm& t : terms_) {
    if (t.cancelled) ++k;
  }
  return k;
}

VertexColoring inherited_coloring(const BiColoredGraph& g,
                                  const PerfectMatching& pm) {
  int n = g.vertex_count();
  VertexColoring c;
  c.colors.assign(static_cast<size_t>(n), Color{-1});
  int covered = 0;
  for (int id : pm.edge_ids) {
    if (id < 0 || id >= g.edge_count()) {
      throw NotAMatchingError("edge id " + std::to_string(id) +
                              " does not exist");
    }
    const Edge& e = g.edge(id);
    if (c.colors[static_cast<size_t>(e.u)].id != -1 ||
        c.colors[static_cast<size_t>(e.v)].id != -1) {
      throw NotAMatchingError("vertex covered twice by the matching");
    }
    c.colors[static_cast<size_t>(e.u)] = e.color_at_u;
    c.colors[static_cast<size_t>(e.v)] = e.color_at_v;
    covered += 2;
  }
  if (covered != n) {
    throw NotAMatchingError("matching covers " + std::to_string(covered) +
                            " of " + std::to_string(n) + " vertices");
  }
  return c;
}

StateMap compute_state(const BiColoredGraph& g, const StateOptions& options) {
  MatchingOptions mopts;
  mopts.max_matchings = options.max_matchings;
  std::vector<PerfectMatching> matchings = enumerate_perfect_matchings(g, mopts);

  struct Group {
    Complex weight{0.0, 0.0};
    std::vector<int> matching_ids;
  };
  std::map<VertexColoring, Group> grouped;
  for (size_t i = 0; i < matchings.size(); ++i) {
    VertexColoring c = inherited_coloring(g, matchings[i]);
    Group& grp = grouped[c];
    grp.weight += matchings[i].weight;
    grp.matching_ids.push_back(static_cast<int>(i));
  }

  StateMap s;
  s.n_ = g.vertex_count();
  s.d_ = g.palette_size();
  s.zero_tol_ = options.zero_tol;
  s.palette_ = g.palette();
  s.matching_count_ = matchings.size();
  s.terms_.reserve(grouped.size());
  for (auto& [coloring, grp] : grouped) {
    StateTerm term;
    term.coloring = coloring;
    term.weight = grp.weight;
    term.matching_ids = std::move(grp.matching_ids);
    term.cancelled = std::abs(grp.weight) <= options.zero_tol;
    s.terms_.push_back(std::move(term));
  }
  return s;
}

Complex weight_of_coloring(const BiColoredGraph& g, const VertexColoring& c,
                           const StateOptions& options) {
  check_coloring(c, g.vertex_count(), g.palette_size());
  MatchingOptions mopts;
  mopts.max_matchings = options.max_matchings;
  Complex total{0.0, 0.0};
  for (const PerfectMatching& pm : enumerate_perfect_matchings(g, mopts)) {
    if (inherited_coloring(g, pm) == c) {
      total += pm.weight;
    }
  }
  return total;
}

}  // namespace pmstate
