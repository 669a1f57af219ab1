#include "pmstate/matching.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>

namespace pmstate {

namespace {

Complex product_over(const BiColoredGraph& g, const std::vector<int>& ids) {
  Complex w{1.0, 0.0};
  for (int id : ids) {
    w *= g.edge(id).weight;
  }
  return w;
}

struct Enumerator {
  const BiColoredGraph& g;
  std::size_t cap;
  std::uint64_t covered = 0;
  std::vector<int> chosen;
  std::vector<PerfectMatching> out;

  Enumerator(const BiColoredGraph& graph, std::size_t max_matchings)
      : g(graph), cap(max_matchings) {
    chosen.reserve(static_cast<size_t>(graph.vertex_count() / 2));
  }

  bool vertex_covered(int v) const { return (covered >> v) & 1u; }

  // Every uncovered vertex must still have an incident edge into the
  // uncovered set, otherwise this branch is dead.
  bool feasible() const {
    int n = g.vertex_count();
    for (int v = 0; v < n; ++v) {
      if (vertex_covered(v)) continue;
      bool has = false;
      for (int id : g.incident()[static_cast<size_t>(v)]) {
        const Edge& e = g.edge(id);
        int other = (e.u == v) ? e.v : e.u;
        if (!vertex_covered(other)) {
          has = true;
          break;
        }
      }
      if (!has) return false;
    }
    return true;
  }

  void emit() {
    if (out.size() >= cap) {
      throw MatchingExplosionError(
          "perfect matching count exceeds the cap of " + std::to_string(cap));
    }
    PerfectMatching pm;
    pm.edge_ids = chosen;
    std::sort(pm.edge_ids.begin(), pm.edge_ids.end());
    pm.weight = product_over(g, pm.edge_ids);
    out.push_back(std::move(pm));
  }

  void recurse() {
    int n = g.vertex_count();
    int v = -1;
    for (int i = 0; i < n; ++i) {
      if (!vertex_covered(i)) {
        v = i;
        break;
      }
    }
    if (v < 0) {
      emit();
      return;
    }
    if (!feasible()) return;
    for (int id : g.incident()[static_cast<size_t>(v)]) {
      const Edge& e = g.edge(id);
      int other = (e.u == v) ? e.v : e.u;
      if (vertex_covered(other)) continue;
      covered |= (1ull << v) | (1ull << other);
      chosen.push_back(id);
      recurse();
      chosen.pop_back();
      covered &= ~((1ull << v) | (1ull << other));
    }
  }
};

}  // namespace

std::vector<PerfectMatching> enumerate_perfect_matchings(
    const BiColoredGraph& g, const MatchingOptions& options) {
  if (g.vertex_count() > 63) {
    throw ResourceError("matching enumeration supports at most 63 vertices");
  }
  if (g.vertex_count() % 2 != 0) {
    return {};
  }
  Enumerator en(g, options.max_matchings);
  en.recurse();
  std::sort(en.out.begin(), en.out.end(),
            [](const PerfectMatching& a, const PerfectMatching& b) {
              return a.edge_ids < b.edge_ids;
            });
  return std::move(en.out);
}

std::vector<PerfectMatching> oracle_enumerate(const BiColoredGraph& g) {
  int n = g.vertex_count();
  if (n > 12) {
    throw TooLargeForOracleError("oracle enumeration is limited to 12 vertices, got " +
                                 std::to_string(n));
  }
  if (n % 2 != 0) {
    return {};
  }

  // Edge ids between each unordered vertex pair.
  std::map<std::pair<int, int>, std::vector<int>> bucket;
  for (const Edge& e : g.edges()) {
    bucket[{e.u, e.v}].push_back(e.id);
  }

  std::vector<PerfectMatching> out;
  std::vector<std::pair<int, int>> pairing;
  std::uint32_t used = 0;

  // Realize one pairing through every choice of parallel edge per pair.
  auto realize = [&]() {
    std::vector<const std::vector<int>*> choices;
    for (auto [a, b] : pairing) {
      auto it = bucket.find({a, b});
      if (it == bucket.end()) return;
      choices.push_back(&it->second);
    }
    std::vector<size_t> idx(choices.size(), 0);
    while (true) {
      PerfectMatching pm;
      for (size_t i = 0; i < choices.size(); ++i) {
        pm.edge_ids.push_back((*choices[i])[idx[i]]);
      }
      std::sort(pm.edge_ids.begin(), pm.edge_ids.end());
      pm.weight = product_over(g, pm.edge_ids);
      out.push_back(std::move(pm));
      size_t k = 0;
      while (k < idx.size()) {
        if (++idx[k] < choices[k]->size()) break;
        idx[k] = 0;
        ++k;
      }
      if (k == idx.size()) break;
    }
  };

  auto pair_up = [&](auto&& self) -> void {
    int a = -1;
    for (int i = 0; i < n; ++i) {
      if (!((used >> i) & 1u)) {
        a = i;
        break;
      }
    }
    if (a < 0) {
      realize();
      return;
    }
    for (int b = a + 1; b < n; ++b) {
      if ((used >> b) & 1u) continue;
      used |= (1u << a) | (1u << b);
      pairing.emplace_back(a, b);
      self(self);
      pairing.pop_back();
      used &= ~((1u << a) | (1u << b));
    }
  };
  pair_up(pair_up);

  std::sort(out.begin(), out.end(),
            [](const PerfectMatching& a, const PerfectMatching& b) {
              return a.edge_ids < b.edge_ids;
            });
  return out;
}

}  // namespace pmstate
