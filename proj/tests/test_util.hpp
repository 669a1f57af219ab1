#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <random>
#include <tuple>
#include <vector>

#include "pmstate/graph.hpp"
#include "pmstate/matching.hpp"
#include "pmstate/optimizer.hpp"

namespace pmstate::testutil {

inline Complex random_weight(std::mt19937_64& rng, double radius = 1.5) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double r = radius * std::sqrt(unit(rng));
  double phi = 2.0 * M_PI * unit(rng);
  return Complex{r * std::cos(phi), r * std::sin(phi)};
}

struct RandomGraphOptions {
  int max_n = 8;
  int max_edges = 16;
  int max_multiplicity = 3;
  int d = 2;
  bool even_n_only = false;
  bool require_matching = false;
};

inline BiColoredGraph random_multigraph(std::mt19937_64& rng,
                                        const RandomGraphOptions& opt = {}) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 200; ++attempt) {
    int n = 2 + static_cast<int>(unit(rng) * (opt.max_n - 1));
    if (opt.even_n_only && n % 2 != 0) ++n;
    if (n > opt.max_n) n = opt.max_n - (opt.even_n_only ? opt.max_n % 2 : 0);
    int edges = 1 + static_cast<int>(unit(rng) * opt.max_edges);
    std::map<std::tuple<int, int, int, int>, int> mult;
    std::vector<EdgeSpec> specs;
    int guard = 0;
    while (static_cast<int>(specs.size()) < edges && ++guard < 1000) {
      int u = static_cast<int>(unit(rng) * n);
      int v = static_cast<int>(unit(rng) * n);
      if (u == v) continue;
      if (u > v) std::swap(u, v);
      int cu = static_cast<int>(unit(rng) * opt.d);
      int cv = static_cast<int>(unit(rng) * opt.d);
      auto key = std::make_tuple(u, v, cu, cv);
      if (mult[key] >= opt.max_multiplicity) continue;
      ++mult[key];
      specs.push_back({u, v, Color{cu}, Color{cv}, random_weight(rng)});
    }
    if (specs.empty()) continue;
    BiColoredGraph g(n, opt.d, specs);
    if (opt.require_matching &&
        enumerate_perfect_matchings(g).empty()) {
      continue;
    }
    return g;
  }
  // Fallback that always has a matching.
  return alternating_cycle(4);
}

inline Eigen::VectorXd finite_difference_gradient(const BiColoredGraph& topo,
                                                  const Eigen::VectorXd& params,
                                                  const Objective& obj,
                                                  double h = 1e-5) {
  Eigen::VectorXd grad(params.size());
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    Eigen::VectorXd hi = params;
    Eigen::VectorXd lo = params;
    hi[i] += h;
    lo[i] -= h;
    grad[i] = (evaluate(topo, hi, obj).value - evaluate(topo, lo, obj).value) /
              (2.0 * h);
  }
  if (obj.constraint != Objective::Constraint::complex_weights) {
    for (Eigen::Index e = 0; 2 * e + 1 < grad.size(); ++e) {
      grad[2 * e + 1] = 0.0;
    }
  }
  return grad;
}

/// Complete graph on n vertices, all edges monochromatic in one color.
inline BiColoredGraph complete_mono(int n, int d = 2, Color c = Color{0}) {
  std::vector<EdgeSpec> specs;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      specs.push_back({u, v, c, c, Complex{1.0, 0.0}});
    }
  }
  return BiColoredGraph(n, d, specs);
}

/// The exact four-coloring target with weights (1, 1, 2, i) on palette
/// {red=0, green=1}, plus a hand-built graph realizing it. Used as a known
/// fixture for target verification.
inline TargetSpec wstate_target() {
  TargetSpec t;
  t.colorings = {VertexColoring::from_ids({1, 0, 0, 0}),
                 VertexColoring::from_ids({0, 1, 0, 0}),
                 VertexColoring::from_ids({0, 0, 1, 0}),
                 VertexColoring::from_ids({0, 0, 0, 1})};
  t.weights = {Complex{1, 0}, Complex{1, 0}, Complex{2, 0}, Complex{0, 1}};
  return t;
}

inline BiColoredGraph wstate_graph() {
  Color r{0}, g{1};
  std::vector<EdgeSpec> specs = {
      {0, 1, g, r, Complex{1, 0}}, {0, 1, r, g, Complex{1, 0}},
      {2, 3, r, r, Complex{1, 0}}, {0, 2, r, g, Complex{2, 0}},
      {1, 3, r, r, Complex{1, 0}}, {0, 3, r, g, Complex{0, 1}},
      {1, 2, r, r, Complex{1, 0}},
  };
  return BiColoredGraph(4, 2, specs);
}

}  // namespace pmstate::testutil
