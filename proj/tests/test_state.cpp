#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "pmstate/state.hpp"
#include "test_util.hpp"

using namespace pmstate;
namespace tu = pmstate::testutil;

TEST_SUITE_BEGIN("state");

TEST_CASE("inherited colorings follow the edge colors at each endpoint") {
  SUBCASE("k4 matchings are monochromatic in their own color") {
    BiColoredGraph g = k4_ghz();
    auto pms = enumerate_perfect_matchings(g);
    REQUIRE(pms.size() == 3);
    CHECK(inherited_coloring(g, pms[0]) == VertexColoring::uniform(4, Color{0}));
    CHECK(inherited_coloring(g, pms[1]) == VertexColoring::uniform(4, Color{1}));
    CHECK(inherited_coloring(g, pms[2]) == VertexColoring::uniform(4, Color{2}));
  }
  SUBCASE("alternating cycle inherits the matching's color") {
    BiColoredGraph g = alternating_cycle(4);
    auto pms = enumerate_perfect_matchings(g);
    REQUIRE(pms.size() == 2);
    CHECK(inherited_coloring(g, pms[0]) == VertexColoring::uniform(4, Color{0}));
    CHECK(inherited_coloring(g, pms[1]) == VertexColoring::uniform(4, Color{1}));
  }
  SUBCASE("a bi-chromatic edge colors its endpoints differently") {
    BiColoredGraph g = build_graph(2, 2, {{0, 1, Color{1}, Color{0}, {1, 0}}});
    auto pms = enumerate_perfect_matchings(g);
    REQUIRE(pms.size() == 1);
    CHECK(inherited_coloring(g, pms[0]) == VertexColoring::from_ids({1, 0}));
  }
  SUBCASE("bad matchings are rejected") {
    BiColoredGraph g = k4_ghz();
    PerfectMatching overlap;
    overlap.edge_ids = {0, 2};  // edges (0,1) and (0,2) share vertex 0
    CHECK_THROWS_AS(inherited_coloring(g, overlap), NotAMatchingError);
    PerfectMatching partial;
    partial.edge_ids = {0};
    CHECK_THROWS_AS(inherited_coloring(g, partial), NotAMatchingError);
  }
}

TEST_CASE("k4 state has three unit monochromatic terms") {
  StateMap s = compute_state(k4_ghz());
  REQUIRE(s.terms().size() == 3);
  CHECK(s.matching_count() == 3);
  for (int c = 0; c < 3; ++c) {
    const StateTerm* t = s.find(VertexColoring::uniform(4, Color{c}));
    REQUIRE(t != nullptr);
    CHECK(std::abs(t->weight - Complex{1, 0}) < 1e-15);
    CHECK(t->matching_ids.size() == 1);
    CHECK(!t->cancelled);
  }
  CHECK(s.norm_squared() == doctest::Approx(3.0));
}

TEST_CASE("opposite parallel edges cancel and stay reported") {
  BiColoredGraph g = build_graph(2, 2,
                                 {{0, 1, Color{0}, Color{0}, {1, 0}},
                                  {0, 1, Color{0}, Color{0}, {-1, 0}}});
  StateMap s = compute_state(g);
  REQUIRE(s.terms().size() == 1);
  CHECK(s.matching_count() == 2);
  const StateTerm& t = s.terms().front();
  CHECK(std::abs(t.weight) < 1e-15);
  CHECK(t.cancelled);
  CHECK(t.matching_ids.size() == 2);
  CHECK(s.degenerate());
}

TEST_CASE("hexagon state matches an independent grouping of the oracle") {
  BiColoredGraph g = alternating_cycle(6);
  StateMap s = compute_state(g);
  REQUIRE(s.terms().size() == 2);
  CHECK(std::abs(s.weight_of(VertexColoring::uniform(6, Color{0})) -
                 Complex{1, 0}) < 1e-15);
  CHECK(std::abs(s.weight_of(VertexColoring::uniform(6, Color{1})) -
                 Complex{1, 0}) < 1e-15);

  // Group the oracle's matchings by hand and compare.
  std::map<VertexColoring, Complex> grouped;
  for (const PerfectMatching& pm : oracle_enumerate(g)) {
    grouped[inherited_coloring(g, pm)] += pm.weight;
  }
  REQUIRE(grouped.size() == s.terms().size());
  for (const StateTerm& t : s.terms()) {
    CHECK(std::abs(grouped.at(t.coloring) - t.weight) < 1e-12);
  }
}

TEST_CASE("weight_of_coloring computes single weights") {
  BiColoredGraph g = k4_ghz();
  CHECK(std::abs(weight_of_coloring(g, VertexColoring::uniform(4, Color{0})) -
                 Complex{1, 0}) < 1e-15);
  CHECK(std::abs(weight_of_coloring(g, VertexColoring::from_ids({0, 0, 1, 1}))) <
        1e-15);
  CHECK_THROWS_AS(weight_of_coloring(g, VertexColoring::from_ids({0, 0, 0})),
                  BadColoringError);
  CHECK_THROWS_AS(weight_of_coloring(g, VertexColoring::from_ids({0, 0, 0, 7})),
                  BadColoringError);
}

TEST_CASE("grouping preserves the total coherent sum") {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 50; ++round) {
    BiColoredGraph g = tu::random_multigraph(rng);
    Complex total_matchings{0, 0};
    for (const PerfectMatching& pm : enumerate_perfect_matchings(g)) {
      total_matchings += pm.weight;
    }
    Complex total_terms{0, 0};
    StateMap s = compute_state(g);
    for (const StateTerm& t : s.terms()) {
      total_terms += t.weight;
    }
    CHECK(std::abs(total_matchings - total_terms) <=
          1e-9 * (1.0 + std::abs(total_matchings)));
  }
}

TEST_CASE("global phase and positive scaling act as powers of n/2") {
  std::mt19937_64 rng(41);
  tu::RandomGraphOptions opt;
  opt.even_n_only = true;
  opt.require_matching = true;
  for (int round = 0; round < 25; ++round) {
    BiColoredGraph g = tu::random_multigraph(rng, opt);
    int half = g.vertex_count() / 2;
    StateMap base = compute_state(g);

    double theta = 0.7 + 0.1 * round;
    Complex phase = std::polar(1.0, theta);
    double scale = 1.3;

    std::vector<Complex> wp, ws;
    for (const Edge& e : g.edges()) {
      wp.push_back(e.weight * phase);
      ws.push_back(e.weight * scale);
    }
    StateMap phased = compute_state(g.with_weights(wp));
    StateMap scaled = compute_state(g.with_weights(ws));

    Complex phase_pow = std::pow(phase, half);
    double scale_pow = std::pow(scale, half);
    REQUIRE(phased.terms().size() == base.terms().size());
    for (const StateTerm& t : base.terms()) {
      CHECK(std::abs(phased.weight_of(t.coloring) - t.weight * phase_pow) <=
            1e-9 * (1.0 + std::abs(t.weight)));
      CHECK(std::abs(scaled.weight_of(t.coloring) - t.weight * scale_pow) <=
            1e-9 * (1.0 + std::abs(t.weight)));
      // Phase leaves magnitudes alone.
      CHECK(std::abs(std::abs(phased.weight_of(t.coloring)) -
                     std::abs(t.weight)) <= 1e-9);
    }
  }
}

TEST_CASE("relabeling colors permutes the coloring keys") {
  std::mt19937_64 rng(51);
  tu::RandomGraphOptions opt;
  opt.d = 3;
  opt.require_matching = true;
  for (int round = 0; round < 25; ++round) {
    BiColoredGraph g = tu::random_multigraph(rng, opt);
    std::vector<int> perm = {1, 2, 0};
    std::vector<EdgeSpec> specs;
    for (const Edge& e : g.edges()) {
      specs.push_back({e.u, e.v,
                       Color{perm[static_cast<size_t>(e.color_at_u.id)]},
                       Color{perm[static_cast<size_t>(e.color_at_v.id)]},
                       e.weight});
    }
    BiColoredGraph h(g.vertex_count(), 3, specs);
    StateMap sg = compute_state(g);
    StateMap sh = compute_state(h);
    REQUIRE(sg.terms().size() == sh.terms().size());
    for (const StateTerm& t : sg.terms()) {
      VertexColoring mapped;
      for (Color c : t.coloring.colors) {
        mapped.colors.push_back(Color{perm[static_cast<size_t>(c.id)]});
      }
      CHECK(std::abs(sh.weight_of(mapped) - t.weight) < 1e-12);
    }
  }
}

TEST_CASE("disjoint union states multiply pointwise") {
  std::mt19937_64 rng(61);
  tu::RandomGraphOptions opt;
  opt.max_n = 4;
  opt.max_edges = 8;
  opt.require_matching = true;
  for (int round = 0; round < 25; ++round) {
    BiColoredGraph a = tu::random_multigraph(rng, opt);
    BiColoredGraph b = tu::random_multigraph(rng, opt);
    StateMap sa = compute_state(a);
    StateMap sb = compute_state(b);
    StateMap su = compute_state(disjoint_union(a, b));
    REQUIRE(su.terms().size() == sa.terms().size() * sb.terms().size());
    for (const StateTerm& ta : sa.terms()) {
      for (const StateTerm& tb : sb.terms()) {
        VertexColoring joined = ta.coloring;
        joined.colors.insert(joined.colors.end(), tb.coloring.colors.begin(),
                             tb.coloring.colors.end());
        CHECK(std::abs(su.weight_of(joined) - ta.weight * tb.weight) <=
              1e-9 * (1.0 + std::abs(ta.weight * tb.weight)));
      }
    }
  }
}

TEST_CASE("the matching cap propagates through the state computation") {
  StateOptions opts;
  opts.max_matchings = 5;
  CHECK_THROWS_AS(compute_state(tu::complete_mono(6), opts),
                  MatchingExplosionError);
}

TEST_CASE("synthetic states validate their terms") {
  StateMap s = StateMap::from_terms(
      3, 2,
      {{VertexColoring::from_ids({1, 0, 0}), Complex{1, 0}}});
  CHECK(s.terms().size() == 1);
  CHECK_FALSE(s.degenerate());

  CHECK_THROWS_AS(StateMap::from_terms(
                      3, 2,
                      {{VertexColoring::from_ids({1, 0, 0}), Complex{1, 0}},
                       {VertexColoring::from_ids({1, 0, 0}), Complex{2, 0}}}),
                  ValidationError);
  CHECK_THROWS_AS(StateMap::from_terms(
                      3, 2, {{VertexColoring::from_ids({1, 0}), Complex{1, 0}}}),
                  BadColoringError);
}

TEST_SUITE_END();
