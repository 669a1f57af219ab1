#include <doctest.h>

#include <cmath>
#include <random>

#include "pmstate/fidelity.hpp"
#include "test_util.hpp"

using namespace pmstate;
namespace tu = pmstate::testutil;

namespace {

// Six unit-magnitude terms on six vertices with d = 3, three of them
// monochromatic with weight 1. N = 6 and the monochromatic sum is 3.
StateMap six_term_state() {
  return StateMap::from_terms(
      6, 3,
      {{VertexColoring::uniform(6, Color{0}), Complex{1, 0}},
       {VertexColoring::uniform(6, Color{1}), Complex{1, 0}},
       {VertexColoring::uniform(6, Color{2}), Complex{1, 0}},
       {VertexColoring::from_ids({0, 0, 1, 1, 2, 2}), Complex{-1, 0}},
       {VertexColoring::from_ids({0, 1, 0, 1, 2, 2}), Complex{0, 1}},
       {VertexColoring::from_ids({2, 2, 1, 1, 0, 0}), Complex{0, -1}}});
}

}  // namespace

TEST_SUITE_BEGIN("fidelity");

TEST_CASE("monochromatic fidelity") {
  SUBCASE("k4 reaches the maximum") {
    FidelityReport r = monochromatic_fidelity(compute_state(k4_ghz()));
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.state_norm == doctest::Approx(3.0));
    CHECK(r.d == 3);
  }
  SUBCASE("six unit terms, three monochromatic, give one half") {
    FidelityReport r = monochromatic_fidelity(six_term_state());
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.state_norm == doctest::Approx(6.0));
  }
  SUBCASE("a matchless graph has no fidelity") {
    BiColoredGraph g = build_graph(4, 2, {{0, 1, Color{0}, Color{0}, {1, 0}}});
    CHECK_THROWS_AS(monochromatic_fidelity(compute_state(g)),
                    UndefinedFidelityError);
  }
  SUBCASE("total cancellation has no fidelity") {
    BiColoredGraph g = build_graph(2, 2,
                                   {{0, 1, Color{0}, Color{0}, {1, 0}},
                                    {0, 1, Color{0}, Color{0}, {-1, 0}}});
    CHECK_THROWS_AS(monochromatic_fidelity(compute_state(g)),
                    UndefinedFidelityError);
  }
}

TEST_CASE("k-monochromatic coloring predicate") {
  Color r{0}, g{1};
  CHECK(is_k_monochromatic_coloring(VertexColoring::from_ids({1, 1, 1, 0, 0}),
                                    3, r));
  CHECK_FALSE(is_k_monochromatic_coloring(
      VertexColoring::from_ids({1, 1, 0, 1, 0}), 3, r));
  CHECK(is_k_monochromatic_coloring(VertexColoring::uniform(5, r), 3, r));
  CHECK(is_k_monochromatic_coloring(VertexColoring::uniform(4, g), 4, r));
  CHECK_FALSE(is_k_monochromatic_coloring(VertexColoring::uniform(4, g), 3, r));
}

TEST_CASE("k-monochromatic fidelity") {
  SUBCASE("k = n reduces to the monochromatic functional") {
    StateMap s = compute_state(k4_ghz());
    FidelityReport kr = k_monochromatic_fidelity(s, 4, Color{0});
    FidelityReport mr = monochromatic_fidelity(s);
    CHECK(kr.value == doctest::Approx(mr.value).epsilon(1e-15));
    CHECK(kr.value == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("single supported term scores 1/d") {
    StateMap s = StateMap::from_terms(
        3, 2, {{VertexColoring::from_ids({1, 0, 0}), Complex{1, 0}}});
    FidelityReport r = k_monochromatic_fidelity(s, 1, Color{0});
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("constructed heralded instance reaches 1") {
    BiColoredGraph g = disjoint_union(
        alternating_cycle(4),
        build_graph(2, 2, {{0, 1, Color{0}, Color{0}, {1, 0}}}));
    StateMap s = compute_state(g);
    FidelityReport r = k_monochromatic_fidelity(s, 4, Color{0});
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(static_cast<bool>(verify_k_monochromatic(s, 4, Color{0}, 1e-9)));
  }
  SUBCASE("k out of range") {
    StateMap s = compute_state(k4_ghz());
    CHECK_THROWS_AS(k_monochromatic_fidelity(s, 0, Color{0}), ValidationError);
    CHECK_THROWS_AS(k_monochromatic_fidelity(s, 5, Color{0}), ValidationError);
  }
}

TEST_CASE("general fidelity") {
  TargetSpec target = tu::wstate_target();
  StateMap exact = StateMap::from_terms(
      4, 2,
      {{target.colorings[0], target.weights[0]},
       {target.colorings[1], target.weights[1]},
       {target.colorings[2], target.weights[2]},
       {target.colorings[3], target.weights[3]}});

  SUBCASE("conjugated mode scores an exact realization as 1") {
    FidelityReport r = general_fidelity(exact, target);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.target_norm == doctest::Approx(7.0));
    CHECK(r.state_norm == doctest::Approx(7.0));
  }
  SUBCASE("literal mode evaluates the printed formula") {
    TargetSpec literal = target;
    literal.mode = TargetSpec::Mode::literal;
    FidelityReport r = general_fidelity(exact, literal);
    // |1 + 1 + 4 + i*i|^2 / (7 * 7) = 25/49
    CHECK(r.value == doctest::Approx(25.0 / 49.0).epsilon(1e-12));
  }
  SUBCASE("orthogonal state scores 0") {
    StateMap other = StateMap::from_terms(
        4, 2, {{VertexColoring::uniform(4, Color{0}), Complex{1, 0}}});
    FidelityReport r = general_fidelity(other, target);
    CHECK(r.value == doctest::Approx(0.0));
  }
  SUBCASE("length mismatches are rejected") {
    StateMap s = compute_state(alternating_cycle(6));
    CHECK_THROWS_AS(general_fidelity(s, target), LengthMismatchError);
  }
  SUBCASE("degenerate targets are rejected") {
    TargetSpec empty;
    CHECK_THROWS_AS(general_fidelity(exact, empty), ValidationError);
    TargetSpec zeros = target;
    zeros.weights.assign(4, Complex{0, 0});
    CHECK_THROWS_AS(general_fidelity(exact, zeros), ValidationError);
    TargetSpec dup = target;
    dup.colorings[1] = dup.colorings[0];
    CHECK_THROWS_AS(general_fidelity(exact, dup), ValidationError);
  }
}

TEST_CASE("monochromatic verification") {
  CHECK(static_cast<bool>(verify_monochromatic(compute_state(k4_ghz()), 1e-9)));
  for (int n : {4, 6, 8, 10}) {
    CHECK(static_cast<bool>(
        verify_monochromatic(compute_state(alternating_cycle(n)), 1e-9)));
  }
  SUBCASE("a perturbed weight breaks the predicate and is reported") {
    BiColoredGraph g = k4_ghz();
    std::vector<Complex> w(6, Complex{1, 0});
    w[0] = Complex{2, 0};
    VerifyReport r = verify_monochromatic(compute_state(g.with_weights(w)), 1e-9);
    CHECK_FALSE(r.ok);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].coloring == VertexColoring::uniform(4, Color{0}));
    CHECK(std::abs(r.violations[0].achieved - Complex{2, 0}) < 1e-12);
  }
}

TEST_CASE("k-monochromatic verification") {
  StateMap s = compute_state(k4_ghz());
  CHECK(static_cast<bool>(verify_k_monochromatic(s, 4, Color{0}, 1e-9)));
  CHECK_FALSE(static_cast<bool>(verify_k_monochromatic(s, 3, Color{0}, 1e-9)));
}

TEST_CASE("target verification") {
  TargetSpec target = tu::wstate_target();
  SUBCASE("the hand-built realization passes") {
    StateMap s = compute_state(tu::wstate_graph());
    CHECK(static_cast<bool>(verify_target(s, target, 1e-9)));
    FidelityReport r = general_fidelity(s, target);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("an extra surviving term fails") {
    StateMap s = StateMap::from_terms(
        4, 2,
        {{target.colorings[0], target.weights[0]},
         {target.colorings[1], target.weights[1]},
         {target.colorings[2], target.weights[2]},
         {target.colorings[3], target.weights[3]},
         {VertexColoring::uniform(4, Color{0}), Complex{0.5, 0}}});
    CHECK_FALSE(static_cast<bool>(verify_target(s, target, 1e-9)));
  }
  SUBCASE("a wrong weight fails") {
    StateMap s = StateMap::from_terms(
        4, 2,
        {{target.colorings[0], Complex{1, 0}},
         {target.colorings[1], Complex{1, 0}},
         {target.colorings[2], Complex{2, 0}},
         {target.colorings[3], Complex{1, 0}}});  // should be i
    CHECK_FALSE(static_cast<bool>(verify_target(s, target, 1e-9)));
  }
}

TEST_CASE("fidelities stay within [0, 1] and ignore global rescaling") {
  std::mt19937_64 rng(71);
  tu::RandomGraphOptions opt;
  opt.max_n = 6;
  opt.d = 2;
  opt.even_n_only = true;
  opt.require_matching = true;
  for (int round = 0; round < 50; ++round) {
    BiColoredGraph g = tu::random_multigraph(rng, opt);
    StateMap s = compute_state(g);
    if (s.degenerate()) continue;
    double f = monochromatic_fidelity(s).value;
    CHECK(f >= 0.0);
    CHECK(f <= 1.0 + 1e-12);

    Complex c = tu::random_weight(rng);
    if (std::abs(c) < 0.2) c += Complex{0.5, 0};
    std::vector<Complex> w;
    for (const Edge& e : g.edges()) w.push_back(e.weight * c);
    StateMap scaled = compute_state(g.with_weights(w));
    CHECK(monochromatic_fidelity(scaled).value == doctest::Approx(f).epsilon(1e-9));

    int k = 1 + static_cast<int>(round) % g.vertex_count();
    double fk = k_monochromatic_fidelity(s, k, Color{0}).value;
    CHECK(fk >= 0.0);
    CHECK(fk <= 1.0 + 1e-12);
  }
}

TEST_CASE("verified graphs sit at fidelity one") {
  for (int n : {4, 6, 8}) {
    StateMap s = compute_state(alternating_cycle(n));
    REQUIRE(static_cast<bool>(verify_monochromatic(s, 1e-9)));
    CHECK(monochromatic_fidelity(s).value ==
          doctest::Approx(1.0).epsilon(2 * 1e-9 * s.palette_size()));
  }
}

TEST_SUITE_END();
