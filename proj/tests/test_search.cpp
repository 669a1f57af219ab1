#include <doctest.h>

#include <set>

#include "pmstate/optimizer.hpp"
#include "test_util.hpp"

using namespace pmstate;
namespace tu = pmstate::testutil;

TEST_SUITE_BEGIN("search");

TEST_CASE("odd vertex counts produce no results") {
  SearchBudget budget;
  budget.max_edges = 4;
  Objective mono;
  OptimizeConfig cfg;
  cfg.restarts = 2;
  std::vector<SearchResult> out = search_topologies(3, 2, budget, mono, cfg);
  CHECK(out.empty());
}

TEST_CASE("search finds an exact two-color graph on four vertices") {
  SearchBudget budget;
  budget.max_edges = 4;
  Objective mono;
  OptimizeConfig cfg;
  cfg.restarts = 6;
  cfg.seed = 12;
  std::vector<SearchResult> out = search_topologies(4, 2, budget, mono, cfg);
  REQUIRE_FALSE(out.empty());
  const SearchResult& best = out.front();
  CHECK(best.exact);
  CHECK(best.fidelity == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(static_cast<bool>(
      verify_monochromatic(compute_state(best.graph), 1e-9)));
}

TEST_CASE("discrete unit-weight search recovers the alternating square") {
  SearchBudget budget;
  budget.max_edges = 4;
  budget.weight_set = std::vector<Complex>{Complex{1, 0}};
  Objective mono;
  std::vector<SearchResult> out = search_topologies(4, 2, budget, mono, {});
  REQUIRE_FALSE(out.empty());
  CHECK(out.front().exact);
  CHECK(out.front().graph.edge_count() == 4);
  for (const Edge& e : out.front().graph.edges()) {
    CHECK(e.weight == Complex{1, 0});
    CHECK(e.monochromatic());
  }
}

TEST_CASE("search realizes the four-coloring target with weights (1,1,2,i)") {
  SearchBudget budget;
  budget.max_edges = 7;
  Objective obj;
  obj.kind = Objective::Kind::general;
  obj.target = tu::wstate_target();
  OptimizeConfig cfg;
  cfg.restarts = 8;
  cfg.max_iters = 300;
  cfg.seed = 7;
  std::vector<SearchResult> out = search_topologies(4, 2, budget, obj, cfg);
  REQUIRE_FALSE(out.empty());
  const SearchResult& best = out.front();
  CHECK(best.exact);
  StateMap s = compute_state(best.graph);
  CHECK(static_cast<bool>(verify_target(s, *obj.target, 1e-9)));
  CHECK(general_fidelity(s, *obj.target).value ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("unit-weight search rediscovers the three-color construction") {
  SearchBudget budget;
  budget.max_edges = 6;
  budget.max_multiplicity = 1;
  budget.weight_set = std::vector<Complex>{Complex{1, 0}};
  budget.max_topologies = 40'000'000;
  Objective mono;
  std::vector<SearchResult> out = search_topologies(4, 3, budget, mono, {});
  REQUIRE_FALSE(out.empty());
  const SearchResult& best = out.front();
  CHECK(best.exact);
  CHECK(best.graph.edge_count() == 6);
  CHECK(static_cast<bool>(
      verify_monochromatic(compute_state(best.graph), 1e-9)));
  for (const Edge& e : best.graph.edges()) {
    CHECK(e.monochromatic());
    CHECK(e.weight == Complex{1, 0});
  }
}

TEST_CASE("the enumeration budget guard trips upfront") {
  SearchBudget budget;
  budget.max_edges = 20;
  budget.max_topologies = 1000;
  Objective mono;
  CHECK_THROWS_AS(search_topologies(6, 3, budget, mono, {}),
                  BudgetExceededError);
}

TEST_CASE("invalid search parameters are rejected") {
  SearchBudget budget;
  Objective mono;
  CHECK_THROWS_AS(search_topologies(0, 2, budget, mono, {}), ValidationError);
  CHECK_THROWS_AS(search_topologies(4, 1, budget, mono, {}), ValidationError);
  SearchBudget empty_set = budget;
  empty_set.weight_set = std::vector<Complex>{};
  CHECK_THROWS_AS(search_topologies(4, 2, empty_set, mono, {}),
                  ValidationError);
}

TEST_CASE("topology library is deterministic and well formed") {
  std::vector<LibraryEntry> lib = topology_library(6, 3);
  CHECK(lib.size() >= 8);
  std::set<std::string> names;
  bool has_full = false;
  for (const LibraryEntry& entry : lib) {
    CHECK(names.insert(entry.name).second);
    CHECK(entry.graph.vertex_count() == 6);
    CHECK(entry.graph.palette_size() == 3);
    if (entry.name == "complete_full_saturated") {
      has_full = true;
      CHECK(entry.graph.edge_count() == 15 * 9);
    }
  }
  CHECK(has_full);

  std::vector<LibraryEntry> again = topology_library(6, 3);
  REQUIRE(again.size() == lib.size());
  for (size_t i = 0; i < lib.size(); ++i) {
    CHECK(again[i].name == lib[i].name);
    CHECK(again[i].graph.edge_count() == lib[i].graph.edge_count());
  }
  CHECK_THROWS_AS(topology_library(5, 3), ValidationError);
}

TEST_SUITE_END();
