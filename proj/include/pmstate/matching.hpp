#pragma once

#include <cstddef>
#include <vector>

#include "pmstate/graph.hpp"

namespace pmstate {

/// A set of n/2 edges covering every vertex exactly once. edge_ids is sorted
/// ascending; weight is the product of the member edge weights, multiplied in
/// edge-id order so that independently produced matchings compare bit-exactly.
struct PerfectMatching {
  std::vector<int> edge_ids;
  Complex weight{1.0, 0.0};
};

struct MatchingOptions {
  /// Hard cap on the number of matchings emitted; exceeding it throws
  /// MatchingExplosionError.
  std::size_t max_matchings = 10'000'000;
};

/// All perfect matchings of g, each exactly once, in lexicographic order of
/// the sorted edge-id sequences. Parallel edges produce distinct matchings.
/// An empty result (odd n, disconnected, ...) is a valid output, not an error.
std::vector<PerfectMatching> enumerate_perfect_matchings(
    const BiColoredGraph& g, const MatchingOptions& options = {});

/// Independent brute-force enumerator used as a test oracle: walks all
/// (n-1)!! pairings of the vertex set and realizes each pairing through every
/// choice of parallel edge. Guarded to n <= 12 (TooLargeForOracleError).
std::vector<PerfectMatching> oracle_enumerate(const BiColoredGraph& g);

}  // namespace pmstate
