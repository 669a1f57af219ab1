#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pmstate/fidelity.hpp"
#include "pmstate/graph.hpp"
#include "pmstate/state.hpp"

namespace pmstate {

/// Which fidelity functional to maximize, and over which weight domain.
struct Objective {
  enum class Kind { mono, k_mono, general };
  enum class Constraint { complex_weights, real_weights, positive_real };

  Kind kind = Kind::mono;
  int k = 0;           // k_mono only
  Color red{0};        // k_mono only
  std::optional<TargetSpec> target;  // general only
  Constraint constraint = Constraint::complex_weights;
};

struct EvalResult {
  double value = 0.0;
  /// False when the state is degenerate at this point (objective reported 0).
  bool defined = false;
};

/// Fixed-topology evaluation engine. Enumerates the perfect matchings of the
/// topology once, groups them by inherited coloring, and then evaluates the
/// objective, its analytic gradient, and the exactness residual system as
/// cheap product/sum passes over that structure.
///
/// Parameters are the 2|E| reals (re_0, im_0, re_1, im_1, ...). The group
/// amplitudes A_g(w) = sum of matching weight products are multilinear in the
/// edge weights; with S = sum_g alpha_g A_g and N = sum_g |A_g|^2 the
/// objective is F = |S|^2 / (kappa N), and dF over a real parameter follows
/// from dF/dA_g = (alpha_g conj(S) N - |S|^2 conj(A_g)) / (kappa N^2) with
/// per-matching products excluding one edge (prefix/suffix products).
class StateEvaluator {
 public:
  StateEvaluator(const BiColoredGraph& topology, const Objective& objective,
                 std::size_t max_matchings = 10'000'000);

  int vertex_count() const { return n_; }
  int edge_count() const { return edge_count_; }
  int parameter_count() const { return 2 * edge_count_; }
  int group_count() const { return static_cast<int>(keys_.size()); }
  std::size_t matching_count() const { return match_offset_.size() - 1; }
  const std::vector<VertexColoring>& group_keys() const { return keys_; }
  /// Prescribed per-group amplitudes for an exact realization (0 for groups
  /// that must cancel).
  const std::vector<Complex>& group_targets() const { return tau_; }
  /// True when every coloring that must carry weight is achievable at all.
  bool all_required_present() const { return all_required_present_; }

  std::vector<Complex> weights_from(const Eigen::VectorXd& params) const;
  Eigen::VectorXd params_from(std::span<const Complex> weights) const;

  EvalResult value(const Eigen::VectorXd& params) const;
  EvalResult value_and_gradient(const Eigen::VectorXd& params,
                                Eigen::VectorXd& grad) const;

  /// Group amplitudes A_g at the given parameters.
  void group_amplitudes(const Eigen::VectorXd& params,
                        std::vector<Complex>& out) const;

  /// Residuals r_g = A_g - tau_g stacked as (re, im) per group, and their
  /// Jacobian with respect to the parameters.
  void residual(const Eigen::VectorXd& params, Eigen::VectorXd& r) const;
  void residual_and_jacobian(const Eigen::VectorXd& params, Eigen::VectorXd& r,
                             Eigen::MatrixXd& jac) const;

 private:
  int n_ = 0;
  int d_ = 0;
  int edge_count_ = 0;
  double kappa_ = 1.0;
  std::vector<int> match_edges_;   // flat edge-id list
  std::vector<int> match_offset_;  // size M+1
  std::vector<int> match_group_;
  std::vector<VertexColoring> keys_;
  std::vector<Complex> alpha_;  // overlap coefficient per group
  std::vector<Complex> tau_;    // exactness target per group
  bool all_required_present_ = false;

  mutable std::vector<Complex> weights_;
  mutable std::vector<Complex> amps_;
  mutable std::vector<Complex> prefix_, suffix_;
};

struct OptimizeConfig {
  int restarts = 10;
  int max_iters = 400;
  std::uint64_t seed = 1;
  /// Box bound applied to every real parameter after each step.
  double box = 4.0;
  double init_radius = 1.0;
  /// Ascent stops when the (masked) gradient norm falls below this.
  double grad_tol = 1e-12;
  /// Backtracking line search on the ascent direction; when disabled a fixed
  /// step is used instead.
  bool line_search = true;
  double fixed_step = 0.05;
  /// Exactness pipeline: Gauss-Newton polish toward the residual system, then
  /// snapping of near-nice weights, then predicate verification.
  bool polish = true;
  double polish_threshold = 0.5;
  double snap_tol = 1e-4;
  double verify_tol = 1e-9;
  double zero_tol = 1e-9;
  std::size_t max_matchings = 10'000'000;
  /// Optional per-iteration objective trace: "restart iter value" lines.
  std::ostream* trace = nullptr;
};

struct SearchResult {
  BiColoredGraph graph;
  double fidelity = 0.0;
  /// The verification predicate for the objective passed at verify_tol after
  /// gauge fixing, polish, and weight snapping.
  bool exact = false;
  int restarts_used = 0;
  long evaluations = 0;
  std::uint64_t seed = 0;
};

/// Objective value with the weights taken from params. A degenerate state is
/// reported as value 0 with defined=false rather than an error.
EvalResult evaluate(const BiColoredGraph& topology, const Eigen::VectorXd& params,
                    const Objective& objective);

/// Analytic gradient; throws UndefinedAtPointError where the objective is
/// undefined. Entries for constrained-away parameters are zeroed.
Eigen::VectorXd objective_gradient(const BiColoredGraph& topology,
                                   const Eigen::VectorXd& params,
                                   const Objective& objective);

/// Multi-start projected gradient ascent over the edge weights of a fixed
/// topology, followed by the exactness pipeline. Deterministic given the seed.
SearchResult optimize_weights(const BiColoredGraph& topology,
                              const Objective& objective,
                              const OptimizeConfig& config = {});

struct SearchBudget {
  int max_edges = 6;
  int max_multiplicity = 1;
  /// When set, weights are drawn from this finite set instead of optimized
  /// continuously; every assignment is checked exactly.
  std::optional<std::vector<Complex>> weight_set;
  /// Upfront guard on the total enumeration size (topologies, or topology
  /// weight assignments in weight-set mode). Exceeding it throws
  /// BudgetExceededError before any work is done.
  long max_topologies = 5'000'000;
  bool stop_on_exact = true;
  /// Skip topologies where some coloring that must cancel is produced by a
  /// single matching: an exact solution there forces a zero weight, so the
  /// reduced topology (enumerated earlier) already covers it. Continuous
  /// mode only.
  bool prune_reducible = true;
  int keep_best = 5;
};

/// Enumerates candidate topologies on n vertices and d colors in growing
/// edge-count, lexicographic order over the (pair, ordered color pair)
/// universe, optimizes or exhausts weights on each survivor, and returns the
/// exact hits found plus the best approximate results, ordered by
/// (exact, fidelity, canonical edge list). Candidate graphs carry `palette`
/// when given (so color ids keep the caller's label semantics), otherwise the
/// default labels.
std::vector<SearchResult> search_topologies(
    int n, int d, const SearchBudget& budget, const Objective& objective,
    const OptimizeConfig& config = {}, std::vector<std::string> palette = {});

/// Deterministic catalog of candidate topologies for a given (n, d): saturated
/// complete multigraphs, saturated cycles, one-factorization colorings,
/// composite constructions, and a few seeded random multigraphs. Used by the
/// positive-weight ceiling experiments.
struct LibraryEntry {
  std::string name;
  BiColoredGraph graph;
};
std::vector<LibraryEntry> topology_library(int n, int d);

/// Weight values considered "nice" for exactness snapping, with print labels
/// (0, +-1, +-i, +-2, +-1/2, +-sqrt(2)/2).
struct SnapCandidate {
  Complex value;
  std::string label;
};
const std::vector<SnapCandidate>& snap_candidates();

}  // namespace pmstate
