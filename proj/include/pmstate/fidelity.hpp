#pragma once

#include <utility>
#include <vector>

#include "pmstate/state.hpp"

namespace pmstate {

/// A prescribed family of colorings C_p with prescribed complex weights W_p.
/// conjugated mode scores an exact realization as 1 (quantum-fidelity
/// reading); literal mode multiplies the prescribed weights in unconjugated.
struct TargetSpec {
  enum class Mode { conjugated, literal };

  std::vector<VertexColoring> colorings;
  std::vector<Complex> weights;
  Mode mode = Mode::conjugated;

  int size() const { return static_cast<int>(colorings.size()); }

  /// Checks pairwise-distinct colorings of equal length n, palette-valid
  /// colors, size >= 1, and not-all-zero weights. Throws LengthMismatchError
  /// or ValidationError.
  void validate(int n, int d) const;
};

struct FidelityReport {
  enum class Kind { mono, k_mono, general };

  Kind kind = Kind::mono;
  double value = 0.0;
  /// State normalization sum |w(c)|^2 (N, or N2 for the general functional).
  double state_norm = 0.0;
  /// Target normalization sum |w_i|^2 (general functional only).
  double target_norm = 0.0;
  int d = 0;
  int k = -1;
  Color red{0};
  TargetSpec::Mode mode = TargetSpec::Mode::conjugated;
  /// Per target coloring, the weight the state actually achieves.
  std::vector<std::pair<VertexColoring, Complex>> matched_terms;
  double tolerance = 0.0;
};

/// F = (1/d)(1/N) |sum of w(c) over the d single-color colorings|^2 with
/// N = sum |w(c)|^2 over all terms. Throws UndefinedFidelityError when the
/// state is degenerate.
FidelityReport monochromatic_fidelity(const StateMap& s);

/// True iff vertices 0..k-1 share one color and vertices k..n-1 are all red.
bool is_k_monochromatic_coloring(const VertexColoring& c, int k, Color red);

/// Same functional as monochromatic_fidelity but summed over the d colorings
/// whose first k vertices share a color and whose tail is red.
FidelityReport k_monochromatic_fidelity(const StateMap& s, int k, Color red);

/// F = |sum_i t_i w(C_i)|^2 / (N1 N2); conjugated mode replaces t_i by its
/// complex conjugate in the overlap sum.
FidelityReport general_fidelity(const StateMap& s, const TargetSpec& target);

/// Outcome of a verification predicate, with the offending colorings.
struct VerifyReport {
  bool ok = false;
  double tolerance = 0.0;
  /// (coloring, achieved weight, required weight) triples that violate.
  struct Violation {
    VertexColoring coloring;
    Complex achieved{0.0, 0.0};
    Complex required{0.0, 0.0};
  };
  std::vector<Violation> violations;

  explicit operator bool() const { return ok; }
};

/// Every single-color coloring has weight 1 within tol and every other term
/// cancels within tol.
VerifyReport verify_monochromatic(const StateMap& s, double tol);

/// Same with the d k-monochromatic colorings as the unit-weight set.
VerifyReport verify_k_monochromatic(const StateMap& s, int k, Color red,
                                    double tol);

/// w(C_i) matches the prescribed w_i within tol for every target coloring and
/// every other term cancels within tol.
VerifyReport verify_target(const StateMap& s, const TargetSpec& target,
                           double tol);

}  // namespace pmstate
