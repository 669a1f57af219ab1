#include "pmstate/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pmstate {

namespace {

void require_usable(const StateMap& s) {
  if (s.terms().empty()) {
    throw UndefinedFidelityError(
        "the graph has no perfect matchings, so its state is empty");
  }
  if (s.degenerate()) {
    throw UndefinedFidelityError(
        "every coloring cancels within tolerance; the post-selected state "
        "is empty");
  }
}

FidelityReport overlap_fidelity(const StateMap& s,
                                const std::vector<VertexColoring>& family,
                                FidelityReport::Kind kind) {
  require_usable(s);
  double n2 = s.norm_squared();
  Complex overlap{0.0, 0.0};
  FidelityReport report;
  for (const VertexColoring& c : family) {
    Complex w = s.weight_of(c);
    overlap += w;
    report.matched_terms.emplace_back(c, w);
  }
  report.kind = kind;
  report.d = s.palette_size();
  report.state_norm = n2;
  report.tolerance = s.zero_tolerance();
  report.value = std::norm(overlap) / (static_cast<double>(s.palette_size()) * n2);
  return report;
}

}  // namespace

void TargetSpec::validate(int n, int d) const {
  if (colorings.empty()) {
    throw ValidationError("target must prescribe at least one coloring");
  }
  if (weights.size() != colorings.size()) {
    throw LengthMismatchError("target has " + std::to_string(colorings.size()) +
                              " colorings but " + std::to_string(weights.size()) +
                              " weights");
  }
  std::set<VertexColoring> seen;
  for (const VertexColoring& c : colorings) {
    if (c.size() != n) {
      throw LengthMismatchError("target coloring length " +
                                std::to_string(c.size()) +
                                " does not match n = " + std::to_string(n));
    }
    for (Color col : c.colors) {
      if (col.id < 0 || col.id >= d) {
        throw ValidationError("target coloring uses a color outside the palette");
      }
    }
    if (!seen.insert(c).second) {
      throw ValidationError("target colorings must be pairwise distinct");
    }
  }
  bool any = std::any_of(weights.begin(), weights.end(),
                         [](Complex w) { return std::abs(w) > 0.0; });
  if (!any) {
    throw ValidationError("target weights must not all be zero");
  }
}

FidelityReport monochromatic_fidelity(const StateMap& s) {
  std::vector<VertexColoring> family;
  family.reserve(static_cast<size_t>(s.palette_size()));
  for (int c = 0; c < s.palette_size(); ++c) {
    family.push_back(VertexColoring::uniform(s.vertex_count(), Color{c}));
  }
  return overlap_fidelity(s, family, FidelityReport::Kind::mono);
}

bool is_k_monochromatic_coloring(const VertexColoring& c, int k, Color red) {
  int n = c.size();
  if (k < 1 || k > n) return false;
  Color head = c.at(0);
  for (int v = 1; v < k; ++v) {
    if (!(c.at(v) == head)) return false;
  }
  for (int v = k; v < n; ++v) {
    if (!(c.at(v) == red)) return false;
  }
  return true;
}

FidelityReport k_monochromatic_fidelity(const StateMap& s, int k, Color red) {
  if (k < 1 || k > s.vertex_count()) {
    throw ValidationError("k must lie in 1..n, got " + std::to_string(k));
  }
  std::vector<VertexColoring> family;
  family.reserve(static_cast<size_t>(s.palette_size()));
  for (int c = 0; c < s.palette_size(); ++c) {
    VertexColoring coloring = VertexColoring::uniform(s.vertex_count(), red);
    for (int v = 0; v < k; ++v) {
      coloring.colors[static_cast<size_t>(v)] = Color{c};
    }
    family.push_back(std::move(coloring));
  }
  FidelityReport report =
      overlap_fidelity(s, family, FidelityReport::Kind::k_mono);
  report.k = k;
  report.red = red;
  return report;
}

FidelityReport general_fidelity(const StateMap& s, const TargetSpec& target) {
  target.validate(s.vertex_count(), s.palette_size());
  require_usable(s);
  double n1 = 0.0;
  for (Complex w : target.weights) {
    n1 += std::norm(w);
  }
  double n2 = s.norm_squared();
  Complex overlap{0.0, 0.0};
  FidelityReport report;
  for (size_t i = 0; i < target.colorings.size(); ++i) {
    Complex achieved = s.weight_of(target.colorings[i]);
    Complex coeff = target.mode == TargetSpec::Mode::conjugated
                        ? std::conj(target.weights[i])
                        : target.weights[i];
    overlap += coeff * achieved;
    report.matched_terms.emplace_back(target.colorings[i], achieved);
  }
  report.kind = FidelityReport::Kind::general;
  report.d = s.palette_size();
  report.state_norm = n2;
  report.target_norm = n1;
  report.mode = target.mode;
  report.tolerance = s.zero_tolerance();
  report.value = std::norm(overlap) / (n1 * n2);
  return report;
}

namespace {

VerifyReport verify_family(const StateMap& s,
                           const std::vector<VertexColoring>& family,
                           const std::vector<Complex>& required, double tol) {
  VerifyReport report;
  report.tolerance = tol;
  report.ok = true;
  std::set<VertexColoring> family_set(family.begin(), family.end());
  for (size_t i = 0; i < family.size(); ++i) {
    Complex achieved = s.weight_of(family[i]);
    if (std::abs(achieved - required[i]) > tol) {
      report.ok = false;
      report.violations.push_back({family[i], achieved, required[i]});
    }
  }
  for (const StateTerm& t : s.terms()) {
    if (family_set.count(t.coloring)) continue;
    if (std::abs(t.weight) > tol) {
      report.ok = false;
      report.violations.push_back({t.coloring, t.weight, Complex{0.0, 0.0}});
    }
  }
  return report;
}

}  // namespace

VerifyReport verify_monochromatic(const StateMap& s, double tol) {
  std::vector<VertexColoring> family;
  std::vector<Complex> required;
  for (int c = 0; c < s.palette_size(); ++c) {
    family.push_back(VertexColoring::uniform(s.vertex_count(), Color{c}));
    required.emplace_back(1.0, 0.0);
  }
  return verify_family(s, family, required, tol);
}

VerifyReport verify_k_monochromatic(const StateMap& s, int k, Color red,
                                    double tol) {
  if (k < 1 || k > s.vertex_count()) {
    throw ValidationError("k must lie in 1..n, got " + std::to_string(k));
  }
  std::vector<VertexColoring> family;
  std::vector<Complex> required;
  for (int c = 0; c < s.palette_size(); ++c) {
    VertexColoring coloring = VertexColoring::uniform(s.vertex_count(), red);
    for (int v = 0; v < k; ++v) {
      coloring.colors[static_cast<size_t>(v)] = Color{c};
    }
    family.push_back(std::move(coloring));
    required.emplace_back(1.0, 0.0);
  }
  return verify_family(s, family, required, tol);
}

VerifyReport verify_target(const StateMap& s, const TargetSpec& target,
                           double tol) {
  target.validate(s.vertex_count(), s.palette_size());
  return verify_family(s, target.colorings, target.weights, tol);
}

}  // namespace pmstate
