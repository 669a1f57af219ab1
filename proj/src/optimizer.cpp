#include "pmstate/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <utility>

namespace pmstate {

namespace {

constexpr double kDegenerateNorm = 1e-30;
constexpr double kPositiveFloor = 1e-8;

std::vector<VertexColoring> required_family(const Objective& obj, int n, int d) {
  std::vector<VertexColoring> family;
  switch (obj.kind) {
    case Objective::Kind::mono:
      for (int c = 0; c < d; ++c) {
        family.push_back(VertexColoring::uniform(n, Color{c}));
      }
      break;
    case Objective::Kind::k_mono:
      for (int c = 0; c < d; ++c) {
        VertexColoring coloring = VertexColoring::uniform(n, obj.red);
        for (int v = 0; v < obj.k; ++v) {
          coloring.colors[static_cast<size_t>(v)] = Color{c};
        }
        family.push_back(std::move(coloring));
      }
      break;
    case Objective::Kind::general:
      family = obj.target->colorings;
      break;
  }
  return family;
}

std::vector<Complex> required_values(const Objective& obj, size_t family_size) {
  if (obj.kind == Objective::Kind::general) {
    return obj.target->weights;
  }
  return std::vector<Complex>(family_size, Complex{1.0, 0.0});
}

void validate_objective(const Objective& obj, int n, int d) {
  if (obj.kind == Objective::Kind::k_mono) {
    if (obj.k < 1 || obj.k > n) {
      throw ValidationError("k must lie in 1..n, got " + std::to_string(obj.k));
    }
    if (obj.red.id < 0 || obj.red.id >= d) {
      throw ColorOutOfPaletteError("red color outside the palette");
    }
  }
  if (obj.kind == Objective::Kind::general) {
    if (!obj.target) {
      throw ValidationError("general objective needs a target");
    }
    obj.target->validate(n, d);
  }
}

void project_params(Eigen::VectorXd& p, Objective::Constraint constraint,
                    double box) {
  auto clamp = [&](double x) { return std::clamp(x, -box, box); };
  for (Eigen::Index e = 0; 2 * e + 1 < p.size(); ++e) {
    double& re = p[2 * e];
    double& im = p[2 * e + 1];
    switch (constraint) {
      case Objective::Constraint::complex_weights:
        re = clamp(re);
        im = clamp(im);
        break;
      case Objective::Constraint::real_weights:
        re = clamp(re);
        im = 0.0;
        break;
      case Objective::Constraint::positive_real:
        re = std::clamp(re, kPositiveFloor, box);
        im = 0.0;
        break;
    }
  }
}

void mask_gradient(Eigen::VectorXd& g, Objective::Constraint constraint) {
  if (constraint == Objective::Constraint::complex_weights) return;
  for (Eigen::Index e = 0; 2 * e + 1 < g.size(); ++e) {
    g[2 * e + 1] = 0.0;
  }
}

}  // namespace

StateEvaluator::StateEvaluator(const BiColoredGraph& topology,
                               const Objective& objective,
                               std::size_t max_matchings)
    : n_(topology.vertex_count()),
      d_(topology.palette_size()),
      edge_count_(topology.edge_count()) {
  validate_objective(objective, n_, d_);

  MatchingOptions mopts;
  mopts.max_matchings = max_matchings;
  std::vector<PerfectMatching> matchings =
      enumerate_perfect_matchings(topology, mopts);

  std::map<VertexColoring, int> group_index;
  match_offset_.push_back(0);
  for (const PerfectMatching& pm : matchings) {
    VertexColoring c = inherited_coloring(topology, pm);
    auto [it, inserted] =
        group_index.emplace(c, static_cast<int>(group_index.size()));
    if (inserted) {
      keys_.push_back(c);
    }
    match_group_.push_back(it->second);
    for (int id : pm.edge_ids) {
      match_edges_.push_back(id);
    }
    match_offset_.push_back(static_cast<int>(match_edges_.size()));
  }
  // group_index assigned ids in first-seen order while keys_ mirrors it, so
  // rebuild keys_ sorted by coloring for stable downstream reporting.
  {
    std::vector<int> remap(keys_.size());
    std::vector<VertexColoring> sorted_keys;
    sorted_keys.reserve(keys_.size());
    for (auto& [coloring, old_id] : group_index) {
      remap[static_cast<size_t>(old_id)] =
          static_cast<int>(sorted_keys.size());
      sorted_keys.push_back(coloring);
    }
    for (int& gidx : match_group_) {
      gidx = remap[static_cast<size_t>(gidx)];
    }
    keys_ = std::move(sorted_keys);
  }

  std::vector<VertexColoring> family = required_family(objective, n_, d_);
  std::vector<Complex> values = required_values(objective, family.size());

  alpha_.assign(keys_.size(), Complex{0.0, 0.0});
  tau_.assign(keys_.size(), Complex{0.0, 0.0});
  all_required_present_ = true;
  std::map<VertexColoring, int> key_lookup;
  for (size_t i = 0; i < keys_.size(); ++i) {
    key_lookup.emplace(keys_[i], static_cast<int>(i));
  }
  bool conjugated = objective.kind != Objective::Kind::general ||
                    objective.target->mode == TargetSpec::Mode::conjugated;
  double kappa = static_cast<double>(d_);
  if (objective.kind == Objective::Kind::general) {
    kappa = 0.0;
    for (Complex w : values) kappa += std::norm(w);
  }
  kappa_ = kappa;
  for (size_t i = 0; i < family.size(); ++i) {
    auto it = key_lookup.find(family[i]);
    if (it == key_lookup.end()) {
      all_required_present_ = false;
      continue;
    }
    Complex coeff = Complex{1.0, 0.0};
    if (objective.kind == Objective::Kind::general) {
      coeff = conjugated ? std::conj(values[i]) : values[i];
    }
    alpha_[static_cast<size_t>(it->second)] = coeff;
    tau_[static_cast<size_t>(it->second)] = values[i];
  }

  weights_.resize(static_cast<size_t>(edge_count_));
  amps_.resize(keys_.size());
}

std::vector<Complex> StateEvaluator::weights_from(
    const Eigen::VectorXd& params) const {
  if (params.size() != parameter_count()) {
    throw LengthMismatchError("expected " + std::to_string(parameter_count()) +
                              " parameters, got " +
                              std::to_string(params.size()));
  }
  std::vector<Complex> w(static_cast<size_t>(edge_count_));
  for (int e = 0; e < edge_count_; ++e) {
    w[static_cast<size_t>(e)] = Complex{params[2 * e], params[2 * e + 1]};
  }
  return w;
}

Eigen::VectorXd StateEvaluator::params_from(
    std::span<const Complex> weights) const {
  if (static_cast<int>(weights.size()) != edge_count_) {
    throw LengthMismatchError("expected " + std::to_string(edge_count_) +
                              " weights, got " + std::to_string(weights.size()));
  }
  Eigen::VectorXd p(parameter_count());
  for (int e = 0; e < edge_count_; ++e) {
    p[2 * e] = weights[static_cast<size_t>(e)].real();
    p[2 * e + 1] = weights[static_cast<size_t>(e)].imag();
  }
  return p;
}

void StateEvaluator::group_amplitudes(const Eigen::VectorXd& params,
                                      std::vector<Complex>& out) const {
  if (params.size() != parameter_count()) {
    throw LengthMismatchError("parameter vector has wrong size");
  }
  for (int e = 0; e < edge_count_; ++e) {
    weights_[static_cast<size_t>(e)] = Complex{params[2 * e], params[2 * e + 1]};
  }
  out.assign(keys_.size(), Complex{0.0, 0.0});
  size_t m_count = match_offset_.size() - 1;
  for (size_t m = 0; m < m_count; ++m) {
    Complex prod{1.0, 0.0};
    for (int i = match_offset_[m]; i < match_offset_[m + 1]; ++i) {
      prod *= weights_[static_cast<size_t>(match_edges_[static_cast<size_t>(i)])];
    }
    out[static_cast<size_t>(match_group_[m])] += prod;
  }
}

EvalResult StateEvaluator::value(const Eigen::VectorXd& params) const {
  group_amplitudes(params, amps_);
  double n2 = 0.0;
  for (Complex a : amps_) n2 += std::norm(a);
  if (n2 <= kDegenerateNorm) {
    return {0.0, false};
  }
  Complex s{0.0, 0.0};
  for (size_t g = 0; g < amps_.size(); ++g) {
    s += alpha_[g] * amps_[g];
  }
  return {std::norm(s) / (kappa_ * n2), true};
}

EvalResult StateEvaluator::value_and_gradient(const Eigen::VectorXd& params,
                                              Eigen::VectorXd& grad) const {
  group_amplitudes(params, amps_);
  double n2 = 0.0;
  for (Complex a : amps_) n2 += std::norm(a);
  grad.setZero(parameter_count());
  if (n2 <= kDegenerateNorm) {
    return {0.0, false};
  }
  Complex s{0.0, 0.0};
  for (size_t g = 0; g < amps_.size(); ++g) {
    s += alpha_[g] * amps_[g];
  }
  double ss = std::norm(s);
  double value = ss / (kappa_ * n2);

  // dF/dA_g (holding conj(A_g) fixed); the real-parameter derivative is then
  // 2 Re(dF/dA_g * dA_g/dtheta).
  std::vector<Complex> dual(amps_.size());
  double denom = kappa_ * n2 * n2;
  for (size_t g = 0; g < amps_.size(); ++g) {
    dual[g] = (alpha_[g] * std::conj(s) * n2 - ss * std::conj(amps_[g])) / denom;
  }

  size_t m_count = match_offset_.size() - 1;
  for (size_t m = 0; m < m_count; ++m) {
    int lo = match_offset_[m];
    int hi = match_offset_[m + 1];
    int len = hi - lo;
    prefix_.assign(static_cast<size_t>(len) + 1, Complex{1.0, 0.0});
    suffix_.assign(static_cast<size_t>(len) + 1, Complex{1.0, 0.0});
    for (int i = 0; i < len; ++i) {
      prefix_[static_cast<size_t>(i) + 1] =
          prefix_[static_cast<size_t>(i)] *
          weights_[static_cast<size_t>(match_edges_[static_cast<size_t>(lo + i)])];
    }
    for (int i = len - 1; i >= 0; --i) {
      suffix_[static_cast<size_t>(i)] =
          suffix_[static_cast<size_t>(i) + 1] *
          weights_[static_cast<size_t>(match_edges_[static_cast<size_t>(lo + i)])];
    }
    Complex cg = dual[static_cast<size_t>(match_group_[m])];
    for (int i = 0; i < len; ++i) {
      int e = match_edges_[static_cast<size_t>(lo + i)];
      Complex partial = prefix_[static_cast<size_t>(i)] *
                        suffix_[static_cast<size_t>(i) + 1];
      Complex contrib = cg * partial;
      grad[2 * e] += 2.0 * contrib.real();
      grad[2 * e + 1] += -2.0 * contrib.imag();
    }
  }
  return {value, true};
}

void StateEvaluator::residual(const Eigen::VectorXd& params,
                              Eigen::VectorXd& r) const {
  group_amplitudes(params, amps_);
  r.resize(2 * static_cast<Eigen::Index>(amps_.size()));
  for (size_t g = 0; g < amps_.size(); ++g) {
    Complex diff = amps_[g] - tau_[g];
    r[2 * static_cast<Eigen::Index>(g)] = diff.real();
    r[2 * static_cast<Eigen::Index>(g) + 1] = diff.imag();
  }
}

void StateEvaluator::residual_and_jacobian(const Eigen::VectorXd& params,
                                           Eigen::VectorXd& r,
                                           Eigen::MatrixXd& jac) const {
  residual(params, r);
  jac.setZero(2 * static_cast<Eigen::Index>(amps_.size()), parameter_count());
  size_t m_count = match_offset_.size() - 1;
  for (size_t m = 0; m < m_count; ++m) {
    int lo = match_offset_[m];
    int hi = match_offset_[m + 1];
    int len = hi - lo;
    prefix_.assign(static_cast<size_t>(len) + 1, Complex{1.0, 0.0});
    suffix_.assign(static_cast<size_t>(len) + 1, Complex{1.0, 0.0});
    for (int i = 0; i < len; ++i) {
      prefix_[static_cast<size_t>(i) + 1] =
          prefix_[static_cast<size_t>(i)] *
          weights_[static_cast<size_t>(match_edges_[static_cast<size_t>(lo + i)])];
    }
    for (int i = len - 1; i >= 0; --i) {
      suffix_[static_cast<size_t>(i)] =
          suffix_[static_cast<size_t>(i) + 1] *
          weights_[static_cast<size_t>(match_edges_[static_cast<size_t>(lo + i)])];
    }
    Eigen::Index g = match_group_[m];
    for (int i = 0; i < len; ++i) {
      int e = match_edges_[static_cast<size_t>(lo + i)];
      Complex partial = prefix_[static_cast<size_t>(i)] *
                        suffix_[static_cast<size_t>(i) + 1];
      // dA/dre(w_e) = partial, dA/dim(w_e) = i * partial.
      jac(2 * g, 2 * e) += partial.real();
      jac(2 * g + 1, 2 * e) += partial.imag();
      jac(2 * g, 2 * e + 1) += -partial.imag();
      jac(2 * g + 1, 2 * e + 1) += partial.real();
    }
  }
}

EvalResult evaluate(const BiColoredGraph& topology,
                    const Eigen::VectorXd& params, const Objective& objective) {
  StateEvaluator ev(topology, objective);
  if (params.size() != ev.parameter_count()) {
    throw LengthMismatchError("expected " +
                              std::to_string(ev.parameter_count()) +
                              " parameters, got " +
                              std::to_string(params.size()));
  }
  return ev.value(params);
}

Eigen::VectorXd objective_gradient(const BiColoredGraph& topology,
                                   const Eigen::VectorXd& params,
                                   const Objective& objective) {
  StateEvaluator ev(topology, objective);
  if (params.size() != ev.parameter_count()) {
    throw LengthMismatchError("expected " +
                              std::to_string(ev.parameter_count()) +
                              " parameters, got " +
                              std::to_string(params.size()));
  }
  Eigen::VectorXd grad;
  EvalResult res = ev.value_and_gradient(params, grad);
  if (!res.defined) {
    throw UndefinedAtPointError("objective undefined: the state vanishes here");
  }
  mask_gradient(grad, objective.constraint);
  return grad;
}

const std::vector<SnapCandidate>& snap_candidates() {
  static const std::vector<SnapCandidate> table = [] {
    const double rt = std::sqrt(2.0) / 2.0;
    return std::vector<SnapCandidate>{
        {{0.0, 0.0}, "0"},       {{1.0, 0.0}, "1"},
        {{-1.0, 0.0}, "-1"},     {{0.0, 1.0}, "i"},
        {{0.0, -1.0}, "-i"},     {{2.0, 0.0}, "2"},
        {{-2.0, 0.0}, "-2"},     {{0.5, 0.0}, "1/2"},
        {{-0.5, 0.0}, "-1/2"},   {{rt, 0.0}, "sqrt2/2"},
        {{-rt, 0.0}, "-sqrt2/2"}};
  }();
  return table;
}

namespace {

Eigen::VectorXd random_start(std::mt19937_64& rng, int edges,
                             Objective::Constraint constraint, double radius) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd p(2 * edges);
  for (int e = 0; e < edges; ++e) {
    switch (constraint) {
      case Objective::Constraint::complex_weights: {
        double r = radius * std::sqrt(unit(rng));
        double phi = 2.0 * M_PI * unit(rng);
        p[2 * e] = r * std::cos(phi);
        p[2 * e + 1] = r * std::sin(phi);
        break;
      }
      case Objective::Constraint::real_weights:
        p[2 * e] = radius * (2.0 * unit(rng) - 1.0);
        p[2 * e + 1] = 0.0;
        break;
      case Objective::Constraint::positive_real:
        p[2 * e] = radius * (1.0 - unit(rng));  // in (0, radius]
        p[2 * e + 1] = 0.0;
        break;
    }
  }
  return p;
}

struct AscentOutcome {
  Eigen::VectorXd params;
  double value = 0.0;
  bool defined = false;
  long evaluations = 0;
};

AscentOutcome ascend(const StateEvaluator& ev, Eigen::VectorXd params,
                     const Objective& obj, const OptimizeConfig& cfg,
                     int restart_index) {
  AscentOutcome out;
  project_params(params, obj.constraint, cfg.box);
  EvalResult cur = ev.value(params);
  ++out.evaluations;
  if (!cur.defined) {
    out.params = std::move(params);
    return out;
  }
  double step = 0.5;
  Eigen::VectorXd grad(ev.parameter_count());
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    EvalResult res = ev.value_and_gradient(params, grad);
    ++out.evaluations;
    if (!res.defined) break;
    cur = res;
    if (cfg.trace) {
      (*cfg.trace) << restart_index << ' ' << iter << ' ' << cur.value << '\n';
    }
    mask_gradient(grad, obj.constraint);
    double gn2 = grad.squaredNorm();
    if (gn2 < cfg.grad_tol * cfg.grad_tol) break;
    if (1.0 - cur.value < 1e-15) break;

    bool accepted = false;
    if (cfg.line_search) {
      double t = step;
      while (t > 1e-14) {
        Eigen::VectorXd trial = params + t * grad;
        project_params(trial, obj.constraint, cfg.box);
        EvalResult f = ev.value(trial);
        ++out.evaluations;
        if (f.defined && f.value >= cur.value + 1e-4 * t * gn2) {
          params = std::move(trial);
          cur = f;
          step = std::min(t * 1.5, 8.0);
          accepted = true;
          break;
        }
        t *= 0.5;
      }
    } else {
      Eigen::VectorXd trial = params + cfg.fixed_step * grad;
      project_params(trial, obj.constraint, cfg.box);
      EvalResult f = ev.value(trial);
      ++out.evaluations;
      if (f.defined && f.value > cur.value) {
        params = std::move(trial);
        cur = f;
        accepted = true;
      }
    }
    if (!accepted) break;
  }
  out.params = std::move(params);
  out.value = cur.value;
  out.defined = cur.defined;
  return out;
}

// Multiplying every edge at a vertex by a common factor scales each matching
// weight exactly once, so the state only moves by a global factor. Normalize
// that per-vertex freedom by driving the weights of a spanning forest to 1
// (largest-magnitude edges first, for stability); the global remainder is
// absorbed by the rescale below. Makes the weight snap land on nice values
// far more often.
void vertex_gauge_normalize(const BiColoredGraph& g, Eigen::VectorXd& params) {
  int n = g.vertex_count();
  std::vector<Complex> w(static_cast<size_t>(g.edge_count()));
  for (int e = 0; e < g.edge_count(); ++e) {
    w[static_cast<size_t>(e)] = Complex{params[2 * e], params[2 * e + 1]};
  }
  std::vector<Complex> lambda(static_cast<size_t>(n), Complex{1.0, 0.0});
  std::vector<bool> visited(static_cast<size_t>(n), false);
  for (int root = 0; root < n; ++root) {
    if (visited[static_cast<size_t>(root)]) continue;
    visited[static_cast<size_t>(root)] = true;
    // Prim-style growth of one component.
    while (true) {
      int best_edge = -1;
      double best_mag = 1e-8;  // unusable below this
      for (int e = 0; e < g.edge_count(); ++e) {
        const Edge& edge = g.edge(e);
        bool vu = visited[static_cast<size_t>(edge.u)];
        bool vv = visited[static_cast<size_t>(edge.v)];
        if (vu == vv) continue;
        double mag = std::abs(w[static_cast<size_t>(e)]);
        if (mag > best_mag) {
          best_mag = mag;
          best_edge = e;
        }
      }
      if (best_edge < 0) break;
      const Edge& edge = g.edge(best_edge);
      int from = visited[static_cast<size_t>(edge.u)] ? edge.u : edge.v;
      int to = (from == edge.u) ? edge.v : edge.u;
      // Choose lambda_to so that lambda_from * lambda_to * w = 1.
      lambda[static_cast<size_t>(to)] =
          Complex{1.0, 0.0} /
          (lambda[static_cast<size_t>(from)] * w[static_cast<size_t>(best_edge)]);
      visited[static_cast<size_t>(to)] = true;
    }
  }
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edge(e);
    Complex scaled = lambda[static_cast<size_t>(edge.u)] *
                     lambda[static_cast<size_t>(edge.v)] *
                     w[static_cast<size_t>(e)];
    params[2 * e] = scaled.real();
    params[2 * e + 1] = scaled.imag();
  }
}

// Fixes the global scale/phase gauge so the required amplitudes sit as close
// to their prescribed values as a single complex rescale allows.
bool gauge_rescale(const StateEvaluator& ev, const Objective& obj,
                   Eigen::VectorXd& params) {
  std::vector<Complex> amps;
  ev.group_amplitudes(params, amps);
  const std::vector<Complex>& tau = ev.group_targets();
  Complex num{0.0, 0.0};
  double den = 0.0;
  for (size_t g = 0; g < amps.size(); ++g) {
    if (std::abs(tau[g]) == 0.0) continue;
    num += std::conj(amps[g]) * tau[g];
    den += std::norm(amps[g]);
  }
  if (den <= 0.0 || std::abs(num) / den < 1e-8) return false;
  Complex mu = num / den;
  if (obj.constraint != Objective::Constraint::complex_weights) {
    if (std::abs(mu.imag()) > 1e-6 * std::abs(mu) || mu.real() <= 0.0) {
      return false;
    }
    mu = Complex{mu.real(), 0.0};
  }
  // Edge scale lambda with lambda^(n/2) = mu.
  Complex lambda = std::pow(mu, 2.0 / static_cast<double>(ev.vertex_count()));
  for (int e = 0; e < ev.edge_count(); ++e) {
    Complex w{params[2 * e], params[2 * e + 1]};
    w *= lambda;
    params[2 * e] = w.real();
    params[2 * e + 1] = w.imag();
  }
  return true;
}

bool gauss_newton_polish(const StateEvaluator& ev, const Objective& obj,
                         const OptimizeConfig& cfg, Eigen::VectorXd& params) {
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  for (int it = 0; it < 40; ++it) {
    ev.residual_and_jacobian(params, r, jac);
    double rn = r.norm();
    if (rn < 1e-13) return true;
    if (obj.constraint != Objective::Constraint::complex_weights) {
      for (int e = 0; e < ev.edge_count(); ++e) {
        jac.col(2 * e + 1).setZero();
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-12);
    Eigen::VectorXd delta = svd.solve(-r);
    bool improved = false;
    double s = 1.0;
    Eigen::VectorXd r2;
    while (s > 1e-6) {
      Eigen::VectorXd trial = params + s * delta;
      project_params(trial, obj.constraint, cfg.box);
      ev.residual(trial, r2);
      if (r2.norm() < rn) {
        params = std::move(trial);
        improved = true;
        break;
      }
      s *= 0.5;
    }
    if (!improved) break;
  }
  ev.residual(params, r);
  return r.norm() < 1e-11;
}

// Snap weights that sit within snap_tol of a catalogued nice value.
bool snap_weights(std::vector<Complex>& weights, double snap_tol) {
  bool any = false;
  for (Complex& w : weights) {
    double best = snap_tol;
    const SnapCandidate* hit = nullptr;
    for (const SnapCandidate& cand : snap_candidates()) {
      double dist = std::abs(w - cand.value);
      if (dist <= best) {
        best = dist;
        hit = &cand;
      }
    }
    if (hit != nullptr) {
      any = true;
      w = hit->value;
    }
  }
  return any;
}

VerifyReport verify_for(const Objective& obj, const StateMap& state,
                        double tol) {
  switch (obj.kind) {
    case Objective::Kind::mono:
      return verify_monochromatic(state, tol);
    case Objective::Kind::k_mono:
      return verify_k_monochromatic(state, obj.k, obj.red, tol);
    case Objective::Kind::general:
      return verify_target(state, *obj.target, tol);
  }
  return {};
}

double authoritative_fidelity(const BiColoredGraph& g, const Objective& obj,
                              const OptimizeConfig& cfg) {
  StateOptions sopts;
  sopts.zero_tol = cfg.zero_tol;
  sopts.max_matchings = cfg.max_matchings;
  StateMap state = compute_state(g, sopts);
  try {
    switch (obj.kind) {
      case Objective::Kind::mono:
        return monochromatic_fidelity(state).value;
      case Objective::Kind::k_mono:
        return k_monochromatic_fidelity(state, obj.k, obj.red).value;
      case Objective::Kind::general:
        return general_fidelity(state, *obj.target).value;
    }
  } catch (const UndefinedFidelityError&) {
    return 0.0;
  }
  return 0.0;
}

}  // namespace

SearchResult optimize_weights(const BiColoredGraph& topology,
                              const Objective& objective,
                              const OptimizeConfig& config) {
  StateEvaluator ev(topology, objective, config.max_matchings);
  std::mt19937_64 rng(config.seed);
  long evaluations = 0;
  double best_value = -1.0;
  Eigen::VectorXd best_params;

  for (int r = 0; r < config.restarts; ++r) {
    Eigen::VectorXd start;
    bool defined = false;
    for (int attempt = 0; attempt < 32 && !defined; ++attempt) {
      start = random_start(rng, ev.edge_count(), objective.constraint,
                           config.init_radius);
      project_params(start, objective.constraint, config.box);
      EvalResult probe = ev.value(start);
      ++evaluations;
      defined = probe.defined;
    }
    if (!defined) continue;
    AscentOutcome outcome = ascend(ev, std::move(start), objective, config, r);
    evaluations += outcome.evaluations;
    if (outcome.defined && outcome.value > best_value) {
      best_value = outcome.value;
      best_params = std::move(outcome.params);
    }
  }

  SearchResult result{topology, 0.0, false, config.restarts, evaluations,
                      config.seed};
  if (best_value < 0.0) {
    // Every start was degenerate (e.g. no perfect matchings).
    return result;
  }

  std::vector<Complex> final_weights = ev.weights_from(best_params);
  bool exact = false;

  if (config.polish && ev.all_required_present() &&
      best_value >= config.polish_threshold) {
    Eigen::VectorXd polished = best_params;
    vertex_gauge_normalize(topology, polished);
    project_params(polished, objective.constraint, config.box);
    gauge_rescale(ev, objective, polished);
    bool converged = gauss_newton_polish(ev, objective, config, polished);
    if (converged) {
      std::vector<Complex> snapped = ev.weights_from(polished);
      if (snap_weights(snapped, config.snap_tol)) {
        StateOptions sopts;
        sopts.zero_tol = config.zero_tol;
        sopts.max_matchings = config.max_matchings;
        BiColoredGraph candidate = topology.with_weights(snapped);
        if (verify_for(objective, compute_state(candidate, sopts),
                       config.verify_tol)
                .ok) {
          exact = true;
          final_weights = std::move(snapped);
        }
      }
      if (!exact) {
        std::vector<Complex> plain = ev.weights_from(polished);
        StateOptions sopts;
        sopts.zero_tol = config.zero_tol;
        sopts.max_matchings = config.max_matchings;
        BiColoredGraph candidate = topology.with_weights(plain);
        if (verify_for(objective, compute_state(candidate, sopts),
                       config.verify_tol)
                .ok) {
          exact = true;
          final_weights = std::move(plain);
        }
      }
    }
  }

  result.graph = topology.with_weights(final_weights);
  result.exact = exact;
  result.fidelity = authoritative_fidelity(result.graph, objective, config);
  return result;
}

namespace {

struct EdgeTypeEntry {
  int u, v, cu, cv;
};

std::vector<EdgeTypeEntry> edge_universe(int n, int d) {
  std::vector<EdgeTypeEntry> types;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      for (int cu = 0; cu < d; ++cu) {
        for (int cv = 0; cv < d; ++cv) {
          types.push_back({u, v, cu, cv});
        }
      }
    }
  }
  return types;
}

// Number of size-k multisets from `types` types with per-type multiplicity
// <= mult, saturating to avoid overflow.
std::vector<double> multiset_counts(int types, int mult, int max_size) {
  std::vector<double> dp(static_cast<size_t>(max_size) + 1, 0.0);
  dp[0] = 1.0;
  for (int t = 0; t < types; ++t) {
    for (int k = max_size; k >= 1; --k) {
      double acc = 0.0;
      for (int m = 1; m <= mult && m <= k; ++m) {
        acc += dp[static_cast<size_t>(k - m)];
      }
      dp[static_cast<size_t>(k)] += acc;
      dp[static_cast<size_t>(k)] =
          std::min(dp[static_cast<size_t>(k)], 1e18);
    }
  }
  return dp;
}

struct TopologyScan {
  int n, d;
  const SearchBudget& budget;
  const Objective& objective;
  const OptimizeConfig& config;
  std::vector<std::string> palette;
  std::vector<EdgeTypeEntry> types;
  std::vector<VertexColoring> family;
  std::vector<Complex> family_values;
  std::vector<int> chosen;          // type index per chosen edge
  std::vector<int> used;            // multiplicity per type
  std::vector<std::vector<int>> slot_cover;  // [vertex][color] count
  long visited = 0;
  long counter = 0;
  bool done = false;
  std::vector<SearchResult> exact_hits;
  std::vector<SearchResult> best;

  TopologyScan(int n_, int d_, const SearchBudget& b, const Objective& o,
               const OptimizeConfig& c, std::vector<std::string> pal)
      : n(n_), d(d_), budget(b), objective(o), config(c),
        palette(std::move(pal)) {
    types = edge_universe(n, d);
    family = required_family(o, n, d);
    family_values = required_values(o, family.size());
    used.assign(types.size(), 0);
    slot_cover.assign(static_cast<size_t>(n),
                      std::vector<int>(static_cast<size_t>(d), 0));
  }

  void push_type(int t) {
    ++used[static_cast<size_t>(t)];
    chosen.push_back(t);
    const EdgeTypeEntry& et = types[static_cast<size_t>(t)];
    ++slot_cover[static_cast<size_t>(et.u)][static_cast<size_t>(et.cu)];
    ++slot_cover[static_cast<size_t>(et.v)][static_cast<size_t>(et.cv)];
  }

  void pop_type(int t) {
    --used[static_cast<size_t>(t)];
    chosen.pop_back();
    const EdgeTypeEntry& et = types[static_cast<size_t>(t)];
    --slot_cover[static_cast<size_t>(et.u)][static_cast<size_t>(et.cu)];
    --slot_cover[static_cast<size_t>(et.v)][static_cast<size_t>(et.cv)];
  }

  // Every required coloring needs each vertex covered in its color.
  bool slots_satisfied() const {
    for (const VertexColoring& c : family) {
      bool ok = true;
      for (int v = 0; v < n; ++v) {
        if (slot_cover[static_cast<size_t>(v)]
                      [static_cast<size_t>(c.at(v).id)] == 0) {
          ok = false;
          break;
        }
      }
      if (ok) continue;
      return false;
    }
    return true;
  }

  BiColoredGraph build_graph_from_chosen() const {
    std::vector<EdgeSpec> specs;
    specs.reserve(chosen.size());
    for (int t : chosen) {
      const EdgeTypeEntry& et = types[static_cast<size_t>(t)];
      specs.push_back({et.u, et.v, Color{et.cu}, Color{et.cv},
                       Complex{1.0, 0.0}});
    }
    return BiColoredGraph(n, d, std::move(specs), palette);
  }

  void record(SearchResult&& res) {
    if (res.exact) {
      exact_hits.push_back(std::move(res));
      if (budget.stop_on_exact) done = true;
      return;
    }
    best.push_back(std::move(res));
    std::sort(best.begin(), best.end(),
              [](const SearchResult& a, const SearchResult& b) {
                return a.fidelity > b.fidelity;
              });
    if (static_cast<int>(best.size()) > budget.keep_best) {
      best.erase(best.begin() + budget.keep_best, best.end());
    }
  }

  void visit_leaf() {
    ++visited;
    if (!slots_satisfied()) return;
    BiColoredGraph graph = build_graph_from_chosen();
    std::vector<PerfectMatching> matchings;
    try {
      matchings = enumerate_perfect_matchings(graph);
    } catch (const MatchingExplosionError&) {
      return;
    }
    if (matchings.empty()) return;

    std::map<VertexColoring, int> group_sizes;
    for (const PerfectMatching& pm : matchings) {
      ++group_sizes[inherited_coloring(graph, pm)];
    }
    std::map<VertexColoring, Complex> required;
    for (size_t i = 0; i < family.size(); ++i) {
      required.emplace(family[i], family_values[i]);
    }
    for (const auto& [coloring, value] : required) {
      if (std::abs(value) == 0.0) continue;
      if (group_sizes.find(coloring) == group_sizes.end()) return;
    }
    if (!budget.weight_set && budget.prune_reducible) {
      for (const auto& [coloring, count] : group_sizes) {
        auto it = required.find(coloring);
        bool must_cancel = (it == required.end()) || std::abs(it->second) == 0.0;
        if (must_cancel && count == 1) return;
      }
    }

    ++counter;
    if (budget.weight_set) {
      scan_weight_assignments(graph);
    } else {
      OptimizeConfig cfg = config;
      cfg.seed = config.seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(counter);
      record(optimize_weights(graph, objective, cfg));
    }
  }

  void scan_weight_assignments(const BiColoredGraph& graph) {
    const std::vector<Complex>& ws = *budget.weight_set;
    size_t edges = static_cast<size_t>(graph.edge_count());
    std::vector<size_t> idx(edges, 0);
    StateOptions sopts;
    sopts.zero_tol = config.zero_tol;
    sopts.max_matchings = config.max_matchings;
    while (true) {
      std::vector<Complex> weights(edges);
      for (size_t i = 0; i < edges; ++i) weights[i] = ws[idx[i]];
      BiColoredGraph candidate = graph.with_weights(weights);
      StateMap state = compute_state(candidate, sopts);
      VerifyReport rep = verify_for(objective, state, config.verify_tol);
      double fid = 0.0;
      if (!state.degenerate() && !state.terms().empty()) {
        try {
          switch (objective.kind) {
            case Objective::Kind::mono:
              fid = monochromatic_fidelity(state).value;
              break;
            case Objective::Kind::k_mono:
              fid = k_monochromatic_fidelity(state, objective.k, objective.red)
                        .value;
              break;
            case Objective::Kind::general:
              fid = general_fidelity(state, *objective.target).value;
              break;
          }
        } catch (const UndefinedFidelityError&) {
          fid = 0.0;
        }
      }
      SearchResult res{candidate, fid, rep.ok, 0, 1, config.seed};
      record(std::move(res));
      if (done) return;
      size_t k = 0;
      while (k < edges) {
        if (++idx[k] < ws.size()) break;
        idx[k] = 0;
        ++k;
      }
      if (k == edges) break;
    }
  }

  void enumerate(size_t start_type, int remaining) {
    if (done) return;
    if (remaining == 0) {
      visit_leaf();
      return;
    }
    for (size_t t = start_type; t < types.size(); ++t) {
      if (used[t] >= budget.max_multiplicity) continue;
      push_type(static_cast<int>(t));
      enumerate(t, remaining - 1);
      pop_type(static_cast<int>(t));
      if (done) return;
    }
  }
};

bool canonical_less(const BiColoredGraph& a, const BiColoredGraph& b) {
  auto key = [](const BiColoredGraph& g) {
    std::vector<std::tuple<int, int, int, int, double, double>> edges;
    for (const Edge& e : g.edges()) {
      edges.emplace_back(e.u, e.v, e.color_at_u.id, e.color_at_v.id,
                         e.weight.real(), e.weight.imag());
    }
    std::sort(edges.begin(), edges.end());
    return edges;
  };
  return key(a) < key(b);
}

}  // namespace

std::vector<SearchResult> search_topologies(int n, int d,
                                            const SearchBudget& budget,
                                            const Objective& objective,
                                            const OptimizeConfig& config,
                                            std::vector<std::string> palette) {
  if (n < 1) throw ValidationError("n must be positive");
  if (d < 2) throw ValidationError("d must be at least 2");
  if (palette.empty()) palette = default_palette(d);
  validate_objective(objective, n, d);
  if (budget.max_edges < 1) {
    throw ValidationError("max_edges must be positive");
  }
  if (budget.max_multiplicity < 1) {
    throw ValidationError("max_multiplicity must be positive");
  }
  if (budget.weight_set && budget.weight_set->empty()) {
    throw ValidationError("weight set must not be empty");
  }

  int type_count = n * (n - 1) / 2 * d * d;
  std::vector<double> counts =
      multiset_counts(type_count, budget.max_multiplicity, budget.max_edges);
  double total = 0.0;
  for (int k = 1; k <= budget.max_edges; ++k) {
    double size_total = counts[static_cast<size_t>(k)];
    if (budget.weight_set) {
      size_total *= std::pow(static_cast<double>(budget.weight_set->size()),
                             static_cast<double>(k));
    }
    total = std::min(total + size_total, 1e18);
  }
  if (total > static_cast<double>(budget.max_topologies)) {
    std::ostringstream msg;
    msg << "the candidate universe holds about " << std::setprecision(3)
        << total << " topologies, above the budget of "
        << budget.max_topologies;
    throw BudgetExceededError(msg.str());
  }

  TopologyScan scan(n, d, budget, objective, config, std::move(palette));
  for (int size = 1; size <= budget.max_edges && !scan.done; ++size) {
    scan.enumerate(0, size);
  }

  std::vector<SearchResult> out = std::move(scan.exact_hits);
  for (SearchResult& r : scan.best) {
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(),
            [](const SearchResult& a, const SearchResult& b) {
              if (a.exact != b.exact) return a.exact;
              if (a.fidelity != b.fidelity) return a.fidelity > b.fidelity;
              return canonical_less(a.graph, b.graph);
            });
  return out;
}

std::vector<LibraryEntry> topology_library(int n, int d) {
  if (n < 4 || n % 2 != 0) {
    throw ValidationError("topology library needs an even n >= 4");
  }
  if (d < 2) {
    throw ValidationError("topology library needs d >= 2");
  }
  std::vector<LibraryEntry> out;

  // Complete multigraph with all d monochromatic types per pair.
  {
    std::vector<EdgeSpec> specs;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        for (int c = 0; c < d; ++c) {
          specs.push_back({u, v, Color{c}, Color{c}, Complex{1.0, 0.0}});
        }
      }
    }
    out.push_back({"complete_mono_saturated", BiColoredGraph(n, d, specs)});
  }

  // Complete multigraph with every ordered color pair per pair.
  {
    std::vector<EdgeSpec> specs;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        for (int cu = 0; cu < d; ++cu) {
          for (int cv = 0; cv < d; ++cv) {
            specs.push_back({u, v, Color{cu}, Color{cv}, Complex{1.0, 0.0}});
          }
        }
      }
    }
    out.push_back({"complete_full_saturated", BiColoredGraph(n, d, specs)});
  }

  // Alternating cycles, one per color pair, on the full palette.
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      std::vector<EdgeSpec> specs;
      for (int i = 0; i < n; ++i) {
        Color c = (i % 2 == 0) ? Color{a} : Color{b};
        specs.push_back({i, (i + 1) % n, c, c, Complex{1.0, 0.0}});
      }
      out.push_back({"alternating_cycle_" + std::to_string(a) + "_" +
                         std::to_string(b),
                     BiColoredGraph(n, d, specs)});
    }
  }

  // Cycle with all d monochromatic types per cycle edge.
  {
    std::vector<EdgeSpec> specs;
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < d; ++c) {
        specs.push_back({i, (i + 1) % n, Color{c}, Color{c}, Complex{1.0, 0.0}});
      }
    }
    out.push_back({"cycle_mono_saturated", BiColoredGraph(n, d, specs)});
  }

  // K4 block joined with a mono-saturated remainder.
  if (n >= 6 && d >= 3) {
    std::vector<EdgeSpec> specs = {
        {0, 1, Color{0}, Color{0}, Complex{1.0, 0.0}},
        {2, 3, Color{0}, Color{0}, Complex{1.0, 0.0}},
        {0, 2, Color{1}, Color{1}, Complex{1.0, 0.0}},
        {1, 3, Color{1}, Color{1}, Complex{1.0, 0.0}},
        {0, 3, Color{2}, Color{2}, Complex{1.0, 0.0}},
        {1, 2, Color{2}, Color{2}, Complex{1.0, 0.0}},
    };
    for (int u = 4; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        for (int c = 0; c < d; ++c) {
          specs.push_back({u, v, Color{c}, Color{c}, Complex{1.0, 0.0}});
        }
      }
    }
    out.push_back({"k4_block_plus_saturated_rest", BiColoredGraph(n, d, specs)});
  }

  // Round-robin one-factorization of K_n, factor i colored i mod d.
  {
    std::vector<EdgeSpec> specs;
    int m = n - 1;
    for (int f = 0; f < m; ++f) {
      Color c{f % d};
      specs.push_back({n - 1, f, c, c, Complex{1.0, 0.0}});
      for (int j = 1; j <= n / 2 - 1; ++j) {
        int a = (f + j) % m;
        int b = (f - j + m) % m;
        specs.push_back({a, b, c, c, Complex{1.0, 0.0}});
      }
    }
    out.push_back({"one_factorization_striped", BiColoredGraph(n, d, specs)});
  }

  // A few seeded random multigraph topologies.
  std::mt19937_64 rng(0xC0FFEEull);
  std::uniform_int_distribution<int> vert(0, n - 1);
  std::uniform_int_distribution<int> col(0, d - 1);
  for (int inst = 0; inst < 4; ++inst) {
    std::vector<EdgeSpec> specs;
    int edges = 2 * n;
    while (static_cast<int>(specs.size()) < edges) {
      int u = vert(rng);
      int v = vert(rng);
      if (u == v) continue;
      specs.push_back({u, v, Color{col(rng)}, Color{col(rng)},
                       Complex{1.0, 0.0}});
    }
    out.push_back({"random_" + std::to_string(inst),
                   BiColoredGraph(n, d, specs)});
  }

  return out;
}

}  // namespace pmstate
