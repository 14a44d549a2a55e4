#include "qaplp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qaplp {

namespace {

void check_size(const VariableSpace& space, std::span<const double> x) {
  if (x.size() != space.size()) throw std::invalid_argument("solution size does not match the variable space");
}

double value_at(std::span<const double> x, std::optional<int> col) {
  return col ? x[static_cast<std::size_t>(*col)] : 0.0;
}

}  // namespace

SupportGraph support_graph(const VariableSpace& space, std::span<const double> x, double tol) {
  check_size(space, x);
  SupportGraph g;
  g.stages.resize(static_cast<std::size_t>(space.stages()));
  for (std::size_t c = 0; c < space.diagonal_count(); ++c) {
    const Arc a = space.arc(static_cast<int>(c));
    auto& st = g.stages[static_cast<std::size_t>(a.stage)];
    st.mass += x[c];
    if (x[c] > tol) st.arcs.push_back(a);
  }
  for (auto& st : g.stages) {
    std::sort(st.arcs.begin(), st.arcs.end(), [](const Arc& a, const Arc& b) {
      return std::pair(a.tail, a.head) < std::pair(b.tail, b.head);
    });
    for (const Arc& a : st.arcs)
      if (st.tails.empty() || st.tails.back() != a.tail) st.tails.push_back(a.tail);
  }
  return g;
}

std::optional<LayeredPath> find_layered_path(const VariableSpace& space, std::span<const double> x, double tol) {
  check_size(space, x);
  const int n = space.n();
  const int stages = space.stages();
  const auto g = support_graph(space, x, tol);
  LayeredPath path;
  path.facilities.reserve(static_cast<std::size_t>(n));
  std::vector<bool> used(static_cast<std::size_t>(n), false);

  auto pairs_ok = [&](const Arc& next) {
    for (int p = 0; p < next.stage; ++p)
      if (value_at(x, space.index(ArcPair{path.arc(p), next})) <= tol) return false;
    return true;
  };

  // Depth-first over stages; arc order within a stage is lexicographic.
  auto extend = [&](auto&& self, int stage) -> bool {
    if (stage == stages) return true;
    for (const Arc& a : g.stages[static_cast<std::size_t>(stage)].arcs) {
      if (stage > 0 && a.tail != path.facilities.back()) continue;
      if (used[static_cast<std::size_t>(a.head)]) continue;
      if (stage > 0 && !pairs_ok(a)) continue;
      if (stage == 0) {
        path.facilities.push_back(a.tail);
        used[static_cast<std::size_t>(a.tail)] = true;
      }
      path.facilities.push_back(a.head);
      used[static_cast<std::size_t>(a.head)] = true;
      if (self(self, stage + 1)) return true;
      used[static_cast<std::size_t>(a.head)] = false;
      path.facilities.pop_back();
      if (stage == 0) {
        used[static_cast<std::size_t>(a.tail)] = false;
        path.facilities.pop_back();
      }
    }
    return false;
  };

  if (stages == 0 || !extend(extend, 0)) return std::nullopt;
  path.flow = flow_value(space, x, path);
  return path;
}

double flow_value(const VariableSpace& space, std::span<const double> x, const LayeredPath& path) {
  check_size(space, x);
  const int stages = space.stages();
  if (path.facilities.size() != static_cast<std::size_t>(space.n())) throw std::invalid_argument("path length does not match n");
  if (stages == 1) return value_at(x, space.index(path.arc(0)));
  double lambda = std::numeric_limits<double>::infinity();
  for (int p = 0; p < stages; ++p)
    for (int q = p + 1; q < stages; ++q) lambda = std::min(lambda, value_at(x, space.index(ArcPair{path.arc(p), path.arc(q)})));
  return lambda;
}

std::string_view to_string(DecompositionVerdict verdict) {
  return verdict == DecompositionVerdict::Decomposed ? "decomposed" : "residual-stuck";
}

DecompositionVerdict parse_decomposition_verdict(std::string_view text) {
  if (text == "decomposed") return DecompositionVerdict::Decomposed;
  if (text == "residual-stuck") return DecompositionVerdict::ResidualStuck;
  throw std::invalid_argument("unknown decomposition verdict: " + std::string(text));
}

DecompositionReport decompose(const VariableSpace& space, std::span<const double> x, double tol, const QapInstance* inst) {
  check_size(space, x);
  DecompositionReport rep;
  std::vector<double> work(x.begin(), x.end());
  auto max_abs = [&] {
    double m = 0.0;
    for (double v : work) m = std::max(m, std::abs(v));
    return m;
  };

  // Each round drives at least one pair value to zero, which bounds the loop.
  for (std::size_t round = 0; round <= space.size(); ++round) {
    if (max_abs() <= tol) break;
    const auto path = find_layered_path(space, work, tol);
    if (!path || path->flow <= tol) break;
    const Matching m = path->matching();
    const auto embedded = embed(space, m);
    bool dipped = false;
    for (std::size_t c = 0; c < work.size(); ++c) {
      if (embedded[c] == 0.0) continue;
      work[c] -= path->flow * embedded[c];
      rep.min_dip = std::min(rep.min_dip, work[c]);
      if (work[c] < -1e-9) dipped = true;
    }
    auto same = std::find_if(rep.parts.begin(), rep.parts.end(), [&](const auto& p) { return p.matching == m; });
    if (same != rep.parts.end()) same->weight += path->flow;
    else rep.parts.push_back({m, path->flow, inst ? std::optional(evaluate(*inst, m)) : std::nullopt});
    rep.weight_sum += path->flow;
    if (dipped) break;
  }
  rep.residual = max_abs();
  rep.verdict = rep.residual <= tol && std::abs(rep.weight_sum - 1.0) <= tol && rep.min_dip >= -1e-9
                    ? DecompositionVerdict::Decomposed
                    : DecompositionVerdict::ResidualStuck;
  return rep;
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::ClaimConsistent: return "claim-consistent";
    case Classification::GapFound: return "gap-found";
    case Classification::NonintegralVertex: return "nonintegral-vertex";
    case Classification::DecompositionFailed: return "decomposition-failed";
  }
  return "unknown";
}

Classification parse_classification(std::string_view text) {
  for (auto c : {Classification::ClaimConsistent, Classification::GapFound, Classification::NonintegralVertex,
                 Classification::DecompositionFailed})
    if (to_string(c) == text) return c;
  throw std::invalid_argument("unknown classification: " + std::string(text));
}

ClaimAudit audit(const QapInstance& inst, const VariableSpace& space, const LpSolution& sol,
                 const std::optional<OptimumResult>& oracle, const AuditOptions& opts) {
  if (sol.status != LpStatus::Optimal) throw std::invalid_argument("audit needs an optimal solution");
  if (inst.n() != space.n()) throw std::invalid_argument("instance and variable space sizes differ");
  ClaimAudit a;
  a.lp_value = sol.objective;
  if (oracle) {
    a.oracle_value = oracle->value;
    a.oracle_matching = oracle->matching;
    a.abs_gap = oracle->value - sol.objective;
    a.rel_gap = *a.abs_gap / std::max(1.0, std::abs(oracle->value));
  }
  a.is_vertex = !sol.basis.empty();
  a.integral = vertex_is_integral(sol.x, opts.integrality_tol);
  a.decomposition = decompose(space, sol.x, opts.support_tol, &inst);
  for (const auto& p : a.decomposition.parts) a.weighted_value += p.weight * p.value.value_or(0.0);

  if (a.rel_gap && *a.rel_gap > opts.gap_tol) a.classification = Classification::GapFound;
  else if (a.is_vertex && !a.integral) a.classification = Classification::NonintegralVertex;
  else if (a.decomposition.verdict != DecompositionVerdict::Decomposed) a.classification = Classification::DecompositionFailed;
  else a.classification = Classification::ClaimConsistent;
  return a;
}

}  // namespace qaplp
