#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qaplp/indexer.hpp"
#include "qaplp/instance.hpp"
#include "qaplp/model.hpp"
#include "qaplp/simplex.hpp"

namespace qaplp {

inline constexpr double kSupportTol = 1e-7;

/// Arcs carrying flow, stage by stage.
struct SupportGraph {
  struct Stage {
    std::vector<Arc> arcs;          // X_r, lexicographic
    std::vector<Facility> tails;    // N_r: distinct tails of X_r
    double mass = 0.0;              // sum of diagonal values at the stage
  };
  std::vector<Stage> stages;

  int arc_count(int stage) const { return static_cast<int>(stages.at(static_cast<std::size_t>(stage)).arcs.size()); }
};

SupportGraph support_graph(const VariableSpace& space, std::span<const double> x, double tol = kSupportTol);

/// One arc per stage, chained head to tail through distinct facilities.
struct LayeredPath {
  std::vector<Facility> facilities;  // facility at each site
  double flow = 0.0;

  Matching matching() const { return Matching(facilities); }
  Arc arc(int stage) const {
    return {facilities[static_cast<std::size_t>(stage)], stage, facilities[static_cast<std::size_t>(stage) + 1]};
  }
};

/// Depth-first search in stage-major lexicographic arc order; every pair
/// variable along the partial path must exceed `tol`.
std::optional<LayeredPath> find_layered_path(const VariableSpace& space, std::span<const double> x, double tol = kSupportTol);

/// Smallest pair value along the path (the diagonal value when n = 2).
double flow_value(const VariableSpace& space, std::span<const double> x, const LayeredPath& path);

enum class DecompositionVerdict { Decomposed, ResidualStuck };
std::string_view to_string(DecompositionVerdict verdict);
DecompositionVerdict parse_decomposition_verdict(std::string_view text);

struct DecompositionReport {
  struct Part {
    Matching matching;
    double weight = 0.0;
    std::optional<double> value;  // evaluate(inst, matching) when an instance is given
  };
  std::vector<Part> parts;
  double residual = 0.0;     // max |remaining value| over all variables
  double weight_sum = 0.0;
  double min_dip = 0.0;      // most negative entry produced by a subtraction
  DecompositionVerdict verdict = DecompositionVerdict::ResidualStuck;

  std::size_t distinct_matchings() const { return parts.size(); }
};

DecompositionReport decompose(const VariableSpace& space, std::span<const double> x, double tol = kSupportTol,
                              const QapInstance* inst = nullptr);

enum class Classification { ClaimConsistent, GapFound, NonintegralVertex, DecompositionFailed };
std::string_view to_string(Classification c);
Classification parse_classification(std::string_view text);

struct AuditOptions {
  double support_tol = kSupportTol;
  double integrality_tol = 1e-6;
  /// Relative tolerance, scaled by max(1, |oracle|), before a gap counts.
  double gap_tol = 1e-6;
};

struct ClaimAudit {
  double lp_value = 0.0;
  std::optional<double> oracle_value;
  std::optional<Matching> oracle_matching;
  std::optional<double> abs_gap;
  std::optional<double> rel_gap;
  bool is_vertex = false;   // the solution came with a basis
  bool integral = false;
  DecompositionReport decomposition;
  /// sum of weight * evaluate over the decomposition
  double weighted_value = 0.0;
  Classification classification = Classification::ClaimConsistent;
};

/// Gap first, then a fractional basic solution, then a stuck decomposition.
ClaimAudit audit(const QapInstance& inst, const VariableSpace& space, const LpSolution& sol,
                 const std::optional<OptimumResult>& oracle, const AuditOptions& opts = {});

}  // namespace qaplp
