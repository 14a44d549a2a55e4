#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qaplp/model.hpp"

namespace qaplp {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit, NumericalFailure };
std::string_view to_string(LpStatus status);
LpStatus parse_lp_status(std::string_view text);

/// Primal: revised simplex on the model itself. Dual: revised simplex on the
/// dual, with the primal solution and basis recovered from its optimal basis.
enum class SolveForm { Primal, Dual };
enum class PricingRule { Devex, Bland };

std::string_view to_string(SolveForm form);
std::string_view to_string(PricingRule rule);
SolveForm parse_solve_form(std::string_view text);
PricingRule parse_pricing_rule(std::string_view text);

struct SimplexOptions {
  SolveForm form = SolveForm::Dual;
  PricingRule pricing = PricingRule::Devex;
  double pivot_tol = 1e-9;
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-7;
  std::int64_t iteration_limit = 2'000'000;
  int refactor_interval = 50;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  int degenerate_switch = 1000;
  /// Called every `progress_every` iterations with (iterations, phase, objective).
  std::function<void(std::int64_t, int, double)> progress;
  int progress_every = 0;
};

struct LpSolution {
  LpStatus status = LpStatus::NumericalFailure;
  SolveForm form = SolveForm::Dual;
  std::vector<double> x;
  double objective = 0.0;
  /// One entry per row: a column index, or cols() + r for the artificial of row r.
  std::vector<int> basis;
  std::int64_t iterations = 0;
  std::int64_t phase1_iterations = 0;
  std::int64_t bland_pivots = 0;
  std::int64_t degenerate_pivots = 0;
  int refactorizations = 0;
  double wall_seconds = 0.0;
};

LpSolution solve(const SparseModel& model, const SimplexOptions& opts = {});

/// Peak bytes of build_space + build_model + solve at this n, form and cut
/// setting, from closed-form counts.
std::uint64_t estimate_solve_bytes(int n, SolveForm form, const ModelOptions& model_opts = {});

/// Independent check of a solution, in long double. When the solution carries
/// a basis, duals are recomputed from a fresh factorization and reduced costs
/// of all nonbasic columns are checked.
struct VerifyReport {
  double max_residual = 0.0;
  double min_value = 0.0;
  double objective_error = 0.0;
  bool basis_checked = false;
  bool basis_nonsingular = false;
  double min_reduced_cost = 0.0;

  bool passed(double tol = 1e-7) const;
};

VerifyReport verify_solution(const SparseModel& model, const LpSolution& solution);

bool vertex_is_integral(std::span<const double> x, double tol = 1e-6);

struct CrossCheck {
  double internal = 0.0;
  double external = 0.0;
  double abs_diff = 0.0;
  double rel_diff = 0.0;
  bool agree = false;
};

/// Relative difference is scaled by max(1, |internal|, |external|).
CrossCheck compare_objectives(double internal, double external, double rel_tol = 1e-6);

/// Solves the MPS file internally and compares with an objective obtained from
/// an external solver. Throws if the external value is missing.
CrossCheck external_cross_check(const std::string& mps_path, std::optional<double> external_objective,
                                const SimplexOptions& opts = {}, double rel_tol = 1e-6);

}  // namespace qaplp
