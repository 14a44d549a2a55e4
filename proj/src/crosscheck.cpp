#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qaplp/mps.hpp"
#include "qaplp/simplex.hpp"

namespace qaplp {

CrossCheck compare_objectives(double internal, double external, double rel_tol) {
  CrossCheck out;
  out.internal = internal;
  out.external = external;
  out.abs_diff = std::abs(internal - external);
  out.rel_diff = out.abs_diff / std::max({1.0, std::abs(internal), std::abs(external)});
  out.agree = out.rel_diff <= rel_tol;
  return out;
}

CrossCheck external_cross_check(const std::string& mps_path, std::optional<double> external_objective,
                                const SimplexOptions& opts, double rel_tol) {
  if (!external_objective) throw std::invalid_argument("external objective value is required");
  const auto model = import_mps(mps_path);
  const auto sol = solve(model, opts);
  if (sol.status != LpStatus::Optimal)
    throw std::runtime_error("internal solve of " + mps_path + " ended " + std::string(to_string(sol.status)));
  return compare_objectives(sol.objective, *external_objective, rel_tol);
}

}  // namespace qaplp
