#include <cmath>
#include <stdexcept>

#include "qaplp/indexer.hpp"
#include "qaplp/model.hpp"

namespace qaplp {

double fitted_exponent(const std::vector<int>& ns, const std::vector<double>& counts) {
  if (ns.size() != counts.size() || ns.size() < 2) throw std::invalid_argument("fitted_exponent needs >= 2 points");
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    mx += std::log(static_cast<double>(ns[k]));
    my += std::log(counts[k]);
  }
  mx /= static_cast<double>(ns.size());
  my /= static_cast<double>(ns.size());
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    const double dx = std::log(static_cast<double>(ns[k])) - mx;
    sxy += dx * (std::log(counts[k]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

int polynomial_degree(const std::vector<std::uint64_t>& consecutive_counts) {
  std::vector<__int128> diff(consecutive_counts.begin(), consecutive_counts.end());
  for (int order = 0; diff.size() >= 2; ++order) {
    bool all_zero = true;
    for (auto v : diff) all_zero = all_zero && v == 0;
    if (all_zero) return order - 1;
    std::vector<__int128> next(diff.size() - 1);
    for (std::size_t k = 0; k + 1 < diff.size(); ++k) next[k] = diff[k + 1] - diff[k];
    diff = std::move(next);
  }
  return -1;
}

GrowthReport growth_report(const std::vector<int>& n_list) {
  GrowthReport report;
  std::vector<double> triples, vars, rows_off, rows_on;
  for (int n : n_list) {
    if (n < 2) throw std::invalid_argument("growth_report needs n >= 2");
    GrowthRow row{n, count_space(n), count_model(n, {.valid_cuts = false}).rows(),
                  count_model(n, {.valid_cuts = true}).rows()};
    triples.push_back(static_cast<double>(row.variables.triple));
    vars.push_back(static_cast<double>(row.variables.total()));
    rows_off.push_back(static_cast<double>(row.rows_without_cuts));
    rows_on.push_back(static_cast<double>(row.rows_with_cuts));
    report.rows.push_back(row);
  }
  if (n_list.size() >= 2) {
    if (triples.front() > 0) report.triple_exponent = fitted_exponent(n_list, triples);
    report.variable_exponent = fitted_exponent(n_list, vars);
    report.row_exponent_without_cuts = fitted_exponent(n_list, rows_off);
    report.row_exponent_with_cuts = fitted_exponent(n_list, rows_on);
  }

  // the counts are polynomials in n once every stage pattern occurs
  constexpr int kFirst = 8, kPoints = 16;
  std::vector<std::uint64_t> v, off, on;
  for (int n = kFirst; n < kFirst + kPoints; ++n) {
    v.push_back(count_space(n).total());
    off.push_back(count_model(n, {.valid_cuts = false}).rows());
    on.push_back(count_model(n, {.valid_cuts = true}).rows());
  }
  report.variable_degree = polynomial_degree(v);
  report.row_degree_without_cuts = polynomial_degree(off);
  report.row_degree_with_cuts = polynomial_degree(on);
  return report;
}

}  // namespace qaplp
