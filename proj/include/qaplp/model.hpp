#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qaplp/indexer.hpp"
#include "qaplp/instance.hpp"

namespace qaplp {

/// Constraint families of the lifted model. F10a..F10e are the optional
/// valid equalities (diagonal/pair and pair/triple marginal ties).
enum class RowFamily { F1, F2, F3, F4, F5, F6, F7, F8, F9, F10a, F10b, F10c, F10d, F10e, Other };

inline constexpr std::size_t kRowFamilyCount = 15;

std::string_view to_string(RowFamily family);
/// Family from a canonical row name prefix (`F5_...` -> F5); Other otherwise.
RowFamily row_family_from_name(std::string_view row_name);

struct ModelOptions {
  bool valid_cuts = true;
};

/// Equality-constrained LP: min cost.x subject to A x = rhs, x >= 0.
/// Rows are stored compressed (CSR), entries sorted by column.
struct SparseModel {
  std::string name;
  std::vector<std::string> col_names;
  std::vector<double> cost;
  std::vector<std::string> row_names;
  std::vector<RowFamily> row_family;
  std::vector<double> rhs;
  std::vector<std::size_t> row_start{0};
  std::vector<int> entry_col;
  std::vector<double> entry_value;

  std::size_t rows() const { return rhs.size(); }
  std::size_t cols() const { return cost.size(); }
  std::size_t nnz() const { return entry_col.size(); }

  std::span<const int> row_cols(std::size_t row) const {
    return {entry_col.data() + row_start[row], row_start[row + 1] - row_start[row]};
  }
  std::span<const double> row_values(std::size_t row) const {
    return {entry_value.data() + row_start[row], row_start[row + 1] - row_start[row]};
  }

  /// Appends a row; duplicate columns are merged and zero coefficients dropped.
  /// Empty rows are not stored (returns false).
  bool add_row(std::string row_name, RowFamily family, double row_rhs, std::vector<std::pair<int, double>> entries);

  std::array<std::size_t, kRowFamilyCount> family_counts() const;
  std::size_t footprint_bytes() const;

  friend bool operator==(const SparseModel&, const SparseModel&) = default;
};

/// o_ir + f_ij d_{r,r+1} + f_ji d_{r+1,r}, plus o_{j,n} on the last stage.
double cost_c(const QapInstance& inst, Facility i, int stage, Facility j);

/// Objective coefficient of every column of `space`.
std::vector<double> cost_vector(const QapInstance& inst, const VariableSpace& space);

SparseModel build_model(const QapInstance& inst, const VariableSpace& space, const ModelOptions& opts = {});

/// 0/1 vector of the matching's lifted representation.
using EmbeddedSolution = std::vector<double>;
EmbeddedSolution embed(const VariableSpace& space, const Matching& m);

double objective_value(const SparseModel& model, std::span<const double> x);

/// A x - rhs, accumulated in long double.
std::vector<double> row_residuals(const SparseModel& model, std::span<const double> x);
double max_abs_residual(const SparseModel& model, std::span<const double> x);
/// Exact residual for integral points; requires integral coefficients and rhs.
std::int64_t max_integer_residual(const SparseModel& model, std::span<const std::int64_t> x);

struct ModelShape {
  std::array<std::uint64_t, kRowFamilyCount> rows_per_family{};
  std::array<std::uint64_t, kRowFamilyCount> nnz_per_family{};
  SpaceCounts columns;

  std::uint64_t rows() const;
  std::uint64_t nnz() const;
};

inline constexpr int kMaxCountedN = 40;

/// Row and nonzero counts per family from closed-form combinatorics, without
/// building anything. Valid for n in [2, kMaxCountedN].
ModelShape count_model(int n, const ModelOptions& opts = {});

/// Bytes a built VariableSpace plus SparseModel occupies, from count_model.
std::uint64_t estimate_model_bytes(int n, const ModelOptions& opts = {});

}  // namespace qaplp
