#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qaplp {

/// One basis column in sparse form.
struct ColumnView {
  std::span<const int> rows;
  std::span<const double> values;
};

/// Sparse LU factorization of a square basis matrix (Markowitz pivoting with a
/// relative threshold), followed by product-form eta updates.
class BasisFactor {
 public:
  struct Status {
    bool complete = true;
    /// Basis positions whose column was dependent on the others.
    std::vector<int> singular_positions;
    /// Rows left without a pivot; same length as singular_positions.
    std::vector<int> unpivoted_rows;
  };

  /// Threshold: candidate pivots must be at least this fraction of the
  /// largest magnitude in their column. Entries below `drop_tol` count as zero.
  explicit BasisFactor(double threshold = 0.1, double drop_tol = 1e-11)
      : threshold_(threshold), drop_tol_(drop_tol) {}

  Status factor(int dim, std::span<const ColumnView> columns);

  /// In place: row-indexed right-hand side becomes position-indexed B^{-1} x.
  void ftran(std::vector<double>& x) const;
  /// In place: position-indexed vector becomes row-indexed B^{-T} y.
  void btran(std::vector<double>& y) const;

  /// Basis position `position` replaced by a column whose FTRAN image is alpha.
  void update(int position, const std::vector<double>& alpha);

  std::size_t updates() const { return etas_.size(); }
  std::size_t factor_nonzeros() const;
  int dim() const { return dim_; }

 private:
  struct Step {
    int row = 0;
    int position = 0;
    double pivot = 1.0;
    std::vector<std::pair<int, double>> lower;  // (row, multiplier)
    std::vector<std::pair<int, double>> upper;  // (position, value)
  };
  struct Eta {
    int position = 0;
    double pivot = 1.0;
    std::vector<std::pair<int, double>> entries;  // excludes the pivot
  };

  double threshold_;
  double drop_tol_;
  int dim_ = 0;
  std::vector<Step> steps_;
  std::vector<Eta> etas_;
  mutable std::vector<double> work_;
};

}  // namespace qaplp
