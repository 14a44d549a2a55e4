#include "qaplp/lu.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qaplp {

namespace {

// Doubly linked lists of indices bucketed by their current count.
class CountBuckets {
 public:
  explicit CountBuckets(int size)
      : head_(static_cast<std::size_t>(size) + 2, -1),
        next_(static_cast<std::size_t>(size), -1),
        prev_(static_cast<std::size_t>(size), -1),
        count_(static_cast<std::size_t>(size), -1) {}

  void insert(int item, int count) {
    count_[idx(item)] = count;
    prev_[idx(item)] = -1;
    next_[idx(item)] = head_[idx(count)];
    if (head_[idx(count)] >= 0) prev_[idx(head_[idx(count)])] = item;
    head_[idx(count)] = item;
  }

  void remove(int item) {
    const int c = count_[idx(item)];
    if (c < 0) return;
    if (prev_[idx(item)] >= 0) next_[idx(prev_[idx(item)])] = next_[idx(item)];
    else head_[idx(c)] = next_[idx(item)];
    if (next_[idx(item)] >= 0) prev_[idx(next_[idx(item)])] = prev_[idx(item)];
    count_[idx(item)] = -1;
  }

  void move(int item, int count) {
    if (count_[idx(item)] == count) return;
    remove(item);
    insert(item, count);
  }

  int first(int count) const { return head_[idx(count)]; }
  int next(int item) const { return next_[idx(item)]; }
  int max_count() const { return static_cast<int>(head_.size()) - 1; }

 private:
  static std::size_t idx(int v) { return static_cast<std::size_t>(v); }
  std::vector<int> head_, next_, prev_, count_;
};

// Active submatrix during elimination. Columns carry values, rows only the
// pattern; both are kept exact as pivots remove entries.
struct ActiveMatrix {
  std::vector<std::vector<std::pair<int, double>>> col;
  std::vector<std::vector<int>> row;
  std::vector<bool> row_active, col_active;
  CountBuckets col_buckets, row_buckets;
  int active_cols;

  explicit ActiveMatrix(int dim)
      : col(static_cast<std::size_t>(dim)),
        row(static_cast<std::size_t>(dim)),
        row_active(static_cast<std::size_t>(dim), true),
        col_active(static_cast<std::size_t>(dim), true),
        col_buckets(dim),
        row_buckets(dim),
        active_cols(dim) {}

  int col_count(int j) const { return static_cast<int>(col[static_cast<std::size_t>(j)].size()); }
  int row_count(int i) const { return static_cast<int>(row[static_cast<std::size_t>(i)].size()); }

  void recount_col(int j) {
    if (col_active[static_cast<std::size_t>(j)]) col_buckets.move(j, std::min(col_count(j), col_buckets.max_count()));
  }
  void recount_row(int i) {
    if (row_active[static_cast<std::size_t>(i)]) row_buckets.move(i, std::min(row_count(i), row_buckets.max_count()));
  }

  double col_max(int j) const {
    double m = 0.0;
    for (const auto& [i, v] : col[static_cast<std::size_t>(j)]) m = std::max(m, std::abs(v));
    return m;
  }

  double value(int i, int j) const {
    for (const auto& [r, v] : col[static_cast<std::size_t>(j)])
      if (r == i) return v;
    return 0.0;
  }

  void erase_from_col(int j, int i) {
    auto& c = col[static_cast<std::size_t>(j)];
    auto it = std::find_if(c.begin(), c.end(), [i](const auto& e) { return e.first == i; });
    if (it == c.end()) return;
    *it = c.back();
    c.pop_back();
    recount_col(j);
  }

  void erase_from_row(int i, int j) {
    auto& r = row[static_cast<std::size_t>(i)];
    auto it = std::find(r.begin(), r.end(), j);
    if (it == r.end()) return;
    *it = r.back();
    r.pop_back();
    recount_row(i);
  }

  void retire_col(int j) {
    col_buckets.remove(j);
    col_active[static_cast<std::size_t>(j)] = false;
    --active_cols;
    for (const auto& [i, v] : col[static_cast<std::size_t>(j)]) erase_from_row(i, j);
    col[static_cast<std::size_t>(j)].clear();
  }

  void retire_row(int i) {
    row_buckets.remove(i);
    row_active[static_cast<std::size_t>(i)] = false;
    row[static_cast<std::size_t>(i)].clear();
  }
};

}  // namespace

BasisFactor::Status BasisFactor::factor(int dim, std::span<const ColumnView> columns) {
  if (dim < 0 || columns.size() != static_cast<std::size_t>(dim))
    throw std::invalid_argument("basis must be square");
  dim_ = dim;
  steps_.clear();
  etas_.clear();
  work_.assign(static_cast<std::size_t>(dim), 0.0);

  ActiveMatrix a(dim);
  for (int j = 0; j < dim; ++j) {
    const auto& cv = columns[static_cast<std::size_t>(j)];
    if (cv.rows.size() != cv.values.size()) throw std::invalid_argument("column view size mismatch");
    for (std::size_t k = 0; k < cv.rows.size(); ++k) {
      const int i = cv.rows[k];
      if (i < 0 || i >= dim) throw std::out_of_range("basis row index");
      if (std::abs(cv.values[k]) <= drop_tol_) continue;
      a.col[static_cast<std::size_t>(j)].emplace_back(i, cv.values[k]);
      a.row[static_cast<std::size_t>(i)].push_back(j);
    }
  }
  for (int j = dim; j-- > 0;) a.col_buckets.insert(j, a.col_count(j));
  for (int i = dim; i-- > 0;) a.row_buckets.insert(i, a.row_count(i));

  Status status;
  std::vector<int> scatter(static_cast<std::size_t>(dim), -1);

  auto eliminate = [&](int p, int q) {
    Step step;
    step.row = p;
    step.position = q;
    step.pivot = a.value(p, q);

    // U row: remaining entries of row p.
    std::vector<int> row_cols = a.row[static_cast<std::size_t>(p)];
    for (int j : row_cols) {
      if (j == q) continue;
      step.upper.emplace_back(j, a.value(p, j));
      a.erase_from_col(j, p);
    }
    // L column: multipliers from column q.
    for (const auto& [i, v] : a.col[static_cast<std::size_t>(q)]) {
      if (i == p) continue;
      step.lower.emplace_back(i, v / step.pivot);
    }
    a.retire_col(q);
    a.retire_row(p);

    // Schur complement update, column by column.
    for (const auto& [j, upj] : step.upper) {
      auto& c = a.col[static_cast<std::size_t>(j)];
      for (std::size_t k = 0; k < c.size(); ++k) scatter[static_cast<std::size_t>(c[k].first)] = static_cast<int>(k);
      for (const auto& [i, l] : step.lower) {
        const int slot = scatter[static_cast<std::size_t>(i)];
        if (slot >= 0) {
          c[static_cast<std::size_t>(slot)].second -= l * upj;
        } else {
          scatter[static_cast<std::size_t>(i)] = static_cast<int>(c.size());
          c.emplace_back(i, -l * upj);
          a.row[static_cast<std::size_t>(i)].push_back(j);
          a.recount_row(i);
        }
      }
      for (const auto& e : c) scatter[static_cast<std::size_t>(e.first)] = -1;
      // Cancellation to (near) zero: drop the entry from the pattern.
      for (std::size_t k = 0; k < c.size();) {
        if (std::abs(c[k].second) <= drop_tol_) {
          const int i = c[k].first;
          c[k] = c.back();
          c.pop_back();
          a.erase_from_row(i, j);
        } else {
          ++k;
        }
      }
      a.recount_col(j);
    }
    steps_.push_back(std::move(step));
  };

  auto drop_singular = [&](int j) {
    status.complete = false;
    status.singular_positions.push_back(j);
    a.retire_col(j);
  };

  while (a.active_cols > 0) {
    if (int j = a.col_buckets.first(0); j >= 0) {
      drop_singular(j);
      continue;
    }
    if (int j = a.col_buckets.first(1); j >= 0) {
      eliminate(a.col[static_cast<std::size_t>(j)].front().first, j);
      continue;
    }
    // Row singleton whose entry passes the threshold test.
    bool done = false;
    for (int i = a.row_buckets.first(1); i >= 0; i = a.row_buckets.next(i)) {
      const int j = a.row[static_cast<std::size_t>(i)].front();
      if (std::abs(a.value(i, j)) >= threshold_ * a.col_max(j)) {
        eliminate(i, j);
        done = true;
        break;
      }
    }
    if (done) continue;

    // Markowitz search over the sparsest few columns.
    long best_cost = -1;
    int best_i = -1, best_j = -1;
    double best_abs = 0.0;
    int searched = 0;
    std::vector<int> tiny;
    for (int count = 2; count <= a.col_buckets.max_count() && searched < 4; ++count)
      for (int j = a.col_buckets.first(count); j >= 0 && searched < 4; j = a.col_buckets.next(j)) {
        const double cmax = a.col_max(j);
        if (cmax <= 1e-9) {
          tiny.push_back(j);
          continue;
        }
        ++searched;
        const long cc = a.col_count(j) - 1;
        for (const auto& [i, v] : a.col[static_cast<std::size_t>(j)]) {
          const double av = std::abs(v);
          if (av < threshold_ * cmax) continue;
          const long cost = cc * (a.row_count(i) - 1);
          if (best_cost < 0 || cost < best_cost || (cost == best_cost && av > best_abs)) {
            best_cost = cost;
            best_i = i;
            best_j = j;
            best_abs = av;
          }
        }
      }
    for (int j : tiny) drop_singular(j);
    if (best_j >= 0) eliminate(best_i, best_j);
  }

  if (!status.complete) {
    for (int i = 0; i < dim; ++i)
      if (a.row_active[static_cast<std::size_t>(i)]) status.unpivoted_rows.push_back(i);
    std::sort(status.singular_positions.begin(), status.singular_positions.end());
  }
  return status;
}

void BasisFactor::ftran(std::vector<double>& x) const {
  if (x.size() != static_cast<std::size_t>(dim_)) throw std::invalid_argument("ftran dimension");
  for (const Step& s : steps_) {
    const double xp = x[static_cast<std::size_t>(s.row)];
    if (xp == 0.0) continue;
    for (const auto& [i, l] : s.lower) x[static_cast<std::size_t>(i)] -= l * xp;
  }
  auto& out = work_;
  for (auto k = steps_.size(); k-- > 0;) {
    const Step& s = steps_[k];
    double v = x[static_cast<std::size_t>(s.row)];
    for (const auto& [j, u] : s.upper) v -= u * out[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(s.position)] = v / s.pivot;
  }
  x.swap(out);
  for (const Eta& e : etas_) {
    const double xr = x[static_cast<std::size_t>(e.position)] / e.pivot;
    x[static_cast<std::size_t>(e.position)] = xr;
    if (xr == 0.0) continue;
    for (const auto& [i, v] : e.entries) x[static_cast<std::size_t>(i)] -= v * xr;
  }
}

void BasisFactor::btran(std::vector<double>& y) const {
  if (y.size() != static_cast<std::size_t>(dim_)) throw std::invalid_argument("btran dimension");
  for (auto k = etas_.size(); k-- > 0;) {
    const Eta& e = etas_[k];
    double v = y[static_cast<std::size_t>(e.position)];
    for (const auto& [i, a] : e.entries) v -= a * y[static_cast<std::size_t>(i)];
    y[static_cast<std::size_t>(e.position)] = v / e.pivot;
  }
  auto& w = work_;
  for (const Step& s : steps_) {
    const double wp = y[static_cast<std::size_t>(s.position)] / s.pivot;
    w[static_cast<std::size_t>(s.row)] = wp;
    if (wp == 0.0) continue;
    for (const auto& [j, u] : s.upper) y[static_cast<std::size_t>(j)] -= u * wp;
  }
  for (auto k = steps_.size(); k-- > 0;) {
    const Step& s = steps_[k];
    double v = w[static_cast<std::size_t>(s.row)];
    for (const auto& [i, l] : s.lower) v -= l * w[static_cast<std::size_t>(i)];
    w[static_cast<std::size_t>(s.row)] = v;
  }
  y.swap(w);
}

void BasisFactor::update(int position, const std::vector<double>& alpha) {
  if (alpha.size() != static_cast<std::size_t>(dim_)) throw std::invalid_argument("eta dimension");
  Eta e;
  e.position = position;
  e.pivot = alpha[static_cast<std::size_t>(position)];
  if (e.pivot == 0.0) throw std::domain_error("zero pivot in basis update");
  for (int i = 0; i < dim_; ++i)
    if (i != position && alpha[static_cast<std::size_t>(i)] != 0.0) e.entries.emplace_back(i, alpha[static_cast<std::size_t>(i)]);
  etas_.push_back(std::move(e));
}

std::size_t BasisFactor::factor_nonzeros() const {
  std::size_t total = 0;
  for (const Step& s : steps_) total += 1 + s.lower.size() + s.upper.size();
  for (const Eta& e : etas_) total += 1 + e.entries.size();
  return total;
}

}  // namespace qaplp
