#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qaplp {

/// Facility and site indices are 0-based internally and 1-based in every
/// external rendering (files, names, matchings).
using Facility = int;
using Site = int;

/// Square non-negative matrix stored row-major.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int n, double fill = 0.0) : n_(n), data_(static_cast<std::size_t>(n) * n, fill) {}

  int size() const { return n_; }
  double operator()(int row, int col) const { return data_[static_cast<std::size_t>(row) * n_ + col]; }
  double& operator()(int row, int col) { return data_[static_cast<std::size_t>(row) * n_ + col]; }
  std::span<const double> values() const { return data_; }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  int n_ = 0;
  std::vector<double> data_;
};

/// Facility traffic f, site distance d and operating cost o of one QAP
/// instance. Immutable once constructed.
class QapInstance {
 public:
  QapInstance(SquareMatrix traffic, SquareMatrix distance, SquareMatrix opcost);

  int n() const { return n_; }
  const SquareMatrix& traffic() const { return traffic_; }
  const SquareMatrix& distance() const { return distance_; }
  const SquareMatrix& opcost() const { return opcost_; }

  friend bool operator==(const QapInstance&, const QapInstance&) = default;

 private:
  int n_;
  SquareMatrix traffic_;
  SquareMatrix distance_;
  SquareMatrix opcost_;
};

/// A perfect facility/site assignment: facility_at(t) is the facility placed
/// on site t.
class Matching {
 public:
  explicit Matching(std::vector<Facility> assign);

  static Matching identity(int n);

  int size() const { return static_cast<int>(assign_.size()); }
  Facility facility_at(Site t) const { return assign_[static_cast<std::size_t>(t)]; }
  std::span<const Facility> assignment() const { return assign_; }

  /// w_ir = 1 iff facility i sits on site r.
  bool assigned(Facility i, Site r) const { return assign_[static_cast<std::size_t>(r)] == i; }

  /// `(3 1 4 2)`, 1-based.
  std::string to_string() const;
  static Matching parse(const std::string& text);

  friend bool operator==(const Matching&, const Matching&) = default;
  friend auto operator<=>(const Matching&, const Matching&) = default;

 private:
  std::vector<Facility> assign_;
};

/// h_irjs = f_ij d_rs + f_ji d_sr. Requires i != j and r != s.
double handling_cost(const QapInstance& inst, Facility i, Site r, Facility j, Site s);

/// One handling term per unordered site pair plus the operating costs.
double evaluate(const QapInstance& inst, const Matching& m);

struct OptimumResult {
  Matching matching;
  double value;
};

inline constexpr int kDefaultEnumerationLimit = 9;

/// Exhaustive minimum over all n! matchings; ties go to the lexicographically
/// smallest assignment.
OptimumResult brute_force_optimum(const QapInstance& inst, int enumeration_limit = kDefaultEnumerationLimit);

enum class CostMode { NoOpcost, WithOpcost };

std::string to_string(CostMode mode);
CostMode parse_cost_mode(const std::string& text);

/// PCG32 (XSH-RR output over a 64-bit LCG state). Portable and bit-stable.
class Pcg32 {
 public:
  static constexpr const char* kName = "pcg32-xsh-rr";

  explicit Pcg32(std::uint64_t seed, std::uint64_t stream = 54u);

  std::uint32_t next();
  /// Unbiased integer uniformly drawn from [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

 private:
  std::uint64_t state_ = 0;
  std::uint64_t inc_ = 0;
};

struct RandomRanges {
  int traffic_lo = 10, traffic_hi = 250;
  int distance_lo = 1, distance_hi = 30;
  int opcost_lo = 0, opcost_hi = 5000;
};

/// Integer draws on the inclusive ranges, independently per ordered pair,
/// diagonals zero. With `symmetric`, distance[s][r] mirrors distance[r][s].
QapInstance generate_random(int n, CostMode mode, std::uint64_t seed, bool symmetric = false,
                            const RandomRanges& ranges = {});

/// traffic == f0 and distance == d0 off the diagonal, no operating costs.
QapInstance make_uniform(int n, double f0, double d0);

/// Reads `n` followed by either three n x n blocks (traffic, distance,
/// opcost) or the two-matrix QAPLIB layout. `#` starts a comment.
QapInstance read_instance(std::istream& in);
QapInstance read_instance_file(const std::string& path);

/// Writes the three-block layout; `metadata` lines are appended as comments.
void write_instance(std::ostream& out, const QapInstance& inst, const std::vector<std::string>& metadata = {});
void write_instance_file(const std::string& path, const QapInstance& inst,
                         const std::vector<std::string>& metadata = {});

}  // namespace qaplp
