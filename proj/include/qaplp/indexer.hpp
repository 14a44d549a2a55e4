#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "qaplp/instance.hpp"

namespace qaplp {

/// Arc (tail, stage, head) of the multipartite graph: facility `tail` sits on
/// site `stage` and facility `head` on site `stage + 1`. Stages run over
/// 0..n-2 internally.
struct Arc {
  Facility tail = 0;
  int stage = 0;
  Facility head = 0;

  friend bool operator==(const Arc&, const Arc&) = default;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

/// Flow on `first` subsequently flows on `second`; first.stage < second.stage.
struct ArcPair {
  Arc first;
  Arc second;

  friend bool operator==(const ArcPair&, const ArcPair&) = default;
  friend auto operator<=>(const ArcPair&, const ArcPair&) = default;
};

/// Arcs at three increasing stages.
struct ArcTriple {
  Arc first;
  Arc second;
  Arc third;

  friend bool operator==(const ArcTriple&, const ArcTriple&) = default;
  friend auto operator<=>(const ArcTriple&, const ArcTriple&) = default;
};

enum class VarFamily { Diagonal, Pair, Triple };

/// Largest n the packed column keys can address.
inline constexpr int kMaxIndexedN = 15;

/// Level-at-position assertions of the arcs form a partial injection: no site
/// holds two facilities and no facility occupies two sites. Throws unless
/// a.stage < b.stage.
bool pair_admissible(const Arc& a, const Arc& b);
bool triple_admissible(const Arc& a, const Arc& b, const Arc& c);

/// Number of distinct sites touched by arcs at the given stages.
int sites_covered(std::initializer_list<int> stages);

/// n (n-1) ... (n-q+1).
std::uint64_t falling_factorial(int n, int q);

struct SpaceCounts {
  std::uint64_t diagonal = 0;
  std::uint64_t pair = 0;
  std::uint64_t triple = 0;
  std::uint64_t total() const { return diagonal + pair + triple; }
};

/// Closed-form family sizes; no enumeration, any n >= 2.
SpaceCounts count_space(int n);

/// Every admissible column of the lifted formulation, family-major and then
/// lexicographic by index tuple. Immutable once built.
class VariableSpace {
 public:
  explicit VariableSpace(int n);

  int n() const { return n_; }
  int stages() const { return n_ - 1; }

  std::size_t diagonal_count() const { return diag_keys_.size(); }
  std::size_t pair_count() const { return pair_keys_.size(); }
  std::size_t triple_count() const { return triple_keys_.size(); }
  std::size_t size() const { return diag_keys_.size() + pair_keys_.size() + triple_keys_.size(); }

  std::size_t pair_offset() const { return diag_keys_.size(); }
  std::size_t triple_offset() const { return diag_keys_.size() + pair_keys_.size(); }

  std::optional<int> index(const Arc& a) const;
  std::optional<int> index(const ArcPair& p) const;
  std::optional<int> index(const ArcTriple& t) const;

  VarFamily family(int column) const;
  Arc arc(int column) const;
  ArcPair pair(int column) const;
  ArcTriple triple(int column) const;

  /// `YD_i_r_j`, `YP_i_r_j_k_s_t` or `Z_u_p_v_i_r_j_k_s_t`, 1-based.
  std::string name(int column) const;

  std::size_t footprint_bytes() const;

 private:
  bool in_range(const Arc& a) const;

  int n_;
  std::vector<std::uint64_t> diag_keys_;
  std::vector<std::uint64_t> pair_keys_;
  std::vector<std::uint64_t> triple_keys_;
  std::vector<int> diag_lookup_;
};

VariableSpace build_space(int n);

struct GrowthRow {
  int n = 0;
  SpaceCounts variables;
  std::uint64_t rows_without_cuts = 0;
  std::uint64_t rows_with_cuts = 0;
};

struct GrowthReport {
  std::vector<GrowthRow> rows;
  /// Least-squares slope of log(count) against log(n) over the listed n.
  double triple_exponent = 0.0;
  double variable_exponent = 0.0;
  double row_exponent_without_cuts = 0.0;
  double row_exponent_with_cuts = 0.0;
  /// Exact polynomial degree of each count sequence, from finite differences
  /// over an extended range of n.
  int variable_degree = 0;
  int row_degree_without_cuts = 0;
  int row_degree_with_cuts = 0;
};

GrowthReport growth_report(const std::vector<int>& n_list);

/// Log-log least-squares slope.
double fitted_exponent(const std::vector<int>& ns, const std::vector<double>& counts);

/// Degree of the polynomial through count(n0), count(n0+1), ...
int polynomial_degree(const std::vector<std::uint64_t>& consecutive_counts);

}  // namespace qaplp
