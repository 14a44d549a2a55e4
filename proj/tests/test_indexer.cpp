#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "qaplp/indexer.hpp"
#include "qaplp/model.hpp"

using namespace qaplp;

namespace {

std::vector<Arc> all_arcs(int n) {
  std::vector<Arc> out;
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < n - 1; ++r)
      for (int j = 0; j < n; ++j)
        if (i != j) out.push_back({i, r, j});
  return out;
}

// Admissible tuples are exactly those some matching passes through.
struct InducedSets {
  std::set<ArcPair> pairs;
  std::set<ArcTriple> triples;
};

InducedSets induced_by_matchings(int n) {
  InducedSets out;
  std::vector<Facility> a(static_cast<std::size_t>(n));
  std::iota(a.begin(), a.end(), 0);
  do {
    auto arc = [&](int r) { return Arc{a[static_cast<std::size_t>(r)], r, a[static_cast<std::size_t>(r + 1)]}; };
    for (int r = 0; r < n - 1; ++r)
      for (int s = r + 1; s < n - 1; ++s) {
        out.pairs.insert({arc(r), arc(s)});
        for (int q = s + 1; q < n - 1; ++q) out.triples.insert({arc(r), arc(s), arc(q)});
      }
  } while (std::next_permutation(a.begin(), a.end()));
  return out;
}

}  // namespace

TEST_CASE("pair admissibility") {
  CHECK(pair_admissible({0, 0, 1}, {1, 1, 2}));
  CHECK_FALSE(pair_admissible({0, 0, 1}, {2, 1, 3}));
  CHECK_FALSE(pair_admissible({0, 0, 1}, {1, 1, 0}));
  CHECK(pair_admissible({0, 0, 1}, {2, 2, 3}));
  CHECK_FALSE(pair_admissible({0, 0, 1}, {2, 2, 0}));
  CHECK_THROWS_AS(pair_admissible({0, 1, 1}, {1, 1, 2}), std::invalid_argument);

  int count = 0;
  for (const Arc& a : all_arcs(3))
    for (const Arc& b : all_arcs(3))
      if (a.stage < b.stage && pair_admissible(a, b)) ++count;
  CHECK(count == 6);
}

TEST_CASE("triple admissibility") {
  CHECK_FALSE(triple_admissible({0, 0, 1}, {1, 1, 2}, {2, 2, 0}));
  CHECK(triple_admissible({0, 0, 1}, {1, 1, 2}, {2, 2, 3}));
  CHECK_THROWS_AS(triple_admissible({0, 0, 1}, {1, 2, 2}, {2, 1, 3}), std::invalid_argument);

  int count = 0;
  const auto arcs = all_arcs(4);
  for (const Arc& a : arcs)
    for (const Arc& b : arcs)
      for (const Arc& c : arcs)
        if (a.stage < b.stage && b.stage < c.stage && triple_admissible(a, b, c)) {
          ++count;
          CHECK(pair_admissible(a, b));
          CHECK(pair_admissible(a, c));
          CHECK(pair_admissible(b, c));
        }
  CHECK(count == 24);
  CHECK(build_space(3).triple_count() == 0);
}

TEST_CASE("variable space counts") {
  const auto s4 = build_space(4);
  CHECK(s4.diagonal_count() == 36);
  CHECK(s4.pair_count() == 72);
  CHECK(s4.triple_count() == 24);
  CHECK(build_space(6).diagonal_count() == 150);
  const auto s2 = build_space(2);
  CHECK(s2.diagonal_count() == 2);
  CHECK(s2.pair_count() == 0);
  CHECK(s2.triple_count() == 0);
  CHECK_THROWS_AS(build_space(1), std::invalid_argument);

  for (int n = 2; n <= 7; ++n) {
    const auto space = build_space(n);
    const auto closed = count_space(n);
    CHECK(space.diagonal_count() == closed.diagonal);
    CHECK(space.pair_count() == closed.pair);
    CHECK(space.triple_count() == closed.triple);
    const std::uint64_t nn = static_cast<std::uint64_t>(n);
    const std::uint64_t c2 = (nn - 1) * (nn - 2) / 2;
    const std::uint64_t adjacent = nn >= 3 ? (nn - 2) * nn * (nn - 1) * (nn - 2) : 0;
    const std::uint64_t gapped = nn >= 4 ? (c2 - (nn - 2)) * nn * (nn - 1) * (nn - 2) * (nn - 3) : 0;
    CHECK(closed.pair == adjacent + gapped);
    CHECK(closed.diagonal == nn * (nn - 1) * (nn - 1));
  }
}

TEST_CASE("admissible tuples are exactly the matching-induced ones") {
  for (int n = 2; n <= 5; ++n) {
    const auto space = build_space(n);
    const auto induced = induced_by_matchings(n);
    REQUIRE(space.pair_count() == induced.pairs.size());
    REQUIRE(space.triple_count() == induced.triples.size());
    for (const auto& p : induced.pairs) REQUIRE(space.index(p).has_value());
    for (const auto& t : induced.triples) REQUIRE(space.index(t).has_value());
  }
}

TEST_CASE("column order and round trips") {
  const auto space = build_space(5);
  for (std::size_t c = 0; c < space.size(); ++c) {
    const int col = static_cast<int>(c);
    switch (space.family(col)) {
      case VarFamily::Diagonal:
        REQUIRE(space.index(space.arc(col)) == col);
        if (c > 0) REQUIRE(space.arc(col - 1) < space.arc(col));
        break;
      case VarFamily::Pair:
        REQUIRE(space.index(space.pair(col)) == col);
        if (c > space.pair_offset()) REQUIRE(space.pair(col - 1) < space.pair(col));
        break;
      case VarFamily::Triple:
        REQUIRE(space.index(space.triple(col)) == col);
        if (c > space.triple_offset()) REQUIRE(space.triple(col - 1) < space.triple(col));
        break;
    }
  }
  CHECK(space.name(0) == "YD_1_1_2");
  CHECK(space.name(static_cast<int>(space.pair_offset())) == "YP_1_1_2_2_2_3");
  CHECK(space.name(static_cast<int>(space.triple_offset())) == "Z_1_1_2_2_2_3_3_3_4");
  CHECK_FALSE(space.index(Arc{1, 0, 1}).has_value());
  CHECK_FALSE(space.index(ArcPair{{0, 0, 1}, {2, 1, 3}}).has_value());
  CHECK_THROWS_AS(space.arc(static_cast<int>(space.pair_offset())), std::invalid_argument);
}

TEST_CASE("growth report") {
  const auto small = growth_report({4, 5, 6});
  REQUIRE(small.rows.size() == 3);
  for (std::size_t k = 1; k < small.rows.size(); ++k) {
    CHECK(small.rows[k].variables.total() > small.rows[k - 1].variables.total());
    CHECK(small.rows[k].rows_with_cuts > small.rows[k - 1].rows_with_cuts);
    CHECK(small.rows[k].rows_without_cuts > small.rows[k - 1].rows_without_cuts);
  }
  CHECK(small.variable_degree == 9);
  CHECK(small.row_degree_without_cuts == 7);
  CHECK(small.row_degree_with_cuts == 7);

  // successive ratios approach the degree-9 limit from above
  double previous_excess = 1e9;
  for (int n = 8; n <= 30; n += 2) {
    const double ratio = static_cast<double>(count_space(n).triple) / static_cast<double>(count_space(n - 1).triple);
    const double degree9 = std::pow(static_cast<double>(n) / (n - 1), 9);
    const double excess = ratio / degree9;
    CHECK(excess > 1.0);
    CHECK(excess < previous_excess);
    previous_excess = excess;
  }
  CHECK(previous_excess < 1.2);
}

TEST_CASE("fit helpers") {
  CHECK(fitted_exponent({2, 4, 8}, {12, 96, 768}) == doctest::Approx(3.0));
  CHECK(polynomial_degree({1, 4, 9, 16, 25, 36}) == 2);
  CHECK(polynomial_degree({5, 5, 5}) == 0);
  CHECK(polynomial_degree({1, 2}) == -1);
}
