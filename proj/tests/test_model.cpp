#include <algorithm>
#include <map>
#include <numeric>

#include "doctest.h"
#include "qaplp/model.hpp"

using namespace qaplp;

namespace {

std::vector<Matching> all_matchings(int n) {
  std::vector<Facility> a(static_cast<std::size_t>(n));
  std::iota(a.begin(), a.end(), 0);
  std::vector<Matching> out;
  do out.emplace_back(a);
  while (std::next_permutation(a.begin(), a.end()));
  return out;
}

std::vector<std::int64_t> as_integers(const EmbeddedSolution& x) {
  std::vector<std::int64_t> out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [](double v) { return static_cast<std::int64_t>(v); });
  return out;
}

// Second implementation of the arc cost, straight from the matrices.
double arc_cost_reference(const QapInstance& inst, int i, int r, int j) {
  const auto& f = inst.traffic();
  const auto& d = inst.distance();
  const auto& o = inst.opcost();
  double c = o(i, r) + f(i, j) * d(r, r + 1) + f(j, i) * d(r + 1, r);
  if (r + 2 == inst.n()) c += o(j, inst.n() - 1);
  return c;
}

}  // namespace

TEST_CASE("arc cost") {
  const auto uniform = make_uniform(6, 50, 10);
  for (int r = 0; r < 5; ++r) CHECK(cost_c(uniform, 0, r, 3) == 1000);

  SquareMatrix o(4);
  o(1, 0) = 7;
  o(1, 1) = 7;
  o(1, 2) = 7;
  o(2, 3) = 11;
  const QapInstance op(SquareMatrix(4), SquareMatrix(4), o);
  CHECK(cost_c(op, 1, 0, 2) == 7);
  CHECK(cost_c(op, 1, 2, 2) == 18);
  CHECK(cost_c(op, 1, 2, 3) == 7);
  CHECK_THROWS_AS(cost_c(op, 1, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(cost_c(op, 1, 3, 2), std::out_of_range);

  for (int seed = 0; seed < 20; ++seed) {
    const auto inst = generate_random(5, CostMode::WithOpcost, seed);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        for (int r = 0; r < 4; ++r)
          if (i != j) REQUIRE(cost_c(inst, i, r, j) == arc_cost_reference(inst, i, r, j));
  }
}

TEST_CASE("row counts match the closed-form traversal") {
  for (int n = 2; n <= 6; ++n)
    for (bool cuts : {false, true}) {
      const auto space = build_space(n);
      const auto model = build_model(make_uniform(n, 1, 1), space, {.valid_cuts = cuts});
      const auto shape = count_model(n, {.valid_cuts = cuts});
      const auto counts = model.family_counts();
      std::map<std::string_view, std::size_t> nnz;
      for (std::size_t r = 0; r < model.rows(); ++r) nnz[to_string(model.row_family[r])] += model.row_cols(r).size();
      INFO("n=" << n << " cuts=" << cuts);
      for (std::size_t f = 0; f < kRowFamilyCount; ++f) {
        const auto family = static_cast<RowFamily>(f);
        INFO("family " << to_string(family));
        CHECK(counts[f] == shape.rows_per_family[f]);
        CHECK(nnz[to_string(family)] == shape.nnz_per_family[f]);
      }
      CHECK(model.rows() == shape.rows());
      CHECK(model.nnz() == shape.nnz());
      CHECK(model.cols() == space.size());
    }
}

TEST_CASE("small models") {
  const auto space3 = build_space(3);
  const auto m3 = build_model(make_uniform(3, 1, 1), space3);
  const auto c3 = m3.family_counts();
  for (RowFamily f : {RowFamily::F4, RowFamily::F5, RowFamily::F6, RowFamily::F7, RowFamily::F9})
    CHECK(c3[static_cast<std::size_t>(f)] == 0);
  for (RowFamily f : {RowFamily::F1, RowFamily::F2, RowFamily::F3, RowFamily::F8})
    CHECK(c3[static_cast<std::size_t>(f)] > 0);
  CHECK(m3.row_names.front() == "F1");
  CHECK(m3.rhs.front() == 1.0);
  for (std::size_t r = 1; r < m3.rows(); ++r) CHECK(m3.rhs[r] == 0.0);

  const auto m2 = build_model(make_uniform(2, 1, 1), build_space(2));
  CHECK(m2.rows() == 1);

  CHECK_THROWS_AS(build_model(make_uniform(4, 1, 1), space3), std::invalid_argument);
}

TEST_CASE("every admissible variable appears in some row") {
  for (int n = 3; n <= 5; ++n) {
    const auto space = build_space(n);
    const auto model = build_model(make_uniform(n, 1, 1), space, {.valid_cuts = false});
    std::vector<bool> used(model.cols(), false);
    for (int c : model.entry_col) used[static_cast<std::size_t>(c)] = true;
    CHECK(std::all_of(used.begin(), used.end(), [](bool b) { return b; }));
  }
}

TEST_CASE("embedding feasibility") {
  for (int n = 3; n <= 5; ++n) {
    const auto space = build_space(n);
    for (bool cuts : {false, true}) {
      const auto model = build_model(make_uniform(n, 1, 1), space, {.valid_cuts = cuts});
      for (const auto& m : all_matchings(n)) {
        const auto x = embed(space, m);
        INFO("n=" << n << " cuts=" << cuts << " m=" << m.to_string());
        REQUIRE(max_integer_residual(model, as_integers(x)) == 0);
      }
    }
  }
}

TEST_CASE("embedding structure") {
  const auto space = build_space(4);
  const auto x = embed(space, Matching::identity(4));
  auto ones = [&](std::size_t from, std::size_t to) { return std::count(x.begin() + from, x.begin() + to, 1.0); };
  CHECK(ones(0, space.pair_offset()) == 3);
  CHECK(ones(space.pair_offset(), space.triple_offset()) == 3);
  CHECK(ones(space.triple_offset(), space.size()) == 1);
  CHECK(std::accumulate(x.begin(), x.end(), 0.0) == 7);
  CHECK(x[static_cast<std::size_t>(*space.index(Arc{0, 0, 1}))] == 1.0);
  CHECK(x[static_cast<std::size_t>(*space.index(ArcPair{{0, 0, 1}, {2, 2, 3}}))] == 1.0);
}

TEST_CASE("objective identity") {
  const auto space = build_space(4);
  for (int seed = 0; seed < 10; ++seed) {
    const auto inst = generate_random(4, seed % 2 ? CostMode::WithOpcost : CostMode::NoOpcost, 500 + seed);
    const auto model = build_model(inst, space);
    for (const auto& m : all_matchings(4)) REQUIRE(objective_value(model, embed(space, m)) == evaluate(inst, m));
    const auto best = brute_force_optimum(inst);
    CHECK(objective_value(model, embed(space, best.matching)) == best.value);
  }
  const auto s5 = build_space(5);
  const auto uniform5 = build_model(make_uniform(5, 50, 10), s5);
  CHECK(objective_value(uniform5, embed(s5, Matching::identity(5))) == 10000);
  const auto s6 = build_space(6);
  const auto uniform6 = build_model(make_uniform(6, 50, 10), s6);
  CHECK(objective_value(uniform6, embed(s6, Matching::parse("(4 2 6 1 3 5)"))) == 15000);
  CHECK(objective_value(uniform6, std::vector<double>(s6.size(), 0.0)) == 0);
  CHECK_THROWS_AS(objective_value(uniform6, std::vector<double>(3, 0.0)), std::invalid_argument);
}

TEST_CASE("cost coverage: each site pair is charged once") {
  // Each unordered site pair gets its own base-4 digit, so any pair charged
  // zero, two or three times changes the total.
  const int n = 5;
  SquareMatrix f(n, 1.0), d(n);
  for (int i = 0; i < n; ++i) f(i, i) = 0;
  int bit = 0;
  for (int r = 0; r < n; ++r)
    for (int s = r + 1; s < n; ++s) {
      d(r, s) = static_cast<double>(1 << (2 * bit++));
      d(s, r) = 0;
    }
  const QapInstance inst(f, d, SquareMatrix(n));
  const auto space = build_space(n);
  const auto model = build_model(inst, space);
  for (const auto& m : all_matchings(n)) REQUIRE(objective_value(model, embed(space, m)) == ((1 << (2 * bit)) - 1) / 3);
}

TEST_CASE("residuals and footprint") {
  const auto space = build_space(4);
  const auto model = build_model(make_uniform(4, 1, 1), space);
  auto x = embed(space, Matching::identity(4));
  CHECK(max_abs_residual(model, x) == 0.0);
  x[0] += 0.25;
  CHECK(max_abs_residual(model, x) == doctest::Approx(0.25));

  for (int n = 4; n <= 6; ++n) {
    const auto s = build_space(n);
    const auto m = build_model(make_uniform(n, 1, 1), s);
    const double actual = static_cast<double>(m.footprint_bytes() + s.footprint_bytes());
    const double estimate = static_cast<double>(estimate_model_bytes(n));
    INFO("n=" << n << " actual=" << actual << " estimate=" << estimate);
    CHECK(estimate <= 2 * actual);
    CHECK(actual <= 2 * estimate);
  }
}

TEST_CASE("row family names") {
  CHECK(row_family_from_name("F10c_1_2_3") == RowFamily::F10c);
  CHECK(row_family_from_name("F1") == RowFamily::F1);
  CHECK(row_family_from_name("R17") == RowFamily::Other);
}
