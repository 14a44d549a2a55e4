#include <algorithm>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "qaplp/instance.hpp"

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

// Ordered site pairs, each visited once: f(l_r, l_s) d(r, s).
double evaluate_ordered(const QapInstance& inst, const Matching& m) {
  double total = 0.0;
  for (int r = 0; r < inst.n(); ++r) {
    total += inst.opcost()(m.facility_at(r), r);
    for (int s = 0; s < inst.n(); ++s)
      if (r != s) total += inst.traffic()(m.facility_at(r), m.facility_at(s)) * inst.distance()(r, s);
  }
  return total;
}

// Every ordered pair through h, then halved.
double evaluate_halved(const QapInstance& inst, const Matching& m) {
  double pairs = 0.0, op = 0.0;
  for (int r = 0; r < inst.n(); ++r) {
    op += inst.opcost()(m.facility_at(r), r);
    for (int s = 0; s < inst.n(); ++s)
      if (r != s) pairs += handling_cost(inst, m.facility_at(r), r, m.facility_at(s), s);
  }
  return pairs / 2 + op;
}

}  // namespace

TEST_CASE("handling cost") {
  const auto uniform = make_uniform(6, 50, 10);
  CHECK(handling_cost(uniform, 0, 1, 2, 3) == 1000);

  SquareMatrix f(5), d(5);
  f(0, 1) = 3;
  f(1, 0) = 7;
  d(3, 4) = 2;
  d(4, 3) = 5;
  const QapInstance inst(f, d, SquareMatrix(5));
  CHECK(handling_cost(inst, 0, 3, 1, 4) == 41);

  const QapInstance zero(SquareMatrix(4), SquareMatrix(4, 3.0), SquareMatrix(4));
  CHECK(handling_cost(zero, 0, 1, 3, 2) == 0);

  CHECK_THROWS_AS(handling_cost(inst, 0, 1, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(handling_cost(inst, 0, 1, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(handling_cost(inst, 0, 1, 5, 2), std::out_of_range);
}

TEST_CASE("evaluate") {
  SUBCASE("uniform n=6 is 15000 for every matching") {
    const auto inst = make_uniform(6, 50, 10);
    for (const auto& m : all_matchings(6)) REQUIRE(evaluate(inst, m) == 15000);
  }
  SUBCASE("uniform n=4 is 6000, zero traffic gives 0") {
    for (const auto& m : all_matchings(4)) CHECK(evaluate(make_uniform(4, 50, 10), m) == 6000);
    for (const auto& m : all_matchings(2)) CHECK(evaluate(make_uniform(2, 0, 10), m) == 0);
  }
  SUBCASE("agrees with ordered-pair and halved evaluations") {
    for (int seed = 0; seed < 100; ++seed) {
      const int n = 3 + seed % 3;
      const auto inst = generate_random(n, seed % 2 ? CostMode::WithOpcost : CostMode::NoOpcost, seed);
      for (const auto& m : all_matchings(n)) {
        const double v = evaluate(inst, m);
        REQUIRE(v == evaluate_ordered(inst, m));
        REQUIRE(v == evaluate_halved(inst, m));
        REQUIRE(v >= 0);
      }
    }
  }
  CHECK_THROWS_AS(evaluate(make_uniform(4, 1, 1), Matching::identity(3)), std::invalid_argument);
}

TEST_CASE("brute force optimum") {
  SUBCASE("uniform ties resolve to the identity") {
    const auto best = brute_force_optimum(make_uniform(6, 50, 10));
    CHECK(best.value == 15000);
    CHECK(best.matching == Matching::identity(6));
  }
  SUBCASE("n=1") {
    SquareMatrix o(1);
    o(0, 0) = 4.5;
    const auto best = brute_force_optimum(QapInstance(SquareMatrix(1), SquareMatrix(1), o));
    CHECK(best.value == 4.5);
    CHECK(best.matching == Matching::identity(1));
  }
  SUBCASE("matches reverse-order enumeration and lower-bounds every matching") {
    for (int seed = 0; seed < 30; ++seed) {
      const int n = 2 + seed % 4;
      const auto inst = generate_random(n, CostMode::WithOpcost, 1000 + seed);
      const auto best = brute_force_optimum(inst);
      std::vector<Facility> a(static_cast<std::size_t>(n));
      std::iota(a.rbegin(), a.rend(), 0);
      double min_value = evaluate(inst, Matching(a));
      std::vector<Facility> arg = a;
      while (std::prev_permutation(a.begin(), a.end())) {
        const double v = evaluate(inst, Matching(a));
        if (v <= min_value) {
          min_value = v;
          arg = a;
        }
      }
      REQUIRE(best.value == min_value);
      REQUIRE(best.matching == Matching(arg));
      for (const auto& m : all_matchings(n)) REQUIRE(best.value <= evaluate(inst, m));
    }
  }
  CHECK_THROWS_AS(brute_force_optimum(make_uniform(10, 1, 1)), std::invalid_argument);
  CHECK_NOTHROW(brute_force_optimum(make_uniform(5, 1, 1), 5));
  CHECK_THROWS_AS(brute_force_optimum(make_uniform(5, 1, 1), 4), std::invalid_argument);
}

TEST_CASE("uniform instances are permutation invariant") {
  for (int n = 2; n <= 5; ++n) {
    const auto inst = make_uniform(n, 7, 3);
    const double first = evaluate(inst, Matching::identity(n));
    for (const auto& m : all_matchings(n)) REQUIRE(evaluate(inst, m) == first);
  }
}

TEST_CASE("random generation") {
  CHECK(generate_random(6, CostMode::NoOpcost, 1) == generate_random(6, CostMode::NoOpcost, 1));
  CHECK_FALSE(generate_random(6, CostMode::NoOpcost, 1) == generate_random(6, CostMode::NoOpcost, 2));

  for (std::uint64_t seed : {1u, 2u, 3u, 99u}) {
    const auto inst = generate_random(6, CostMode::NoOpcost, seed);
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) {
        if (a == b) {
          CHECK(inst.traffic()(a, b) == 0);
          CHECK(inst.distance()(a, b) == 0);
          continue;
        }
        CHECK(inst.traffic()(a, b) >= 10);
        CHECK(inst.traffic()(a, b) <= 250);
        CHECK(inst.distance()(a, b) >= 1);
        CHECK(inst.distance()(a, b) <= 30);
        CHECK(inst.opcost()(a, b) == 0);
      }
  }
  const auto with_op = generate_random(4, CostMode::WithOpcost, 7);
  double op_sum = 0;
  for (double v : with_op.opcost().values()) {
    CHECK(v >= 0);
    CHECK(v <= 5000);
    op_sum += v;
  }
  CHECK(op_sum > 0);

  const auto sym = generate_random(5, CostMode::NoOpcost, 3, true);
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) CHECK(sym.distance()(a, b) == sym.distance()(b, a));

  CHECK_THROWS_AS(generate_random(1, CostMode::NoOpcost, 1), std::invalid_argument);
}

TEST_CASE("pcg32 reference stream") {
  // First outputs of the reference pcg32 demo (seed 42, stream 54).
  Pcg32 rng(42u, 54u);
  const std::uint32_t expected[] = {0xa15c02b7, 0x7b47f409, 0xba1d3330, 0x83d2f293, 0xbfa4784b, 0xcbed606e};
  for (std::uint32_t e : expected) CHECK(rng.next() == e);

  Pcg32 bounded(5);
  for (int k = 0; k < 1000; ++k) {
    const auto v = bounded.uniform_int(-3, 4);
    REQUIRE(v >= -3);
    REQUIRE(v <= 4);
  }
}

TEST_CASE("matching") {
  const auto m = Matching::parse("(3 1 4 2)");
  CHECK(m.facility_at(0) == 2);
  CHECK(m.to_string() == "(3 1 4 2)");
  CHECK(m.assigned(3, 2));
  CHECK_THROWS_AS(Matching({0, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Matching({0, 3}), std::invalid_argument);
}

TEST_CASE("instance file format") {
  const auto inst = generate_random(4, CostMode::WithOpcost, 11);
  std::stringstream buf;
  write_instance(buf, inst, {"name=QAPo41", "seed=11"});
  CHECK(buf.str().rfind("4\n", 0) == 0);
  CHECK(buf.str().find("# seed=11") != std::string::npos);
  CHECK(read_instance(buf) == inst);

  std::istringstream qaplp_layout("2\n 0 5\n 3 0\n\n 0 2\n 9 0\n");
  const auto two = read_instance(qaplp_layout);
  CHECK(two.traffic()(0, 1) == 5);
  CHECK(two.distance()(1, 0) == 9);
  CHECK(two.opcost()(1, 1) == 0);

  std::istringstream short_file("3\n1 2 3\n");
  CHECK_THROWS_AS(read_instance(short_file), std::invalid_argument);
  std::istringstream negative("1\n-1\n0\n0\n");
  CHECK_THROWS_AS(read_instance(negative), std::invalid_argument);
}
