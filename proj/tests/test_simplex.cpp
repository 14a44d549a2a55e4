#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "qaplp/lu.hpp"
#include "qaplp/model.hpp"
#include "qaplp/simplex.hpp"

using namespace qaplp;

namespace {

SparseModel tiny_model(std::vector<double> cost, std::vector<std::vector<std::pair<int, double>>> rows, std::vector<double> rhs) {
  SparseModel m;
  m.cost = std::move(cost);
  for (std::size_t j = 0; j < m.cost.size(); ++j) m.col_names.push_back("x" + std::to_string(j));
  for (std::size_t r = 0; r < rows.size(); ++r) m.add_row("R" + std::to_string(r), RowFamily::Other, rhs[r], rows[r]);
  return m;
}

// Dense Gaussian elimination with partial pivoting, for checking the LU.
std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
    std::swap(a[k], a[p]);
    std::swap(b[k], b[p]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= l * a[k][j];
      b[i] -= l * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double v = b[k];
    for (std::size_t j = k + 1; j < n; ++j) v -= a[k][j] * x[j];
    x[k] = v / a[k][k];
  }
  return x;
}

struct DenseBasis {
  std::vector<std::vector<int>> rows;
  std::vector<std::vector<double>> values;
  std::vector<ColumnView> views;
  std::vector<std::vector<double>> dense;  // dense[i][j]
};

DenseBasis random_basis(int dim, std::mt19937& rng) {
  DenseBasis b;
  b.rows.resize(static_cast<std::size_t>(dim));
  b.values.resize(static_cast<std::size_t>(dim));
  b.dense.assign(static_cast<std::size_t>(dim), std::vector<double>(static_cast<std::size_t>(dim), 0.0));
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::bernoulli_distribution fill(0.25);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i)
      if (i == j || fill(rng)) {
        const double v = i == j ? 4.0 + val(rng) : val(rng);
        b.rows[static_cast<std::size_t>(j)].push_back(i);
        b.values[static_cast<std::size_t>(j)].push_back(v);
        b.dense[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
      }
  for (int j = 0; j < dim; ++j) b.views.push_back({b.rows[static_cast<std::size_t>(j)], b.values[static_cast<std::size_t>(j)]});
  return b;
}

}  // namespace

TEST_CASE("basis factor solves against dense elimination") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 3 + trial;
    auto basis = random_basis(dim, rng);
    BasisFactor lu;
    REQUIRE(lu.factor(dim, basis.views).complete);
    std::vector<double> rhs(static_cast<std::size_t>(dim));
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    for (double& v : rhs) v = val(rng);

    auto x = rhs;
    lu.ftran(x);
    const auto expect = dense_solve(basis.dense, rhs);
    for (int i = 0; i < dim; ++i) CHECK(x[static_cast<std::size_t>(i)] == doctest::Approx(expect[static_cast<std::size_t>(i)]).epsilon(1e-9));

    auto transposed = basis.dense;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        transposed[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = basis.dense[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    auto y = rhs;
    lu.btran(y);
    const auto expect_t = dense_solve(transposed, rhs);
    for (int i = 0; i < dim; ++i) CHECK(y[static_cast<std::size_t>(i)] == doctest::Approx(expect_t[static_cast<std::size_t>(i)]).epsilon(1e-9));

    // Replace one column through an eta update and compare with a refactor.
    const int pos = trial % dim;
    std::vector<double> col(static_cast<std::size_t>(dim));
    for (double& v : col) v = val(rng);
    col[static_cast<std::size_t>(pos)] += 3.0;
    auto alpha = col;
    lu.ftran(alpha);
    lu.update(pos, alpha);
    for (int i = 0; i < dim; ++i) basis.dense[static_cast<std::size_t>(i)][static_cast<std::size_t>(pos)] = col[static_cast<std::size_t>(i)];
    auto x2 = rhs;
    lu.ftran(x2);
    const auto expect2 = dense_solve(basis.dense, rhs);
    for (int i = 0; i < dim; ++i) CHECK(x2[static_cast<std::size_t>(i)] == doctest::Approx(expect2[static_cast<std::size_t>(i)]).epsilon(1e-8));
  }
}

TEST_CASE("basis factor reports dependent columns") {
  const std::vector<int> r01{0, 1}, r0{0}, r2{2};
  const std::vector<double> v11{1.0, 1.0}, v22{2.0, 2.0}, v1{1.0};
  const std::vector<ColumnView> cols{{r01, v11}, {r01, v22}, {r2, v1}};
  BasisFactor lu;
  const auto status = lu.factor(3, cols);
  CHECK_FALSE(status.complete);
  REQUIRE(status.singular_positions.size() == 1);
  REQUIRE(status.unpivoted_rows.size() == 1);
}

TEST_CASE("two-variable example") {
  // min x1 + 2 x2, x1 + x2 = 1
  const auto m = tiny_model({1, 2}, {{{0, 1.0}, {1, 1.0}}}, {1});
  for (SolveForm form : {SolveForm::Primal, SolveForm::Dual})
    for (PricingRule rule : {PricingRule::Devex, PricingRule::Bland}) {
      const auto sol = solve(m, {.form = form, .pricing = rule});
      INFO(to_string(form) << " " << to_string(rule));
      REQUIRE(sol.status == LpStatus::Optimal);
      CHECK(sol.objective == doctest::Approx(1.0));
      CHECK(sol.x[0] == doctest::Approx(1.0));
      CHECK(sol.x[1] == doctest::Approx(0.0));
      const auto rep = verify_solution(m, sol);
      CHECK(rep.passed());
      CHECK(rep.basis_nonsingular);
    }
}

TEST_CASE("infeasible and unbounded") {
  const auto infeasible = tiny_model({1, 1}, {{{0, 1.0}, {1, 1.0}}, {{0, 1.0}, {1, 1.0}}}, {1, 2});
  const auto unbounded = tiny_model({-1, 0}, {{{0, 1.0}, {1, -1.0}}}, {0});
  CHECK(solve(infeasible, {.form = SolveForm::Primal}).status == LpStatus::Infeasible);
  CHECK(solve(unbounded, {.form = SolveForm::Primal}).status == LpStatus::Unbounded);
  CHECK(solve(infeasible, {.form = SolveForm::Dual}).status != LpStatus::Optimal);
  CHECK(solve(unbounded, {.form = SolveForm::Dual}).status != LpStatus::Optimal);
}

TEST_CASE("random dense LPs agree across forms and rules") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int rows = 3 + trial % 5, cols = rows + 4 + trial % 3;
    // Feasible by construction: rhs from a positive point.
    std::vector<double> x0(static_cast<std::size_t>(cols));
    for (double& v : x0) v = val(rng);
    std::vector<std::vector<std::pair<int, double>>> a(static_cast<std::size_t>(rows));
    std::vector<double> rhs(static_cast<std::size_t>(rows), 0.0);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        const double v = std::round(10 * val(rng)) - 3;
        if (v == 0) continue;
        a[static_cast<std::size_t>(i)].emplace_back(j, v);
        rhs[static_cast<std::size_t>(i)] += v * x0[static_cast<std::size_t>(j)];
      }
    std::vector<double> cost(static_cast<std::size_t>(cols));
    for (double& c : cost) c = std::round(20 * val(rng));
    const auto m = tiny_model(cost, a, rhs);
    std::vector<double> objectives;
    for (SolveForm form : {SolveForm::Primal, SolveForm::Dual})
      for (PricingRule rule : {PricingRule::Devex, PricingRule::Bland}) {
        const auto sol = solve(m, {.form = form, .pricing = rule});
        INFO("trial " << trial << " " << to_string(form) << " " << to_string(rule));
        REQUIRE(sol.status == LpStatus::Optimal);
        CHECK(verify_solution(m, sol).passed(1e-7));
        objectives.push_back(sol.objective);
      }
    for (double o : objectives) CHECK(o == doctest::Approx(objectives.front()).epsilon(1e-9));
  }
}

TEST_CASE("uniform n=4 lifted model") {
  const auto space = build_space(4);
  const auto model = build_model(make_uniform(4, 50, 10), space);
  for (SolveForm form : {SolveForm::Primal, SolveForm::Dual}) {
    const auto sol = solve(model, {.form = form});
    INFO(to_string(form));
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(std::abs(sol.objective - 6000.0) <= 1e-6);
    const auto rep = verify_solution(model, sol);
    CHECK(rep.max_residual <= 1e-7);
    CHECK(rep.min_reduced_cost >= -1e-7);
    CHECK(rep.basis_nonsingular);
  }
}

TEST_CASE("deterministic iteration counts") {
  const auto space = build_space(4);
  const auto model = build_model(generate_random(4, CostMode::WithOpcost, 3), space);
  for (SolveForm form : {SolveForm::Primal, SolveForm::Dual}) {
    const auto a = solve(model, {.form = form});
    const auto b = solve(model, {.form = form});
    CHECK(a.iterations == b.iterations);
    CHECK(a.x == b.x);
    CHECK(a.basis == b.basis);
  }
}

TEST_CASE("primal and dual forms agree on random instances") {
  const auto space = build_space(4);
  for (int seed = 0; seed < 8; ++seed) {
    const auto model = build_model(generate_random(4, seed % 2 ? CostMode::WithOpcost : CostMode::NoOpcost, 40 + seed), space);
    const auto p = solve(model, {.form = SolveForm::Primal});
    const auto d = solve(model, {.form = SolveForm::Dual});
    REQUIRE(p.status == LpStatus::Optimal);
    REQUIRE(d.status == LpStatus::Optimal);
    CHECK(std::abs(p.objective - d.objective) <= 1e-6 * std::max(1.0, std::abs(p.objective)));
    CHECK(verify_solution(model, p).passed());
    CHECK(verify_solution(model, d).passed());
  }
}

TEST_CASE("verification flags a perturbed solution") {
  const auto space = build_space(4);
  const auto model = build_model(make_uniform(4, 50, 10), space);
  auto sol = solve(model);
  REQUIRE(verify_solution(model, sol).passed());
  const auto it = std::find_if(sol.x.begin(), sol.x.end(), [](double v) { return v > 0.1; });
  REQUIRE(it != sol.x.end());
  *it += 1e-3;
  const auto rep = verify_solution(model, sol);
  CHECK_FALSE(rep.passed());
  CHECK(rep.max_residual >= 1e-3 - 1e-12);

  // A matching embedded by hand: feasible, no basis to check.
  LpSolution fake;
  fake.x = embed(space, Matching::identity(4));
  fake.objective = 6000;
  const auto fake_rep = verify_solution(model, fake);
  CHECK(fake_rep.max_residual == 0.0);
  CHECK_FALSE(fake_rep.basis_checked);
  CHECK(fake_rep.passed());
}

TEST_CASE("integrality test") {
  const std::vector<double> a{0.0, 1.0, 1e-9, 1 - 1e-9};
  const std::vector<double> b{0.0, 0.5, 1.0};
  CHECK(vertex_is_integral(a));
  CHECK_FALSE(vertex_is_integral(b));
}
