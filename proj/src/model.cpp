#include "qaplp/model.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace qaplp {

namespace {

constexpr std::array<std::string_view, kRowFamilyCount> kFamilyNames = {
    "F1", "F2", "F3", "F4", "F5", "F6", "F7", "F8", "F9", "F10a", "F10b", "F10c", "F10d", "F10e", "Other"};

std::string row_name(RowFamily family, std::initializer_list<int> one_based_from_zero) {
  std::string out(to_string(family));
  for (int v : one_based_from_zero) {
    out += '_';
    out += std::to_string(v + 1);
  }
  return out;
}

std::size_t idx(RowFamily f) { return static_cast<std::size_t>(f); }

std::size_t string_heap(const std::string& s) { return s.capacity() > 15 ? s.capacity() + 1 : 0; }

// Emits every family into `model`. Loops run in lexicographic tuple order.
class ModelBuilder {
 public:
  ModelBuilder(const VariableSpace& space, SparseModel& model) : space_(space), model_(model), n_(space.n()) {}

  void build(const ModelOptions& opts) {
    flow_start();
    flow_propagation();
    node_balance();
    layer_balance();
    layering_after();
    layering_before();
    layering_between();
    visits_stage_one();
    visits_sub_layers();
    if (opts.valid_cuts) {
      diagonal_pair_ties();
      triple_marginal_ties();
    }
  }

 private:
  using Entries = std::vector<std::pair<int, double>>;

  int stages() const { return n_ - 1; }

  void add(Entries& e, std::optional<int> col, double coeff) const {
    if (col) e.emplace_back(*col, coeff);
  }

  // Σ over a free arc at stage g of the triple formed with the fixed pair.
  void add_marginal(Entries& e, const ArcPair& fixed, int g, double coeff) const {
    for (int u = 0; u < n_; ++u)
      for (int v = 0; v < n_; ++v) {
        if (u == v) continue;
        const Arc free{u, g, v};
        if (g < fixed.first.stage)
          add(e, space_.index(ArcTriple{free, fixed.first, fixed.second}), coeff);
        else if (g < fixed.second.stage)
          add(e, space_.index(ArcTriple{fixed.first, free, fixed.second}), coeff);
        else
          add(e, space_.index(ArcTriple{fixed.first, fixed.second, free}), coeff);
      }
  }

  std::vector<ArcPair> pairs() const {
    std::vector<ArcPair> out;
    out.reserve(space_.pair_count());
    for (std::size_t c = space_.pair_offset(); c < space_.triple_offset(); ++c)
      out.push_back(space_.pair(static_cast<int>(c)));
    return out;
  }

  // F1: unit flow leaves stage 1.
  void flow_start() {
    Entries e;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) add(e, space_.index(Arc{i, 0, j}), 1.0);
    model_.add_row("F1", RowFamily::F1, 1.0, std::move(e));
  }

  // F2: flow on a later arc equals the stage-1 flow propagating onto it.
  void flow_propagation() {
    for (int i = 0; i < n_; ++i)
      for (int r = 1; r < stages(); ++r)
        for (int j = 0; j < n_; ++j) {
          const Arc a{i, r, j};
          Entries e;
          add(e, space_.index(a), 1.0);
          if (e.empty()) continue;
          for (int u = 0; u < n_; ++u)
            for (int v = 0; v < n_; ++v) add(e, space_.index(ArcPair{Arc{u, 0, v}, a}), -1.0);
          model_.add_row(row_name(RowFamily::F2, {i, r, j}), RowFamily::F2, 0.0, std::move(e));
        }
  }

  // F3: flow into node (j, site r) leaves it on stage r.
  void node_balance() {
    for (int r = 1; r < stages(); ++r)
      for (int j = 0; j < n_; ++j) {
        Entries e;
        for (int i = 0; i < n_; ++i) add(e, space_.index(Arc{i, r - 1, j}), 1.0);
        for (int k = 0; k < n_; ++k) add(e, space_.index(Arc{j, r, k}), -1.0);
        model_.add_row(row_name(RowFamily::F3, {r, j}), RowFamily::F3, 0.0, std::move(e));
      }
  }

  // F4: inside the layer of arc (i,r,j), inflow at (t, site s+1) equals outflow.
  void layer_balance() {
    for (int i = 0; i < n_; ++i)
      for (int r = 0; r < stages(); ++r)
        for (int j = 0; j < n_; ++j) {
          const Arc a{i, r, j};
          if (!space_.index(a)) continue;
          for (int t = 0; t < n_; ++t)
            for (int s = r + 1; s <= stages() - 2; ++s) {
              Entries e;
              for (int k = 0; k < n_; ++k) add(e, space_.index(ArcPair{a, Arc{k, s, t}}), 1.0);
              for (int k = 0; k < n_; ++k) add(e, space_.index(ArcPair{a, Arc{t, s + 1, k}}), -1.0);
              model_.add_row(row_name(RowFamily::F4, {i, r, j, t, s}), RowFamily::F4, 0.0, std::move(e));
            }
        }
  }

  // F5: pair (u,p,v)->(i,r,j) splits over the arcs of every later stage s.
  void layering_after() {
    for (const ArcPair& pr : pairs()) {
      const Arc &a = pr.first, &b = pr.second;
      for (int s = b.stage + 1; s < stages(); ++s) {
        Entries e;
        add(e, space_.index(pr), 1.0);
        add_marginal(e, pr, s, -1.0);
        model_.add_row(row_name(RowFamily::F5, {a.tail, a.stage, a.head, b.tail, b.stage, b.head, s}), RowFamily::F5,
                       0.0, std::move(e));
      }
    }
  }

  // F6: pair (i,r,j)->(k,s,t) splits over the arcs of every earlier stage p.
  void layering_before() {
    for (const ArcPair& pr : pairs()) {
      const Arc &a = pr.first, &b = pr.second;
      for (int p = 0; p < a.stage; ++p) {
        Entries e;
        add(e, space_.index(pr), 1.0);
        add_marginal(e, pr, p, -1.0);
        model_.add_row(row_name(RowFamily::F6, {a.tail, a.stage, a.head, b.tail, b.stage, b.head, p}), RowFamily::F6,
                       0.0, std::move(e));
      }
    }
  }

  // F7: pair (u,p,v)->(k,s,t) splits over the arcs of every stage r between.
  void layering_between() {
    for (const ArcPair& pr : pairs()) {
      const Arc &a = pr.first, &b = pr.second;
      for (int r = a.stage + 1; r < b.stage; ++r) {
        Entries e;
        add(e, space_.index(pr), 1.0);
        add_marginal(e, pr, r, -1.0);
        model_.add_row(row_name(RowFamily::F7, {a.tail, a.stage, a.head, b.tail, b.stage, b.head, r}), RowFamily::F7,
                       0.0, std::move(e));
      }
    }
  }

  // F8: the layer of a stage-1 arc reaches level t exactly once, as an arc head.
  void visits_stage_one() {
    for (int u = 0; u < n_; ++u)
      for (int v = 0; v < n_; ++v) {
        const Arc a{u, 0, v};
        if (!space_.index(a)) continue;
        for (int t = 0; t < n_; ++t) {
          if (t == u || t == v) continue;
          Entries e;
          add(e, space_.index(a), 1.0);
          for (int s = 1; s < stages(); ++s)
            for (int k = 0; k < n_; ++k) add(e, space_.index(ArcPair{a, Arc{k, s, t}}), -1.0);
          model_.add_row(row_name(RowFamily::F8, {u, v, t}), RowFamily::F8, 0.0, std::move(e));
        }
      }
  }

  // F9: the sub-layer (u,1,v)->(i,r,j) visits level t once: as a tail before
  // stage r or as a head after it.
  void visits_sub_layers() {
    for (const ArcPair& pr : pairs()) {
      const Arc &a = pr.first, &b = pr.second;
      if (a.stage != 0) continue;
      for (int t = 0; t < n_; ++t) {
        if (t == a.tail || t == a.head || t == b.tail || t == b.head) continue;
        Entries e;
        add(e, space_.index(pr), 1.0);
        for (int s = 1; s < b.stage; ++s)
          for (int k = 0; k < n_; ++k) add(e, space_.index(ArcTriple{a, Arc{t, s, k}, b}), -1.0);
        for (int s = b.stage + 1; s < stages(); ++s)
          for (int k = 0; k < n_; ++k) add(e, space_.index(ArcTriple{a, b, Arc{k, s, t}}), -1.0);
        model_.add_row(row_name(RowFamily::F9, {a.tail, a.head, b.tail, b.stage, b.head, t}), RowFamily::F9, 0.0,
                       std::move(e));
      }
    }
  }

  // F10a/F10b: arc flow equals its pair mass with every other stage.
  void diagonal_pair_ties() {
    for (int i = 0; i < n_; ++i)
      for (int r = 1; r < stages(); ++r)
        for (int j = 0; j < n_; ++j) {
          const Arc a{i, r, j};
          if (!space_.index(a)) continue;
          for (int s = 0; s < r; ++s) {
            Entries e;
            add(e, space_.index(a), 1.0);
            for (int k = 0; k < n_; ++k)
              for (int t = 0; t < n_; ++t) add(e, space_.index(ArcPair{Arc{k, s, t}, a}), -1.0);
            model_.add_row(row_name(RowFamily::F10a, {i, r, j, s}), RowFamily::F10a, 0.0, std::move(e));
          }
        }
    for (int i = 0; i < n_; ++i)
      for (int r = 0; r + 1 < stages(); ++r)
        for (int j = 0; j < n_; ++j) {
          const Arc a{i, r, j};
          if (!space_.index(a)) continue;
          for (int s = r + 1; s < stages(); ++s) {
            Entries e;
            add(e, space_.index(a), 1.0);
            for (int k = 0; k < n_; ++k)
              for (int t = 0; t < n_; ++t) add(e, space_.index(ArcPair{a, Arc{k, s, t}}), -1.0);
            model_.add_row(row_name(RowFamily::F10b, {i, r, j, s}), RowFamily::F10b, 0.0, std::move(e));
          }
        }
  }

  // F10c/d/e: triple marginals of a fixed pair agree across free stages taken
  // from two different ranges (before/between, before/after, between/after).
  // One spanning tree of each complete bipartite comparison graph is emitted.
  void triple_marginal_ties() {
    const auto all_pairs = pairs();
    auto emit = [&](RowFamily family, auto range_of) {
      for (const ArcPair& pr : all_pairs) {
        const auto [xs, ys] = range_of(pr);
        if (xs.empty() || ys.empty()) continue;
        std::vector<std::pair<int, int>> edges;
        for (int y : ys) edges.emplace_back(xs.front(), y);
        for (std::size_t k = 1; k < xs.size(); ++k) edges.emplace_back(xs[k], ys.front());
        std::sort(edges.begin(), edges.end());
        const Arc &a = pr.first, &b = pr.second;
        for (auto [x, y] : edges) {
          Entries e;
          add_marginal(e, pr, x, 1.0);
          add_marginal(e, pr, y, -1.0);
          model_.add_row(row_name(family, {a.tail, a.stage, a.head, b.tail, b.stage, b.head, x, y}), family, 0.0,
                         std::move(e));
        }
      }
    };
    auto before = [](const ArcPair& pr) {
      std::vector<int> v;
      for (int g = 0; g < pr.first.stage; ++g) v.push_back(g);
      return v;
    };
    auto between = [](const ArcPair& pr) {
      std::vector<int> v;
      for (int g = pr.first.stage + 1; g < pr.second.stage; ++g) v.push_back(g);
      return v;
    };
    auto after = [this](const ArcPair& pr) {
      std::vector<int> v;
      for (int g = pr.second.stage + 1; g < stages(); ++g) v.push_back(g);
      return v;
    };
    emit(RowFamily::F10c, [&](const ArcPair& pr) { return std::pair{before(pr), between(pr)}; });
    emit(RowFamily::F10d, [&](const ArcPair& pr) { return std::pair{before(pr), after(pr)}; });
    emit(RowFamily::F10e, [&](const ArcPair& pr) { return std::pair{between(pr), after(pr)}; });
  }

  const VariableSpace& space_;
  SparseModel& model_;
  int n_;
};

}  // namespace

std::string_view to_string(RowFamily family) { return kFamilyNames[idx(family)]; }

RowFamily row_family_from_name(std::string_view row_name) {
  const auto prefix = row_name.substr(0, row_name.find('_'));
  for (std::size_t k = 0; k + 1 < kRowFamilyCount; ++k)
    if (prefix == kFamilyNames[k]) return static_cast<RowFamily>(k);
  return RowFamily::Other;
}

bool SparseModel::add_row(std::string row_name, RowFamily family, double row_rhs,
                          std::vector<std::pair<int, double>> entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t stored = 0;
  for (std::size_t k = 0; k < entries.size();) {
    const int col = entries[k].first;
    if (col < 0 || static_cast<std::size_t>(col) >= cols()) throw std::out_of_range("row entry references bad column");
    double v = 0.0;
    for (; k < entries.size() && entries[k].first == col; ++k) v += entries[k].second;
    if (v != 0.0) {
      entry_col.push_back(col);
      entry_value.push_back(v);
      ++stored;
    }
  }
  if (stored == 0) {
    if (row_rhs != 0.0) throw std::invalid_argument("empty row with nonzero right-hand side: " + row_name);
    return false;
  }
  row_names.push_back(std::move(row_name));
  row_family.push_back(family);
  rhs.push_back(row_rhs);
  row_start.push_back(entry_col.size());
  return true;
}

std::array<std::size_t, kRowFamilyCount> SparseModel::family_counts() const {
  std::array<std::size_t, kRowFamilyCount> out{};
  for (RowFamily f : row_family) ++out[idx(f)];
  return out;
}

std::size_t SparseModel::footprint_bytes() const {
  std::size_t bytes = sizeof(*this) + name.capacity();
  bytes += col_names.capacity() * sizeof(std::string) + row_names.capacity() * sizeof(std::string);
  for (const auto& s : col_names) bytes += string_heap(s);
  for (const auto& s : row_names) bytes += string_heap(s);
  bytes += cost.capacity() * sizeof(double) + row_family.capacity() * sizeof(RowFamily) +
           rhs.capacity() * sizeof(double) + row_start.capacity() * sizeof(std::size_t) +
           entry_col.capacity() * sizeof(int) + entry_value.capacity() * sizeof(double);
  return bytes;
}

double cost_c(const QapInstance& inst, Facility i, int stage, Facility j) {
  const int n = inst.n();
  if (i == j) throw std::invalid_argument("cost_c: arc with equal tail and head does not exist");
  if (stage < 0 || stage >= n - 1 || i < 0 || i >= n || j < 0 || j >= n)
    throw std::out_of_range("cost_c: arc index out of range");
  double c = inst.opcost()(i, stage) + handling_cost(inst, i, stage, j, stage + 1);
  if (stage == n - 2) c += inst.opcost()(j, n - 1);
  return c;
}

std::vector<double> cost_vector(const QapInstance& inst, const VariableSpace& space) {
  if (inst.n() != space.n()) throw std::invalid_argument("instance and variable space sizes differ");
  std::vector<double> cost(space.size(), 0.0);
  for (std::size_t c = 0; c < space.triple_offset(); ++c) {
    const int col = static_cast<int>(c);
    if (space.family(col) == VarFamily::Diagonal) {
      const Arc a = space.arc(col);
      cost[c] = cost_c(inst, a.tail, a.stage, a.head);
    } else {
      // facility i on site r paired with facility t on site s+1
      const ArcPair p = space.pair(col);
      cost[c] = handling_cost(inst, p.first.tail, p.first.stage, p.second.head, p.second.stage + 1);
    }
  }
  return cost;
}

SparseModel build_model(const QapInstance& inst, const VariableSpace& space, const ModelOptions& opts) {
  if (inst.n() != space.n()) throw std::invalid_argument("instance and variable space sizes differ");
  SparseModel model;
  model.cost = cost_vector(inst, space);
  model.col_names.reserve(space.size());
  for (std::size_t c = 0; c < space.size(); ++c) model.col_names.push_back(space.name(static_cast<int>(c)));
  const ModelShape shape = count_model(space.n(), opts);
  model.rhs.reserve(shape.rows());
  model.row_names.reserve(shape.rows());
  model.row_family.reserve(shape.rows());
  model.row_start.reserve(shape.rows() + 1);
  model.entry_col.reserve(shape.nnz());
  model.entry_value.reserve(shape.nnz());
  ModelBuilder(space, model).build(opts);
  return model;
}

EmbeddedSolution embed(const VariableSpace& space, const Matching& m) {
  if (m.size() != space.n()) throw std::invalid_argument("matching size does not match variable space");
  const int stages = space.stages();
  auto arc_at = [&](int r) { return Arc{m.facility_at(r), r, m.facility_at(r + 1)}; };
  EmbeddedSolution x(space.size(), 0.0);
  auto set = [&](std::optional<int> col) {
    if (!col) throw std::logic_error("embedding hits an excluded variable");
    x[static_cast<std::size_t>(*col)] = 1.0;
  };
  for (int r = 0; r < stages; ++r) {
    set(space.index(arc_at(r)));
    for (int s = r + 1; s < stages; ++s) {
      set(space.index(ArcPair{arc_at(r), arc_at(s)}));
      for (int q = s + 1; q < stages; ++q) set(space.index(ArcTriple{arc_at(r), arc_at(s), arc_at(q)}));
    }
  }
  return x;
}

double objective_value(const SparseModel& model, std::span<const double> x) {
  if (x.size() != model.cols()) throw std::invalid_argument("objective_value: dimension mismatch");
  long double sum = 0.0L;
  for (std::size_t c = 0; c < x.size(); ++c) sum += static_cast<long double>(model.cost[c]) * x[c];
  return static_cast<double>(sum);
}

std::vector<double> row_residuals(const SparseModel& model, std::span<const double> x) {
  if (x.size() != model.cols()) throw std::invalid_argument("row_residuals: dimension mismatch");
  std::vector<double> out(model.rows());
  for (std::size_t r = 0; r < model.rows(); ++r) {
    long double acc = -static_cast<long double>(model.rhs[r]);
    const auto cols = model.row_cols(r);
    const auto vals = model.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k)
      acc += static_cast<long double>(vals[k]) * x[static_cast<std::size_t>(cols[k])];
    out[r] = static_cast<double>(acc);
  }
  return out;
}

double max_abs_residual(const SparseModel& model, std::span<const double> x) {
  double worst = 0.0;
  for (double r : row_residuals(model, x)) worst = std::max(worst, std::abs(r));
  return worst;
}

std::int64_t max_integer_residual(const SparseModel& model, std::span<const std::int64_t> x) {
  if (x.size() != model.cols()) throw std::invalid_argument("max_integer_residual: dimension mismatch");
  auto integral = [](double v) {
    if (v != std::floor(v)) throw std::invalid_argument("model has non-integral data");
    return static_cast<std::int64_t>(v);
  };
  std::int64_t worst = 0;
  for (std::size_t r = 0; r < model.rows(); ++r) {
    std::int64_t acc = -integral(model.rhs[r]);
    const auto cols = model.row_cols(r);
    const auto vals = model.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) acc += integral(vals[k]) * x[static_cast<std::size_t>(cols[k])];
    worst = std::max(worst, acc < 0 ? -acc : acc);
  }
  return worst;
}

std::uint64_t ModelShape::rows() const {
  std::uint64_t total = 0;
  for (auto v : rows_per_family) total += v;
  return total;
}

std::uint64_t ModelShape::nnz() const {
  std::uint64_t total = 0;
  for (auto v : nnz_per_family) total += v;
  return total;
}

ModelShape count_model(int n, const ModelOptions& opts) {
  if (n < 2 || n > kMaxCountedN) throw std::invalid_argument("count_model: n out of range");
  ModelShape shape;
  shape.columns = count_space(n);
  const int L = n - 1;
  const std::uint64_t arcs_per_stage = falling_factorial(n, 2);
  auto ff = [n](int fixed, int extra) { return fixed > n ? 0 : falling_factorial(n - fixed, extra); };
  auto q = [](std::initializer_list<int> st) { return sites_covered(st); };
  auto put = [&](RowFamily f, std::uint64_t rows, std::uint64_t per_row) {
    shape.rows_per_family[idx(f)] += rows;
    shape.nnz_per_family[idx(f)] += rows * per_row;
  };

  put(RowFamily::F1, 1, arcs_per_stage);
  for (int r = 1; r < L; ++r) put(RowFamily::F2, arcs_per_stage, 1 + ff(2, q({0, r}) - 2));
  put(RowFamily::F3, static_cast<std::uint64_t>(L - 1) * n, 2 * static_cast<std::uint64_t>(n - 1));
  for (int r = 0; r + 2 < L; ++r)
    for (int s = r + 1; s <= L - 2; ++s)
      put(RowFamily::F4, falling_factorial(n, 3), ff(3, q({r, s}) - 3) + ff(3, q({r, s + 1}) - 3));

  for (int a = 0; a < L; ++a)
    for (int b = a + 1; b < L; ++b) {
      const int qp = q({a, b});
      const std::uint64_t pairs = falling_factorial(n, qp);
      for (int s = b + 1; s < L; ++s) put(RowFamily::F5, pairs, 1 + ff(qp, q({a, b, s}) - qp));
      for (int p = 0; p < a; ++p) put(RowFamily::F6, pairs, 1 + ff(qp, q({p, a, b}) - qp));
      for (int r = a + 1; r < b; ++r) put(RowFamily::F7, pairs, 1 + ff(qp, q({a, r, b}) - qp));
    }

  if (n >= 3) {
    std::uint64_t per_row = 1;
    for (int s = 1; s < L; ++s) per_row += (s == 1) ? 1 : static_cast<std::uint64_t>(n - 3);
    put(RowFamily::F8, falling_factorial(n, 3), per_row);
  }
  for (int r = 1; r < L; ++r) {
    const int qp = q({0, r});
    if (n - qp <= 0) continue;
    std::uint64_t per_row = 1;
    for (int s = 2; s < r; ++s) per_row += (s + 1 == r) ? 1 : ff(qp + 1, 1);
    for (int s = r + 1; s < L; ++s) per_row += (s == r + 1) ? 1 : ff(qp + 1, 1);
    put(RowFamily::F9, falling_factorial(n, qp) * static_cast<std::uint64_t>(n - qp), per_row);
  }

  if (opts.valid_cuts) {
    for (int r = 1; r < L; ++r)
      for (int s = 0; s < r; ++s) put(RowFamily::F10a, arcs_per_stage, 1 + ff(2, q({s, r}) - 2));
    for (int r = 0; r + 1 < L; ++r)
      for (int s = r + 1; s < L; ++s) put(RowFamily::F10b, arcs_per_stage, 1 + ff(2, q({r, s}) - 2));
    for (int a = 0; a < L; ++a)
      for (int b = a + 1; b < L; ++b) {
        const int qp = q({a, b});
        const std::uint64_t pairs = falling_factorial(n, qp);
        std::vector<int> before, between, after;
        for (int g = 0; g < a; ++g) before.push_back(g);
        for (int g = a + 1; g < b; ++g) between.push_back(g);
        for (int g = b + 1; g < L; ++g) after.push_back(g);
        auto marginal = [&](int g) {
          std::vector<int> st{a, b, g};
          std::sort(st.begin(), st.end());
          return ff(qp, q({st[0], st[1], st[2]}) - qp);
        };
        auto tree = [&](RowFamily f, const std::vector<int>& xs, const std::vector<int>& ys) {
          if (xs.empty() || ys.empty()) return;
          for (int y : ys) put(f, pairs, marginal(xs.front()) + marginal(y));
          for (std::size_t k = 1; k < xs.size(); ++k) put(f, pairs, marginal(xs[k]) + marginal(ys.front()));
        };
        tree(RowFamily::F10c, before, between);
        tree(RowFamily::F10d, before, after);
        tree(RowFamily::F10e, between, after);
      }
  }
  return shape;
}

std::uint64_t estimate_model_bytes(int n, const ModelOptions& opts) {
  const ModelShape shape = count_model(n, opts);
  const std::uint64_t cols = shape.columns.total();
  const std::uint64_t rows = shape.rows();
  const std::uint64_t digits = n >= 10 ? 2 : 1;
  // names beyond the 15-character small-string buffer allocate on the heap
  auto heap = [](std::uint64_t len) -> std::uint64_t { return len > 15 ? ((len + 16) / 16) * 16 : 0; };
  std::uint64_t bytes = 0;
  bytes += shape.columns.total() * sizeof(std::uint64_t) +
           static_cast<std::uint64_t>(n) * (n - 1) * n * sizeof(int);                                     // space
  bytes += cols * (sizeof(std::string) + sizeof(double));                                                 // columns
  bytes += shape.columns.triple * heap(1 + 9 * (digits + 1)) + shape.columns.pair * heap(2 + 6 * (digits + 1));
  bytes += rows * (sizeof(std::string) + sizeof(RowFamily) + sizeof(double) + sizeof(std::size_t));       // rows
  for (std::size_t f = 0; f < kRowFamilyCount; ++f) {
    static constexpr std::array<int, kRowFamilyCount> kIndices = {0, 3, 2, 5, 7, 7, 7, 3, 6, 4, 4, 8, 8, 8, 0};
    const std::uint64_t len = to_string(static_cast<RowFamily>(f)).size() + kIndices[f] * (digits + 1);
    bytes += shape.rows_per_family[f] * heap(len);
  }
  bytes += shape.nnz() * (sizeof(int) + sizeof(double));
  return bytes;
}

}  // namespace qaplp
