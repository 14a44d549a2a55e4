#include "qaplp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qaplp {

namespace {

void check_matrix(const SquareMatrix& m, int n, const char* what) {
  if (m.size() != n) throw std::invalid_argument(std::string(what) + " matrix is not n x n");
  for (double v : m.values()) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument(std::string(what) + " entries must be finite and non-negative");
  }
}

void check_index(int idx, int n, const char* what) {
  if (idx < 0 || idx >= n) throw std::out_of_range(std::string(what) + " index out of range");
}

}  // namespace

QapInstance::QapInstance(SquareMatrix traffic, SquareMatrix distance, SquareMatrix opcost)
    : n_(traffic.size()), traffic_(std::move(traffic)), distance_(std::move(distance)), opcost_(std::move(opcost)) {
  if (n_ < 1) throw std::invalid_argument("instance needs n >= 1");
  check_matrix(traffic_, n_, "traffic");
  check_matrix(distance_, n_, "distance");
  check_matrix(opcost_, n_, "opcost");
}

Matching::Matching(std::vector<Facility> assign) : assign_(std::move(assign)) {
  std::vector<bool> seen(assign_.size(), false);
  for (Facility f : assign_) {
    if (f < 0 || f >= size() || seen[static_cast<std::size_t>(f)])
      throw std::invalid_argument("matching is not a permutation");
    seen[static_cast<std::size_t>(f)] = true;
  }
}

Matching Matching::identity(int n) {
  std::vector<Facility> a(static_cast<std::size_t>(n));
  std::iota(a.begin(), a.end(), 0);
  return Matching(std::move(a));
}

std::string Matching::to_string() const {
  std::string out = "(";
  for (std::size_t t = 0; t < assign_.size(); ++t) {
    if (t) out += ' ';
    out += std::to_string(assign_[t] + 1);
  }
  return out + ")";
}

Matching Matching::parse(const std::string& text) {
  std::string cleaned;
  for (char c : text) cleaned += (c == '(' || c == ')' || c == ',') ? ' ' : c;
  std::istringstream in(cleaned);
  std::vector<Facility> a;
  for (int v; in >> v;) a.push_back(v - 1);
  if (!in.eof()) throw std::invalid_argument("malformed matching: " + text);
  return Matching(std::move(a));
}

double handling_cost(const QapInstance& inst, Facility i, Site r, Facility j, Site s) {
  const int n = inst.n();
  check_index(i, n, "facility");
  check_index(j, n, "facility");
  check_index(r, n, "site");
  check_index(s, n, "site");
  if (i == j) throw std::invalid_argument("handling cost needs distinct facilities");
  if (r == s) throw std::invalid_argument("handling cost needs distinct sites");
  return inst.traffic()(i, j) * inst.distance()(r, s) + inst.traffic()(j, i) * inst.distance()(s, r);
}

double evaluate(const QapInstance& inst, const Matching& m) {
  const int n = inst.n();
  if (m.size() != n) throw std::invalid_argument("matching size does not match instance");
  double total = 0.0;
  for (Site r = 0; r < n; ++r) {
    total += inst.opcost()(m.facility_at(r), r);
    for (Site s = r + 1; s < n; ++s) total += handling_cost(inst, m.facility_at(r), r, m.facility_at(s), s);
  }
  return total;
}

OptimumResult brute_force_optimum(const QapInstance& inst, int enumeration_limit) {
  const int n = inst.n();
  if (n > enumeration_limit)
    throw std::invalid_argument("n = " + std::to_string(n) + " exceeds enumeration limit " +
                                std::to_string(enumeration_limit));
  std::vector<Facility> assign(static_cast<std::size_t>(n));
  std::iota(assign.begin(), assign.end(), 0);
  OptimumResult best{Matching(assign), evaluate(inst, Matching(assign))};
  while (std::next_permutation(assign.begin(), assign.end())) {
    Matching m(assign);
    double v = evaluate(inst, m);
    if (v < best.value) best = OptimumResult{std::move(m), v};
  }
  return best;
}

std::string to_string(CostMode mode) { return mode == CostMode::NoOpcost ? "no-opcost" : "with-opcost"; }

CostMode parse_cost_mode(const std::string& text) {
  if (text == "no-opcost") return CostMode::NoOpcost;
  if (text == "with-opcost") return CostMode::WithOpcost;
  throw std::invalid_argument("unknown cost mode: " + text);
}

Pcg32::Pcg32(std::uint64_t seed, std::uint64_t stream) : inc_((stream << 1u) | 1u) {
  next();
  state_ += seed;
  next();
}

std::uint32_t Pcg32::next() {
  const std::uint64_t old = state_;
  state_ = old * 6364136223846793005ULL + inc_;
  const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
  const auto rot = static_cast<std::uint32_t>(old >> 59u);
  return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
}

std::int64_t Pcg32::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("empty integer range");
  const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
  if (range > (1ULL << 32)) throw std::invalid_argument("integer range wider than 32 bits");
  if (range == (1ULL << 32)) return lo + next();
  const std::uint64_t threshold = ((1ULL << 32) - range) % range;
  for (;;) {
    const std::uint64_t r = next();
    if (r >= threshold) return lo + static_cast<std::int64_t>(r % range);
  }
}

QapInstance generate_random(int n, CostMode mode, std::uint64_t seed, bool symmetric, const RandomRanges& ranges) {
  if (n < 2) throw std::invalid_argument("random instances need n >= 2");
  if (ranges.traffic_lo < 0 || ranges.distance_lo < 0 || ranges.opcost_lo < 0 ||
      ranges.traffic_hi < ranges.traffic_lo || ranges.distance_hi < ranges.distance_lo ||
      ranges.opcost_hi < ranges.opcost_lo)
    throw std::invalid_argument("invalid random ranges");
  Pcg32 rng(seed);
  SquareMatrix traffic(n), distance(n), opcost(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) traffic(i, j) = static_cast<double>(rng.uniform_int(ranges.traffic_lo, ranges.traffic_hi));
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) {
      if (r == s || (symmetric && s < r)) continue;
      distance(r, s) = static_cast<double>(rng.uniform_int(ranges.distance_lo, ranges.distance_hi));
      if (symmetric) distance(s, r) = distance(r, s);
    }
  if (mode == CostMode::WithOpcost)
    for (int i = 0; i < n; ++i)
      for (int r = 0; r < n; ++r)
        opcost(i, r) = static_cast<double>(rng.uniform_int(ranges.opcost_lo, ranges.opcost_hi));
  return QapInstance(std::move(traffic), std::move(distance), std::move(opcost));
}

QapInstance make_uniform(int n, double f0, double d0) {
  if (n < 2) throw std::invalid_argument("uniform instances need n >= 2");
  if (!(f0 >= 0.0) || !(d0 >= 0.0)) throw std::invalid_argument("uniform values must be non-negative");
  SquareMatrix traffic(n, f0), distance(n, d0);
  for (int i = 0; i < n; ++i) {
    traffic(i, i) = 0.0;
    distance(i, i) = 0.0;
  }
  return QapInstance(std::move(traffic), std::move(distance), SquareMatrix(n));
}

QapInstance read_instance(std::istream& in) {
  std::string text, line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    text += line;
    text += '\n';
  }
  std::istringstream tokens(text);
  std::vector<double> values;
  for (std::string tok; tokens >> tok;) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw std::invalid_argument("instance file: bad number '" + tok + "'");
    values.push_back(v);
  }
  if (values.empty()) throw std::invalid_argument("instance file is empty");
  const double nd = values.front();
  if (nd < 1 || nd != std::floor(nd)) throw std::invalid_argument("instance file: bad n");
  const int n = static_cast<int>(nd);
  const std::size_t block = static_cast<std::size_t>(n) * n;
  const std::size_t count = values.size() - 1;
  if (count != 2 * block && count != 3 * block)
    throw std::invalid_argument("instance file: expected 2 or 3 matrices of size " + std::to_string(n));
  auto take = [&](std::size_t k) {
    SquareMatrix m(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) m(a, b) = values[1 + k * block + static_cast<std::size_t>(a) * n + b];
    return m;
  };
  return QapInstance(take(0), take(1), count == 3 * block ? take(2) : SquareMatrix(n));
}

QapInstance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path);
  return read_instance(in);
}

void write_instance(std::ostream& out, const QapInstance& inst, const std::vector<std::string>& metadata) {
  const int n = inst.n();
  out << n << "\n";
  for (const SquareMatrix* m : {&inst.traffic(), &inst.distance(), &inst.opcost()}) {
    out << "\n";
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (b) out << ' ';
        std::ostringstream cell;
        cell.precision(17);
        cell << (*m)(a, b);
        out << cell.str();
      }
      out << "\n";
    }
  }
  if (!metadata.empty()) out << "\n";
  for (const auto& line : metadata) out << "# " << line << "\n";
}

void write_instance_file(const std::string& path, const QapInstance& inst, const std::vector<std::string>& metadata) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file " + path);
  write_instance(out, inst, metadata);
  if (!out) throw std::runtime_error("failed writing instance file " + path);
}

}  // namespace qaplp
