#include "qaplp/indexer.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <stdexcept>

namespace qaplp {

namespace {

std::uint64_t pack(const Arc& a) {
  return (static_cast<std::uint64_t>(a.tail) << 8) | (static_cast<std::uint64_t>(a.stage) << 4) |
         static_cast<std::uint64_t>(a.head);
}

Arc unpack(std::uint64_t key) {
  return Arc{static_cast<int>((key >> 8) & 0xF), static_cast<int>((key >> 4) & 0xF), static_cast<int>(key & 0xF)};
}

std::uint64_t pack(const ArcPair& p) { return (pack(p.first) << 12) | pack(p.second); }

std::uint64_t pack(const ArcTriple& t) { return (pack(t.first) << 24) | (pack(t.second) << 12) | pack(t.third); }

// Up to six (facility, site) assertions; partial injection check.
template <std::size_t N>
bool partial_injection(const std::array<Arc, N>& arcs) {
  std::array<std::pair<int, int>, 2 * N> asserts{};
  for (std::size_t k = 0; k < N; ++k) {
    if (arcs[k].tail == arcs[k].head) return false;
    asserts[2 * k] = {arcs[k].tail, arcs[k].stage};
    asserts[2 * k + 1] = {arcs[k].head, arcs[k].stage + 1};
  }
  for (std::size_t a = 0; a < asserts.size(); ++a)
    for (std::size_t b = a + 1; b < asserts.size(); ++b) {
      const bool same_level = asserts[a].first == asserts[b].first;
      const bool same_site = asserts[a].second == asserts[b].second;
      if (same_level != same_site) return false;
    }
  return true;
}

std::optional<int> find_key(const std::vector<std::uint64_t>& keys, std::uint64_t key, std::size_t offset) {
  auto it = std::lower_bound(keys.begin(), keys.end(), key);
  if (it == keys.end() || *it != key) return std::nullopt;
  return static_cast<int>(offset + static_cast<std::size_t>(it - keys.begin()));
}

std::string one_based(std::initializer_list<int> values) {
  std::string out;
  for (int v : values) {
    out += '_';
    out += std::to_string(v + 1);
  }
  return out;
}

}  // namespace

bool pair_admissible(const Arc& a, const Arc& b) {
  if (a.stage >= b.stage) throw std::invalid_argument("pair_admissible: stages must increase");
  return partial_injection(std::array<Arc, 2>{a, b});
}

bool triple_admissible(const Arc& a, const Arc& b, const Arc& c) {
  if (a.stage >= b.stage || b.stage >= c.stage) throw std::invalid_argument("triple_admissible: stages must increase");
  return partial_injection(std::array<Arc, 3>{a, b, c});
}

int sites_covered(std::initializer_list<int> stages) {
  std::set<int> sites;
  for (int r : stages) {
    sites.insert(r);
    sites.insert(r + 1);
  }
  return static_cast<int>(sites.size());
}

std::uint64_t falling_factorial(int n, int q) {
  std::uint64_t out = 1;
  for (int k = 0; k < q; ++k) {
    if (n - k <= 0) return 0;
    out *= static_cast<std::uint64_t>(n - k);
  }
  return out;
}

SpaceCounts count_space(int n) {
  if (n < 2) throw std::invalid_argument("count_space needs n >= 2");
  SpaceCounts c;
  const int stages = n - 1;
  c.diagonal = static_cast<std::uint64_t>(stages) * falling_factorial(n, 2);
  for (int r = 0; r < stages; ++r)
    for (int s = r + 1; s < stages; ++s) {
      c.pair += falling_factorial(n, sites_covered({r, s}));
      for (int t = s + 1; t < stages; ++t) c.triple += falling_factorial(n, sites_covered({r, s, t}));
    }
  return c;
}

VariableSpace::VariableSpace(int n) : n_(n) {
  if (n < 2) throw std::invalid_argument("variable space needs n >= 2");
  if (n > kMaxIndexedN) throw std::invalid_argument("variable space supports n <= " + std::to_string(kMaxIndexedN));

  std::vector<Arc> arcs;
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < n - 1; ++r)
      for (int j = 0; j < n; ++j)
        if (i != j) arcs.push_back(Arc{i, r, j});
  // arcs are already in (i, r, j) lexicographic order
  diag_lookup_.assign(static_cast<std::size_t>(n) * (n - 1) * n, -1);
  for (const Arc& a : arcs) {
    diag_lookup_[(static_cast<std::size_t>(a.tail) * (n - 1) + a.stage) * n + a.head] =
        static_cast<int>(diag_keys_.size());
    diag_keys_.push_back(pack(a));
  }

  std::vector<ArcPair> pairs;
  for (const Arc& a : arcs)
    for (const Arc& b : arcs)
      if (b.stage > a.stage && pair_admissible(a, b)) pairs.push_back(ArcPair{a, b});
  for (const ArcPair& p : pairs) pair_keys_.push_back(pack(p));
  std::sort(pair_keys_.begin(), pair_keys_.end());

  for (const ArcPair& p : pairs)
    for (const Arc& c : arcs)
      if (c.stage > p.second.stage && pair_admissible(p.first, c) && pair_admissible(p.second, c))
        triple_keys_.push_back(pack(ArcTriple{p.first, p.second, c}));
  std::sort(triple_keys_.begin(), triple_keys_.end());
}

bool VariableSpace::in_range(const Arc& a) const {
  return a.tail >= 0 && a.tail < n_ && a.head >= 0 && a.head < n_ && a.stage >= 0 && a.stage < n_ - 1;
}

std::optional<int> VariableSpace::index(const Arc& a) const {
  if (!in_range(a)) return std::nullopt;
  const int col = diag_lookup_[(static_cast<std::size_t>(a.tail) * (n_ - 1) + a.stage) * n_ + a.head];
  if (col < 0) return std::nullopt;
  return col;
}

std::optional<int> VariableSpace::index(const ArcPair& p) const {
  if (!in_range(p.first) || !in_range(p.second)) return std::nullopt;
  return find_key(pair_keys_, pack(p), pair_offset());
}

std::optional<int> VariableSpace::index(const ArcTriple& t) const {
  if (!in_range(t.first) || !in_range(t.second) || !in_range(t.third)) return std::nullopt;
  return find_key(triple_keys_, pack(t), triple_offset());
}

VarFamily VariableSpace::family(int column) const {
  const auto c = static_cast<std::size_t>(column);
  if (column < 0 || c >= size()) throw std::out_of_range("column out of range");
  if (c < pair_offset()) return VarFamily::Diagonal;
  if (c < triple_offset()) return VarFamily::Pair;
  return VarFamily::Triple;
}

Arc VariableSpace::arc(int column) const {
  if (family(column) != VarFamily::Diagonal) throw std::invalid_argument("column is not a diagonal variable");
  return unpack(diag_keys_[static_cast<std::size_t>(column)]);
}

ArcPair VariableSpace::pair(int column) const {
  if (family(column) != VarFamily::Pair) throw std::invalid_argument("column is not a pair variable");
  const std::uint64_t key = pair_keys_[static_cast<std::size_t>(column) - pair_offset()];
  return ArcPair{unpack(key >> 12), unpack(key & 0xFFF)};
}

ArcTriple VariableSpace::triple(int column) const {
  if (family(column) != VarFamily::Triple) throw std::invalid_argument("column is not a triple variable");
  const std::uint64_t key = triple_keys_[static_cast<std::size_t>(column) - triple_offset()];
  return ArcTriple{unpack(key >> 24), unpack((key >> 12) & 0xFFF), unpack(key & 0xFFF)};
}

std::string VariableSpace::name(int column) const {
  switch (family(column)) {
    case VarFamily::Diagonal: {
      const Arc a = arc(column);
      return "YD" + one_based({a.tail, a.stage, a.head});
    }
    case VarFamily::Pair: {
      const ArcPair p = pair(column);
      return "YP" + one_based({p.first.tail, p.first.stage, p.first.head, p.second.tail, p.second.stage, p.second.head});
    }
    case VarFamily::Triple: {
      const ArcTriple t = triple(column);
      return "Z" + one_based({t.first.tail, t.first.stage, t.first.head, t.second.tail, t.second.stage, t.second.head,
                              t.third.tail, t.third.stage, t.third.head});
    }
  }
  return {};
}

std::size_t VariableSpace::footprint_bytes() const {
  return sizeof(*this) + (diag_keys_.capacity() + pair_keys_.capacity() + triple_keys_.capacity()) * sizeof(std::uint64_t) +
         diag_lookup_.capacity() * sizeof(int);
}

VariableSpace build_space(int n) { return VariableSpace(n); }

}  // namespace qaplp
