#include "qaplp/mps.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <system_error>
#include <unordered_map>

namespace qaplp {

namespace {

constexpr std::string_view kObjectiveRow = "OBJ";

std::string format_number(double v) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), end);
}

double parse_number(std::string_view text) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size())
    throw std::invalid_argument("bad number in MPS: " + std::string(text));
  return v;
}

// Builds one line with fields at 1-based start columns.
class Line {
 public:
  Line& at(std::size_t column, std::string_view field) {
    const std::size_t want = column - 1;
    if (text_.size() < want) text_.append(want - text_.size(), ' ');
    else if (!text_.empty()) text_.append("  ");
    text_.append(field);
    return *this;
  }
  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

// Column-wise view of the model's CSR rows.
struct ColumnEntries {
  std::vector<std::size_t> start;
  std::vector<int> row;
  std::vector<double> value;
};

ColumnEntries by_column(const SparseModel& m) {
  ColumnEntries c;
  c.start.assign(m.cols() + 1, 0);
  for (int j : m.entry_col) ++c.start[static_cast<std::size_t>(j) + 1];
  for (std::size_t j = 0; j < m.cols(); ++j) c.start[j + 1] += c.start[j];
  c.row.resize(m.nnz());
  c.value.resize(m.nnz());
  std::vector<std::size_t> next(c.start.begin(), c.start.end() - 1);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t k = m.row_start[r]; k < m.row_start[r + 1]; ++k) {
      const std::size_t slot = next[static_cast<std::size_t>(m.entry_col[k])]++;
      c.row[slot] = static_cast<int>(r);
      c.value[slot] = m.entry_value[k];
    }
  return c;
}

}  // namespace

void write_mps(std::ostream& out, const SparseModel& model) {
  if (model.col_names.size() != model.cols() || model.row_names.size() != model.rows())
    throw std::invalid_argument("model names are incomplete");
  out << Line().at(1, "NAME").at(15, model.name.empty() ? "QAPLP" : model.name).str() << '\n';
  out << "ROWS\n";
  out << Line().at(2, "N").at(5, kObjectiveRow).str() << '\n';
  for (const auto& name : model.row_names) out << Line().at(2, "E").at(5, name).str() << '\n';

  out << "COLUMNS\n";
  const auto cols = by_column(model);
  for (std::size_t j = 0; j < model.cols(); ++j) {
    // (row name, value) pairs for this column, objective first.
    std::vector<std::pair<std::string_view, double>> fields;
    if (model.cost[j] != 0.0) fields.emplace_back(kObjectiveRow, model.cost[j]);
    for (std::size_t k = cols.start[j]; k < cols.start[j + 1]; ++k)
      fields.emplace_back(model.row_names[static_cast<std::size_t>(cols.row[k])], cols.value[k]);
    if (fields.empty()) fields.emplace_back(kObjectiveRow, 0.0);
    for (std::size_t k = 0; k < fields.size(); k += 2) {
      Line line;
      line.at(5, model.col_names[j]).at(15, fields[k].first).at(25, format_number(fields[k].second));
      if (k + 1 < fields.size()) line.at(40, fields[k + 1].first).at(50, format_number(fields[k + 1].second));
      out << line.str() << '\n';
    }
  }

  out << "RHS\n";
  std::vector<std::size_t> nonzero;
  for (std::size_t r = 0; r < model.rows(); ++r)
    if (model.rhs[r] != 0.0) nonzero.push_back(r);
  for (std::size_t k = 0; k < nonzero.size(); k += 2) {
    Line line;
    line.at(5, "RHS").at(15, model.row_names[nonzero[k]]).at(25, format_number(model.rhs[nonzero[k]]));
    if (k + 1 < nonzero.size())
      line.at(40, model.row_names[nonzero[k + 1]]).at(50, format_number(model.rhs[nonzero[k + 1]]));
    out << line.str() << '\n';
  }
  out << "ENDATA\n";
}

void export_mps(const SparseModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_mps(out, model);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

SparseModel read_mps(std::istream& in) {
  enum class Section { None, Rows, Columns, Rhs, Bounds, Done };
  Section section = Section::None;
  SparseModel model;
  std::string objective;
  std::unordered_map<std::string, int> row_index, col_index;
  std::vector<std::vector<std::pair<int, double>>> row_entries;

  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("MPS line " + std::to_string(line_no) + ": " + what);
  };

  while (section != Section::Done && std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '*') continue;
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    if (line[0] != ' ' && line[0] != '\t') {
      const std::string& head = tok[0];
      if (head == "NAME") model.name = tok.size() > 1 ? tok[1] : "";
      else if (head == "ROWS") section = Section::Rows;
      else if (head == "COLUMNS") section = Section::Columns;
      else if (head == "RHS") section = Section::Rhs;
      else if (head == "BOUNDS") section = Section::Bounds;
      else if (head == "ENDATA") section = Section::Done;
      else if (head == "OBJSENSE" || head == "RANGES") fail("unsupported section " + head);
      else fail("unknown section " + head);
      continue;
    }

    switch (section) {
      case Section::Rows: {
        if (tok.size() != 2) fail("ROWS entries need a type and a name");
        if (tok[0] == "N") {
          if (objective.empty()) objective = tok[1];
          continue;
        }
        if (tok[0] != "E") fail("only equality rows are supported");
        if (!row_index.emplace(tok[1], static_cast<int>(model.row_names.size())).second) fail("duplicate row " + tok[1]);
        model.row_names.push_back(tok[1]);
        model.rhs.push_back(0.0);
        row_entries.emplace_back();
        break;
      }
      case Section::Columns: {
        if (tok.size() >= 3 && tok[1] == "'MARKER'") continue;
        if (tok.size() != 3 && tok.size() != 5) fail("COLUMNS entries need 1 or 2 (row, value) pairs");
        auto [it, inserted] = col_index.emplace(tok[0], static_cast<int>(model.col_names.size()));
        if (inserted) {
          model.col_names.push_back(tok[0]);
          model.cost.push_back(0.0);
        } else if (it->second != static_cast<int>(model.col_names.size()) - 1) {
          fail("column " + tok[0] + " is not contiguous");
        }
        for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
          const double v = parse_number(tok[k + 1]);
          if (tok[k] == objective) {
            model.cost[static_cast<std::size_t>(it->second)] = v;
            continue;
          }
          const auto r = row_index.find(tok[k]);
          if (r == row_index.end()) fail("unknown row " + tok[k]);
          row_entries[static_cast<std::size_t>(r->second)].emplace_back(it->second, v);
        }
        break;
      }
      case Section::Rhs: {
        // The set name is optional in free MPS: pairs start at the parity that fits.
        const std::size_t first = tok.size() % 2 == 1 ? 1 : 0;
        for (std::size_t k = first; k + 1 < tok.size(); k += 2) {
          if (tok[k] == objective) continue;
          const auto r = row_index.find(tok[k]);
          if (r == row_index.end()) fail("unknown row " + tok[k]);
          model.rhs[static_cast<std::size_t>(r->second)] = parse_number(tok[k + 1]);
        }
        break;
      }
      case Section::Bounds: {
        if (tok[0] == "PL") continue;
        if (tok[0] == "LO" && tok.size() == 4 && parse_number(tok[3]) == 0.0) continue;
        fail("only default nonnegativity bounds are supported");
        break;
      }
      default: fail("data outside a section");
    }
  }
  if (section != Section::Done) throw std::invalid_argument("MPS file has no ENDATA");

  const auto names = std::move(model.row_names);
  const auto rhs = std::move(model.rhs);
  model.row_names.clear();
  model.rhs.clear();
  for (std::size_t r = 0; r < names.size(); ++r)
    model.add_row(names[r], row_family_from_name(names[r]), rhs[r], std::move(row_entries[r]));
  return model;
}

SparseModel import_mps(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_mps(in);
}

}  // namespace qaplp
