#pragma once

#include <filesystem>
#include <iosfwd>

#include "qaplp/model.hpp"

namespace qaplp {

/// MPS writer: fields start at columns 2/5/15/25/40/50; a name longer than
/// its field pushes later fields right, separated by two spaces. Numbers use
/// the shortest representation that reads back to the same double.
void write_mps(std::ostream& out, const SparseModel& model);
void export_mps(const SparseModel& model, const std::filesystem::path& path);

/// Reads whitespace-separated MPS (fixed files with short names included).
/// Supports N and E rows, COLUMNS, RHS and default bounds only.
SparseModel read_mps(std::istream& in);
SparseModel import_mps(const std::filesystem::path& path);

}  // namespace qaplp
