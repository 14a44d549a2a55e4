#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qaplp/analysis.hpp"

namespace qaplp {

enum class InstanceSource { Random, Uniform, File };
std::string_view to_string(InstanceSource source);
InstanceSource parse_instance_source(std::string_view text);

inline constexpr int kDefaultOracleLimit = 8;
inline constexpr std::uint64_t kDefaultMemoryLimit = std::uint64_t{4} << 30;

struct ExperimentConfig {
  int n = 4;
  InstanceSource source = InstanceSource::Random;
  CostMode mode = CostMode::NoOpcost;
  std::uint64_t seed = 1;
  std::filesystem::path instance_file;
  double uniform_traffic = 50.0;
  double uniform_distance = 10.0;
  SimplexOptions solver;
  ModelOptions model;
  int oracle_limit = kDefaultOracleLimit;
  std::uint64_t memory_limit = kDefaultMemoryLimit;
  int repetitions = 1;

  /// Throws std::invalid_argument on n < 2, repetitions < 1 or a missing file path.
  void validate() const;
};

/// QAPn{n}{seed}, QAPo{n}{seed}, QAPn{n}x, or the file stem.
std::string problem_name(const ExperimentConfig& cfg);

QapInstance load_instance(const ExperimentConfig& cfg);

/// Comment lines written into generated instance files.
std::vector<std::string> instance_metadata(const ExperimentConfig& cfg);

/// Memory needed to build and solve, refused above cfg.memory_limit.
class MemoryGuardError : public std::runtime_error {
 public:
  MemoryGuardError(std::uint64_t estimate, std::uint64_t limit);
  std::uint64_t estimate() const { return estimate_; }

 private:
  std::uint64_t estimate_;
};
void check_memory(const ExperimentConfig& cfg, bool with_solver);

struct ExperimentRecord {
  std::string name;
  int n = 0;
  InstanceSource source = InstanceSource::Random;
  CostMode mode = CostMode::NoOpcost;
  std::optional<std::uint64_t> seed;
  bool cuts = true;
  SolveForm form = SolveForm::Dual;
  PricingRule pricing = PricingRule::Devex;
  LpStatus status = LpStatus::Optimal;
  double lp_value = 0.0;
  std::optional<double> oracle_value;
  std::optional<std::string> oracle_matching;
  std::optional<double> gap;
  std::optional<double> rel_gap;
  std::optional<Classification> classification;
  int pbm_solutions = 0;  // distinct matchings in the decomposition
  bool integral = false;
  std::optional<DecompositionVerdict> decomposition;
  double decomposition_residual = 0.0;
  double weighted_value = 0.0;
  std::int64_t iterations = 0;
  std::int64_t phase1_iterations = 0;
  double max_residual = 0.0;
  double min_reduced_cost = 0.0;
  std::optional<double> external_value;
  std::optional<bool> external_agree;
  double wall_seconds = 0.0;

  bool uniform() const { return source == InstanceSource::Uniform; }
};

/// One JSON object per line, keys in a fixed order.
std::string to_json_line(const ExperimentRecord& rec);
ExperimentRecord record_from_json(const std::string& line);
std::vector<ExperimentRecord> read_records(std::istream& in);

/// Everything one solve produces.
struct RunResult {
  ExperimentRecord record;
  LpSolution solution;
  std::optional<ClaimAudit> audit;
};

/// Builds, solves and audits one instance.
RunResult run_experiment(const ExperimentConfig& cfg, std::optional<double> external_objective = std::nullopt);

/// Text solution file: header lines, the basis, then nonzero values by column name.
void write_solution(std::ostream& out, const std::string& name, const VariableSpace& space, const LpSolution& sol);
LpSolution read_solution(std::istream& in, const VariableSpace& space);

/// Fixed-width layout and a CSV twin; records are grouped by n and name
/// prefix, and group averages leave out uniform instances and runs that did
/// not reach optimality.
std::string format_table(const std::vector<ExperimentRecord>& records);
std::string format_csv(const std::vector<ExperimentRecord>& records);

/// Command line that reproduces one record.
std::string replay_command(const ExperimentConfig& cfg);

struct SweepSummary {
  std::vector<ExperimentRecord> records;
  std::map<std::string, int> tally;  // classification or solver status
  struct Candidate {
    std::uint64_t seed;
    std::string reason;
    std::string replay;
  };
  std::vector<Candidate> candidates;
};

/// Runs every seed in `seeds` with `base` otherwise unchanged. Workers pull
/// seeds in order; records come back in seed-list order.
SweepSummary run_sweep(const ExperimentConfig& base, const std::vector<std::uint64_t>& seeds, int jobs = 1);

std::string format_sweep(const SweepSummary& summary);

/// `3`, `1..5`, `1,4,9` or mixes such as `1..3,7`.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

}  // namespace qaplp
