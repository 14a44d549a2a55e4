// qaplp: generate QAP instances, build and export the lifted LP, solve it,
// audit the solution and summarize experiments.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qaplp/experiment.hpp"
#include "qaplp/mps.hpp"

using namespace qaplp;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitMemoryGuard = 3;

struct InstanceFlags {
  ExperimentConfig cfg;
  std::string mode = "no-opcost";
  std::string seeds = "1";
  bool uniform = false;
  std::string file;
  bool no_cuts = false;
  std::uint64_t memory_mib = kDefaultMemoryLimit >> 20;

  void add(CLI::App* app, bool seed_list) {
    app->add_option("--n", cfg.n, "number of facilities")->check(CLI::Range(2, 40));
    app->add_option("--mode", mode, "no-opcost | with-opcost")->check(CLI::IsMember({"no-opcost", "with-opcost"}));
    app->add_option("--seed", seeds, seed_list ? "seed, range a..b or comma list" : "seed");
    app->add_flag("--uniform", uniform, "uniform instance (QAPn{n}x)");
    app->add_option("--traffic", cfg.uniform_traffic, "uniform traffic value");
    app->add_option("--distance", cfg.uniform_distance, "uniform distance value");
    app->add_option("--instance", file, "instance file")->check(CLI::ExistingFile);
    app->add_flag("--no-cuts", no_cuts, "omit the valid-inequality rows");
    app->add_option("--memory-limit", memory_mib, "refuse to build beyond this many MiB");
  }

  // One config per seed; non-random sources give exactly one.
  std::vector<ExperimentConfig> configs() const {
    ExperimentConfig base = cfg;
    base.mode = parse_cost_mode(mode);
    base.model.valid_cuts = !no_cuts;
    base.memory_limit = memory_mib << 20;
    if (!file.empty()) {
      base.source = InstanceSource::File;
      base.instance_file = file;
    } else if (uniform) {
      base.source = InstanceSource::Uniform;
    }
    if (base.source != InstanceSource::Random) return {base};
    std::vector<ExperimentConfig> out;
    for (auto s : parse_seed_list(seeds)) {
      base.seed = s;
      out.push_back(base);
    }
    return out;
  }

  ExperimentConfig single() const {
    auto all = configs();
    if (all.size() != 1) throw std::invalid_argument("this command takes a single seed");
    return all.front();
  }
};

struct SolverFlags {
  std::string form = "dual";
  std::string pivot = "devex";
  SimplexOptions opts;
  int oracle_limit = kDefaultOracleLimit;
  int progress = 0;

  void add(CLI::App* app) {
    app->add_option("--form", form, "primal | dual")->check(CLI::IsMember({"primal", "dual"}));
    app->add_option("--pivot", pivot, "devex | bland")->check(CLI::IsMember({"devex", "bland"}));
    app->add_option("--tol-feas", opts.feasibility_tol, "feasibility tolerance");
    app->add_option("--tol-pivot", opts.pivot_tol, "pivot tolerance");
    app->add_option("--iter-limit", opts.iteration_limit, "iteration limit");
    app->add_option("--oracle-limit", oracle_limit, "largest n for brute-force optima");
    app->add_option("--progress", progress, "report every N iterations on stderr");
  }

  void apply(ExperimentConfig& cfg) const {
    cfg.solver = opts;
    cfg.solver.optimality_tol = opts.feasibility_tol;
    cfg.solver.form = parse_solve_form(form);
    cfg.solver.pricing = parse_pricing_rule(pivot);
    cfg.oracle_limit = oracle_limit;
    if (progress > 0) {
      cfg.solver.progress_every = progress;
      cfg.solver.progress = [](std::int64_t it, int phase, double obj) {
        std::fprintf(stderr, "iteration %lld  phase %d  objective %.6f\n", static_cast<long long>(it), phase, obj);
      };
    }
  }
};

std::ofstream open_out(const std::string& path, bool append = false) {
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

void warn_long_running(const ExperimentConfig& cfg) {
  if (cfg.source != InstanceSource::File) check_memory(cfg, true);
  if (cfg.source != InstanceSource::File && cfg.n >= 6)
    std::cerr << "note: the internal solve at n=" << cfg.n << " is long-running (minutes or more)\n";
}

json shape_json(const SparseModel& model, const VariableSpace& space, const ExperimentConfig& cfg) {
  json j;
  j["name"] = model.name;
  j["n"] = space.n();
  j["cuts"] = cfg.model.valid_cuts;
  j["columns"] = {{"diagonal", space.diagonal_count()},
                  {"pair", space.pair_count()},
                  {"triple", space.triple_count()},
                  {"total", model.cols()}};
  json fam;
  const auto counts = model.family_counts();
  for (std::size_t f = 0; f < counts.size(); ++f)
    if (counts[f]) fam[std::string(to_string(static_cast<RowFamily>(f)))] = counts[f];
  j["rows"] = {{"total", model.rows()}, {"families", fam}};
  j["nonzeros"] = model.nnz();
  j["bytes"] = space.footprint_bytes() + model.footprint_bytes();
  j["estimated_solve_bytes"] = estimate_solve_bytes(space.n(), cfg.solver.form, cfg.model);
  return j;
}

json audit_json(const ClaimAudit& a) {
  json j;
  j["classification"] = to_string(a.classification);
  j["lp_value"] = a.lp_value;
  j["oracle_value"] = a.oracle_value ? json(*a.oracle_value) : json(nullptr);
  j["oracle_matching"] = a.oracle_matching ? json(a.oracle_matching->to_string()) : json(nullptr);
  j["gap"] = a.abs_gap ? json(*a.abs_gap) : json(nullptr);
  j["rel_gap"] = a.rel_gap ? json(*a.rel_gap) : json(nullptr);
  j["vertex"] = a.is_vertex;
  j["integral"] = a.integral;
  j["decomposition"] = to_string(a.decomposition.verdict);
  j["residual"] = a.decomposition.residual;
  j["weight_sum"] = a.decomposition.weight_sum;
  j["weighted_value"] = a.weighted_value;
  json parts = json::array();
  for (const auto& p : a.decomposition.parts)
    parts.push_back({{"matching", p.matching.to_string()}, {"weight", p.weight}, {"value", p.value.value_or(0.0)}});
  j["matchings"] = parts;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lifted LP formulation of the quadratic assignment problem: build, solve, audit"};
  app.require_subcommand(1);

  InstanceFlags gen_in;
  std::string gen_dir = ".";
  auto* gen = app.add_subcommand("gen", "write instance files");
  gen_in.add(gen, true);
  gen->add_option("--out-dir", gen_dir, "output directory");

  InstanceFlags build_in;
  auto* build = app.add_subcommand("build", "build the model and print its shape");
  build_in.add(build, false);

  InstanceFlags export_in;
  std::string export_path;
  auto* exp = app.add_subcommand("export", "write the model as fixed-format MPS");
  export_in.add(exp, false);
  exp->add_option("--out", export_path, "MPS path (default {name}.mps)");

  InstanceFlags solve_in;
  SolverFlags solve_opts;
  std::string record_path, solution_path;
  std::optional<double> external;
  auto* slv = app.add_subcommand("solve", "solve, audit and print one record");
  solve_in.add(slv, false);
  solve_opts.add(slv);
  slv->add_option("--record-out", record_path, "append the record to this file");
  slv->add_option("--solution-out", solution_path, "write the solution to this file");
  slv->add_option("--external-objective", external, "objective from another solver to compare against");

  InstanceFlags audit_in;
  std::string audit_solution;
  int audit_oracle_limit = kDefaultOracleLimit;
  auto* aud = app.add_subcommand("audit", "audit a stored solution");
  audit_in.add(aud, false);
  aud->add_option("--solution", audit_solution, "solution file from solve")->required()->check(CLI::ExistingFile);
  aud->add_option("--oracle-limit", audit_oracle_limit, "largest n for brute-force optima");

  std::vector<std::string> table_inputs;
  std::string table_out, csv_out;
  auto* tab = app.add_subcommand("table", "summarize records");
  tab->add_option("records", table_inputs, "record files")->required()->check(CLI::ExistingFile);
  tab->add_option("--out", table_out, "write the fixed-width table here instead of stdout");
  tab->add_option("--csv", csv_out, "also write CSV here");

  InstanceFlags sweep_in;
  SolverFlags sweep_opts;
  int jobs = 1;
  std::string sweep_records;
  auto* swp = app.add_subcommand("sweep", "solve and audit many seeds");
  sweep_in.add(swp, true);
  sweep_opts.add(swp);
  swp->add_option("--jobs", jobs, "parallel solves")->check(CLI::PositiveNumber);
  swp->add_option("--records-out", sweep_records, "write all records to this file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      std::filesystem::create_directories(gen_dir);
      for (const auto& cfg : gen_in.configs()) {
        if (cfg.source == InstanceSource::File) throw std::invalid_argument("gen needs a random or uniform source");
        const auto path = std::filesystem::path(gen_dir) / (problem_name(cfg) + ".qap");
        write_instance_file(path.string(), load_instance(cfg), instance_metadata(cfg));
        std::cout << path.string() << "\n";
      }
    } else if (*build) {
      const auto cfg = build_in.single();
      const auto inst = load_instance(cfg);
      auto sized = cfg;
      sized.n = inst.n();
      check_memory(sized, false);
      const auto space = build_space(inst.n());
      auto model = build_model(inst, space, cfg.model);
      model.name = problem_name(cfg);
      std::cout << shape_json(model, space, sized).dump(2) << "\n";
    } else if (*exp) {
      const auto cfg = export_in.single();
      const auto inst = load_instance(cfg);
      auto sized = cfg;
      sized.n = inst.n();
      check_memory(sized, false);
      const auto space = build_space(inst.n());
      auto model = build_model(inst, space, cfg.model);
      model.name = problem_name(cfg);
      const std::string path = export_path.empty() ? model.name + ".mps" : export_path;
      export_mps(model, path);
      std::cout << path << "\n";
    } else if (*slv) {
      auto cfg = solve_in.single();
      solve_opts.apply(cfg);
      warn_long_running(cfg);
      const auto run = run_experiment(cfg, external);
      const std::string line = to_json_line(run.record);
      std::cout << line << "\n";
      if (!record_path.empty()) {
        auto out = open_out(record_path, true);
        out << line << "\n";
      }
      if (!solution_path.empty()) {
        auto out = open_out(solution_path);
        write_solution(out, run.record.name, build_space(run.record.n), run.solution);
      }
      if (run.record.status != LpStatus::Optimal) return 1;
      if (run.record.external_agree == false) {
        std::cerr << "external objective disagrees with the internal solve\n";
        return 1;
      }
    } else if (*aud) {
      auto cfg = audit_in.single();
      const auto inst = load_instance(cfg);
      const auto space = build_space(inst.n());
      std::ifstream in(audit_solution);
      const auto sol = read_solution(in, space);
      std::optional<OptimumResult> oracle;
      if (inst.n() <= audit_oracle_limit) oracle = brute_force_optimum(inst, audit_oracle_limit);
      json j;
      j["name"] = problem_name(cfg);
      j.update(audit_json(audit(inst, space, sol, oracle)));
      std::cout << j.dump(2) << "\n";
    } else if (*tab) {
      std::vector<ExperimentRecord> records;
      for (const auto& path : table_inputs) {
        std::ifstream in(path);
        auto more = read_records(in);
        records.insert(records.end(), more.begin(), more.end());
      }
      if (records.empty()) throw std::invalid_argument("no records to tabulate");
      const std::string table = format_table(records);
      if (table_out.empty()) std::cout << table;
      else write_text(table_out, table);
      if (!csv_out.empty()) write_text(csv_out, format_csv(records));
    } else if (*swp) {
      auto base = sweep_in.configs().front();
      sweep_opts.apply(base);
      base.solver.progress = nullptr;
      warn_long_running(base);
      const auto summary = run_sweep(base, parse_seed_list(sweep_in.seeds), jobs);
      if (!sweep_records.empty()) {
        auto out = open_out(sweep_records);
        for (const auto& r : summary.records) out << to_json_line(r) << "\n";
      }
      std::cout << format_sweep(summary);
    }
  } catch (const MemoryGuardError& e) {
    std::cerr << "qaplp: refused: " << e.what() << "\n";
    return kExitMemoryGuard;
  } catch (const std::exception& e) {
    std::cerr << "qaplp: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
