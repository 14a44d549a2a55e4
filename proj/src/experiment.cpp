#include "qaplp/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "json.hpp"

namespace qaplp {

using json = nlohmann::ordered_json;

namespace {

std::string shortest(double v) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), end);
}

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> opt_get(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  // "-0.000" and "0.000" must render the same for byte-stable tables.
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

std::string scientific(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string cell(std::string_view text, std::size_t width, bool left = false) {
  std::string s(text);
  if (s.size() >= width) return s;
  return left ? s + std::string(width - s.size(), ' ') : std::string(width - s.size(), ' ') + s;
}

}  // namespace

std::string_view to_string(InstanceSource source) {
  switch (source) {
    case InstanceSource::Random: return "random";
    case InstanceSource::Uniform: return "uniform";
    case InstanceSource::File: return "file";
  }
  return "unknown";
}

InstanceSource parse_instance_source(std::string_view text) {
  for (auto s : {InstanceSource::Random, InstanceSource::Uniform, InstanceSource::File})
    if (to_string(s) == text) return s;
  throw std::invalid_argument("unknown instance source: " + std::string(text));
}

void ExperimentConfig::validate() const {
  if (source != InstanceSource::File && n < 2) throw std::invalid_argument("n must be at least 2");
  if (repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
  if (source == InstanceSource::File && instance_file.empty()) throw std::invalid_argument("instance file path is empty");
  if (oracle_limit < 0) throw std::invalid_argument("oracle limit must be nonnegative");
}

std::string problem_name(const ExperimentConfig& cfg) {
  switch (cfg.source) {
    case InstanceSource::Uniform: return "QAPn" + std::to_string(cfg.n) + "x";
    case InstanceSource::File: return cfg.instance_file.stem().string();
    case InstanceSource::Random:
      return (cfg.mode == CostMode::NoOpcost ? "QAPn" : "QAPo") + std::to_string(cfg.n) + std::to_string(cfg.seed);
  }
  return "QAP";
}

QapInstance load_instance(const ExperimentConfig& cfg) {
  switch (cfg.source) {
    case InstanceSource::Uniform: return make_uniform(cfg.n, cfg.uniform_traffic, cfg.uniform_distance);
    case InstanceSource::File: return read_instance_file(cfg.instance_file.string());
    case InstanceSource::Random: return generate_random(cfg.n, cfg.mode, cfg.seed);
  }
  throw std::invalid_argument("unknown instance source");
}

std::vector<std::string> instance_metadata(const ExperimentConfig& cfg) {
  std::vector<std::string> meta{"name " + problem_name(cfg), "source " + std::string(to_string(cfg.source))};
  if (cfg.source == InstanceSource::Random) {
    meta.push_back("mode " + to_string(cfg.mode));
    meta.push_back("seed " + std::to_string(cfg.seed));
    meta.push_back(std::string("rng ") + Pcg32::kName);
  } else if (cfg.source == InstanceSource::Uniform) {
    meta.push_back("traffic " + shortest(cfg.uniform_traffic));
    meta.push_back("distance " + shortest(cfg.uniform_distance));
  }
  return meta;
}

MemoryGuardError::MemoryGuardError(std::uint64_t estimate, std::uint64_t limit)
    : std::runtime_error("estimated memory " + std::to_string(estimate >> 20) + " MiB exceeds the limit of " +
                         std::to_string(limit >> 20) + " MiB"),
      estimate_(estimate) {}

void check_memory(const ExperimentConfig& cfg, bool with_solver) {
  if (cfg.n > kMaxCountedN) throw MemoryGuardError(UINT64_MAX, cfg.memory_limit);
  const std::uint64_t need =
      with_solver ? estimate_solve_bytes(cfg.n, cfg.solver.form, cfg.model) : estimate_model_bytes(cfg.n, cfg.model);
  if (need > cfg.memory_limit) throw MemoryGuardError(need, cfg.memory_limit);
}

std::string to_json_line(const ExperimentRecord& r) {
  json j;
  j["name"] = r.name;
  j["n"] = r.n;
  j["source"] = to_string(r.source);
  j["mode"] = to_string(r.mode);
  j["seed"] = opt(r.seed);
  j["rng"] = r.source == InstanceSource::Random ? json(Pcg32::kName) : json(nullptr);
  j["cuts"] = r.cuts;
  j["form"] = to_string(r.form);
  j["pricing"] = to_string(r.pricing);
  j["status"] = to_string(r.status);
  j["lp_value"] = r.lp_value;
  j["oracle_value"] = opt(r.oracle_value);
  j["oracle_matching"] = opt(r.oracle_matching);
  j["gap"] = opt(r.gap);
  j["rel_gap"] = opt(r.rel_gap);
  j["classification"] = r.classification ? json(to_string(*r.classification)) : json(nullptr);
  j["pbm_solutions"] = r.pbm_solutions;
  j["integral"] = r.integral;
  j["decomposition"] = r.decomposition ? json(to_string(*r.decomposition)) : json(nullptr);
  j["decomposition_residual"] = r.decomposition_residual;
  j["weighted_value"] = r.weighted_value;
  j["iterations"] = r.iterations;
  j["phase1_iterations"] = r.phase1_iterations;
  j["max_residual"] = r.max_residual;
  j["min_reduced_cost"] = r.min_reduced_cost;
  j["external_value"] = opt(r.external_value);
  j["external_agree"] = opt(r.external_agree);
  j["wall_seconds"] = r.wall_seconds;
  return j.dump();
}

ExperimentRecord record_from_json(const std::string& line) {
  const json j = json::parse(line);
  ExperimentRecord r;
  r.name = j.at("name").get<std::string>();
  r.n = j.at("n").get<int>();
  r.source = parse_instance_source(j.at("source").get<std::string>());
  r.mode = parse_cost_mode(j.at("mode").get<std::string>());
  r.seed = opt_get<std::uint64_t>(j, "seed");
  r.cuts = j.at("cuts").get<bool>();
  r.form = parse_solve_form(j.at("form").get<std::string>());
  r.pricing = parse_pricing_rule(j.at("pricing").get<std::string>());
  r.status = parse_lp_status(j.at("status").get<std::string>());
  r.lp_value = j.at("lp_value").get<double>();
  r.oracle_value = opt_get<double>(j, "oracle_value");
  r.oracle_matching = opt_get<std::string>(j, "oracle_matching");
  r.gap = opt_get<double>(j, "gap");
  r.rel_gap = opt_get<double>(j, "rel_gap");
  if (auto c = opt_get<std::string>(j, "classification")) r.classification = parse_classification(*c);
  r.pbm_solutions = j.at("pbm_solutions").get<int>();
  r.integral = j.at("integral").get<bool>();
  if (auto d = opt_get<std::string>(j, "decomposition")) r.decomposition = parse_decomposition_verdict(*d);
  r.decomposition_residual = j.at("decomposition_residual").get<double>();
  r.weighted_value = j.at("weighted_value").get<double>();
  r.iterations = j.at("iterations").get<std::int64_t>();
  r.phase1_iterations = j.at("phase1_iterations").get<std::int64_t>();
  r.max_residual = j.at("max_residual").get<double>();
  r.min_reduced_cost = j.at("min_reduced_cost").get<double>();
  r.external_value = opt_get<double>(j, "external_value");
  r.external_agree = opt_get<bool>(j, "external_agree");
  r.wall_seconds = j.at("wall_seconds").get<double>();
  return r;
}

std::vector<ExperimentRecord> read_records(std::istream& in) {
  std::vector<ExperimentRecord> out;
  std::string line;
  while (std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(record_from_json(line));
  return out;
}

RunResult run_experiment(const ExperimentConfig& cfg, std::optional<double> external_objective) {
  cfg.validate();
  const QapInstance inst = load_instance(cfg);
  ExperimentConfig sized = cfg;
  sized.n = inst.n();
  check_memory(sized, true);

  const auto space = build_space(inst.n());
  auto model = build_model(inst, space, cfg.model);
  model.name = problem_name(cfg);

  RunResult out;
  out.solution = solve(model, cfg.solver);
  const LpSolution& sol = out.solution;

  ExperimentRecord& r = out.record;
  r.name = model.name;
  r.n = inst.n();
  r.source = cfg.source;
  r.mode = cfg.mode;
  if (cfg.source == InstanceSource::Random) r.seed = cfg.seed;
  r.cuts = cfg.model.valid_cuts;
  r.form = cfg.solver.form;
  r.pricing = cfg.solver.pricing;
  r.status = sol.status;
  r.lp_value = sol.objective;
  r.iterations = sol.iterations;
  r.phase1_iterations = sol.phase1_iterations;
  r.wall_seconds = sol.wall_seconds;

  if (sol.status == LpStatus::Optimal) {
    const auto v = verify_solution(model, sol);
    r.max_residual = v.max_residual;
    r.min_reduced_cost = v.min_reduced_cost;
    std::optional<OptimumResult> oracle;
    if (inst.n() <= cfg.oracle_limit) oracle = brute_force_optimum(inst, cfg.oracle_limit);
    out.audit = audit(inst, space, sol, oracle);
    const ClaimAudit& a = *out.audit;
    r.oracle_value = a.oracle_value;
    if (a.oracle_matching) r.oracle_matching = a.oracle_matching->to_string();
    r.gap = a.abs_gap;
    r.rel_gap = a.rel_gap;
    r.classification = a.classification;
    r.pbm_solutions = static_cast<int>(a.decomposition.distinct_matchings());
    r.integral = a.integral;
    r.decomposition = a.decomposition.verdict;
    r.decomposition_residual = a.decomposition.residual;
    r.weighted_value = a.weighted_value;
  }
  if (external_objective) {
    r.external_value = *external_objective;
    r.external_agree = sol.status == LpStatus::Optimal && compare_objectives(sol.objective, *external_objective).agree;
  }
  return out;
}

void write_solution(std::ostream& out, const std::string& name, const VariableSpace& space, const LpSolution& sol) {
  if (sol.x.size() != space.size()) throw std::invalid_argument("solution size does not match the variable space");
  out << "problem " << name << "\n";
  out << "status " << to_string(sol.status) << "\n";
  out << "form " << to_string(sol.form) << "\n";
  out << "objective " << shortest(sol.objective) << "\n";
  out << "iterations " << sol.iterations << "\n";
  out << "basis";
  for (int b : sol.basis) out << ' ' << b;
  out << "\n";
  for (std::size_t c = 0; c < sol.x.size(); ++c)
    if (sol.x[c] != 0.0) out << "x " << space.name(static_cast<int>(c)) << ' ' << shortest(sol.x[c]) << "\n";
}

LpSolution read_solution(std::istream& in, const VariableSpace& space) {
  std::unordered_map<std::string, int> by_name;
  by_name.reserve(space.size());
  for (std::size_t c = 0; c < space.size(); ++c) by_name.emplace(space.name(static_cast<int>(c)), static_cast<int>(c));

  LpSolution sol;
  sol.x.assign(space.size(), 0.0);
  bool have_status = false;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "status") {
      std::string s;
      ls >> s;
      sol.status = parse_lp_status(s);
      have_status = true;
    } else if (key == "form") {
      std::string s;
      ls >> s;
      sol.form = parse_solve_form(s);
    } else if (key == "objective") {
      ls >> sol.objective;
    } else if (key == "iterations") {
      ls >> sol.iterations;
    } else if (key == "basis") {
      for (int b; ls >> b;) sol.basis.push_back(b);
    } else if (key == "x") {
      std::string col;
      double v = 0.0;
      if (!(ls >> col >> v)) throw std::invalid_argument("bad solution line: " + line);
      const auto it = by_name.find(col);
      if (it == by_name.end()) throw std::invalid_argument("unknown variable in solution: " + col);
      sol.x[static_cast<std::size_t>(it->second)] = v;
    } else if (key != "problem") {
      throw std::invalid_argument("bad solution line: " + line);
    }
  }
  if (!have_status) throw std::invalid_argument("solution file has no status line");
  return sol;
}

namespace {

std::string group_label(const ExperimentRecord& r) {
  if (r.source == InstanceSource::File) return "file";
  return r.mode == CostMode::NoOpcost ? "QAPn" : "QAPo";
}

struct Group {
  int n;
  std::string label;
  std::vector<const ExperimentRecord*> rows;
};

std::vector<Group> group_records(const std::vector<ExperimentRecord>& records) {
  std::vector<Group> groups;
  for (const auto& r : records) {
    const std::string label = group_label(r);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) { return g.n == r.n && g.label == label; });
    if (it == groups.end()) groups.push_back({r.n, label, {&r}});
    else it->rows.push_back(&r);
  }
  auto rank = [](const std::string& l) { return l == "QAPn" ? 0 : l == "QAPo" ? 1 : 2; };
  std::stable_sort(groups.begin(), groups.end(), [&](const Group& a, const Group& b) {
    return std::pair(a.n, rank(a.label)) < std::pair(b.n, rank(b.label));
  });
  return groups;
}

struct Averages {
  std::size_t count = 0;
  double matchings = 0, iterations = 0, seconds = 0, value = 0;
  std::size_t oracle_count = 0;
  double oracle = 0, gap = 0;
  std::vector<std::string> excluded;
};

Averages average(const Group& g) {
  Averages a;
  for (const auto* r : g.rows) {
    if (r->uniform() || r->status != LpStatus::Optimal) {
      a.excluded.push_back(r->name);
      continue;
    }
    ++a.count;
    a.matchings += r->pbm_solutions;
    a.iterations += static_cast<double>(r->iterations);
    a.seconds += r->wall_seconds;
    a.value += r->lp_value;
    if (r->oracle_value && r->gap) {
      ++a.oracle_count;
      a.oracle += *r->oracle_value;
      a.gap += *r->gap;
    }
  }
  if (a.count) {
    const double k = static_cast<double>(a.count);
    a.matchings /= k;
    a.iterations /= k;
    a.seconds /= k;
    a.value /= k;
  }
  if (a.oracle_count) {
    a.oracle /= static_cast<double>(a.oracle_count);
    a.gap /= static_cast<double>(a.oracle_count);
  }
  return a;
}

std::string verdict_text(const ExperimentRecord& r) {
  return r.classification ? std::string(to_string(*r.classification)) : "solver " + std::string(to_string(r.status));
}

std::string excluded_note(const Averages& a) {
  std::string note = "* excludes ";
  for (std::size_t k = 0; k < a.excluded.size(); ++k) note += (k ? ", " : "") + a.excluded[k];
  return note + "\n";
}

}  // namespace

std::string format_table(const std::vector<ExperimentRecord>& records) {
  constexpr std::array<std::size_t, 8> w{16, 10, 11, 10, 15, 15, 10, 0};
  auto row = [&](const std::array<std::string, 8>& f) {
    std::string line = cell(f[0], w[0], true);
    for (std::size_t k = 1; k < 7; ++k) line += "  " + cell(f[k], w[k]);
    line += "  " + f[7];
    while (!line.empty() && line.back() == ' ') line.pop_back();
    return line + "\n";
  };
  const std::string header =
      row({"Problem", "Matchings", "Iterations", "Seconds", "LP value", "Oracle", "Gap", "Classification"});
  const std::string rule(header.size() - 1, '-');

  std::string out;
  for (const auto& g : group_records(records)) {
    out += "n = " + std::to_string(g.n) + ", " + g.label + "\n" + header + rule + "\n";
    for (const auto* r : g.rows)
      out += row({r->name, std::to_string(r->pbm_solutions), std::to_string(r->iterations), fixed(r->wall_seconds, 2),
                  fixed(r->lp_value, 3), r->oracle_value ? fixed(*r->oracle_value, 3) : "-",
                  r->gap ? scientific(*r->gap) : "-", verdict_text(*r)});
    const Averages a = average(g);
    if (a.count) {
      out += rule + "\n";
      out += row({a.excluded.empty() ? "Average" : "Average*", fixed(a.matchings, 1), fixed(a.iterations, 1), fixed(a.seconds, 2),
                  fixed(a.value, 3), a.oracle_count ? fixed(a.oracle, 3) : "-", a.oracle_count ? scientific(a.gap) : "-",
                  ""});
      if (!a.excluded.empty()) out += excluded_note(a);
    }
    out += "\n";
  }
  out += "Matchings: distinct matchings in the decomposition of the LP optimum.\n";
  return out;
}

std::string format_csv(const std::vector<ExperimentRecord>& records) {
  std::string out = "problem,n,group,matchings,iterations,seconds,lp_value,oracle_value,gap,classification\n";
  for (const auto& g : group_records(records)) {
    const std::string prefix = std::to_string(g.n) + "," + g.label + ",";
    for (const auto* r : g.rows)
      out += r->name + "," + prefix + std::to_string(r->pbm_solutions) + "," + std::to_string(r->iterations) + "," +
             shortest(r->wall_seconds) + "," + shortest(r->lp_value) + "," +
             (r->oracle_value ? shortest(*r->oracle_value) : "") + "," + (r->gap ? shortest(*r->gap) : "") + "," +
             verdict_text(*r) + "\n";
    const Averages a = average(g);
    if (a.count)
      out += "average," + prefix + shortest(a.matchings) + "," + shortest(a.iterations) + "," + shortest(a.seconds) +
             "," + shortest(a.value) + "," + (a.oracle_count ? shortest(a.oracle) : "") + "," +
             (a.oracle_count ? shortest(a.gap) : "") + ",\n";
  }
  return out;
}

std::string replay_command(const ExperimentConfig& cfg) {
  std::string cmd = "qaplp solve";
  switch (cfg.source) {
    case InstanceSource::Random:
      cmd += " --n " + std::to_string(cfg.n) + " --mode " + to_string(cfg.mode) + " --seed " + std::to_string(cfg.seed);
      break;
    case InstanceSource::Uniform:
      cmd += " --uniform --n " + std::to_string(cfg.n) + " --traffic " + shortest(cfg.uniform_traffic) +
             " --distance " + shortest(cfg.uniform_distance);
      break;
    case InstanceSource::File: cmd += " --instance " + cfg.instance_file.string(); break;
  }
  if (!cfg.model.valid_cuts) cmd += " --no-cuts";
  cmd += " --form " + std::string(to_string(cfg.solver.form));
  cmd += " --pivot " + std::string(to_string(cfg.solver.pricing));
  cmd += " --tol-feas " + shortest(cfg.solver.feasibility_tol);
  cmd += " --tol-pivot " + shortest(cfg.solver.pivot_tol);
  cmd += " --iter-limit " + std::to_string(cfg.solver.iteration_limit);
  cmd += " --oracle-limit " + std::to_string(cfg.oracle_limit);
  return cmd;
}

SweepSummary run_sweep(const ExperimentConfig& base, const std::vector<std::uint64_t>& seeds, int jobs) {
  base.validate();
  if (base.source != InstanceSource::Random) throw std::invalid_argument("sweeps need a seeded random source");
  if (base.n > base.oracle_limit) throw std::invalid_argument("sweep n exceeds the oracle limit");
  check_memory(base, true);

  SweepSummary out;
  out.records.resize(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < seeds.size();) {
      ExperimentConfig cfg = base;
      cfg.seed = seeds[k];
      cfg.solver.progress = nullptr;
      try {
        out.records[k] = run_experiment(cfg).record;
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(seeds.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (std::size_t k = 0; k < seeds.size(); ++k) {
    const auto& r = out.records[k];
    ++out.tally[verdict_text(r)];
    if (r.classification == Classification::ClaimConsistent) continue;
    ExperimentConfig cfg = base;
    cfg.seed = seeds[k];
    std::string reason = verdict_text(r);
    if (r.gap) reason += ", gap " + shortest(*r.gap);
    if (r.decomposition == DecompositionVerdict::ResidualStuck)
      reason += ", decomposition residual " + shortest(r.decomposition_residual);
    out.candidates.push_back({seeds[k], reason, replay_command(cfg)});
  }
  return out;
}

std::string format_sweep(const SweepSummary& s) {
  std::string out = "runs " + std::to_string(s.records.size()) + "\n";
  for (const auto& [label, count] : s.tally) out += "  " + label + ": " + std::to_string(count) + "\n";
  if (s.candidates.empty()) {
    out += "no candidate counterexamples\n";
  } else {
    out += "candidates\n";
    for (const auto& c : s.candidates)
      out += "  seed " + std::to_string(c.seed) + ": " + c.reason + "\n    replay: " + c.replay + "\n";
  }
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  auto number = [&](std::string_view s) {
    std::uint64_t v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || end != s.data() + s.size())
      throw std::invalid_argument("bad seed list: " + text);
    return v;
  };
  std::string_view rest(text);
  while (true) {
    const auto comma = rest.find(',');
    const std::string_view part = rest.substr(0, comma);
    if (const auto dots = part.find(".."); dots != std::string_view::npos) {
      const std::uint64_t lo = number(part.substr(0, dots));
      const std::uint64_t hi = number(part.substr(dots + 2));
      if (hi < lo) throw std::invalid_argument("bad seed range: " + std::string(part));
      for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
    } else {
      out.push_back(number(part));
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace qaplp
