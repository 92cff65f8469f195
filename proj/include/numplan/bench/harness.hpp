#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <istream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "numplan/bench/generators.hpp"
#include "numplan/bench/records.hpp"
#include "numplan/config.hpp"
#include "numplan/pddl/grounder.hpp"
#include "numplan/pddl/parser.hpp"
#include "numplan/portfolio.hpp"
#include "numplan/search.hpp"

namespace numplan::bench {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'", path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct BenchConfig {
  std::string name;
  /// A single solver, or the components of a portfolio.
  std::variant<SolverConfig, std::vector<SolverConfig>> solver;
};

struct BenchInstance {
  std::string domain_pddl;
  std::string problem_pddl;
  std::string label;  // file path or generator spec, for error messages
};

struct Manifest {
  Budget budget = Budget::seconds(60);
  int repetitions = 1;
  int jobs = 1;
  double eq_tolerance = 1e-6;
  std::vector<BenchConfig> configs;
  std::vector<BenchInstance> instances;
};

/// Manifest syntax, one `key = value` per line, `#` comments:
///
///   budget = 10000e              # per run: Ns | Ne | Nx
///   repetitions = 1
///   jobs = 2
///   eq_tol = 1e-6
///   config = --search gbfs --heuristic md
///   portfolio = --search gbfs --heuristic md ; --search gbfs --heuristic gc
///   domain = counters/domain.pddl     # relative to the manifest
///   problem = counters/p01.pddl       # attaches to the latest domain
///   generate = counters 2 8           # family, n from, n to
inline Manifest parse_manifest(std::istream& in, const std::filesystem::path& base_dir) {
  Manifest m;
  std::string line;
  std::size_t lineno = 0;
  std::string current_domain;
  auto fail = [&](const std::string& msg) -> void {
    throw Error(ErrorKind::InvalidConfig, "manifest line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (detail::trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    try {
      if (key == "budget") {
        m.budget = parse_budget(value);
      } else if (key == "repetitions") {
        m.repetitions = std::stoi(value);
        if (m.repetitions < 1) fail("repetitions must be >= 1");
      } else if (key == "jobs") {
        m.jobs = std::stoi(value);
        if (m.jobs < 1) fail("jobs must be >= 1");
      } else if (key == "eq_tol") {
        m.eq_tolerance = std::stod(value);
      } else if (key == "config") {
        SolverConfig cfg = parse_solver_config(value);
        m.configs.push_back({cfg.to_string(), cfg});
      } else if (key == "portfolio") {
        std::vector<SolverConfig> parts;
        std::string name = "portfolio(";
        std::stringstream ss(value);
        std::string part;
        while (std::getline(ss, part, ';')) {
          parts.push_back(parse_solver_config(part));
          name += (parts.size() > 1 ? ";" : "") + parts.back().to_string();
        }
        if (parts.empty()) fail("portfolio needs at least one configuration");
        m.configs.push_back({name + ")", parts});
      } else if (key == "domain") {
        current_domain = (base_dir / value).string();
      } else if (key == "problem") {
        if (current_domain.empty()) fail("problem before any domain");
        const auto path = base_dir / value;
        m.instances.push_back({read_file(current_domain), read_file(path), path.string()});
      } else if (key == "generate") {
        std::istringstream ss(value);
        std::string family;
        int from = 0;
        int to = 0;
        if (!(ss >> family >> from)) fail("expected: generate = <family> <n-from> [<n-to>]");
        if (!(ss >> to)) to = from;
        for (int n = from; n <= to; ++n) {
          GeneratedInstance g = generate(family, n);
          m.instances.push_back({g.domain_pddl, g.problem_pddl, family + " " + std::to_string(n)});
        }
      } else {
        fail("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      fail("invalid number '" + value + "'");
    } catch (const std::out_of_range&) {
      fail("number out of range '" + value + "'");
    }
  }
  if (m.configs.empty()) throw Error(ErrorKind::InvalidConfig, "manifest lists no config");
  return m;
}

/// Solves one grounded instance with one configuration and checks the plan.
inline RunRecord run_one(const NumericTask& task, const std::string& domain, const std::string& problem,
                         const BenchConfig& cfg, const Budget& budget, const SearchOptions& options) {
  SearchResult result;
  if (const auto* single = std::get_if<SolverConfig>(&cfg.solver)) {
    result = solve(task, *single, budget, options);
  } else {
    PortfolioSpec spec{std::get<std::vector<SolverConfig>>(cfg.solver), budget, true};
    result = run_portfolio(task, spec, options).result;
  }
  RunRecord r;
  r.domain = domain;
  r.problem = problem;
  r.config = cfg.name;
  r.expansions = static_cast<long long>(result.expansions);
  r.evaluations = static_cast<long long>(result.evaluated_states);
  r.time_s = result.wall_time_s;
  r.peak_nodes = static_cast<long long>(result.peak_nodes);
  if (result.solved()) {
    const ValidationReport report = validate_plan(task, *result.plan, options.policy);
    if (!report.valid) {
      throw Error(ErrorKind::InvalidConfig, "internal error: plan for " + problem + " failed validation: " +
                                                report.reason);
    }
    r.solved = true;
    r.plan_length = static_cast<long long>(result.plan->size());
  }
  return r;
}

/// Runs every (instance, config, repetition). Records come back in manifest
/// order regardless of `jobs`.
inline std::vector<RunRecord> run_benchmark(const Manifest& m) {
  std::vector<std::vector<RunRecord>> per_instance(m.instances.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  SearchOptions options;
  options.policy.eq_tolerance = m.eq_tolerance;

  auto worker = [&] {
    for (std::size_t i = next++; i < m.instances.size(); i = next++) {
      try {
        const auto& inst = m.instances[i];
        const pddl::DomainAst domain = pddl::parse_domain(inst.domain_pddl);
        const pddl::ProblemAst problem = pddl::parse_problem(inst.problem_pddl, domain);
        const NumericTask task = ground(domain, problem);
        for (const auto& cfg : m.configs) {
          for (int rep = 0; rep < m.repetitions; ++rep) {
            per_instance[i].push_back(run_one(task, domain.name, problem.name, cfg, m.budget, options));
          }
        }
      } catch (const Error& e) {
        std::lock_guard lock(error_mutex);
        if (!first_error) {
          first_error = std::make_exception_ptr(Error(e.kind(), e.located(m.instances[i].label), e.detail()));
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(m.jobs, static_cast<int>(m.instances.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  std::vector<RunRecord> out;
  for (auto& v : per_instance) out.insert(out.end(), v.begin(), v.end());
  return out;
}

}  // namespace numplan::bench
