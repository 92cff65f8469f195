// numplan command-line entry point: solve, validate, bench, aggregate, generate.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "numplan/bench/generators.hpp"
#include "numplan/bench/harness.hpp"
#include "numplan/bench/records.hpp"
#include "numplan/numplan.hpp"

namespace {

using namespace numplan;

enum ExitCode : int {
  kSolved = 0,
  kUnsolved = 1,
  kUsage = 2,
  kParseError = 3,
  kBudgetExceeded = 4,
};

/// Errors about the inputs themselves exit 3; configuration mistakes exit 2.
int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::InvalidConfig:
    case ErrorKind::Io:
      return kUsage;
    default:
      return kParseError;
  }
}

struct Loaded {
  pddl::DomainAst domain;
  pddl::ProblemAst problem;
  NumericTask task;
};

/// Parses and grounds; errors are reported as `file:line:col: message`.
std::optional<Loaded> load(const std::string& domain_path, const std::string& problem_path, GroundOptions options,
                           int& exit_code) {
  std::string where = domain_path;
  try {
    pddl::DomainAst domain = pddl::parse_domain(bench::read_file(domain_path));
    where = problem_path;
    pddl::ProblemAst problem = pddl::parse_problem(bench::read_file(problem_path), domain);
    for (const auto& w : problem.warnings) std::cerr << problem_path << ": warning: " << w << "\n";
    NumericTask task = ground(domain, problem, options);
    return Loaded{std::move(domain), std::move(problem), std::move(task)};
  } catch (const Error& e) {
    std::cerr << e.located(where) << "\n";
    exit_code = exit_code_for(e);
    return std::nullopt;
  }
}

std::string default_budget() {
  if (const char* env = std::getenv("NUMPLAN_BUDGET"); env && *env) return env;
  return "600s";
}

bool write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << path << ": cannot open for writing\n";
    return false;
  }
  out << text;
  return static_cast<bool>(out);
}

struct SolveArgs {
  std::string domain;
  std::string problem;
  std::string search = "gbfs";
  std::string heuristic = "md";
  std::string budget = default_budget();
  std::string portfolio;
  double eq_tol = 1e-6;
  std::string plan_out;
  std::string log_json;
};

int run_solve(const SolveArgs& args) {
  Budget budget;
  std::optional<SolverConfig> config;
  std::optional<PortfolioSpec> portfolio;
  try {
    budget = parse_budget(args.budget);
    if (!args.portfolio.empty()) {
      portfolio = PortfolioSpec{parse_portfolio(bench::read_file(args.portfolio)), budget, true};
    } else {
      config = make_solver_config(args.search, args.heuristic);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.message() << "\n";
    return kUsage;
  }

  int code = kSolved;
  auto loaded = load(args.domain, args.problem, {}, code);
  if (!loaded) return code;
  const NumericTask& task = loaded->task;

  SearchOptions options;
  options.policy.eq_tolerance = args.eq_tol;
  SearchResult result;
  std::string config_name;
  if (portfolio) {
    PortfolioResult pr = run_portfolio(task, *portfolio, options);
    for (const auto& c : pr.components) {
      std::cerr << "component " << c.config << ": slice " << c.slice << ", used " << c.consumed << ", "
                << to_string(c.status) << "\n";
    }
    result = std::move(pr.result);
    config_name = "portfolio(" + args.portfolio + ")";
  } else {
    result = solve(task, *config, budget, options);
    config_name = config->to_string();
  }

  std::cerr << "status: " << to_string(result.status) << "\n"
            << "expansions: " << result.expansions << "\n"
            << "evaluations: " << result.evaluated_states << "\n"
            << "generated: " << result.generated << "\n"
            << "discarded_nonfinite: " << result.discarded_nonfinite << "\n"
            << "time_s: " << result.wall_time_s << "\n";
  if (result.solved()) {
    std::cerr << "plan_length: " << result.plan->size() << "\n";
    const std::string text = format_plan(task, *result.plan);
    if (args.plan_out.empty()) {
      std::cout << text;
    } else if (!write_text(args.plan_out, text)) {
      return kUsage;
    }
  }
  if (!args.log_json.empty()) {
    bench::RunRecord r;
    r.domain = loaded->domain.name;
    r.problem = loaded->problem.name;
    r.config = config_name;
    r.solved = result.solved();
    if (result.solved()) r.plan_length = static_cast<long long>(result.plan->size());
    r.expansions = static_cast<long long>(result.expansions);
    r.evaluations = static_cast<long long>(result.evaluated_states);
    r.time_s = result.wall_time_s;
    r.peak_nodes = static_cast<long long>(result.peak_nodes);
    if (!write_text(args.log_json, bench::to_json(r).dump() + "\n")) return kUsage;
  }
  switch (result.status) {
    case SearchStatus::Solved: return kSolved;
    case SearchStatus::Exhausted: return kUnsolved;
    case SearchStatus::BudgetExceeded: return kBudgetExceeded;
  }
  return kUnsolved;
}

int run_validate(const std::string& domain, const std::string& problem, const std::string& plan_path, double eq_tol) {
  int code = kSolved;
  // Replay against the unpruned task so pruned-away actions are reported as
  // inapplicable, not unknown.
  GroundOptions options;
  options.prune_static = false;
  auto loaded = load(domain, problem, options, code);
  if (!loaded) return code;
  EvalPolicy policy;
  policy.eq_tolerance = eq_tol;
  ValidationReport report;
  try {
    report = validate_plan_text(loaded->task, bench::read_file(plan_path), policy);
  } catch (const Error& e) {
    std::cerr << e.located(plan_path) << "\n";
    return exit_code_for(e);
  }
  if (report.valid) {
    std::cout << "plan valid, length " << report.length << "\n";
    return kSolved;
  }
  std::cout << "plan invalid: " << report.reason << "\n";
  return kUnsolved;
}

int run_bench(const std::string& manifest_path, const std::string& out_path, int jobs, const std::string& table_out) {
  std::vector<bench::RunRecord> records;
  try {
    std::ifstream in(manifest_path);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + manifest_path + "'");
    bench::Manifest m = bench::parse_manifest(in, std::filesystem::path(manifest_path).parent_path());
    if (jobs > 0) m.jobs = jobs;
    records = bench::run_benchmark(m);
  } catch (const Error& e) {
    std::cerr << e.message() << "\n";
    return exit_code_for(e);
  }
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << out_path << ": cannot open for writing\n";
    return kUsage;
  }
  bench::write_jsonl(out, records);
  const bench::CoverageTable table = bench::aggregate(records);
  std::cout << bench::render_text(table);
  if (!table_out.empty() && !write_text(table_out, bench::to_json(table).dump(2) + "\n")) return kUsage;
  return kSolved;
}

int run_aggregate(const std::string& results, const std::vector<std::string>& scatter_pair,
                  const std::string& scatter_out, bool json) {
  std::vector<bench::RunRecord> records;
  try {
    std::ifstream in(results);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + results + "'");
    records = bench::read_jsonl(in);
  } catch (const Error& e) {
    std::cerr << e.located(results) << "\n";
    return exit_code_for(e);
  }
  const bench::CoverageTable table = bench::aggregate(records);
  std::cout << (json ? bench::to_json(table).dump(2) + "\n" : bench::render_text(table));
  if (scatter_pair.size() == 2) {
    const std::string csv = bench::scatter_csv(bench::scatter(records, scatter_pair[0], scatter_pair[1]));
    if (scatter_out.empty()) {
      std::cout << csv;
    } else if (!write_text(scatter_out, csv)) {
      return kUsage;
    }
  }
  return kSolved;
}

int run_generate(const std::string& family, int from, int to, const std::string& out_dir) {
  try {
    std::filesystem::create_directories(out_dir);
    for (int n = from; n <= to; ++n) {
      const bench::GeneratedInstance g = bench::generate(family, n);
      const auto dir = std::filesystem::path(out_dir);
      if (!write_text((dir / "domain.pddl").string(), g.domain_pddl)) return kUsage;
      if (!write_text((dir / (g.problem_name + ".pddl")).string(), g.problem_pddl)) return kUsage;
      std::cout << (dir / (g.problem_name + ".pddl")).string() << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.message() << "\n";
    return kUsage;
  }
  return kSolved;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numplan: satisficing numeric planner with novelty heuristics, multi-queue search and portfolios"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Search for a plan");
  solve_cmd->add_option("domain", solve_args.domain, "Domain PDDL file")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("problem", solve_args.problem, "Problem PDDL file")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--search", solve_args.search, "gbfs | mq")->check(CLI::IsMember({"gbfs", "mq"}));
  solve_cmd->add_option("--heuristic", solve_args.heuristic,
                        "Comma-separated heuristics: blind | gc | md | "
                        "novelty(base=..,feature=A|B,measure=PN|QB,k=1|2)");
  solve_cmd->add_option("--budget", solve_args.budget, "Ns (seconds), Ne (evaluations) or Nx (expansions)");
  solve_cmd->add_option("--portfolio", solve_args.portfolio, "Portfolio file, one solver config per line")
      ->check(CLI::ExistingFile);
  solve_cmd->add_option("--eq-tol", solve_args.eq_tol, "Tolerance for = conditions")->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--plan-out", solve_args.plan_out, "Write the plan here instead of stdout");
  solve_cmd->add_option("--log-json", solve_args.log_json, "Write a run record (JSON) here");

  std::string v_domain, v_problem, v_plan;
  double v_eq_tol = 1e-6;
  auto* validate_cmd = app.add_subcommand("validate", "Check a plan against a task");
  validate_cmd->add_option("domain", v_domain)->required()->check(CLI::ExistingFile);
  validate_cmd->add_option("problem", v_problem)->required()->check(CLI::ExistingFile);
  validate_cmd->add_option("plan", v_plan)->required()->check(CLI::ExistingFile);
  validate_cmd->add_option("--eq-tol", v_eq_tol)->check(CLI::NonNegativeNumber);

  std::string b_manifest, b_out = "results.jsonl", b_table;
  int b_jobs = 0;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark manifest");
  bench_cmd->add_option("manifest", b_manifest)->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--out", b_out, "JSON-lines results file");
  bench_cmd->add_option("--jobs", b_jobs, "Instances solved in parallel (overrides the manifest)")
      ->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--table", b_table, "Also write the coverage table as JSON");

  std::string a_results, a_scatter_out;
  std::vector<std::string> a_scatter;
  bool a_json = false;
  auto* aggregate_cmd = app.add_subcommand("aggregate", "Coverage table and scatter data from results");
  aggregate_cmd->add_option("results", a_results)->required()->check(CLI::ExistingFile);
  aggregate_cmd->add_option("--scatter", a_scatter, "Two config names to compare")->expected(2);
  aggregate_cmd->add_option("--scatter-out", a_scatter_out, "CSV file for the scatter data");
  aggregate_cmd->add_flag("--json", a_json, "Print the table as JSON");

  std::string g_family, g_out = ".";
  int g_from = 0, g_to = -1;
  auto* generate_cmd = app.add_subcommand("generate", "Write generated micro-benchmark instances");
  generate_cmd->add_option("family", g_family, "counters | farmland")->required();
  generate_cmd->add_option("n", g_from, "Instance size")->required();
  generate_cmd->add_option("n_to", g_to, "Last size of a range");
  generate_cmd->add_option("--out-dir", g_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (*solve_cmd) return run_solve(solve_args);
  if (*validate_cmd) return run_validate(v_domain, v_problem, v_plan, v_eq_tol);
  if (*bench_cmd) return run_bench(b_manifest, b_out, b_jobs, b_table);
  if (*aggregate_cmd) return run_aggregate(a_results, a_scatter, a_scatter_out, a_json);
  if (*generate_cmd) return run_generate(g_family, g_from, g_to < 0 ? g_from : g_to, g_out);
  return kUsage;
}
