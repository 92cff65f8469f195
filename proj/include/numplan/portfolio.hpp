#pragma once

#include <cmath>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "numplan/config.hpp"
#include "numplan/search.hpp"

namespace numplan {

struct PortfolioSpec {
  std::vector<SolverConfig> configs;
  Budget total_budget;
  /// Hand unused budget of components that stop early to the remaining ones.
  bool redistribute = true;
};

struct PortfolioComponentRun {
  std::string config;
  double slice = 0.0;
  double consumed = 0.0;
  SearchStatus status = SearchStatus::Exhausted;
};

struct PortfolioResult {
  /// Winner's plan with statistics summed over every component that ran.
  SearchResult result;
  std::optional<std::size_t> winner;
  std::vector<PortfolioComponentRun> components;
};

/// Budget units a finished run used, in the units of `kind`.
inline double consumed_budget(const SearchResult& r, BudgetKind kind) {
  switch (kind) {
    case BudgetKind::Seconds: return r.wall_time_s;
    case BudgetKind::Evaluations: return static_cast<double>(r.evaluated_states);
    case BudgetKind::Expansions: return static_cast<double>(r.expansions);
  }
  return 0.0;
}

/// Runs the configurations in order, giving each remaining/remaining_configs
/// of the budget (or total/m without redistribution), and stops at the first
/// solve. `run(config, slice_budget)` performs one component search.
template <typename Runner>
PortfolioResult run_portfolio_with(const PortfolioSpec& spec, Runner&& run) {
  if (spec.configs.empty()) throw Error(ErrorKind::InvalidConfig, "portfolio needs at least one configuration");
  if (!(spec.total_budget.limit > 0)) throw Error(ErrorKind::InvalidConfig, "portfolio budget must be positive");
  const BudgetKind kind = spec.total_budget.kind;
  const bool integral = kind != BudgetKind::Seconds;
  const double total = spec.total_budget.limit;
  const std::size_t m = spec.configs.size();

  PortfolioResult out;
  out.result.status = SearchStatus::Exhausted;
  double remaining = total;
  bool any_budget_exceeded = false;
  for (std::size_t i = 0; i < m; ++i) {
    double slice = spec.redistribute ? remaining / static_cast<double>(m - i) : total / static_cast<double>(m);
    if (integral) slice = std::floor(slice);
    slice = std::max(0.0, std::min(slice, remaining));
    Budget b = spec.total_budget;
    b.limit = slice;

    PortfolioComponentRun comp;
    comp.config = spec.configs[i].to_string();
    comp.slice = slice;
    SearchResult r;
    if (slice > 0) {
      r = run(spec.configs[i], b);
    } else {
      r.status = SearchStatus::BudgetExceeded;
    }
    comp.status = r.status;
    comp.consumed = std::min(consumed_budget(r, kind), slice);
    remaining = std::max(0.0, remaining - comp.consumed);
    out.components.push_back(comp);

    SearchResult& agg = out.result;
    agg.expansions += r.expansions;
    agg.generated += r.generated;
    agg.evaluated_states += r.evaluated_states;
    agg.base_computations += r.base_computations;
    agg.discarded_nonfinite += r.discarded_nonfinite;
    agg.peak_nodes = std::max(agg.peak_nodes, r.peak_nodes);
    agg.wall_time_s += r.wall_time_s;
    agg.evaluations.insert(agg.evaluations.end(), r.evaluations.begin(), r.evaluations.end());
    if (r.status == SearchStatus::BudgetExceeded) any_budget_exceeded = true;
    if (r.solved()) {
      agg.status = SearchStatus::Solved;
      agg.plan = r.plan;
      out.winner = i;
      return out;
    }
  }
  out.result.status = any_budget_exceeded ? SearchStatus::BudgetExceeded : SearchStatus::Exhausted;
  return out;
}

/// All components search the same grounded task.
inline PortfolioResult run_portfolio(const NumericTask& task, const PortfolioSpec& spec,
                                     const SearchOptions& options = {}) {
  return run_portfolio_with(spec, [&](const SolverConfig& cfg, const Budget& b) { return solve(task, cfg, b, options); });
}

/// One solver config per line in flag form; blank lines and `#` comments are
/// skipped.
inline std::vector<SolverConfig> parse_portfolio(std::istream& in) {
  std::vector<SolverConfig> configs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (detail::trim(line).empty()) continue;
    try {
      configs.push_back(parse_solver_config(line));
    } catch (const Error& e) {
      throw Error(ErrorKind::InvalidConfig, "portfolio line " + std::to_string(lineno) + ": " + e.message());
    }
  }
  if (configs.empty()) throw Error(ErrorKind::InvalidConfig, "portfolio file lists no configurations");
  return configs;
}

inline std::vector<SolverConfig> parse_portfolio(const std::string& text) {
  std::istringstream in(text);
  return parse_portfolio(in);
}

}  // namespace numplan
