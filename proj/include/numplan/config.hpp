#pragma once

#include <cstdlib>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "numplan/error.hpp"
#include "numplan/heuristics.hpp"
#include "numplan/novelty.hpp"

namespace numplan {

/// One queue's evaluator: a plain base heuristic or a novelty heuristic.
using EvaluatorSpec = std::variant<BaseHeuristic, NoveltyConfig>;

inline std::string to_string(const EvaluatorSpec& spec) {
  if (const auto* base = std::get_if<BaseHeuristic>(&spec)) return std::string(to_string(*base));
  return std::get<NoveltyConfig>(spec).to_string();
}

enum class SearchKind { Gbfs, MultiQueue };

/// A full solver configuration: search variant plus its evaluator list.
struct SolverConfig {
  SearchKind search = SearchKind::Gbfs;
  std::vector<EvaluatorSpec> heuristics;

  /// Canonical name used in logs and result files, e.g. `mq(md,gc)`.
  std::string to_string() const {
    std::string out = search == SearchKind::Gbfs ? "gbfs(" : "mq(";
    for (std::size_t i = 0; i < heuristics.size(); ++i) {
      if (i > 0) out += ",";
      out += numplan::to_string(heuristics[i]);
    }
    return out + ")";
  }
};

namespace detail {

[[noreturn]] inline void config_error(const std::string& msg) { throw Error(ErrorKind::InvalidConfig, msg); }

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

/// Splits on commas outside parentheses.
inline std::vector<std::string> split_top_level(std::string_view s) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth < 0) config_error("unbalanced ')' in '" + std::string(s) + "'");
    if (c == ',' && depth == 0) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (depth != 0) config_error("unbalanced '(' in '" + std::string(s) + "'");
  parts.push_back(trim(cur));
  return parts;
}

}  // namespace detail

/// `blind`, `gc`, `md`, or
/// `novelty(base=<md|gc|blind>,feature=<A|B>,measure=<PN|QB>,k=<1|2>)`.
/// Omitted novelty keys default to base=md, feature=B, measure=QB, k=2.
inline EvaluatorSpec parse_evaluator_spec(std::string_view text) {
  using detail::config_error;
  const std::string s = detail::trim(text);
  if (auto base = parse_base_heuristic(s)) return *base;
  if (!s.starts_with("novelty(") || !s.ends_with(")")) config_error("unknown heuristic '" + s + "'");
  NoveltyConfig cfg;
  const std::string body = s.substr(8, s.size() - 9);
  if (detail::trim(body).empty()) return cfg;
  for (const std::string& kv : detail::split_top_level(body)) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) config_error("expected key=value in '" + kv + "'");
    const std::string key = detail::trim(kv.substr(0, eq));
    const std::string value = detail::trim(kv.substr(eq + 1));
    if (key == "base") {
      auto base = parse_base_heuristic(value);
      if (!base) config_error("unknown base heuristic '" + value + "'");
      cfg.base = *base;
    } else if (key == "feature") {
      if (value == "A" || value == "a") cfg.feature = NoveltyFeature::A;
      else if (value == "B" || value == "b") cfg.feature = NoveltyFeature::B;
      else config_error("feature must be A or B, got '" + value + "'");
    } else if (key == "measure") {
      if (value == "PN" || value == "pn") cfg.measure = NoveltyMeasure::PN;
      else if (value == "QB" || value == "qb") cfg.measure = NoveltyMeasure::QB;
      else config_error("measure must be PN or QB, got '" + value + "'");
    } else if (key == "k") {
      if (value != "1" && value != "2") config_error("k must be 1 or 2, got '" + value + "'");
      cfg.k = value[0] - '0';
    } else {
      config_error("unknown novelty key '" + key + "'");
    }
  }
  return cfg;
}

inline std::vector<EvaluatorSpec> parse_heuristic_list(std::string_view text) {
  std::vector<EvaluatorSpec> out;
  for (const std::string& part : detail::split_top_level(text)) {
    if (part.empty()) detail::config_error("empty heuristic in list '" + std::string(text) + "'");
    out.push_back(parse_evaluator_spec(part));
  }
  return out;
}

inline SearchKind parse_search_kind(std::string_view s) {
  if (s == "gbfs") return SearchKind::Gbfs;
  if (s == "mq") return SearchKind::MultiQueue;
  detail::config_error("search must be gbfs or mq, got '" + std::string(s) + "'");
}

inline SolverConfig make_solver_config(std::string_view search, std::string_view heuristics) {
  SolverConfig cfg{parse_search_kind(search), parse_heuristic_list(heuristics)};
  if (cfg.search == SearchKind::Gbfs && cfg.heuristics.size() != 1) {
    detail::config_error("gbfs takes exactly one heuristic; use --search mq for several");
  }
  return cfg;
}

/// Parses the flag form `--search <gbfs|mq> --heuristic <spec>[,<spec>...]`
/// used on portfolio lines and in benchmark manifests.
inline SolverConfig parse_solver_config(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::string tok;
  std::string search = "gbfs";
  std::string heuristics;
  while (in >> tok) {
    std::string value;
    if (tok == "--search" || tok == "--heuristic") {
      if (!(in >> value)) detail::config_error("missing value after " + tok);
    } else if (tok.starts_with("--search=")) {
      value = tok.substr(9);
      tok = "--search";
    } else if (tok.starts_with("--heuristic=")) {
      value = tok.substr(12);
      tok = "--heuristic";
    } else {
      detail::config_error("unexpected token '" + tok + "' in solver config");
    }
    (tok == "--search" ? search : heuristics) = value;
  }
  if (heuristics.empty()) detail::config_error("solver config needs --heuristic");
  return make_solver_config(search, heuristics);
}

}  // namespace numplan
