#pragma once

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "numplan/error.hpp"

namespace numplan::bench {

/// One (instance, configuration) run as written to results.jsonl.
struct RunRecord {
  std::string domain;
  std::string problem;
  std::string config;
  bool solved = false;
  std::optional<long long> plan_length;
  long long expansions = 0;
  long long evaluations = 0;
  double time_s = 0.0;
  long long peak_nodes = 0;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

inline nlohmann::ordered_json to_json(const RunRecord& r) {
  nlohmann::ordered_json j;
  j["domain"] = r.domain;
  j["problem"] = r.problem;
  j["config"] = r.config;
  j["solved"] = r.solved;
  j["plan_length"] = r.plan_length ? nlohmann::ordered_json(*r.plan_length) : nlohmann::ordered_json(nullptr);
  j["expansions"] = r.expansions;
  j["evaluations"] = r.evaluations;
  j["time_s"] = r.time_s;
  j["peak_nodes"] = r.peak_nodes;
  return j;
}

inline RunRecord record_from_json(const nlohmann::json& j) {
  RunRecord r;
  try {
    r.domain = j.at("domain").get<std::string>();
    r.problem = j.at("problem").get<std::string>();
    r.config = j.at("config").get<std::string>();
    r.solved = j.at("solved").get<bool>();
    if (!j.at("plan_length").is_null()) r.plan_length = j.at("plan_length").get<long long>();
    r.expansions = j.at("expansions").get<long long>();
    r.evaluations = j.at("evaluations").get<long long>();
    r.time_s = j.at("time_s").get<double>();
    r.peak_nodes = j.at("peak_nodes").get<long long>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::SyntaxError, std::string("malformed run record: ") + e.what());
  }
  if (r.solved && (!r.plan_length || *r.plan_length < 0)) {
    throw Error(ErrorKind::SyntaxError, "run record marked solved without a plan length");
  }
  return r;
}

inline void write_jsonl(std::ostream& out, const std::vector<RunRecord>& records) {
  for (const auto& r : records) out << to_json(r).dump() << '\n';
}

inline std::vector<RunRecord> read_jsonl(std::istream& in) {
  std::vector<RunRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::SyntaxError, std::string("invalid JSON: ") + e.what(), {}, SourcePos{lineno, 1});
    } catch (const Error& e) {
      throw Error(e.kind(), e.message(), e.detail(), SourcePos{lineno, 1});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Coverage

/// Solved-instance counts per (domain, config). Rows and columns keep the
/// order in which they first appear in the records.
struct CoverageTable {
  std::vector<std::string> domains;
  std::vector<std::string> configs;
  std::map<std::pair<std::string, std::string>, int> cells;

  int cell(const std::string& domain, const std::string& config) const {
    auto it = cells.find({domain, config});
    return it == cells.end() ? 0 : it->second;
  }

  int column_sum(const std::string& config) const {
    int sum = 0;
    for (const auto& d : domains) sum += cell(d, config);
    return sum;
  }

  friend bool operator==(const CoverageTable&, const CoverageTable&) = default;
};

/// A problem counts once per configuration, however many repetitions solved it.
inline CoverageTable aggregate(const std::vector<RunRecord>& records) {
  CoverageTable t;
  std::set<std::string> seen_domains;
  std::set<std::string> seen_configs;
  std::set<std::tuple<std::string, std::string, std::string>> solved;
  for (const auto& r : records) {
    if (seen_domains.insert(r.domain).second) t.domains.push_back(r.domain);
    if (seen_configs.insert(r.config).second) t.configs.push_back(r.config);
    if (r.solved && solved.insert({r.domain, r.problem, r.config}).second) ++t.cells[{r.domain, r.config}];
  }
  return t;
}

inline std::string render_text(const CoverageTable& t) {
  std::size_t first = std::string("domain").size();
  for (const auto& d : t.domains) first = std::max(first, d.size());
  std::vector<std::size_t> widths;
  for (const auto& c : t.configs) widths.push_back(std::max<std::size_t>(c.size(), 4));
  std::ostringstream out;
  auto row = [&](const std::string& label, auto&& value_of) {
    out << std::left << std::setw(t.configs.empty() ? 0 : static_cast<int>(first)) << label;
    for (std::size_t i = 0; i < t.configs.size(); ++i) {
      out << "  " << std::right << std::setw(static_cast<int>(widths[i])) << value_of(i);
    }
    out << '\n';
  };
  row("domain", [&](std::size_t i) { return t.configs[i]; });
  for (const auto& d : t.domains) row(d, [&](std::size_t i) { return std::to_string(t.cell(d, t.configs[i])); });
  row("sum", [&](std::size_t i) { return std::to_string(t.column_sum(t.configs[i])); });
  return out.str();
}

inline nlohmann::ordered_json to_json(const CoverageTable& t) {
  nlohmann::ordered_json j;
  j["configs"] = t.configs;
  j["domains"] = nlohmann::ordered_json::array();
  for (const auto& d : t.domains) {
    nlohmann::ordered_json row;
    row["domain"] = d;
    for (const auto& c : t.configs) row["coverage"][c] = t.cell(d, c);
    j["domains"].push_back(row);
  }
  for (const auto& c : t.configs) j["sum"][c] = t.column_sum(c);
  return j;
}

// ---------------------------------------------------------------------------
// Pairwise scatter data

struct ScatterPoint {
  std::string domain;
  std::string problem;
  long long plan_length_a = 0;
  long long plan_length_b = 0;
  long long expansions_a = 0;
  long long expansions_b = 0;
};

/// Problems solved by both configurations (first solved record of each).
inline std::vector<ScatterPoint> scatter(const std::vector<RunRecord>& records, const std::string& config_a,
                                         const std::string& config_b) {
  std::map<std::pair<std::string, std::string>, const RunRecord*> a;
  std::map<std::pair<std::string, std::string>, const RunRecord*> b;
  for (const auto& r : records) {
    if (!r.solved) continue;
    if (r.config == config_a) a.try_emplace({r.domain, r.problem}, &r);
    if (r.config == config_b) b.try_emplace({r.domain, r.problem}, &r);
  }
  std::vector<ScatterPoint> out;
  for (const auto& [key, ra] : a) {
    auto it = b.find(key);
    if (it == b.end()) continue;
    out.push_back({key.first, key.second, *ra->plan_length, *it->second->plan_length, ra->expansions,
                   it->second->expansions});
  }
  return out;
}

inline std::string scatter_csv(const std::vector<ScatterPoint>& points) {
  std::string out = "domain,problem,plan_length_a,plan_length_b,expansions_a,expansions_b\n";
  for (const auto& p : points) {
    out += p.domain + "," + p.problem + "," + std::to_string(p.plan_length_a) + "," + std::to_string(p.plan_length_b) +
           "," + std::to_string(p.expansions_a) + "," + std::to_string(p.expansions_b) + "\n";
  }
  return out;
}

/// Expands a per-domain coverage CSV (`domain,<config>...` header, one count
/// per cell, `problems_per_domain` instances each) into run records.
inline std::vector<RunRecord> records_from_coverage_csv(std::istream& in, int problems_per_domain) {
  std::string line;
  if (!std::getline(in, line)) return {};
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) parts.push_back(part);
    return parts;
  };
  const auto header = split(line);
  std::vector<RunRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) throw Error(ErrorKind::SyntaxError, "coverage row width mismatch: " + line);
    for (std::size_t c = 1; c < cells.size(); ++c) {
      const int solved = std::stoi(cells[c]);
      for (int p = 0; p < problems_per_domain; ++p) {
        RunRecord r;
        r.domain = cells[0];
        r.problem = "p" + std::to_string(p + 1);
        r.config = header[c];
        r.solved = p < solved;
        if (r.solved) r.plan_length = 0;
        records.push_back(std::move(r));
      }
    }
  }
  return records;
}

}  // namespace numplan::bench
