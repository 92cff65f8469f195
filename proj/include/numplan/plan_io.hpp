#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "numplan/model.hpp"
#include "numplan/semantics.hpp"

namespace numplan {

/// IPC plan format: one `(name obj...)` per line, lowercase, LF-terminated.
inline std::string format_plan(const NumericTask& task, const Plan& plan) {
  std::string out;
  for (ActionId id : plan.actions) {
    std::string name = task.action(id).name;
    for (char& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    out += "(" + name + ")\n";
  }
  return out;
}

/// Action names from plan text, normalized to `name obj...`. `;` starts a
/// comment; an optional `N:` step prefix and trailing `[duration]` are
/// tolerated.
inline std::vector<std::string> parse_plan_text(std::string_view text) {
  std::vector<std::string> steps;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto semi = line.find(';'); semi != std::string::npos) line.erase(semi);
    const auto open = line.find('(');
    if (open == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) {
        throw Error(ErrorKind::SyntaxError, "plan line " + std::to_string(lineno) + ": expected '(action args)'", {},
                    SourcePos{lineno, 1});
      }
      continue;
    }
    const auto close = line.find(')', open);
    if (close == std::string::npos) {
      throw Error(ErrorKind::SyntaxError, "plan line " + std::to_string(lineno) + ": missing ')'", {},
                  SourcePos{lineno, open + 1});
    }
    std::istringstream words(line.substr(open + 1, close - open - 1));
    std::string word;
    std::string name;
    while (words >> word) {
      for (char& c : word) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      if (!name.empty()) name += " ";
      name += word;
    }
    if (name.empty()) {
      throw Error(ErrorKind::SyntaxError, "plan line " + std::to_string(lineno) + ": empty action", {},
                  SourcePos{lineno, open + 1});
    }
    steps.push_back(std::move(name));
  }
  return steps;
}

/// Maps plan step names to actions of `task`; an unknown name makes the
/// report invalid at that step.
inline ValidationReport validate_plan_text(const NumericTask& task, std::string_view text, const EvalPolicy& p = {}) {
  std::unordered_map<std::string, ActionId> by_name;
  for (ActionId id = 0; id < task.actions().size(); ++id) by_name.emplace(task.action(id).name, id);
  Plan plan;
  const auto names = parse_plan_text(text);
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto it = by_name.find(names[i]);
    if (it == by_name.end()) {
      // An earlier failure in the known prefix takes precedence.
      ValidationReport report = validate_plan(task, plan, p);
      report.length = names.size();
      report.valid = false;
      if (!report.failed_step) {
        report.failed_step = i + 1;
        report.reason = "step " + std::to_string(i + 1) + ": (" + names[i] + ") is not an action of this task";
      }
      return report;
    }
    plan.actions.push_back(it->second);
  }
  return validate_plan(task, plan, p);
}

}  // namespace numplan
