#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "numplan/heuristics.hpp"
#include "numplan/model.hpp"

namespace numplan {

// ---------------------------------------------------------------------------
// Features

/// One entry per task variable (Booleans first, then numerics); nullopt is ⊥.
using FeatureVector = std::vector<std::optional<double>>;

/// Assignment feature: numeric values as-is, true Booleans as 1, false as ⊥.
/// Does not depend on search history.
inline FeatureVector feature_A(const State& s, const NumericTask& task) {
  FeatureVector fv;
  fv.reserve(task.num_variables());
  for (std::size_t i = 0; i < task.num_bool_vars(); ++i) {
    fv.push_back(s.boolean(static_cast<VarIndex>(i)) ? std::optional<double>(1.0) : std::nullopt);
  }
  for (double v : s.nums()) fv.emplace_back(v);
  return fv;
}

/// Per-variable boundaries discovered so far. For each variable the lower
/// list is strictly decreasing and the upper list strictly increasing, both
/// starting at the initial value. Lists only grow.
class BoundaryTable {
 public:
  BoundaryTable() = default;
  explicit BoundaryTable(const State& initial) {
    const std::size_t n = initial.bools().size() + initial.nums().size();
    lower_.reserve(n);
    upper_.reserve(n);
    for (bool b : initial.bools()) {
      lower_.push_back({b ? 1.0 : 0.0});
      upper_.push_back({b ? 1.0 : 0.0});
    }
    for (double v : initial.nums()) {
      lower_.push_back({v});
      upper_.push_back({v});
    }
  }

  std::size_t size() const { return lower_.size(); }
  const std::vector<double>& lower(std::size_t var) const { return lower_[var]; }
  const std::vector<double>& upper(std::size_t var) const { return upper_[var]; }

  /// Signed interval index of `value` for variable `var`, appending a new
  /// boundary first when `value` lies beyond the current extremes:
  /// 0 at the initial value, +j for (u_{j-1}, u_j], -j for [b_j, b_{j-1}).
  std::int64_t observe(std::size_t var, double value) {
    std::vector<double>& up = upper_[var];
    std::vector<double>& lo = lower_[var];
    if (value == up.front()) return 0;
    if (value > up.front()) {
      if (value > up.back()) {
        up.push_back(value);
        return static_cast<std::int64_t>(up.size() - 1);
      }
      auto it = std::lower_bound(up.begin(), up.end(), value);
      return static_cast<std::int64_t>(it - up.begin());
    }
    if (value < lo.back()) {
      lo.push_back(value);
      return -static_cast<std::int64_t>(lo.size() - 1);
    }
    auto it = std::lower_bound(lo.begin(), lo.end(), value, std::greater<>());
    return -static_cast<std::int64_t>(it - lo.begin());
  }

 private:
  std::vector<std::vector<double>> lower_;
  std::vector<std::vector<double>> upper_;
};

/// Boundary extension encoding. Observing `s` is part of the evaluation, so
/// the table is updated. Booleans are embedded as 0/1, which makes every
/// entry defined.
inline FeatureVector feature_B_update(BoundaryTable& table, const State& s) {
  FeatureVector fv;
  fv.reserve(table.size());
  std::size_t var = 0;
  for (bool b : s.bools()) fv.emplace_back(static_cast<double>(table.observe(var++, b ? 1.0 : 0.0)));
  for (double v : s.nums()) fv.emplace_back(static_cast<double>(table.observe(var++, v)));
  return fv;
}

// ---------------------------------------------------------------------------
// Novelty tables

/// A variable subset of size 1 or 2 together with the feature values on it.
struct SubsetKey {
  static constexpr std::uint32_t kNone = 0xffffffffu;

  std::uint32_t first = 0;
  std::uint32_t second = kNone;
  std::uint64_t first_value = 0;
  std::uint64_t second_value = 0;

  static SubsetKey single(std::uint32_t i, double v) { return {i, kNone, bits(v), 0}; }
  static SubsetKey pair(std::uint32_t i, double vi, std::uint32_t j, double vj) { return {i, j, bits(vi), bits(vj)}; }

  static std::uint64_t bits(double v) { return std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v); }

  friend bool operator==(const SubsetKey&, const SubsetKey&) = default;
};

struct SubsetKeyHash {
  std::size_t operator()(const SubsetKey& k) const {
    std::uint64_t h = (static_cast<std::uint64_t>(k.first) << 32) ^ k.second;
    h ^= k.first_value + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= k.second_value + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return static_cast<std::size_t>(h);
  }
};

/// Enumerates the defined-entry subsets of size `size` (1 or 2).
template <typename Fn>
void for_each_subset(const FeatureVector& fv, int size, Fn&& fn) {
  if (size == 1) {
    for (std::uint32_t i = 0; i < fv.size(); ++i) {
      if (fv[i]) fn(SubsetKey::single(i, *fv[i]));
    }
    return;
  }
  for (std::uint32_t i = 0; i < fv.size(); ++i) {
    if (!fv[i]) continue;
    for (std::uint32_t j = i + 1; j < fv.size(); ++j) {
      if (fv[j]) fn(SubsetKey::pair(i, *fv[i], j, *fv[j]));
    }
  }
}

/// Memory of previously evaluated states. Partition novelty keeps the set of
/// seen subset keys per exact base-heuristic value; quantified-both keeps the
/// minimum base-heuristic value seen per subset key.
class NoveltyTables {
 public:
  bool seen(HeuristicValue h, const SubsetKey& key) const {
    auto it = partitions_.find(SubsetKey::bits(h));
    return it != partitions_.end() && it->second.contains(key);
  }
  void mark_seen(HeuristicValue h, const SubsetKey& key) { partitions_[SubsetKey::bits(h)].insert(key); }
  std::size_t partition_count() const { return partitions_.size(); }

  /// N(J, s): +inf when no earlier state shared these values.
  HeuristicValue min_heuristic(const SubsetKey& key) const {
    auto it = minima_.find(key);
    return it == minima_.end() ? kDeadEnd : it->second;
  }
  void record_minimum(const SubsetKey& key, HeuristicValue h) {
    auto [it, inserted] = minima_.try_emplace(key, h);
    if (!inserted && h < it->second) it->second = h;
  }
  std::size_t minima_count() const { return minima_.size(); }

 private:
  std::unordered_map<std::uint64_t, std::unordered_set<SubsetKey, SubsetKeyHash>> partitions_;
  std::unordered_map<SubsetKey, HeuristicValue, SubsetKeyHash> minima_;
};

inline void check_novelty_arity(int k) {
  if (k < 1 || k > 2) throw Error(ErrorKind::InvalidConfig, "novelty arity k must be 1 or 2, got " + std::to_string(k));
}

/// Partition novelty: the smallest n <= k such that some n-subset of defined
/// entries has values unseen in partition `h`, or k+1. Records every subset
/// afterwards.
inline int measure_PN(NoveltyTables& tables, const FeatureVector& fv, HeuristicValue h, int k) {
  check_novelty_arity(k);
  int result = k + 1;
  for (int n = k; n >= 1; --n) {
    bool novel = false;
    for_each_subset(fv, n, [&](const SubsetKey& key) {
      if (!tables.seen(h, key)) novel = true;
      tables.mark_seen(h, key);
    });
    if (novel) result = n;
  }
  return result;
}

inline double binomial(std::size_t n, std::size_t m) {
  if (m > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= m; ++i) r = r * static_cast<double>(n - m + i) / static_cast<double>(i);
  return r;
}

/// Quantified-both novelty over `n_vars` variables. With φ(J) = h < N(J) and
/// ψ(J) = h > N(J):
///   smallest n with a φ-novel n-subset: Σ_{m<=n} C(N,m) - #φ-novel n-subsets
///   otherwise:                          Σ_{m<=k} C(N,m) + #ψ-true k-subsets
/// Stored minima are updated with h afterwards.
inline double measure_QB(NoveltyTables& tables, const FeatureVector& fv, HeuristicValue h, int k,
                         std::size_t n_vars) {
  check_novelty_arity(k);
  std::size_t novel[3] = {0, 0, 0};
  std::size_t worse_at_k = 0;
  for (int n = 1; n <= k; ++n) {
    for_each_subset(fv, n, [&](const SubsetKey& key) {
      const HeuristicValue best = tables.min_heuristic(key);
      if (h < best) ++novel[n];
      if (n == k && h > best) ++worse_at_k;
    });
  }
  double value = 0.0;
  bool decided = false;
  double prefix = 0.0;
  for (int n = 1; n <= k; ++n) {
    prefix += binomial(n_vars, static_cast<std::size_t>(n));
    if (!decided && novel[n] > 0) {
      value = prefix - static_cast<double>(novel[n]);
      decided = true;
    }
  }
  if (!decided) value = prefix + static_cast<double>(worse_at_k);
  for (int n = 1; n <= k; ++n) {
    for_each_subset(fv, n, [&](const SubsetKey& key) { tables.record_minimum(key, h); });
  }
  return value;
}

// ---------------------------------------------------------------------------
// Novelty heuristic h_<f,n>

enum class NoveltyFeature { A, B };
enum class NoveltyMeasure { PN, QB };

struct NoveltyConfig {
  BaseHeuristic base = BaseHeuristic::Manhattan;
  NoveltyFeature feature = NoveltyFeature::B;
  NoveltyMeasure measure = NoveltyMeasure::QB;
  int k = 2;

  std::string to_string() const {
    std::string out = "novelty(base=";
    out += numplan::to_string(base);
    out += feature == NoveltyFeature::A ? ",feature=A" : ",feature=B";
    out += measure == NoveltyMeasure::PN ? ",measure=PN" : ",measure=QB";
    out += ",k=" + std::to_string(k) + ")";
    return out;
  }
  friend bool operator==(const NoveltyConfig&, const NoveltyConfig&) = default;
};

/// Owns its tables: evaluations must arrive in search order on one thread.
class NoveltyHeuristic {
 public:
  NoveltyHeuristic(const NumericTask& task, NoveltyConfig config)
      : task_(&task), config_(config), boundaries_(task.initial()) {
    check_novelty_arity(config.k);
  }

  const NoveltyConfig& config() const { return config_; }
  const NoveltyTables& tables() const { return tables_; }
  const BoundaryTable& boundaries() const { return boundaries_; }

  /// Priority of `s` given its base-heuristic value. Dead ends are returned
  /// as-is and leave all tables untouched.
  HeuristicValue evaluate(const State& s, HeuristicValue base_value) {
    if (is_dead_end(base_value)) return kDeadEnd;
    const FeatureVector fv =
        config_.feature == NoveltyFeature::A ? feature_A(s, *task_) : feature_B_update(boundaries_, s);
    if (config_.measure == NoveltyMeasure::PN) {
      return static_cast<double>(measure_PN(tables_, fv, base_value, config_.k));
    }
    return measure_QB(tables_, fv, base_value, config_.k, task_->num_variables());
  }

  HeuristicValue evaluate(const State& s) { return evaluate(s, evaluate_base(config_.base, s, *task_)); }

 private:
  const NumericTask* task_;
  NoveltyConfig config_;
  BoundaryTable boundaries_;
  NoveltyTables tables_;
};

}  // namespace numplan
