#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "numplan/bench/harness.hpp"
#include "numplan/bench/records.hpp"
#include "numplan/plan_io.hpp"

using namespace numplan;
using namespace numplan::bench;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = NUMPLAN_FIXTURE_DIR;

CoverageTable reference_table() {
  std::ifstream in(kFixtures / "coverage_reference.csv");
  return aggregate(records_from_coverage_csv(in, 20));
}

RunRecord rec(std::string d, std::string p, std::string c, bool solved, long long len = 0) {
  RunRecord r{std::move(d), std::move(p), std::move(c), solved, std::nullopt, 10, 20, 0.5, 30};
  if (solved) r.plan_length = len;
  return r;
}

}  // namespace

TEST(CoverageReference, ColumnSums) {
  const CoverageTable t = reference_table();
  EXPECT_EQ(t.domains.size(), 20u);
  const std::vector<std::pair<std::string, int>> expected{
      {"md", 200},          {"add", 183},        {"mrp-hj", 217},     {"md<B;QB>", 185},  {"add<B;QB>", 236},
      {"mrp-hj<B;QB>", 222}, {"M(3h)", 261},      {"M(3n)", 244},      {"M(3h||3n)", 274}, {"P(3h)", 290},
      {"P(3n)", 292},        {"P(3h||3n)", 315},  {"patty", 262}};
  ASSERT_EQ(t.configs.size(), expected.size());
  for (const auto& [config, sum] : expected) EXPECT_EQ(t.column_sum(config), sum) << config;
}

TEST(CoverageReference, SumsAreCellSums) {
  const CoverageTable t = reference_table();
  for (const auto& c : t.configs) {
    int s = 0;
    for (const auto& d : t.domains) s += t.cell(d, c);
    EXPECT_EQ(s, t.column_sum(c));
  }
}

TEST(Aggregate, Empty) {
  const CoverageTable t = aggregate({});
  EXPECT_TRUE(t.domains.empty());
  EXPECT_EQ(t.column_sum("md"), 0);
  EXPECT_EQ(render_text(t), "domain\nsum\n");
}

TEST(Aggregate, RepetitionsCountOnce) {
  const CoverageTable t = aggregate({rec("d", "p1", "md", true, 3), rec("d", "p1", "md", true, 3),
                                     rec("d", "p2", "md", false), rec("e", "p1", "md", true, 1)});
  EXPECT_EQ(t.cell("d", "md"), 1);
  EXPECT_EQ(t.column_sum("md"), 2);
  EXPECT_EQ(to_json(t)["sum"]["md"], 2);
}

TEST(Jsonl, RoundTrip) {
  std::vector<RunRecord> records{rec("d", "p1", "gbfs(md)", true, 4), rec("d", "p2", "gbfs(md)", false),
                                 rec("e", "p1", "mq(md,gc)", true, 0)};
  std::stringstream ss;
  write_jsonl(ss, records);
  const auto back = read_jsonl(ss);
  EXPECT_EQ(back, records);
  EXPECT_EQ(aggregate(back), aggregate(records));
}

TEST(Jsonl, ExactFields) {
  const auto j = to_json(rec("d", "p", "c", false));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"domain", "problem", "config", "solved", "plan_length", "expansions",
                                            "evaluations", "time_s", "peak_nodes"}));
  EXPECT_TRUE(j["plan_length"].is_null());
}

TEST(Jsonl, Malformed) {
  std::stringstream bad("{\"domain\": \"d\"}\n");
  EXPECT_THROW(read_jsonl(bad), Error);
  std::stringstream inconsistent(
      R"({"domain":"d","problem":"p","config":"c","solved":true,"plan_length":null,"expansions":0,"evaluations":0,"time_s":0,"peak_nodes":0})");
  EXPECT_THROW(read_jsonl(inconsistent), Error);
}

TEST(Scatter, OnlyProblemsSolvedByBoth) {
  std::vector<RunRecord> r{rec("d", "p1", "a", true, 4), rec("d", "p1", "b", true, 6), rec("d", "p2", "a", true, 2),
                           rec("d", "p2", "b", false)};
  const auto pts = scatter(r, "a", "b");
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].plan_length_a, 4);
  EXPECT_EQ(pts[0].plan_length_b, 6);
  EXPECT_EQ(scatter_csv(pts), "domain,problem,plan_length_a,plan_length_b,expansions_a,expansions_b\nd,p1,4,6,10,10\n");
}

TEST(Generators, ParseAndSolve) {
  for (const std::string family : {"counters", "farmland"}) {
    for (int n = 2; n <= 5; ++n) {
      SCOPED_TRACE(family + std::to_string(n));
      const GeneratedInstance g = generate(family, n);
      const auto d = pddl::parse_domain(g.domain_pddl);
      const auto p = pddl::parse_problem(g.problem_pddl, d);
      EXPECT_EQ(p.name, g.problem_name);
      const NumericTask t = ground(d, p);
      SearchResult r = solve(t, make_solver_config("gbfs", "md"), Budget::evaluations(100000));
      ASSERT_TRUE(r.solved());
      EXPECT_TRUE(validate_plan(t, *r.plan).valid);
    }
  }
  EXPECT_THROW(generate("sokoban", 3), Error);
  EXPECT_THROW(generate("farmland", 1), Error);
}

TEST(Manifest, ParseAndRun) {
  std::istringstream in(R"(# small run
budget = 20000e
jobs = 2
config = --search gbfs --heuristic md
portfolio = --search gbfs --heuristic blind ; --search gbfs --heuristic md
generate = counters 2 4
domain = pddl/chain/domain.pddl
problem = pddl/chain/problem.pddl
)");
  Manifest m = parse_manifest(in, kFixtures);
  EXPECT_EQ(m.budget.kind, BudgetKind::Evaluations);
  ASSERT_EQ(m.configs.size(), 2u);
  EXPECT_EQ(m.configs[1].name, "portfolio(gbfs(blind);gbfs(md))");
  EXPECT_EQ(m.instances.size(), 4u);
  const auto records = run_benchmark(m);
  ASSERT_EQ(records.size(), 8u);
  EXPECT_EQ(records[0].problem, "counters-2");
  EXPECT_EQ(records.back().problem, "chain-3");
  for (const auto& r : records) EXPECT_TRUE(r.solved) << r.problem << " " << r.config;
  m.jobs = 1;
  const auto sequential = run_benchmark(m);
  ASSERT_EQ(sequential.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(sequential[i].expansions, records[i].expansions);
    EXPECT_EQ(sequential[i].plan_length, records[i].plan_length);
  }
}

TEST(Manifest, Errors) {
  std::istringstream no_config("budget = 10s\n");
  EXPECT_THROW(parse_manifest(no_config, "."), Error);
  std::istringstream bad_key("config = --search gbfs --heuristic md\ncolour = red\n");
  EXPECT_THROW(parse_manifest(bad_key, "."), Error);
  std::istringstream orphan("config = --search gbfs --heuristic md\nproblem = p.pddl\n");
  EXPECT_THROW(parse_manifest(orphan, "."), Error);
}
