#include "derangements/report.hpp"

#include <gtest/gtest.h>

#include <set>
#include <sstream>

namespace {

using namespace derangements;
using namespace derangements::verify;

std::vector<Check> find(const std::vector<std::string>& ids) {
  std::vector<Check> out;
  for (auto& c : all_checks())
    if (std::find(ids.begin(), ids.end(), c.id) != ids.end()) out.push_back(std::move(c));
  return out;
}

TEST(Registry, SuitesAndCriteria) {
  EXPECT_THROW(checks_for("bogus"), DomainError);
  const auto all = checks_for("all");
  std::set<std::string> ids;
  std::set<int> criteria;
  std::size_t total = 0;
  for (const auto& c : all) {
    EXPECT_TRUE(ids.insert(c.id).second) << "duplicate id " << c.id;
    EXPECT_EQ(c.id.rfind(c.suite + ".", 0), 0u) << c.id;
    EXPECT_FALSE(c.anchor.empty()) << c.id;
    criteria.insert(c.criterion);
  }
  for (const auto& s : suite_names()) {
    const auto part = checks_for(s);
    EXPECT_FALSE(part.empty()) << s;
    total += part.size();
  }
  EXPECT_EQ(total, all.size());
  for (int k = 1; k <= 10; ++k) EXPECT_TRUE(criteria.count(k)) << "criterion " << k << " has no check";
}

TEST(Registry, FastSuitesPass) {
  Options o;
  for (const char* s : {"series", "partitions", "weyl", "ffield", "glclasses"}) {
    auto results = run_checks(checks_for(s), o);
    for (const auto& r : results) EXPECT_EQ(r.status, Status::pass) << r.id << ": " << r.detail;
    EXPECT_EQ(exit_code(results), 0);
  }
}

TEST(Registry, MonteCarloWithFewerTrials) {
  Options o;
  o.trials = 20000;
  o.seed = 5;
  auto results = run_checks(find({"montecarlo.small-cases", "montecarlo.reproducible"}), o);
  ASSERT_EQ(results.size(), 2u);
  for (const auto& r : results) {
    EXPECT_EQ(r.status, Status::pass) << r.id << ": " << r.detail;
    EXPECT_EQ(r.params.at("seed"), "5");
    EXPECT_EQ(r.params.at("trials"), "20000");
  }
}

TEST(Registry, ThreadedRunKeepsOrder) {
  Options o;
  o.jobs = 3;
  const auto checks = checks_for("partitions");
  std::size_t callbacks = 0;
  auto results = run_checks(checks, o, [&](const CheckResult&) { ++callbacks; });
  ASSERT_EQ(results.size(), checks.size());
  EXPECT_EQ(callbacks, checks.size());
  for (std::size_t i = 0; i < checks.size(); ++i) EXPECT_EQ(results[i].id, checks[i].id);
}

TEST(Registry, StatusesAndExitCodes) {
  Options o;
  o.cap = 1000;
  auto capped = run_checks(find({"brute.sp62-classes"}), o);
  ASSERT_EQ(capped.size(), 1u);
  EXPECT_EQ(capped[0].status, Status::resource);
  EXPECT_EQ(exit_code(capped), 3);

  const Check failing{"x.fail", "x", "anchor", 0, [](const Options&) { return Outcome{false, "1", "2", "", {}}; }};
  const Check throwing{"x.throw", "x", "anchor", 0, [](const Options&) -> Outcome { throw DomainError("bad"); }};
  const Check fine{"x.ok", "x", "anchor", 0, [](const Options&) { return Outcome{true, "3/6", "1/2", "", {}}; }};
  auto r = run_checks({fine, failing, throwing}, Options{});
  EXPECT_EQ(r[0].status, Status::pass);
  EXPECT_EQ(r[0].value_decimal, to_decimal_string(make_rational(1, 2)));
  EXPECT_EQ(r[1].status, Status::fail);
  EXPECT_EQ(r[2].status, Status::fail);
  EXPECT_NE(r[2].detail.find("bad"), std::string::npos);
  EXPECT_EQ(exit_code(r), 1);
  EXPECT_EQ(exit_code({r[0]}), 0);
  // A failure outranks a resource error.
  EXPECT_EQ(exit_code({capped[0], r[1]}), 1);
  EXPECT_EQ(exit_code({}), 0);
}

TEST(Report, JsonSchema) {
  auto results = run_checks(checks_for("weyl"), Options{});
  const auto j = report::to_json("weyl", results);
  EXPECT_EQ(j.at("version"), report::kSchemaVersion);
  EXPECT_EQ(j.at("suite"), "weyl");
  EXPECT_EQ(j.at("exit_code"), 0);
  EXPECT_EQ(j.at("generated").get<std::string>().size(), 20u);
  ASSERT_EQ(j.at("results").size(), results.size());
  for (const auto& e : j.at("results")) {
    for (const char* key : {"id", "suite", "anchor", "criterion", "status", "value", "bound", "params", "elapsed_ms"})
      EXPECT_TRUE(e.contains(key)) << key;
    EXPECT_EQ(e.at("status"), "pass");
    EXPECT_TRUE(e.at("params").contains("seed"));
  }
  // Round trip through text.
  EXPECT_EQ(nlohmann::json::parse(j.dump()), j);
}

TEST(Report, CsvQuoting) {
  EXPECT_EQ(report::csv_field("plain"), "plain");
  EXPECT_EQ(report::csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(report::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  auto results = run_checks(checks_for("partitions"), Options{});
  std::ostringstream os;
  report::write_csv(os, results);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "id,anchor,status,value,bound,params");
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    EXPECT_EQ(line.rfind(results[rows].id + ",", 0), 0u) << line;
    ++rows;
  }
  EXPECT_EQ(rows, results.size());
}

}  // namespace
