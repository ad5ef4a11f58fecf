#include <gtest/gtest.h>

#include "edgestat/suites.hpp"

using namespace edgestat;

namespace {

SuiteOptions small(std::size_t max_n, std::uint64_t samples = 0, unsigned jobs = 1) {
  SuiteOptions o;
  o.max_n = max_n;
  o.samples = samples;
  o.jobs = jobs;
  return o;
}

}  // namespace

TEST(Fragment, DetailOnlyBuiltForKeptRecords) {
  SuiteFragment f;
  int calls = 0;
  auto d = [&] {
    ++calls;
    return Detail{nlohmann::json::object(), "a", "b"};
  };
  f.record("x", "pass", d);
  f.record("x", "vacuous", d);
  EXPECT_EQ(calls, 0);
  f.record("x", "fail", d);
  f.record("x", "undecided", d);
  EXPECT_EQ(calls, 2);
  EXPECT_EQ(f.records.size(), 2u);
  EXPECT_EQ(f.tallies["x"].checked(), 4u);

  SuiteFragment all;
  all.keep_all = true;
  all.record("y", "pass", d);
  EXPECT_EQ(all.records.size(), 1u);
}

TEST(Report, PassNeedsSomethingChecked) {
  SuiteReport r;
  EXPECT_FALSE(r.pass());
  r.body.tallies["c"].add("inapplicable");
  EXPECT_FALSE(r.pass());
  r.body.tallies["c"].add("vacuous");
  EXPECT_TRUE(r.pass());
  r.body.tallies["c"].add("undecided");
  EXPECT_FALSE(r.pass());
  EXPECT_EQ(r.failures(), 1u);
}

TEST(Suites, SmallScopesPass) {
  for (const auto& [name, o] : std::vector<std::pair<std::string, SuiteOptions>>{
           {"rho-identity", small(5)},
           {"rho-bound", small(5)},
           {"thm-count", small(6)},
           {"count-lemmas", small(5, 50)},
           {"envelopes", small(5, 200)},
           {"machinery", small(4)},
           {"phi-grid", small(0)},
           {"invariants", small(5)}}) {
    auto r = run_suite(name, o);
    EXPECT_TRUE(r.pass()) << name << ": " << to_json(r).dump();
    EXPECT_GT(r.checked(), 0u) << name;
  }
}

TEST(Suites, RhoIdentityCoversEveryClass) {
  auto r = run_suite("rho-identity", small(4));
  // Sum over graphs on n <= 4 of the number of k in 1..n, times the levels checked, is at least
  // the class count.
  std::size_t classes = 0;
  for (std::size_t n = 1; n <= 4; ++n) classes += noniso_graphs(n).size();
  EXPECT_GE(r.body.tallies.at("rho_sum_equals_one").pass, classes);
}

TEST(Suites, ReportIndependentOfJobs) {
  for (const auto& [name, o] : std::vector<std::pair<std::string, SuiteOptions>>{
           {"rho-bound", small(5)}, {"count-lemmas", small(4, 40)}, {"envelopes", small(4, 300)}, {"invariants", small(5)}}) {
    auto a = to_json(run_suite(name, o)).dump();
    SuiteOptions p = o;
    p.jobs = 3;
    EXPECT_EQ(a, to_json(run_suite(name, p)).dump()) << name;
  }
}

TEST(Suites, AllRecordsKeepsPasses) {
  SuiteOptions o = small(4);
  o.all_records = true;
  auto r = run_suite("rho-identity", o);
  EXPECT_EQ(r.body.records.size(), r.body.tallies.at("rho_sum_equals_one").checked());
}

TEST(Suites, SeedChangesSamples) {
  SuiteOptions a = small(4, 100), b = a;
  b.seed = 2;
  EXPECT_NE(to_json(run_suite("envelopes", a)).dump(), to_json(run_suite("envelopes", b)).dump());
}

TEST(Suites, UnknownAndRefused) {
  EXPECT_THROW(run_suite("nope", {}), InputError);
  EXPECT_THROW(run_suite("rho-identity", small(40)), RefusalError);
  EXPECT_THROW(run_suite("machinery", small(40)), RefusalError);
}
