#include "gwsflow/verify.hpp"

#include <gtest/gtest.h>

#include <set>
#include <string>
#include <vector>

namespace {

// The full suite integrates a few trajectory batches; run it once.
const std::vector<gws::CheckResult>& all_results() {
  static const std::vector<gws::CheckResult> results = gws::run_checks();
  return results;
}

TEST(Verify, AllChecksPass) {
  const auto& results = all_results();
  EXPECT_GE(results.size(), 120u);
  for (const auto& c : results) {
    EXPECT_TRUE(c.pass) << c.name << ": " << c.detail << " (measured " << c.measured
                        << ", tolerance " << c.tolerance << ")";
  }
}

TEST(Verify, RecordsAreSelfConsistent) {
  for (const auto& c : all_results()) {
    EXPECT_FALSE(c.name.empty());
    EXPECT_FALSE(c.detail.empty()) << c.name;
    EXPECT_NE(c.name.find('/'), std::string::npos) << c.name;
    if (c.pass && c.tolerance > 0) {
      EXPECT_LE(c.measured, c.tolerance) << c.name;
    }
  }
}

TEST(Verify, FilterSelectsGroups) {
  const auto only3 = gws::run_checks("example3");
  ASSERT_FALSE(only3.empty());
  for (const auto& c : only3) EXPECT_EQ(c.name.rfind("example3/", 0), 0u) << c.name;

  const auto xy = gws::run_checks("xy");
  ASSERT_FALSE(xy.empty());
  for (const auto& c : xy) EXPECT_EQ(c.name.rfind("xy/", 0), 0u) << c.name;

  EXPECT_TRUE(gws::run_checks("no-such-group").empty());
}

TEST(Verify, EveryListedGroupProducesChecks) {
  const auto names = gws::check_group_names();
  EXPECT_EQ(names.size(), 11u);
  std::set<std::string> seen;
  for (const auto& c : all_results()) seen.insert(c.name.substr(0, c.name.find('/')));
  EXPECT_EQ(seen, std::set<std::string>(names.begin(), names.end()));
}

}  // namespace
