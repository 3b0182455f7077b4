#include <gtest/gtest.h>

#include <vector>

#include "ffc/verify.hpp"

using namespace ffc;

TEST(Verify, DefaultSuitesPass) {
  VerifyOptions opt;
  opt.max_n = 24;
  opt.trials = 4;
  const auto results = run_verification(opt);
  ASSERT_EQ(results.size(), 5u);
  for (const auto& r : results) {
    EXPECT_TRUE(r.passed) << format_suite_line(r);
    EXPECT_GT(r.cases, 0u) << r.name;
    EXPECT_LT(r.worst_error, 1e-12) << r.name;
  }
}

TEST(Verify, PerturbedKernelIsCaught) {
  VerifyOptions opt;
  opt.max_n = 16;
  opt.trials = 2;
  opt.perturb = [](std::span<double> v) {
    if (v.size() > 1) v[1] += 1e-3;
  };
  EXPECT_FALSE(verify_oracle_equivalence(opt).passed);
  EXPECT_FALSE(verify_ffc_identity(opt).passed);
}

TEST(Verify, LineFormat) {
  SuiteResult r{"oracle_equiv", true, 1.25e-15, 37, 4, 1280};
  EXPECT_EQ(format_suite_line(r), "oracle_equiv PASS worst_error=1.250e-15 N=37 seed=4 cases=1280");
  r.passed = false;
  EXPECT_EQ(format_suite_line(r).substr(0, 17), "oracle_equiv FAIL");
}

TEST(Verify, RelativeErrorIsNormRelative) {
  const std::vector<double> ref{2.0, -4.0, 1.0};
  const std::vector<double> got{2.0, -4.0, 1.4};
  EXPECT_DOUBLE_EQ(relative_error(got, ref), 0.1);
  const std::vector<double> zeros{0.0, 0.0};
  EXPECT_DOUBLE_EQ(relative_error(zeros, zeros), 0.0);
}
