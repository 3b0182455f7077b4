#include <gtest/gtest.h>

#include <random>

#include "ffc/errors.hpp"
#include "ffc/fft.hpp"
#include "oracle.hpp"

using ffc::FftPlan;

namespace {

bool has_large_prime_factor(std::size_t n) {
  for (std::size_t p : {2u, 3u, 5u, 7u})
    while (n % p == 0) n /= p;
  return n != 1;
}

std::vector<std::complex<double>> random_complex(std::size_t n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<std::complex<double>> v(n);
  for (auto& x : v) x = {dist(gen), dist(gen)};
  return v;
}

double rel_err(const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b) {
  double diff = 0, scale = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::abs(a[i] - b[i]));
    scale = std::max(scale, std::abs(b[i]));
  }
  return diff / std::max(scale, 1e-300);
}

}  // namespace

TEST(Fft, MatchesDirectDftForEveryLengthUpTo100) {
  for (std::size_t n = 1; n <= 100; ++n) {
    const FftPlan plan(n);
    EXPECT_EQ(plan.uses_bluestein(), has_large_prime_factor(n)) << n;
    for (unsigned trial = 0; trial < 3; ++trial) {
      auto x = random_complex(n, static_cast<unsigned>(n * 10 + trial));
      const auto expected = oracle::dft(x);
      plan.forward(x);
      EXPECT_LT(rel_err(x, expected), 1e-12) << "n=" << n;
    }
  }
}

TEST(Fft, LargeAwkwardLengths) {
  for (std::size_t n : {243u, 257u, 343u, 509u, 576u, 625u, 1000u, 1024u}) {
    auto x = random_complex(n, 3);
    const auto expected = oracle::dft(x);
    FftPlan(n).forward(x);
    EXPECT_LT(rel_err(x, expected), 1e-11) << n;
  }
}

TEST(Fft, InverseUndoesForward) {
  for (std::size_t n : {1u, 2u, 7u, 24u, 64u, 100u}) {
    const FftPlan plan(n);
    const auto x = random_complex(n, 11);
    auto y = x;
    plan.forward(y);
    plan.inverse(y);
    EXPECT_LT(rel_err(y, x), 1e-13) << n;
  }
}

TEST(Fft, SharedPlanWithCallerWorkspace) {
  const FftPlan plan(24);
  std::vector<std::complex<double>> work(plan.workspace_size());
  EXPECT_FALSE(plan.uses_bluestein());
  EXPECT_GE(work.size(), 24u);
  auto x = random_complex(24, 2);
  const auto expected = oracle::dft(x);
  plan.forward(x, work);
  EXPECT_LT(rel_err(x, expected), 1e-12);

  std::vector<std::complex<double>> tiny(1);
  EXPECT_THROW(plan.forward(x, tiny), ffc::ShapeError);

  const FftPlan prime(23);
  EXPECT_TRUE(prime.uses_bluestein());
  std::vector<std::complex<double>> pwork(prime.workspace_size());
  auto y = random_complex(23, 5);
  const auto expected_prime = oracle::dft(y);
  prime.forward(y, pwork);
  EXPECT_LT(rel_err(y, expected_prime), 1e-12);
  EXPECT_THROW(prime.forward(y, work), ffc::ShapeError);
}

TEST(Fft, RejectsZeroLengthAndMismatchedInput) {
  EXPECT_THROW(FftPlan(0), ffc::ShapeError);
  std::vector<std::complex<double>> x(5);
  EXPECT_THROW(FftPlan(4).forward(x), ffc::ShapeError);
}
