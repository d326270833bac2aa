#include <gtest/gtest.h>

#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "cyclespan/graph.hpp"
#include "cyclespan/theory.hpp"

using namespace cyclespan;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

// Truncated product in 50-digit arithmetic; factors past K = 400 differ from
// 1 by far less than 1e-50 for every c used here.
double theta_oracle(double c, std::uint32_t ell, bool directed, std::uint32_t last = 400) {
  Big prod = 1;
  for (std::uint32_t k = ell; k <= last; ++k) {
    const Big lam = boost::multiprecision::pow(Big(c), k) / Big(directed ? k : 2 * k);
    if (lam > 200) break;
    prod *= 1 - boost::multiprecision::exp(-lam);
  }
  return prod.convert_to<double>();
}

const double kGridC[] = {1.2, 2.0, 5.0, 10.0};

}  // namespace

TEST(LambdaK, Examples) {
  EXPECT_DOUBLE_EQ(lambda_k(3, 2.0, false), 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(lambda_k(4, 2.0, false), 2.0);
  EXPECT_DOUBLE_EQ(lambda_k(3, 2.0, true), 8.0 / 3.0);
  EXPECT_THROW(lambda_k(2, 2.0, false), ValidationError);
  EXPECT_THROW(lambda_k(3, 0.0, false), ValidationError);
  const auto m = poisson_means(2.0, 3, 5, false);
  ASSERT_EQ(m.size(), 3u);
  EXPECT_DOUBLE_EQ(m[2], 32.0 / 10.0);
}

TEST(Theta, MatchesHighPrecisionOracle) {
  const auto r = theta(2.0, 3, false, 1e-12);
  EXPECT_NEAR(r.value, theta_oracle(2.0, 3, false), 1e-10);
  EXPECT_NEAR(r.value, 0.608, 5e-4);
  EXPECT_LE(r.tail_bound, 1e-12);
  EXPECT_LE(std::fabs(r.value - theta_oracle(2.0, 3, false)), r.tail_bound);
  EXPECT_GE(r.truncation_K, 3u);
  EXPECT_EQ(r.ell, 3u);
  EXPECT_DOUBLE_EQ(r.c, 2.0);
}

TEST(Theta, OracleAcrossGrid) {
  for (double c : kGridC) {
    for (std::uint32_t ell = 3; ell <= 10; ++ell) {
      for (bool directed : {false, true}) {
        const auto r = theta(c, ell, directed, 1e-12);
        EXPECT_LE(std::fabs(r.value - theta_oracle(c, ell, directed)), r.tail_bound)
            << "c=" << c << " ell=" << ell << " directed=" << directed;
      }
    }
  }
}

TEST(Theta, NearOneNeedsMinimumOfMeans) {
  // lambda_k decreases until k near 1/ln c; a bound started at ell would be invalid.
  const auto r = theta(1.05, 3, false, 1e-10);
  EXPECT_NEAR(r.value, theta_oracle(1.05, 3, false, 4000), 1e-10);
  EXPECT_GT(r.truncation_K, 100u);
}

TEST(Theta, Monotonicity) {
  int violations = 0;
  for (double c : kGridC) {
    for (std::uint32_t ell = 3; ell <= 10; ++ell) {
      const double v = theta(c, ell).value;
      if (ell < 10 && !(theta(c, ell + 1).value > v || v == 1.0)) ++violations;
    }
  }
  for (std::uint32_t ell = 3; ell <= 10; ++ell) {
    for (int i = 0; i + 1 < 4; ++i) {
      const double a = theta(kGridC[i], ell).value, b = theta(kGridC[i + 1], ell).value;
      if (!(b > a || a == 1.0)) ++violations;
    }
  }
  EXPECT_EQ(violations, 0);
  EXPECT_GT(theta(2.0, 4).value, theta(2.0, 3).value);
}

TEST(Theta, Sandwich) {
  for (double c : kGridC) {
    for (std::uint32_t ell = 3; ell <= 10; ++ell) {
      for (bool directed : {false, true}) {
        const auto r = theta(c, ell, directed);
        double sum = 0;
        for (std::uint32_t k = ell; k <= r.truncation_K; ++k) {
          sum += std::exp(-lambda_k(k, c, directed));
        }
        EXPECT_LE(r.value, 1 - std::exp(-lambda_k(ell, c, directed)) + r.tail_bound);
        EXPECT_GE(r.value, 1 - sum - r.tail_bound);
        EXPECT_GT(r.value, 0.0);
        EXPECT_LE(r.value, 1.0);
      }
    }
  }
}

TEST(Theta, ToleranceStability) {
  for (double c : {1.5, 2.0, 5.0}) {
    for (std::uint32_t ell : {3u, 6u}) {
      EXPECT_LE(std::fabs(theta(c, ell, false, 1e-8).value - theta(c, ell, false, 1e-12).value),
                1e-8);
      EXPECT_LE(theta(c, ell, false, 1e-8).tail_bound, 1e-8);
    }
  }
}

TEST(Theta, ApproachesOne) {
  EXPECT_GE(theta(2.0, 20).value, 1 - 2 * std::exp(-lambda_k(20, 2.0, false)));
}

TEST(Theta, InvalidArguments) {
  EXPECT_THROW(theta(1.0, 3), ValidationError);
  EXPECT_THROW(theta(0.5, 3), ValidationError);
  EXPECT_THROW(theta(2.0, 2), ValidationError);
  EXPECT_THROW(theta(2.0, 3, false, 0.0), ValidationError);
}

TEST(PoissonJoint, Examples) {
  EXPECT_DOUBLE_EQ(poisson_joint_all_nonzero({}), 1.0);
  EXPECT_DOUBLE_EQ(poisson_joint_all_nonzero({0.0}), 0.0);
  const auto r = theta(2.0, 3);
  EXPECT_NEAR(poisson_joint_all_nonzero(poisson_means(2.0, 3, 60, false)), r.value,
              r.tail_bound + 1e-15);
}

TEST(PoissonJoint, DecreasesTowardTheta) {
  const double target = theta(2.0, 3).value;
  double prev = 1.0;
  for (std::uint32_t k = 3; k <= 30; ++k) {
    const double v = poisson_joint_all_nonzero(poisson_means(2.0, 3, k, false));
    EXPECT_LE(v, prev);
    EXPECT_GE(v, target - 1e-12);
    prev = v;
  }
}

TEST(RegularLowerBound, Examples) {
  EXPECT_NEAR(regular_lower_bound(3, 4), 1 - 2 * std::exp(-2.0), 1e-15);
  EXPECT_NEAR(regular_lower_bound(3, 4), 0.7293, 1e-4);
  EXPECT_NEAR(regular_lower_bound(3, 3), 0.4728, 1e-4);
  for (std::uint32_t ell = 3; ell < 20; ++ell) {
    EXPECT_LE(regular_lower_bound(3, ell), regular_lower_bound(3, ell + 1));
  }
  EXPECT_LT(regular_lower_bound(3, 3), regular_lower_bound(3, 4));
  EXPECT_THROW(regular_lower_bound(2, 3), ValidationError);
}

TEST(StagedSuccessBound, Values) {
  EXPECT_NEAR(staged_success_bound(0.3, 1500), 1 - 3 * std::exp(-0.0375 * 0.0375 * 1500), 1e-15);
  EXPECT_EQ(staged_success_bound(0.3, 10), 0.0);
}

TEST(SupercriticalWindow, Examples) {
  const auto [lo, hi] = supercritical_window(0.1, 1000000);
  EXPECT_EQ(lo, 13334u);
  EXPECT_EQ(hi, static_cast<std::uint64_t>(std::floor(4.0 / 3.0 * (1 + std::log(1.5)) * 10000)));
  EXPECT_LT(gamma1() / kGamma0, 1.41);
  EXPECT_LT(gamma1(), 1.874);
  EXPECT_EQ(supercritical_window(0.0, 1000), (std::pair<std::uint64_t, std::uint64_t>{0, 0}));
}
