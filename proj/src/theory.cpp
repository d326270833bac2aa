#include "cyclespan/theory.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <string>

#include "cyclespan/graph.hpp"

namespace cyclespan {

namespace {

double log_lambda(std::uint32_t k, double base, bool directed) {
  return k * std::log(base) - std::log(directed ? double(k) : 2.0 * k);
}

// Rounds a non-negative value up by a couple of ulps.
double round_up(double x) {
  return std::nextafter(std::nextafter(x, INFINITY), INFINITY);
}

}  // namespace

double lambda_k(std::uint32_t k, double base, bool directed) {
  if (k < 3) throw ValidationError("lambda_k needs k >= 3, got " + std::to_string(k));
  if (!(base > 0.0)) throw ValidationError("lambda_k needs base > 0");
  return std::exp(log_lambda(k, base, directed));
}

std::vector<double> poisson_means(double base, std::uint32_t lo, std::uint32_t hi,
                                  bool directed) {
  std::vector<double> out;
  for (std::uint32_t k = lo; k <= hi; ++k) out.push_back(lambda_k(k, base, directed));
  return out;
}

ThetaResult theta(double c, std::uint32_t ell, bool directed, double tol) {
  if (!(c > 1.0)) throw ValidationError("theta needs c > 1, got " + std::to_string(c));
  if (ell < 3) throw ValidationError("theta needs ell >= 3, got " + std::to_string(ell));
  if (!(tol >= 1e-15 && tol < 1.0)) {
    throw ValidationError("theta needs tol in [1e-15, 1), got " + std::to_string(tol));
  }
  ThetaResult r;
  r.c = c;
  r.ell = ell;
  r.directed = directed;

  // lambda_k is convex in k and increasing from k0 on, so beyond k0 the
  // ratios x_{k+1}/x_k of x_k = exp(-lambda_k) are decreasing.
  const std::uint32_t k0 =
      std::max<std::uint32_t>(ell, static_cast<std::uint32_t>(std::ceil(1.0 / (c - 1.0))));
  auto lam = [&](std::uint32_t k) { return lambda_k(k, c, directed); };

  double product = 1.0;
  std::uint32_t k = ell;
  constexpr std::uint32_t kMaxTerms = 10'000'000;
  while (true) {
    product *= -std::expm1(-lam(k));
    const std::uint32_t K = k;
    ++k;
    if (K < k0) continue;
    const double l1 = lam(K + 1);
    const double x1 = std::exp(-l1);
    if (x1 <= 0.5) {
      const double ratio = std::exp(-(lam(K + 2) - l1));
      const double tail_sum = x1 / (1.0 - ratio);
      // |log prod_{k>K}(1 - x_k)| <= 2 sum x_k, and 1 - e^{-y} <= y; plus
      // accumulated rounding of the finite product.
      const double bound =
          round_up(2.0 * tail_sum + 4.0 * DBL_EPSILON * double(K - ell + 2));
      if (bound <= tol) {
        r.value = product;
        r.truncation_K = K;
        r.tail_bound = bound;
        return r;
      }
    }
    if (k - ell > kMaxTerms) throw ValidationError("theta truncation did not converge");
  }
}

double poisson_joint_all_nonzero(const std::vector<double>& lambdas) {
  double out = 1.0;
  for (double l : lambdas) {
    if (!(l >= 0.0)) throw ValidationError("Poisson means must be non-negative");
    out *= -std::expm1(-l);
  }
  return out;
}

double regular_lower_bound(std::uint32_t d, std::uint32_t ell) {
  if (d < 3 || ell < 3) throw ValidationError("regular_lower_bound needs d >= 3, ell >= 3");
  const double v = 1.0 - 2.0 * std::exp(-lambda_k(ell, d - 1.0, false));
  return v > 0.0 ? v : 0.0;
}

double staged_success_bound(double delta, std::uint32_t ell) {
  if (!(delta > 0.0)) throw ValidationError("staged_success_bound needs delta > 0");
  const double x = delta / 8.0;
  const double v = 1.0 - 3.0 * std::exp(-x * x * ell);
  return v > 0.0 ? v : 0.0;
}

double gamma1() { return kGamma0 * (1.0 + std::log(1.5)); }

std::pair<std::uint64_t, std::uint64_t> supercritical_window(double epsilon, std::uint64_t n) {
  if (!(epsilon >= 0.0)) throw ValidationError("supercritical_window needs epsilon >= 0");
  const double base = epsilon * epsilon * double(n);
  return {static_cast<std::uint64_t>(std::ceil(kGamma0 * base)),
          static_cast<std::uint64_t>(std::floor(gamma1() * base))};
}

}  // namespace cyclespan
