#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace cyclespan {

/// base^k / (2k) undirected, base^k / k directed. Throws on k < 3 or base <= 0.
double lambda_k(std::uint32_t k, double base, bool directed);

/// lambda_k for k = lo..hi.
std::vector<double> poisson_means(double base, std::uint32_t lo, std::uint32_t hi, bool directed);

struct ThetaResult {
  double value = 0.0;
  std::uint32_t truncation_K = 0;  // last factor included
  double tail_bound = 0.0;         // bound on |true - value|
  double c = 0.0;
  std::uint32_t ell = 0;
  bool directed = false;
};

/// prod_{k >= ell} (1 - exp(-lambda_k)) with lambda_k from lambda_k(k, c, directed),
/// truncated at the first K whose certified remainder is <= tol.
/// Throws ValidationError when c <= 1, ell < 3, or tol is not in [1e-15, 1).
ThetaResult theta(double c, std::uint32_t ell, bool directed = false, double tol = 1e-12);

/// prod (1 - exp(-lambda)); 1 for an empty list.
double poisson_joint_all_nonzero(const std::vector<double>& lambdas);

/// max(0, 1 - 2 exp(-(d-1)^ell / (2 ell))).
double regular_lower_bound(std::uint32_t d, std::uint32_t ell);

/// 1 - 3 exp(-(delta/8)^2 ell), clamped at 0.
double staged_success_bound(double delta, std::uint32_t ell);

/// (ceil(4/3 eps^2 n), floor(4/3 (1 + ln 1.5) eps^2 n)).
std::pair<std::uint64_t, std::uint64_t> supercritical_window(double epsilon, std::uint64_t n);

inline constexpr double kGamma0 = 4.0 / 3.0;
double gamma1();

}  // namespace cyclespan
