#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cyclespan/graph.hpp"
#include "cyclespan/rng.hpp"

namespace cyclespan {

enum class ExperimentKind {
  kPoissonFit,
  kIntervalProbability,
  kPerLengthProbability,
  kSwitchingSuite,
  kLemmaCheck,
  kStagedSuccess,
};

const char* to_string(ExperimentKind k);
ExperimentKind parse_kind(const std::string& s);

/// Sampler name plus parameters. Unused parameters stay unset.
///   configuration, regular_simple:  n, d
///   ham_plus_matching, ham_plus_ham: n
///   ham_plus_binomial: n, and p, c (p = c/n) or delta (p = delta/n); orientation
///   binomial: n, and p or c; orientation
///   cycle: n; orientation
struct ModelSpec {
  std::string name;
  Vertex n = 0;
  std::optional<std::uint32_t> d;
  std::optional<double> p;
  std::optional<double> c;
  std::optional<double> delta;
  Orientation orientation = Orientation::kUndirected;

  bool directed() const { return orientation == Orientation::kDirected; }
  /// Edge probability for binomial-type models.
  double edge_probability() const;
  /// Base of the Poisson means (d - 1, or c = p n), if the model has one.
  std::optional<double> poisson_base() const;
  /// Short text for the CSV param column, e.g. "d=3".
  std::string param_text() const;

  bool operator==(const ModelSpec&) const = default;
};

/// Samples one graph of the model.
Graph sample_model(const ModelSpec& m, SeededStream& s);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kPoissonFit;
  ModelSpec model;
  // Exactly one of ell_range / ell_list is set. ell_range_to_n means the
  // upper end was given as "n".
  std::optional<std::pair<std::uint32_t, std::uint32_t>> ell_range;
  bool ell_range_to_n = false;
  std::vector<std::uint32_t> ell_list;
  std::uint64_t trials = 1;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;
  std::uint64_t spectrum_budget = 10'000'000;
  /// Absolute tolerance overriding the default of tolerance_sigmas standard errors.
  std::optional<double> tolerance;
  double tolerance_sigmas = 3.0;

  /// The lengths the config covers, in increasing order.
  std::vector<std::uint32_t> lengths() const;
  std::pair<std::uint32_t, std::uint32_t> range() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses and validates JSON text; ValidationError names the offending field.
ExperimentConfig parse_config(const std::string& text);
/// Throws ValidationError naming the offending field.
void validate_config(const ExperimentConfig& cfg);
std::string config_to_json(const ExperimentConfig& cfg);

/// Default thread count: CYCLESPAN_THREADS if set and positive, else 1.
unsigned default_threads();

enum class Comparison { kWithin, kAtLeast, kAtMost };

const char* to_string(Comparison c);

struct ResultCell {
  std::string metric;    // empty for the kind's primary estimate
  std::string k_or_ell;  // "4" or "3..60"
  std::uint64_t trials = 0;  // trials the estimate is based on
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::optional<double> reference;  // absent when the model has no prediction
  double tolerance = 0.0;
  Comparison comparison = Comparison::kWithin;
  bool usable = true;
  std::uint64_t unusable_trials = 0;
  std::uint64_t aborted_trials = 0;
  bool pass = false;

  bool operator==(const ResultCell&) const = default;
};

/// within: |estimate - reference| <= tolerance; at_least: estimate >=
/// reference - tolerance; at_most: estimate <= reference + tolerance.
/// Unusable cells never pass; with no reference a usable cell passes.
bool evaluate_pass(double estimate, std::optional<double> reference, double tolerance,
                   Comparison cmp,
                   bool usable = true);

/// sqrt(p (1 - p) / trials).
double proportion_stderr(double p, std::uint64_t trials);

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ResultCell> cells;
  std::uint64_t failed_trials = 0;  // sampler gave up
  std::uint64_t cycles_enumerated = 0;

  bool all_pass() const;
  bool operator==(const ExperimentResult&) const = default;
};

/// Runs cfg.trials trials on streams (master_seed, 0..trials-1) across
/// cfg.threads workers; results are folded in trial order.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Plain-text table of the cells.
std::string summarize(const ExperimentResult& res);

enum class OutputFormat { kCsv, kJson };

std::string to_csv(const ExperimentResult& res);
std::string result_to_json(const ExperimentResult& res);
ExperimentResult result_from_json(const std::string& text);
/// Writes to path; throws std::runtime_error on I/O failure.
void write_output(const ExperimentResult& res, OutputFormat format, const std::string& path);

// Built-in invariant suites.

struct SuiteCheck {
  std::string name;
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  std::string first_violation;
};

struct SuiteReport {
  std::string suite;
  std::vector<SuiteCheck> checks;
  bool ok() const;
};

/// Exhaustive switching checks for every n <= n_max, every valid ell, every
/// eligible chord and partner, in the requested orientations.
SuiteReport verify_switching(Vertex n_max, bool undirected = true, bool directed = true);
/// Same, restricted to ell in [ell_lo, ell_hi].
SuiteReport verify_switching_range(Vertex n_max, bool undirected, bool directed,
                                   std::uint32_t ell_lo, std::uint32_t ell_hi);
/// Poisson means of Z_3, Z_4 in the configuration model.
SuiteReport verify_poisson(std::uint64_t master_seed = 1);
/// Edge counts after stage I of the regular staged exposure.
SuiteReport verify_lemma(std::uint64_t master_seed = 1);
/// Spectrum routines against the brute-force oracle on random small graphs.
SuiteReport verify_spectrum_oracle(std::uint64_t graphs = 100, std::uint64_t master_seed = 1);

std::string format_report(const SuiteReport& r);

}  // namespace cyclespan
