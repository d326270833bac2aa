#include "cyclespan/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cyclespan/samplers.hpp"
#include "cyclespan/spectrum.hpp"
#include "cyclespan/switching.hpp"
#include "cyclespan/theory.hpp"

namespace cyclespan {

using nlohmann::json;

namespace {

constexpr std::uint32_t kShortLengthCutoff = 10;
constexpr std::uint32_t kMaxPoissonLength = 12;
// Enumeration pass before exact-length searches take over.
constexpr std::uint64_t kWarmupCycles = 10'000;
constexpr std::uint64_t kSearchNodes = 50'000'000;

[[noreturn]] void field_error(const std::string& field, const std::string& msg) {
  throw ValidationError("field `" + field + "`: " + msg);
}

std::string fmt_double(double x, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

}  // namespace

const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::kPoissonFit:
      return "poisson_fit";
    case ExperimentKind::kIntervalProbability:
      return "interval_probability";
    case ExperimentKind::kPerLengthProbability:
      return "per_length_probability";
    case ExperimentKind::kSwitchingSuite:
      return "switching_suite";
    case ExperimentKind::kLemmaCheck:
      return "lemma_check";
    case ExperimentKind::kStagedSuccess:
      return "staged_success";
  }
  return "unknown";
}

ExperimentKind parse_kind(const std::string& s) {
  for (auto k : {ExperimentKind::kPoissonFit, ExperimentKind::kIntervalProbability,
                 ExperimentKind::kPerLengthProbability, ExperimentKind::kSwitchingSuite,
                 ExperimentKind::kLemmaCheck, ExperimentKind::kStagedSuccess}) {
    if (s == to_string(k)) return k;
  }
  field_error("kind", "unknown experiment kind '" + s + "'");
}

const char* to_string(Comparison c) {
  switch (c) {
    case Comparison::kWithin:
      return "within";
    case Comparison::kAtLeast:
      return "at_least";
    case Comparison::kAtMost:
      return "at_most";
  }
  return "within";
}

namespace {

Comparison parse_comparison(const std::string& s) {
  for (auto c : {Comparison::kWithin, Comparison::kAtLeast, Comparison::kAtMost}) {
    if (s == to_string(c)) return c;
  }
  throw ValidationError("unknown comparison '" + s + "'");
}

}  // namespace

// ---- models ----

double ModelSpec::edge_probability() const {
  if (p) return *p;
  if (c) return *c / n;
  if (delta) return *delta / n;
  return 0.0;
}

std::optional<double> ModelSpec::poisson_base() const {
  if (name == "configuration" || name == "regular_simple") {
    if (d) return *d - 1.0;
    return std::nullopt;
  }
  if (name == "binomial") return edge_probability() * n;
  return std::nullopt;
}

std::string ModelSpec::param_text() const {
  std::string out;
  auto add = [&](const std::string& s) {
    if (!out.empty()) out += ';';
    out += s;
  };
  if (d) add("d=" + std::to_string(*d));
  if (p) add("p=" + fmt_double(*p));
  if (c) add("c=" + fmt_double(*c));
  if (delta) add("delta=" + fmt_double(*delta));
  if (directed()) add("directed");
  return out;
}

Graph sample_model(const ModelSpec& m, SeededStream& s) {
  if (m.name == "configuration") return sample_configuration_model(m.n, m.d.value_or(3), s);
  if (m.name == "regular_simple") return sample_regular_simple(m.n, m.d.value_or(3), s).graph;
  if (m.name == "ham_plus_matching") return sample_ham_plus_matching(m.n, s);
  if (m.name == "ham_plus_ham") return sample_ham_plus_ham(m.n, s);
  if (m.name == "ham_plus_binomial") {
    return sample_ham_plus_binomial(m.n, m.edge_probability(), m.orientation, s);
  }
  if (m.name == "binomial") return sample_binomial(m.n, m.edge_probability(), m.orientation, s);
  if (m.name == "cycle") return cycle_graph(m.n, m.orientation);
  field_error("model.name", "unknown model '" + m.name + "'");
}

// ---- config ----

std::vector<std::uint32_t> ExperimentConfig::lengths() const {
  if (ell_range) {
    std::vector<std::uint32_t> out;
    const auto [lo, hi] = range();
    for (std::uint32_t k = lo; k <= hi; ++k) out.push_back(k);
    return out;
  }
  std::vector<std::uint32_t> out = ell_list;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::pair<std::uint32_t, std::uint32_t> ExperimentConfig::range() const {
  if (ell_range) {
    return {ell_range->first, ell_range_to_n ? model.n : ell_range->second};
  }
  const auto ls = lengths();
  if (ls.empty()) return {0, 0};
  return {ls.front(), ls.back()};
}

unsigned default_threads() {
  if (const char* env = std::getenv("CYCLESPAN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 1024) return static_cast<unsigned>(v);
  }
  return 1;
}

namespace {

template <class T>
T get_field(const json& obj, const char* key, const std::string& path) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::out_of_range&) {
    field_error(path, "missing");
  } catch (const json::type_error& e) {
    field_error(path, std::string("wrong type (") + e.what() + ")");
  }
}

template <class T>
std::optional<T> get_optional(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return get_field<T>(obj, key, path);
}

bool known_model(const std::string& name) {
  for (const char* m : {"configuration", "regular_simple", "ham_plus_matching", "ham_plus_ham",
                        "ham_plus_binomial", "binomial", "cycle"}) {
    if (name == m) return true;
  }
  return false;
}

void check_ell_bounds(const ExperimentConfig& cfg) {
  const auto ls = cfg.lengths();
  const Vertex n = cfg.model.n;
  const bool dir = cfg.model.directed();
  const char* field = cfg.ell_range ? "ell_range" : "ell_list";
  for (std::uint32_t ell : ls) {
    switch (cfg.kind) {
      case ExperimentKind::kPoissonFit:
        if (ell < 3 || ell > kMaxPoissonLength || ell > n) {
          field_error(field, "poisson_fit lengths must lie in [3, min(n, " +
                                 std::to_string(kMaxPoissonLength) + ")], got " +
                                 std::to_string(ell));
        }
        break;
      case ExperimentKind::kIntervalProbability:
      case ExperimentKind::kPerLengthProbability:
        if (ell < 3 || ell > n) {
          field_error(field, "lengths must lie in [3, n], got " + std::to_string(ell));
        }
        break;
      case ExperimentKind::kSwitchingSuite:
        if (ell < 4) field_error(field, "switching needs ell >= 4");
        break;
      case ExperimentKind::kLemmaCheck:
      case ExperimentKind::kStagedSuccess: {
        const SwitchingContext ctx{n, ell, cfg.model.orientation};
        if (!ctx.valid()) {
          field_error(field, dir ? "directed lengths must satisfy 4 <= ell <= n-4 (n=" +
                                       std::to_string(n) + ", ell=" + std::to_string(ell) + ")"
                                 : "undirected lengths must satisfy 4 <= ell <= n/2+2 (n=" +
                                       std::to_string(n) + ", ell=" + std::to_string(ell) +
                                       ")");
        }
        break;
      }
    }
  }
}

}  // namespace

void validate_config(const ExperimentConfig& cfg) {
  const ModelSpec& m = cfg.model;
  if (!known_model(m.name)) field_error("model.name", "unknown model '" + m.name + "'");
  if (m.n < 3) field_error("model.n", "must be >= 3");
  if (cfg.trials < 1) field_error("trials", "must be >= 1");
  if (cfg.threads < 1) field_error("threads", "must be >= 1");
  if (cfg.spectrum_budget < 1) field_error("spectrum_budget", "must be >= 1");
  if (cfg.tolerance && !(*cfg.tolerance >= 0.0)) field_error("tolerance", "must be >= 0");
  if (!(cfg.tolerance_sigmas > 0.0)) field_error("tolerance_sigmas", "must be > 0");
  if (cfg.ell_range && !cfg.ell_list.empty()) {
    field_error("ell_range", "give either ell_range or ell_list, not both");
  }
  if (cfg.ell_range && !cfg.ell_range_to_n && cfg.ell_range->first > cfg.ell_range->second) {
    field_error("ell_range", "lower end exceeds upper end");
  }

  const bool regular = m.name == "configuration" || m.name == "regular_simple";
  const bool binomial_type = m.name == "binomial" || m.name == "ham_plus_binomial";
  if (regular) {
    if (!m.d) field_error("model.d", "missing");
    if (*m.d < 1) field_error("model.d", "must be >= 1");
    if ((std::uint64_t{m.n} * *m.d) % 2 != 0) field_error("model.d", "n*d must be even");
    if (m.directed()) field_error("model.orientation", "regular models are undirected");
  }
  if (binomial_type) {
    const int given = int(m.p.has_value()) + int(m.c.has_value()) + int(m.delta.has_value());
    if (given != 1) field_error("model.p", "give exactly one of p, c, delta");
    const double p = m.edge_probability();
    if (!(p >= 0.0 && p <= 1.0)) field_error("model.p", "edge probability must lie in [0,1]");
  }
  if ((m.name == "ham_plus_matching") && m.n % 2 != 0) field_error("model.n", "must be even");
  if ((m.name == "ham_plus_matching" || m.name == "ham_plus_ham") && m.directed()) {
    field_error("model.orientation", m.name + " is undirected");
  }

  const bool needs_lengths = cfg.kind != ExperimentKind::kSwitchingSuite;
  if (needs_lengths && !cfg.ell_range && cfg.ell_list.empty()) {
    field_error("ell_range", "missing (give ell_range or ell_list)");
  }

  switch (cfg.kind) {
    case ExperimentKind::kPoissonFit:
    case ExperimentKind::kPerLengthProbability:
      if (!m.poisson_base()) {
        field_error("model.name", std::string(to_string(cfg.kind)) +
                                      " needs a model with Poisson means "
                                      "(configuration, regular_simple, binomial)");
      }
      break;
    case ExperimentKind::kIntervalProbability:
      break;
    case ExperimentKind::kSwitchingSuite:
      if (m.name != "cycle") field_error("model.name", "switching_suite runs on the cycle model");
      if (m.n > 64) field_error("model.n", "switching_suite is exhaustive; n must be <= 64");
      break;
    case ExperimentKind::kLemmaCheck:
      if (m.name != "ham_plus_matching") {
        field_error("model.name", "lemma_check runs on ham_plus_matching");
      }
      break;
    case ExperimentKind::kStagedSuccess:
      if (m.name != "ham_plus_binomial" || !m.delta) {
        field_error("model.delta", "staged_success runs on ham_plus_binomial with delta");
      }
      if (!(*m.delta > 0.0 && *m.delta < 1.0 / 3.0)) {
        field_error("model.delta", "must lie in (0, 1/3)");
      }
      break;
  }
  check_ell_bounds(cfg);
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");

  ExperimentConfig cfg;
  cfg.kind = parse_kind(get_field<std::string>(j, "kind", "kind"));
  if (!j.contains("model") || !j.at("model").is_object()) field_error("model", "missing");
  const json& jm = j.at("model");
  cfg.model.name = get_field<std::string>(jm, "name", "model.name");
  const auto n = get_field<std::int64_t>(jm, "n", "model.n");
  if (n < 3 || n > 100'000'000) field_error("model.n", "must lie in [3, 1e8]");
  cfg.model.n = static_cast<Vertex>(n);
  if (auto d = get_optional<std::int64_t>(jm, "d", "model.d")) {
    if (*d < 1 || *d > 1'000'000) field_error("model.d", "must be >= 1");
    cfg.model.d = static_cast<std::uint32_t>(*d);
  }
  cfg.model.p = get_optional<double>(jm, "p", "model.p");
  cfg.model.c = get_optional<double>(jm, "c", "model.c");
  cfg.model.delta = get_optional<double>(jm, "delta", "model.delta");
  if (auto o = get_optional<std::string>(jm, "orientation", "model.orientation")) {
    if (*o == "directed") {
      cfg.model.orientation = Orientation::kDirected;
    } else if (*o != "undirected") {
      field_error("model.orientation", "must be 'undirected' or 'directed'");
    }
  }

  if (j.contains("ell_range")) {
    const json& r = j.at("ell_range");
    if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer()) {
      field_error("ell_range", "must be [lo, hi] with hi an integer or \"n\"");
    }
    const auto lo = r[0].get<std::int64_t>();
    std::int64_t hi = 0;
    if (r[1].is_string() && r[1].get<std::string>() == "n") {
      cfg.ell_range_to_n = true;
      hi = n;
    } else if (r[1].is_number_integer()) {
      hi = r[1].get<std::int64_t>();
    } else {
      field_error("ell_range", "upper end must be an integer or \"n\"");
    }
    if (lo < 0 || hi < 0 || lo > 1'000'000'000 || hi > 1'000'000'000) {
      field_error("ell_range", "out of range");
    }
    cfg.ell_range = std::make_pair(static_cast<std::uint32_t>(lo),
                                   cfg.ell_range_to_n ? 0u : static_cast<std::uint32_t>(hi));
  }
  if (j.contains("ell_list")) {
    const json& l = j.at("ell_list");
    if (!l.is_array() || l.empty()) field_error("ell_list", "must be a non-empty array");
    for (const auto& v : l) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0 ||
          v.get<std::int64_t>() > 1'000'000'000) {
        field_error("ell_list", "entries must be non-negative integers");
      }
      cfg.ell_list.push_back(v.get<std::uint32_t>());
    }
  }
  if (auto t = get_optional<std::int64_t>(j, "trials", "trials")) {
    if (*t < 1) field_error("trials", "must be >= 1");
    cfg.trials = static_cast<std::uint64_t>(*t);
  }
  if (auto s = get_optional<std::uint64_t>(j, "master_seed", "master_seed")) cfg.master_seed = *s;
  cfg.threads = default_threads();
  if (auto t = get_optional<std::int64_t>(j, "threads", "threads")) {
    if (*t < 1 || *t > 1024) field_error("threads", "must lie in [1, 1024]");
    cfg.threads = static_cast<unsigned>(*t);
  }
  if (auto b = get_optional<std::int64_t>(j, "spectrum_budget", "spectrum_budget")) {
    if (*b < 1) field_error("spectrum_budget", "must be >= 1");
    cfg.spectrum_budget = static_cast<std::uint64_t>(*b);
  }
  cfg.tolerance = get_optional<double>(j, "tolerance", "tolerance");
  if (auto s = get_optional<double>(j, "tolerance_sigmas", "tolerance_sigmas")) {
    cfg.tolerance_sigmas = *s;
  }
  validate_config(cfg);
  return cfg;
}

namespace {

json config_json(const ExperimentConfig& cfg) {
  json m;
  m["name"] = cfg.model.name;
  m["n"] = cfg.model.n;
  if (cfg.model.d) m["d"] = *cfg.model.d;
  if (cfg.model.p) m["p"] = *cfg.model.p;
  if (cfg.model.c) m["c"] = *cfg.model.c;
  if (cfg.model.delta) m["delta"] = *cfg.model.delta;
  m["orientation"] = to_string(cfg.model.orientation);
  json j;
  j["kind"] = to_string(cfg.kind);
  j["model"] = m;
  if (cfg.ell_range) {
    json hi = cfg.ell_range_to_n ? json("n") : json(cfg.ell_range->second);
    j["ell_range"] = json::array({cfg.ell_range->first, hi});
  }
  if (!cfg.ell_list.empty()) j["ell_list"] = cfg.ell_list;
  j["trials"] = cfg.trials;
  j["master_seed"] = cfg.master_seed;
  j["threads"] = cfg.threads;
  j["spectrum_budget"] = cfg.spectrum_budget;
  if (cfg.tolerance) j["tolerance"] = *cfg.tolerance;
  j["tolerance_sigmas"] = cfg.tolerance_sigmas;
  return j;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) { return config_json(cfg).dump(2); }

// ---- evaluation ----

bool evaluate_pass(double estimate, std::optional<double> reference, double tolerance,
                   Comparison cmp, bool usable) {
  if (!usable) return false;
  if (!reference) return true;
  switch (cmp) {
    case Comparison::kWithin:
      return std::fabs(estimate - *reference) <= tolerance;
    case Comparison::kAtLeast:
      return estimate >= *reference - tolerance;
    case Comparison::kAtMost:
      return estimate <= *reference + tolerance;
  }
  return false;
}

double proportion_stderr(double p, std::uint64_t trials) {
  if (trials == 0) return 0.0;
  return std::sqrt(p * (1.0 - p) / double(trials));
}

bool ExperimentResult::all_pass() const {
  return std::all_of(cells.begin(), cells.end(), [](const ResultCell& c) { return c.pass; });
}

namespace {

// Trial outcome for one length: 1 present, 0 absent, -1 undetermined.
using Presence3 = std::int8_t;

struct TrialRecord {
  std::vector<double> values;
  std::vector<Presence3> presence;
  bool aborted = false;
  std::uint64_t cycles = 0;
};

// Runs fn(stream) for each trial index; a SamplingError leaves the slot empty.
template <class Fn>
std::vector<std::optional<TrialRecord>> run_trials(const ExperimentConfig& cfg, Fn fn) {
  std::vector<std::optional<TrialRecord>> out(cfg.trials);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      const std::uint64_t idx = next.fetch_add(1);
      if (idx >= cfg.trials) return;
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (error) return;
      }
      try {
        SeededStream s(cfg.master_seed, idx);
        out[idx] = fn(s);
      } catch (const SamplingError&) {
        out[idx].reset();
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const unsigned threads =
      static_cast<unsigned>(std::min<std::uint64_t>(cfg.threads, cfg.trials));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

// Presence of each requested length in g. Lengths up to kShortLengthCutoff
// come from exact counts. Longer ones are first collected by a bounded
// enumeration pass, then settled one at a time by exact-length search. With
// stop_on_absent, the first absent length ends the probe.
std::vector<Presence3> probe_lengths(const Graph& g, const std::vector<std::uint32_t>& ells,
                                     std::uint64_t budget, bool stop_on_absent,
                                     std::uint64_t& cycles) {
  std::vector<Presence3> out(ells.size(), -1);
  std::uint32_t short_max = 0;
  for (std::uint32_t k : ells) {
    if (k <= kShortLengthCutoff) short_max = std::max(short_max, k);
  }
  if (short_max >= 3) {
    const auto counts = count_short_cycles(g, short_max);
    for (std::size_t i = 0; i < ells.size(); ++i) {
      if (ells[i] <= kShortLengthCutoff) {
        out[i] = counts[ells[i]] > 0 ? 1 : 0;
        if (stop_on_absent && out[i] == 0) return out;
      }
    }
  }
  std::vector<std::size_t> slot_of(g.num_vertices() + 1, SIZE_MAX);
  std::size_t missing = 0;
  for (std::size_t i = 0; i < ells.size(); ++i) {
    if (out[i] == -1) {
      if (ells[i] <= g.num_vertices()) {
        slot_of[ells[i]] = i;
        ++missing;
      } else {
        out[i] = 0;
        if (stop_on_absent) return out;
      }
    }
  }
  if (missing == 0) return out;
  std::uint64_t seen = 0;
  const auto status = enumerate_cycles(
      g, std::min(budget, kWarmupCycles),
      [&](std::span<const Vertex> c) {
        const std::size_t slot = slot_of[c.size()];
        if (slot != SIZE_MAX && out[slot] == -1) {
          out[slot] = 1;
          --missing;
        }
        return missing > 0;
      },
      &seen);
  cycles += seen;
  const bool complete = status == EnumerationStatus::kComplete;
  for (std::size_t i = 0; i < ells.size(); ++i) {
    if (out[i] != -1) continue;
    if (complete) {
      out[i] = 0;
    } else {
      const auto q = find_cycle_of_length(g, ells[i], kSearchNodes);
      if (q.verdict == Presence::kPresent) out[i] = 1;
      if (q.verdict == Presence::kAbsent) out[i] = 0;
    }
    if (stop_on_absent && out[i] == 0) return out;
  }
  return out;
}

std::string range_text(std::uint32_t lo, std::uint32_t hi) {
  return lo == hi ? std::to_string(lo) : std::to_string(lo) + ".." + std::to_string(hi);
}

double tolerance_for(const ExperimentConfig& cfg, double se) {
  return cfg.tolerance ? *cfg.tolerance : cfg.tolerance_sigmas * se;
}

void finish(ResultCell& c) {
  c.pass = evaluate_pass(c.estimate, c.reference, c.tolerance, c.comparison, c.usable);
}

// Frequency cell over trials whose presence[slot] is known.
ResultCell frequency_cell(const std::vector<std::optional<TrialRecord>>& recs,
                          const std::function<Presence3(const TrialRecord&)>& outcome) {
  ResultCell c;
  std::uint64_t hits = 0;
  for (const auto& r : recs) {
    if (!r) continue;
    const Presence3 o = outcome(*r);
    if (o < 0) {
      ++c.unusable_trials;
      continue;
    }
    ++c.trials;
    hits += o;
  }
  c.estimate = c.trials ? double(hits) / double(c.trials) : 0.0;
  c.stderr_ = proportion_stderr(c.estimate, c.trials);
  c.usable = c.unusable_trials == 0 && c.trials > 0;
  return c;
}

void run_switching_suite(const ExperimentConfig& cfg, ExperimentResult& res);

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  ExperimentResult res;
  res.config = cfg;
  const ModelSpec& m = cfg.model;
  const auto ells = cfg.lengths();
  const bool dir = m.directed();

  switch (cfg.kind) {
    case ExperimentKind::kPoissonFit: {
      const std::uint32_t kmax = ells.back();
      auto recs = run_trials(cfg, [&](SeededStream& s) {
        const Graph g = sample_model(m, s);
        const auto counts = count_short_cycles(g, kmax);
        TrialRecord r;
        for (std::uint32_t k : ells) r.values.push_back(double(counts[k]));
        return r;
      });
      const double base = *m.poisson_base();
      for (std::size_t i = 0; i < ells.size(); ++i) {
        std::vector<double> xs;
        for (const auto& r : recs) {
          if (r) xs.push_back(r->values[i]);
        }
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean = xs.empty() ? 0.0 : mean / double(xs.size());
        double var = 0.0;
        for (double x : xs) var += (x - mean) * (x - mean);
        var = xs.size() > 1 ? var / double(xs.size() - 1) : 0.0;

        ResultCell mc;
        mc.k_or_ell = std::to_string(ells[i]);
        mc.trials = xs.size();
        mc.estimate = mean;
        mc.stderr_ = xs.empty() ? 0.0 : std::sqrt(var / double(xs.size()));
        mc.reference = lambda_k(ells[i], base, dir);
        mc.tolerance = tolerance_for(cfg, mc.stderr_);
        mc.usable = !xs.empty();
        finish(mc);
        res.cells.push_back(mc);

        ResultCell vc;
        vc.metric = "variance";
        vc.k_or_ell = mc.k_or_ell;
        vc.trials = xs.size();
        vc.estimate = var;
        vc.reference = mean;
        vc.tolerance = 0.25 * mean;
        vc.usable = xs.size() > 1;
        finish(vc);
        res.cells.push_back(vc);
      }
      for (const auto& r : recs) res.failed_trials += r ? 0 : 1;
      break;
    }

    case ExperimentKind::kPerLengthProbability: {
      auto recs = run_trials(cfg, [&](SeededStream& s) {
        const Graph g = sample_model(m, s);
        TrialRecord r;
        r.presence = probe_lengths(g, ells, cfg.spectrum_budget, false, r.cycles);
        return r;
      });
      const double base = *m.poisson_base();
      for (std::size_t i = 0; i < ells.size(); ++i) {
        ResultCell c = frequency_cell(recs, [i](const TrialRecord& r) { return r.presence[i]; });
        c.k_or_ell = std::to_string(ells[i]);
        c.reference = -std::expm1(-lambda_k(ells[i], base, dir));
        c.tolerance = tolerance_for(cfg, c.stderr_);
        finish(c);
        res.cells.push_back(c);
      }
      for (const auto& r : recs) {
        res.failed_trials += r ? 0 : 1;
        if (r) res.cycles_enumerated += r->cycles;
      }
      break;
    }

    case ExperimentKind::kIntervalProbability: {
      const auto [lo, hi] = cfg.range();
      auto recs = run_trials(cfg, [&](SeededStream& s) {
        const Graph g = sample_model(m, s);
        TrialRecord r;
        r.presence = probe_lengths(g, ells, cfg.spectrum_budget, true, r.cycles);
        return r;
      });
      auto outcome = [](const TrialRecord& r) -> Presence3 {
        bool unknown = false;
        for (Presence3 p : r.presence) {
          if (p == 0) return 0;
          if (p < 0) unknown = true;
        }
        return unknown ? -1 : 1;
      };
      ResultCell c = frequency_cell(recs, outcome);
      c.k_or_ell = range_text(lo, hi);
      c.tolerance = tolerance_for(cfg, c.stderr_);
      std::optional<ResultCell> lower;
      if (m.name == "cycle") {
        c.reference = (lo == m.n && hi == m.n) ? 1.0 : 0.0;
      } else if (auto base = m.poisson_base(); base && *base > 1.0 && lo >= 3) {
        c.reference = theta(*base, lo, dir).value;
        if (m.name == "configuration" || m.name == "regular_simple") {
          lower = c;
          lower->metric = "lower_bound";
          lower->reference = regular_lower_bound(*m.d, lo);
          lower->comparison = Comparison::kAtLeast;
          lower->tolerance = cfg.tolerance_sigmas * c.stderr_;
        }
      }
      finish(c);
      res.cells.push_back(c);
      if (lower) {
        finish(*lower);
        res.cells.push_back(*lower);
      }
      for (const auto& r : recs) {
        res.failed_trials += r ? 0 : 1;
        if (r) res.cycles_enumerated += r->cycles;
      }
      break;
    }

    case ExperimentKind::kLemmaCheck: {
      auto recs = run_trials(cfg, [&](SeededStream& s) {
        TrialRecord r;
        for (std::uint32_t ell : ells) {
          const auto o = staged_exposure_regular(m.n, ell, s);
          const double nl = double(m.n) * ell;
          r.values.push_back(double(o.aux_edge_count) >= nl / 128.0 ? 1.0 : 0.0);
          r.values.push_back(double(o.unmatched_aux_edge_count) >= nl / 200.0 ? 1.0 : 0.0);
        }
        return r;
      });
      for (std::size_t i = 0; i < ells.size(); ++i) {
        for (int which = 0; which < 2; ++which) {
          ResultCell c = frequency_cell(recs, [&](const TrialRecord& r) {
            return static_cast<Presence3>(r.values[2 * i + which]);
          });
          c.metric = which == 0 ? "aux_edges" : "unmatched_aux_edges";
          c.k_or_ell = std::to_string(ells[i]);
          c.reference = 0.99;
          c.comparison = Comparison::kAtLeast;
          c.tolerance = cfg.tolerance.value_or(0.0);
          finish(c);
          res.cells.push_back(c);
        }
      }
      for (const auto& r : recs) res.failed_trials += r ? 0 : 1;
      break;
    }

    case ExperimentKind::kStagedSuccess: {
      auto recs = run_trials(cfg, [&](SeededStream& s) {
        TrialRecord r;
        for (std::uint32_t ell : ells) {
          const auto o = staged_exposure_binomial(m.n, ell, *m.delta, m.orientation, s);
          r.values.push_back(o.success ? 1.0 : 0.0);
          r.presence.push_back(o.aborted ? 1 : 0);
        }
        return r;
      });
      for (std::size_t i = 0; i < ells.size(); ++i) {
        ResultCell c = frequency_cell(recs, [i](const TrialRecord& r) {
          return static_cast<Presence3>(r.values[i]);
        });
        for (const auto& r : recs) {
          if (r && r->presence[i]) ++c.aborted_trials;
        }
        c.k_or_ell = std::to_string(ells[i]);
        c.reference = staged_success_bound(*m.delta, ells[i]);
        c.comparison = Comparison::kAtLeast;
        c.tolerance = tolerance_for(cfg, c.stderr_);
        finish(c);
        res.cells.push_back(c);
      }
      for (const auto& r : recs) res.failed_trials += r ? 0 : 1;
      break;
    }

    case ExperimentKind::kSwitchingSuite:
      run_switching_suite(cfg, res);
      break;
  }
  return res;
}

namespace {

void run_switching_suite(const ExperimentConfig& cfg, ExperimentResult& res) {
  std::uint32_t lo = 4, hi = UINT32_MAX;
  if (cfg.ell_range || !cfg.ell_list.empty()) std::tie(lo, hi) = cfg.range();
  const bool dir = cfg.model.directed();
  const SuiteReport rep = verify_switching_range(cfg.model.n, !dir, dir, lo, hi);
  for (const SuiteCheck& chk : rep.checks) {
    ResultCell c;
    c.metric = chk.name;
    c.k_or_ell = hi == UINT32_MAX ? "all" : range_text(lo, hi);
    c.trials = chk.checked;
    c.estimate = chk.checked ? double(chk.checked - chk.violations) / double(chk.checked) : 1.0;
    c.reference = 1.0;
    c.comparison = Comparison::kAtLeast;
    c.tolerance = 0.0;
    finish(c);
    res.cells.push_back(c);
  }
}

}  // namespace

// ---- output ----

std::string summarize(const ExperimentResult& res) {
  const ExperimentConfig& cfg = res.config;
  std::string out;
  out += "experiment " + std::string(to_string(cfg.kind)) + " model=" + cfg.model.name +
         " n=" + std::to_string(cfg.model.n);
  if (const auto p = cfg.model.param_text(); !p.empty()) out += " " + p;
  out += " trials=" + std::to_string(cfg.trials) + " seed=" + std::to_string(cfg.master_seed) +
         "\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-34s %-10s %8s %14s %12s %12s %12s %-9s %s\n", "cell",
                "k_or_ell", "trials", "estimate", "stderr", "reference", "tolerance", "cmp",
                "pass");
  out += line;
  for (const ResultCell& c : res.cells) {
    std::string name = to_string(cfg.kind);
    if (!c.metric.empty()) name += ":" + c.metric;
    const std::string ref = c.reference ? fmt_double(*c.reference, "%.6g") : "-";
    std::snprintf(line, sizeof line, "%-34s %-10s %8llu %14.6g %12.4g %12s %12.4g %-9s %s%s\n",
                  name.c_str(), c.k_or_ell.c_str(), static_cast<unsigned long long>(c.trials),
                  c.estimate, c.stderr_, ref.c_str(), c.tolerance, to_string(c.comparison),
                  c.pass ? "PASS" : "FAIL", c.usable ? "" : " (unusable)");
    out += line;
  }
  if (res.failed_trials > 0) {
    out += "sampler failures: " + std::to_string(res.failed_trials) + "\n";
  }
  return out;
}

std::string to_csv(const ExperimentResult& res) {
  const ExperimentConfig& cfg = res.config;
  std::string out = "kind,model,n,param,k_or_ell,trials,estimate,stderr,reference,pass\n";
  for (const ResultCell& c : res.cells) {
    std::string kind = to_string(cfg.kind);
    if (!c.metric.empty()) kind += ":" + c.metric;
    out += kind + "," + cfg.model.name + "," + std::to_string(cfg.model.n) + "," +
           cfg.model.param_text() + "," + c.k_or_ell + "," + std::to_string(c.trials) + "," +
           fmt_double(c.estimate, "%.12g") + "," + fmt_double(c.stderr_, "%.12g") + "," +
           (c.reference ? fmt_double(*c.reference, "%.12g") : "") + "," +
           (c.pass ? "true" : "false") + "\n";
  }
  return out;
}

std::string result_to_json(const ExperimentResult& res) {
  json j;
  j["config"] = config_json(res.config);
  json cells = json::array();
  for (const ResultCell& c : res.cells) {
    json jc;
    jc["metric"] = c.metric;
    jc["k_or_ell"] = c.k_or_ell;
    jc["trials"] = c.trials;
    jc["estimate"] = c.estimate;
    jc["stderr"] = c.stderr_;
    jc["reference"] = c.reference ? json(*c.reference) : json(nullptr);
    jc["tolerance"] = c.tolerance;
    jc["comparison"] = to_string(c.comparison);
    jc["usable"] = c.usable;
    jc["unusable_trials"] = c.unusable_trials;
    jc["aborted_trials"] = c.aborted_trials;
    jc["pass"] = c.pass;
    cells.push_back(jc);
  }
  j["cells"] = cells;
  j["failed_trials"] = res.failed_trials;
  j["cycles_enumerated"] = res.cycles_enumerated;
  return j.dump(2) + "\n";
}

ExperimentResult result_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("result is not valid JSON: ") + e.what());
  }
  ExperimentResult res;
  res.config = parse_config(j.at("config").dump());
  for (const json& jc : j.at("cells")) {
    ResultCell c;
    c.metric = jc.at("metric").get<std::string>();
    c.k_or_ell = jc.at("k_or_ell").get<std::string>();
    c.trials = jc.at("trials").get<std::uint64_t>();
    c.estimate = jc.at("estimate").get<double>();
    c.stderr_ = jc.at("stderr").get<double>();
    if (!jc.at("reference").is_null()) c.reference = jc.at("reference").get<double>();
    c.tolerance = jc.at("tolerance").get<double>();
    c.comparison = parse_comparison(jc.at("comparison").get<std::string>());
    c.usable = jc.at("usable").get<bool>();
    c.unusable_trials = jc.at("unusable_trials").get<std::uint64_t>();
    c.aborted_trials = jc.at("aborted_trials").get<std::uint64_t>();
    c.pass = jc.at("pass").get<bool>();
    res.cells.push_back(c);
  }
  res.failed_trials = j.at("failed_trials").get<std::uint64_t>();
  res.cycles_enumerated = j.at("cycles_enumerated").get<std::uint64_t>();
  return res;
}

void write_output(const ExperimentResult& res, OutputFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << (format == OutputFormat::kCsv ? to_csv(res) : result_to_json(res));
  out.flush();
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace cyclespan
