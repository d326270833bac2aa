// cyclespan command-line front end.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cyclespan/experiment.hpp"
#include "cyclespan/samplers.hpp"
#include "cyclespan/spectrum.hpp"
#include "cyclespan/switching.hpp"
#include "cyclespan/theory.hpp"

using namespace cyclespan;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitInternal = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + out_path);
  out << text;
}

Edge parse_pair(const std::string& s) {
  unsigned long a = 0, b = 0;
  char sep = 0;
  std::istringstream in(s);
  if (!(in >> a >> sep >> b) || sep != ',' || !in.eof()) {
    throw ValidationError("expected a vertex pair 'i,j', got '" + s + "'");
  }
  return {static_cast<Vertex>(a), static_cast<Vertex>(b)};
}

json cycle_json(const VertexCycle& c) { return json(c.vertices); }

json pair_json(Edge e) { return json::array({e.first, e.second}); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cycle-length spectra of random graphs"};
  app.require_subcommand(1);

  // sample
  ModelSpec model;
  std::string model_orientation = "undirected";
  std::optional<std::uint32_t> model_d;
  std::optional<double> model_p, model_c, model_delta;
  std::uint64_t seed = 0, stream = 0;
  std::string out_path;
  auto* sample = app.add_subcommand("sample", "draw one graph and print its edge list");
  sample->add_option("--model", model.name, "configuration|regular_simple|ham_plus_matching|"
                                            "ham_plus_ham|ham_plus_binomial|binomial|cycle")
      ->required();
  sample->add_option("--n", model.n, "vertex count")->required();
  sample->add_option("--d", model_d, "degree");
  sample->add_option("--p", model_p, "edge probability");
  sample->add_option("--c", model_c, "edge probability c/n");
  sample->add_option("--delta", model_delta, "edge probability delta/n");
  sample->add_option("--orientation", model_orientation)
      ->check(CLI::IsMember({"undirected", "directed"}));
  sample->add_option("--seed", seed, "master seed");
  sample->add_option("--stream", stream, "stream index");
  sample->add_option("--out", out_path, "output file (default stdout)");

  // spectrum
  std::string graph_path;
  std::uint64_t budget = kDefaultSpectrumBudget;
  std::uint32_t max_counted = 0;
  bool allow_two = false, want_circumference = false;
  auto* spectrum = app.add_subcommand("spectrum", "cycle-length set of an edge-list graph");
  spectrum->add_option("--graph", graph_path, "edge-list file ('-' for stdin)")->required();
  spectrum->add_option("--budget", budget, "maximum enumerated cycles");
  spectrum->add_option("--max-counted", max_counted, "keep exact counts up to this length");
  spectrum->add_flag("--allow-length-two", allow_two, "report length-2 cycles of multigraphs");
  spectrum->add_flag("--circumference", want_circumference, "also run the exact longest-cycle DP");

  // switch
  Vertex sw_n = 0;
  std::uint32_t sw_ell = 0;
  bool sw_directed = false;
  std::string sw_e, sw_f;
  auto* sw = app.add_subcommand("switch", "partner chords and switched cycles on C_n");
  sw->add_option("--n", sw_n)->required();
  sw->add_option("--ell", sw_ell)->required();
  sw->add_flag("--directed", sw_directed);
  sw->add_option("--e", sw_e, "chord 'i,j'")->required();
  sw->add_option("--f", sw_f, "partner chord 'i,j' (prints the switched cycles)");

  // theta
  double th_c = 0, th_tol = 1e-12;
  std::uint32_t th_ell = 3;
  bool th_directed = false;
  auto* th = app.add_subcommand("theta", "limiting probability that every length >= ell appears");
  th->add_option("--c", th_c)->required();
  th->add_option("--ell", th_ell)->required();
  th->add_option("--tol", th_tol);
  th->add_flag("--directed", th_directed);

  // experiment
  std::string config_path, format = "csv";
  std::optional<unsigned> threads;
  bool strict = false, quiet = false;
  auto* exp = app.add_subcommand("experiment", "run a Monte Carlo experiment from a JSON config");
  exp->add_option("--config", config_path)->required();
  exp->add_option("--threads", threads, "worker threads (default CYCLESPAN_THREADS or config)");
  exp->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  exp->add_option("--out", out_path, "output path (default stdout)");
  exp->add_flag("--strict", strict, "exit 1 when any cell fails");
  exp->add_flag("--quiet", quiet, "no summary on stderr");

  // verify
  std::string suite = "all", orientation = "both";
  Vertex n_max = 20;
  std::uint64_t verify_seed = 1;
  auto* verify = app.add_subcommand("verify", "built-in invariant suites");
  verify->add_option("--suite", suite)
      ->check(CLI::IsMember({"switching", "poisson", "lemma", "spectrum-oracle", "all"}));
  verify->add_option("--n-max", n_max, "largest n for the switching suite");
  verify->add_option("--orientation", orientation, "switching suite orientations")
      ->check(CLI::IsMember({"both", "undirected", "directed"}));
  verify->add_option("--seed", verify_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*sample) {
      model.d = model_d;
      model.p = model_p;
      model.c = model_c;
      model.delta = model_delta;
      model.orientation =
          model_orientation == "directed" ? Orientation::kDirected : Orientation::kUndirected;
      SeededStream s(seed, stream);
      emit(to_edge_list(sample_model(model, s)), out_path);
      return kExitOk;
    }

    if (*spectrum) {
      const Graph g = graph_path == "-" ? read_edge_list(std::cin)
                                        : parse_edge_list(read_file(graph_path));
      SpectrumOptions opt;
      opt.budget = budget;
      opt.max_counted = max_counted;
      opt.allow_length_two = allow_two;
      const auto spec = cycle_length_set(g, opt);
      json j;
      j["lengths"] = std::vector<std::uint32_t>(spec.lengths_present.begin(),
                                                spec.lengths_present.end());
      json counts = json::object();
      for (std::uint32_t k = 0; k <= spec.max_counted && k < spec.counts.size(); ++k) {
        if (spec.counts[k] > 0) counts[std::to_string(k)] = spec.counts[k];
      }
      j["counts"] = counts;
      j["exhaustive"] = spec.exhaustive;
      j["budget_exhausted"] = spec.budget_exhausted;
      j["cycles_enumerated"] = spec.cycles_enumerated;
      if (want_circumference) {
        const auto c = circumference(g);
        j["circumference"] = c.length;
        if (c.witness) j["circumference_witness"] = cycle_json(*c.witness);
      }
      std::cout << j.dump(2) << "\n";
      return kExitOk;
    }

    if (*sw) {
      const SwitchingContext ctx{sw_n, sw_ell,
                                 sw_directed ? Orientation::kDirected : Orientation::kUndirected};
      ctx.require_valid();
      const Edge e = parse_pair(sw_e);
      json j;
      j["n"] = sw_n;
      j["ell"] = sw_ell;
      j["directed"] = sw_directed;
      j["e"] = pair_json(e);
      j["eligible"] = is_eligible_chord(e, ctx);
      if (!is_eligible_chord(e, ctx)) {
        std::cout << j.dump(2) << "\n";
        std::cerr << "error: chord is not switchable for this ell\n";
        return kExitValidation;
      }
      json partners = json::array();
      for (const Edge& f : partner_chords(e, ctx)) partners.push_back(pair_json(f));
      j["partners"] = partners;
      j["conflicting"] = conflicting_chords_fast(e, ctx).size();
      if (!sw_f.empty()) {
        const Edge f = parse_pair(sw_f);
        if (sw_directed) {
          j["cycle"] = cycle_json(shortcut_cycle(ctx, e, f));
        } else {
          const auto [c1, c2] = switch_cycles(ctx, e, f);
          j["short_cycle"] = cycle_json(c1);
          j["long_cycle"] = cycle_json(c2);
        }
      }
      std::cout << j.dump(2) << "\n";
      return kExitOk;
    }

    if (*th) {
      const auto r = theta(th_c, th_ell, th_directed, th_tol);
      json j;
      j["c"] = r.c;
      j["ell"] = r.ell;
      j["directed"] = r.directed;
      j["value"] = r.value;
      j["K"] = r.truncation_K;
      j["tail_bound"] = r.tail_bound;
      std::cout << j.dump(2) << "\n";
      return kExitOk;
    }

    if (*exp) {
      ExperimentConfig cfg = parse_config(read_file(config_path));
      if (threads) {
        if (*threads < 1) throw ValidationError("--threads must be >= 1");
        cfg.threads = *threads;
      }
      const auto res = run_experiment(cfg);
      const auto fmt = format == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
      if (out_path.empty() || out_path == "-") {
        std::cout << (fmt == OutputFormat::kJson ? result_to_json(res) : to_csv(res));
      } else {
        write_output(res, fmt, out_path);
      }
      if (!quiet) std::cerr << summarize(res);
      return strict && !res.all_pass() ? kExitValidation : kExitOk;
    }

    if (*verify) {
      bool ok = true;
      auto run = [&](const SuiteReport& r) {
        std::cout << format_report(r);
        ok = ok && r.ok();
      };
      if (suite == "switching" || suite == "all") {
        run(verify_switching(n_max, orientation != "directed", orientation != "undirected"));
      }
      if (suite == "poisson" || suite == "all") run(verify_poisson(verify_seed));
      if (suite == "lemma" || suite == "all") run(verify_lemma(verify_seed));
      if (suite == "spectrum-oracle" || suite == "all") {
        run(verify_spectrum_oracle(100, verify_seed));
      }
      return ok ? kExitOk : kExitValidation;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const SamplingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}
