// addcomb: command-line front end for the analysis library.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "addcomb/report.hpp"

using namespace addcomb;

namespace {

struct Common {
  std::string config_path;
  std::string preset = "ledger-C";
  std::optional<std::uint64_t> seed;
  std::string output;
  bool no_timing = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON file with LedgerConfig fields");
  cmd->add_option("--preset", c.preset, "ledger-C or ledger-S2")->check(CLI::IsMember(LedgerConfig::preset_names()));
  cmd->add_option("--seed", c.seed, "Seed for every randomised step");
  cmd->add_option("-o,--output", c.output, "Write the report here instead of stdout");
  cmd->add_flag("--no-timing", c.no_timing, "Omit wall-clock fields");
}

LedgerConfig make_config(const Common& c) {
  LedgerConfig cfg = c.config_path.empty() ? LedgerConfig::from_preset(c.preset) : load_config(c.config_path);
  if (c.seed) cfg.seed = *c.seed;
  cfg.validate();
  return cfg;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void finish(Report& r, const Common& c, const Stopwatch& sw) {
  if (!c.no_timing) r.timing["seconds"] = sw.seconds();
  emit(to_json(r).dump(2) + "\n", c.output);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier-analytic structure of small-doubling sets in finite abelian groups"};
  app.require_subcommand(1);

  Common analyze_c, iterate_c, scan_c, toy_c, polybog_c;
  std::string group_text, set_text;

  auto* analyze_cmd = app.add_subcommand("analyze", "Energy, spectrum, Chang audit, PSL step and lift checks for one set");
  double tau = 0;
  analyze_cmd->add_option("group", group_text, "Group, e.g. 97 or 3,3,3")->required();
  analyze_cmd->add_option("set", set_text, "Set literal: 0,1,2 / 0..23 / (1,2),(0,1) / JSON list")->required();
  analyze_cmd->add_option("--tau", tau, "Spectrum threshold (default K^-c0)")->check(CLI::Range(0.0, 1.0));
  add_common(analyze_cmd, analyze_c);

  auto* iterate_cmd = app.add_subcommand("iterate", "Run the PSL iteration with the potential ledger");
  std::optional<double> gamma;
  std::optional<std::size_t> budget;
  bool csv = false;
  iterate_cmd->add_option("group", group_text)->required();
  iterate_cmd->add_option("set", set_text)->required();
  iterate_cmd->add_option("--gamma", gamma, "Potential exponent");
  iterate_cmd->add_option("--budget", budget, "Maximum number of PSL steps")->check(CLI::PositiveNumber);
  iterate_cmd->add_flag("--csv", csv, "Print the (K_j, alpha_j, I_j) ledger as CSV");
  add_common(iterate_cmd, iterate_c);

  auto* scan_cmd = app.add_subcommand("scan", "Search small instances for inequality violations");
  bool exhaustive = false;
  std::size_t samples = 200, min_size = 1, max_size = 10, max_examples = 8;
  unsigned workers = 0;
  std::vector<std::string> scan_groups;
  bool no_packets = false, no_iteration = false, no_lift = false, findings_only = false;
  scan_cmd->add_flag("--exhaustive", exhaustive, "Enumerate every set (group order <= 24, |A| <= 10)");
  scan_cmd->add_option("--samples", samples, "Random sets per group in sampled mode")->check(CLI::PositiveNumber);
  scan_cmd->add_option("--group", scan_groups, "Group to scan (repeatable)");
  scan_cmd->add_option("--min-size", min_size)->check(CLI::PositiveNumber);
  scan_cmd->add_option("--max-size", max_size)->check(CLI::PositiveNumber);
  scan_cmd->add_option("--max-examples", max_examples, "Findings kept per (lemma, group)");
  scan_cmd->add_option("--workers", workers, "Worker threads (default ADDCOMB_WORKERS or all cores)");
  scan_cmd->add_flag("--no-packets", no_packets);
  scan_cmd->add_flag("--no-iteration", no_iteration);
  scan_cmd->add_flag("--no-lift", no_lift);
  scan_cmd->add_flag("--findings-only", findings_only, "Print only the findings array");
  add_common(scan_cmd, scan_c);

  auto* toy_cmd = app.add_subcommand("toy", "Interval {0, ..., floor(97 alpha) - 1} in Z/97");
  double alpha = 24.0 / 97.0;
  int k = 3;
  toy_cmd->add_option("--alpha", alpha, "Density in (0, 1/4]");
  toy_cmd->add_option("--k", k, "Nominal doubling used for tau")->check(CLI::IsMember({3, 5}));
  add_common(toy_cmd, toy_c);

  auto* polybog_cmd = app.add_subcommand("polybog", "Regular Bohr set inside 4A - 4A");
  polybog_cmd->add_option("group", group_text)->required();
  polybog_cmd->add_option("set", set_text)->required();
  add_common(polybog_cmd, polybog_c);

  auto* report_cmd = app.add_subcommand("report", "Validate a report and re-emit it, or export its ledger");
  std::string in_path, report_out;
  bool report_csv = false;
  report_cmd->add_option("input", in_path, "Report JSON")->required()->check(CLI::ExistingFile);
  report_cmd->add_flag("--csv", report_csv, "Export the (K_j, alpha_j, I_j) ledger");
  report_cmd->add_option("-o,--output", report_out);

  CLI11_PARSE(app, argc, argv);

  try {
    Stopwatch sw;
    if (*analyze_cmd) {
      const auto cfg = make_config(analyze_c);
      const auto a = parse_set(GroupSpec::parse(group_text), set_text);
      Report r;
      r.command = "analyze";
      r.config = cfg;
      r.artifacts = analyze(a, cfg, tau);
      finish(r, analyze_c, sw);
    } else if (*iterate_cmd) {
      auto cfg = make_config(iterate_c);
      if (gamma) cfg.gamma = *gamma;
      cfg.validate();
      const auto a = parse_set(GroupSpec::parse(group_text), set_text);
      const auto trace = iterate_psl(a, cfg, budget);
      Report r;
      r.command = "iterate";
      r.config = cfg;
      r.artifacts["trace"] = to_json(trace);
      r.findings = trace.findings;
      if (csv) {
        emit(ledger_csv(r), iterate_c.output);
      } else {
        finish(r, iterate_c, sw);
      }
    } else if (*scan_cmd) {
      const auto cfg = make_config(scan_c);
      ScanSpace space;
      if (scan_groups.empty()) {
        scan_groups = exhaustive ? std::vector<std::string>{"8", "12", "2,2,2"}
                                 : std::vector<std::string>{"64", "97", "3,3,3"};
      }
      for (const auto& g : scan_groups) space.groups.push_back(GroupSpec::parse(g));
      space.exhaustive = exhaustive;
      space.samples = samples;
      space.min_size = min_size;
      space.max_size = max_size;
      space.max_examples = max_examples;
      space.packets = !no_packets;
      space.iteration = !no_iteration;
      space.lift = !no_lift;
      const auto result = scan_for_violations(space, cfg, cfg.seed, workers);
      Report r;
      r.command = "scan";
      r.config = cfg;
      r.artifacts = to_json(result);
      r.artifacts["mode"] = exhaustive ? "exhaustive" : "sampled";
      r.findings = result.findings;
      if (findings_only) {
        Json f = Json::array();
        for (const auto& x : r.findings) f.push_back(to_json(x));
        emit(f.dump(2) + "\n", scan_c.output);
      } else {
        finish(r, scan_c, sw);
      }
    } else if (*toy_cmd) {
      const auto cfg = make_config(toy_c);
      const auto toy = toy_example(cfg, alpha, k);
      Report r;
      r.command = "toy";
      r.config = cfg;
      r.artifacts = to_json(toy);
      r.findings = toy.trace.findings;
      finish(r, toy_c, sw);
    } else if (*polybog_cmd) {
      const auto cfg = make_config(polybog_c);
      const auto a = parse_set(GroupSpec::parse(group_text), set_text);
      Report r;
      r.command = "polybog";
      r.config = cfg;
      r.artifacts = to_json(polybog_search(a, cfg));
      finish(r, polybog_c, sw);
    } else if (*report_cmd) {
      std::ifstream in(in_path);
      const auto r = report_from_json(Json::parse(in));
      emit(report_csv ? ledger_csv(r) : to_json(r).dump(2) + "\n", report_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
