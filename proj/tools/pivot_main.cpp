#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pivot/errors.hpp"
#include "pivot/scenario_io.hpp"
#include "pivot/sim.hpp"

namespace fs = std::filesystem;

namespace {

int do_run(const pivot::RunManifest& manifest) {
  pivot::Scenario sc;
  try {
    sc = pivot::load_scenario(manifest);
  } catch (const pivot::ValidationError& e) {
    std::cerr << "validation failed:\n";
    for (const std::string& issue : e.issues) std::cerr << "  - " << issue << "\n";
    return 2;
  } catch (const pivot::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  }

  const pivot::SimLog log = pivot::run(sc);
  pivot::write_run_artifacts(log, sc, manifest.out_dir);

  const pivot::RunSummary& s = log.summary;
  std::cout << sc.name << ": " << (s.completed ? "completed" : "failed") << " ("
            << s.reason << (s.detail.empty() ? "" : ": " + s.detail) << "), "
            << s.steps_completed << " step(s), " << s.sim_time << " s simulated"
            << ", artifacts in " << manifest.out_dir << "\n";
  if (manifest.verbosity > 0) {
    for (const pivot::SwitchEvent& sw : s.switches)
      std::cout << "  mode switch " << pivot::gait_mode_label(sw.from) << " -> "
                << pivot::gait_mode_label(sw.to) << " at t=" << sw.t << " s\n";
    std::cout << "  tracking error after transient: "
              << s.tracking_error_after_transient << " rad\n"
              << "  max pivot drift: " << s.max_pivot_drift << " m\n";
  }
  return s.completed ? 0 : 1;
}

int do_validate(const std::string& path) {
  try {
    pivot::validate_scenario(pivot::parse_scenario(path));
  } catch (const pivot::ValidationError& e) {
    std::cerr << path << ": invalid\n";
    for (const std::string& issue : e.issues) std::cerr << "  - " << issue << "\n";
    return 1;
  } catch (const pivot::ParseError& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return 1;
  }
  std::cout << path << ": ok\n";
  return 0;
}

struct ReproRow {
  std::string scenario;
  std::string expectation;
  bool pass = false;
  std::string outcome;
};

int do_repro(const std::string& scenario_dir, const std::string& out_dir) {
  struct Spec {
    const char* file;
    const char* expect;
  };
  // Expected outcomes for the committed corpus: the two single-mode timing
  // runs and the four payload rows.
  const std::vector<Spec> specs = {
      {"table1_ds.json", "completes 2 steps in 2.2 s (+/- 2T)"},
      {"table1_qs.json", "completes 2 steps in 5.6 s (+/- 2T)"},
      {"table2_payload_035.json", "completes in DS, no mode switch"},
      {"table2_payload_050.json", "completes in DS, no mode switch"},
      {"table2_payload_100_noswitch.json", "recorded failure"},
      {"table2_payload_200_switch.json", "DS->QS switch, completes"},
  };

  std::vector<ReproRow> rows;
  for (const Spec& spec : specs) {
    ReproRow row;
    row.scenario = spec.file;
    row.expectation = spec.expect;
    const fs::path path = fs::path(scenario_dir) / spec.file;
    try {
      pivot::RunManifest manifest;
      manifest.scenario_path = path.string();
      manifest.out_dir = (fs::path(out_dir) / fs::path(spec.file).stem()).string();
      const pivot::Scenario sc = pivot::load_scenario(manifest);
      const pivot::SimLog log = pivot::run(sc);
      pivot::write_run_artifacts(log, sc, manifest.out_dir);
      const pivot::RunSummary& s = log.summary;
      const double tol = 2 * sc.mpc.T;
      const bool switched = !s.switches.empty();
      if (spec.file == std::string("table1_ds.json")) {
        row.pass = s.completed && std::abs(s.sim_time - 2.2) <= tol + 1e-9;
      } else if (spec.file == std::string("table1_qs.json")) {
        row.pass = s.completed && std::abs(s.sim_time - 5.6) <= tol + 1e-9;
      } else if (spec.file == std::string("table2_payload_100_noswitch.json")) {
        row.pass = !s.completed;
      } else if (spec.file == std::string("table2_payload_200_switch.json")) {
        bool ds_to_qs = false;
        for (const pivot::SwitchEvent& sw : s.switches)
          ds_to_qs |= sw.from == pivot::GaitMode::DS && sw.to == pivot::GaitMode::QS;
        row.pass = s.completed && ds_to_qs;
      } else {
        row.pass = s.completed && !switched;
      }
      row.outcome = (s.completed ? "completed" : "failed (" + s.reason + ")");
      row.outcome += ", t=" + std::to_string(s.sim_time) + " s";
      if (switched) row.outcome += ", switched";
    } catch (const pivot::Error& e) {
      row.pass = false;
      row.outcome = std::string("error: ") + e.what();
    }
    rows.push_back(row);
  }

  int failures = 0;
  std::cout << "scenario                          | verdict | outcome\n";
  std::cout << "----------------------------------+---------+--------------------------\n";
  for (const ReproRow& row : rows) {
    if (!row.pass) ++failures;
    std::string name = row.scenario;
    name.resize(34, ' ');
    std::cout << name << "| " << (row.pass ? "PASS " : "FAIL ") << "  | " << row.outcome
              << "\n";
  }
  std::cout << (rows.size() - failures) << "/" << rows.size() << " rows match\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pivoting-gait controller and closed-loop simulator"};
  app.require_subcommand(1);

  std::string default_out = "out";
  if (const char* env = std::getenv("PIVOT_OUT_DIR")) default_out = env;

  pivot::RunManifest manifest;
  manifest.out_dir = default_out;
  std::uint64_t seed_value = 0;

  CLI::App* run_cmd = app.add_subcommand("run", "run one scenario and write logs");
  run_cmd->add_option("scenario", manifest.scenario_path, "scenario file (JSON)")
      ->required();
  run_cmd->add_option("--out", manifest.out_dir, "output directory");
  CLI::Option* seed_opt =
      run_cmd->add_option("--seed", seed_value, "override the scenario seed");
  run_cmd->add_option("--override", manifest.overrides,
                      "config override key=value (repeatable)");
  run_cmd->add_flag("-v,--verbose", manifest.verbosity, "more run details");

  std::string validate_path;
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "check a scenario file against the schema");
  validate_cmd->add_option("scenario", validate_path, "scenario file (JSON)")
      ->required();

  std::string scenario_dir = "scenarios";
  std::string repro_out = default_out;
  CLI::App* repro_cmd =
      app.add_subcommand("repro", "run the committed corpus and report the outcome table");
  repro_cmd->add_option("--scenario-dir", scenario_dir, "scenario corpus directory");
  repro_cmd->add_option("--out", repro_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      if (seed_opt->count() > 0) manifest.seed = seed_value;
      return do_run(manifest);
    }
    if (validate_cmd->parsed()) return do_validate(validate_path);
    if (repro_cmd->parsed()) return do_repro(scenario_dir, repro_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
