// Command-line front end: runs a single attack scenario, the full
// baseline-vs-secured evaluation matrix, or the benign end-to-end demo, and
// prints (or writes) the resulting report. Exit codes: 0 success, 2 matrix
// deviates from the expected reference outcome, 64 usage error, 78
// configuration error (unreadable or invalid policy/device files, bad
// parameters, unknown scenario).
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "upnplab/attacks/scenario.hpp"

namespace {

constexpr int kExitDeviation = 2;
constexpr int kExitUsage = 64;
constexpr int kExitConfig = 78;

int fail_config(const std::string& message) {
  std::cerr << "error: " << message << '\n';
  return kExitConfig;
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return false;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  out = buf.str();
  return true;
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    return false;
  }
  out << content;
  return out.good();
}

struct CommonArgs {
  std::uint64_t seed = 1;
  std::string mode = "baseline";
  std::vector<std::string> params;
  std::string policy_path;
  std::string devices_path;
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_mode) {
  cmd->add_option("--seed", args.seed, "Deterministic run seed")->required();
  if (with_mode) {
    cmd->add_option("--mode", args.mode, "baseline or secured")
        ->check(CLI::IsMember({"baseline", "secured"}));
  }
  cmd->add_option("--params", args.params,
                  "Scenario parameters as key=value (integers)");
  cmd->add_option("--policy", args.policy_path,
                  "Access policy document (canonical tree file)");
  cmd->add_option("--devices", args.devices_path,
                  "Device bundle file overriding the stock camera");
  cmd->add_option("--out", args.out_path,
                  "Write the report here (full packet log goes to <out>.log)");
}

int resolve_common(const CommonArgs& args, upnplab::ScenarioConfig& cfg) {
  auto mode = upnplab::security_mode_from_string(args.mode);
  if (!mode) {
    return fail_config(mode.error().detail);
  }
  cfg.mode = mode.value();
  cfg.seed = args.seed;
  for (const std::string& kv : args.params) {
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      return fail_config("bad --params entry (want key=value): " + kv);
    }
    auto value = upnplab::parse_uint(kv.substr(eq + 1));
    if (!value) {
      return fail_config("bad --params value in: " + kv);
    }
    cfg.params[kv.substr(0, eq)] = value.value();
  }
  if (!args.policy_path.empty()) {
    std::string raw;
    if (!read_file(args.policy_path, raw)) {
      return fail_config("cannot read policy file: " + args.policy_path);
    }
    auto policy = upnplab::decode_policy(raw);
    if (!policy) {
      return fail_config("invalid policy file: " +
                         std::string(upnplab::errc_name(policy.error().code)) +
                         " " + policy.error().detail);
    }
    cfg.policy = policy.value();
  }
  if (!args.devices_path.empty()) {
    auto bundle = upnplab::load_bundle_file(args.devices_path);
    if (!bundle) {
      return fail_config("invalid device bundle: " +
                         std::string(upnplab::errc_name(bundle.error().code)) +
                         " " + bundle.error().detail);
    }
    cfg.camera_bundle = bundle.value();
  }
  return 0;
}

int emit(const std::string& report, const std::string& out_path,
         const std::string& full_log) {
  std::cout << report;
  if (out_path.empty()) {
    return 0;
  }
  if (!write_file(out_path, report)) {
    return fail_config("cannot write " + out_path);
  }
  if (!full_log.empty() && !write_file(out_path + ".log", full_log)) {
    return fail_config("cannot write " + out_path + ".log");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic device-discovery security lab"};
  app.require_subcommand(1);

  CLI::App* scenario_cmd =
      app.add_subcommand("scenario", "Run one attack scenario");
  CommonArgs scenario_args;
  std::string scenario_name;
  scenario_cmd->add_option("--name", scenario_name, "Scenario name")
      ->required();
  add_common(scenario_cmd, scenario_args, /*with_mode=*/true);

  CLI::App* matrix_cmd = app.add_subcommand(
      "matrix", "Run every scenario in both modes and aggregate");
  CommonArgs matrix_args;
  std::string expect;
  add_common(matrix_cmd, matrix_args, /*with_mode=*/false);
  matrix_cmd->add_option(
      "--expect", expect,
      "'table2': exit 2 unless the run matches the reference outcome");

  CLI::App* demo_cmd =
      app.add_subcommand("demo", "Run the benign end-to-end walkthrough");
  CommonArgs demo_args;
  add_common(demo_cmd, demo_args, /*with_mode=*/true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (scenario_cmd->parsed()) {
    upnplab::ScenarioConfig cfg;
    cfg.name = scenario_name;
    if (int rc = resolve_common(scenario_args, cfg)) {
      return rc;
    }
    auto report = upnplab::run_scenario(cfg);
    if (!report) {
      return fail_config(std::string(upnplab::errc_name(report.error().code)) +
                         " " + report.error().detail);
    }
    return emit(upnplab::serialize_report(report.value()),
                scenario_args.out_path, report.value().full_log);
  }

  if (matrix_cmd->parsed()) {
    upnplab::ScenarioConfig cfg;  // carries shared knobs for every cell
    if (int rc = resolve_common(matrix_args, cfg)) {
      return rc;
    }
    if (!expect.empty() && expect != "table2") {
      return fail_config("unknown --expect value: " + expect);
    }
    auto matrix = upnplab::run_matrix(cfg.seed, cfg.params, cfg.policy,
                                      cfg.camera_bundle);
    if (!matrix) {
      return fail_config(std::string(upnplab::errc_name(matrix.error().code)) +
                         " " + matrix.error().detail);
    }
    int rc = emit(upnplab::serialize_matrix(matrix.value()),
                  matrix_args.out_path, "");
    if (rc != 0) {
      return rc;
    }
    if (expect == "table2" && !matrix.value().matches_reference()) {
      std::cerr << "matrix deviates from the reference outcome\n";
      return kExitDeviation;
    }
    return 0;
  }

  // demo
  upnplab::ScenarioConfig cfg;
  if (int rc = resolve_common(demo_args, cfg)) {
    return rc;
  }
  upnplab::DemoReport demo = upnplab::run_demo(cfg.mode, cfg.seed);
  return emit(upnplab::serialize_demo(demo), demo_args.out_path,
              demo.full_log);
}
