// Attack scenarios and the evaluation matrix. Each scenario scripts one
// attack against a fresh lab, runs it in the requested security mode, and
// reports whether the attack succeeded, whether the audit trail attributes
// denials to the attacker (detected), and whether the attack's side effects
// were kept out of the network (prevented). The matrix runs every scenario
// in both modes and aggregates per attack category.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "upnplab/attacks/testbed.hpp"

namespace upnplab {

struct ScenarioConfig {
  std::string name;
  SecurityMode mode = SecurityMode::Baseline;
  std::uint64_t seed = 1;
  // Recognized keys: flood_count, num_sds, sub_count, event_count, mx.
  std::map<std::string, std::int64_t> params;
  std::optional<AbacPolicy> policy;
  std::optional<DeviceBundle> camera_bundle;
};

struct ScenarioReport {
  std::string name;
  SecurityMode mode = SecurityMode::Baseline;
  std::uint64_t seed = 0;
  bool attack_succeeded = false;
  bool detected = false;
  bool prevented = false;
  std::map<std::string, std::int64_t> measurements;
  std::optional<Ratio> amplification;
  std::vector<std::string> log_excerpt;  // at most 8 lines
  // Complete packet log; kept out of serialize_report but written next to
  // the report by the CLI and compared byte-for-byte by determinism tests.
  std::string full_log;
};

// Errors: UnknownScenario, BadParams.
Expected<ScenarioReport> run_scenario(const ScenarioConfig& cfg);

std::string serialize_report(const ScenarioReport& report);

// Canonical scenario order, grouped into the four attack categories.
const std::vector<std::pair<std::string, std::vector<std::string>>>&
scenario_categories();
const std::vector<std::string>& scenario_names();

struct MatrixCell {
  std::string category;
  std::string scenario;
  SecurityMode mode = SecurityMode::Baseline;
  bool attack_succeeded = false;
  bool detected = false;
  bool prevented = false;
};

struct MatrixRow {
  std::string category;
  SecurityMode mode = SecurityMode::Baseline;
  bool attack_succeeded = false;  // any scenario in the category succeeded
  bool detected = false;          // any scenario was detected
  bool prevented = false;         // every scenario was prevented
};

struct MatrixReport {
  std::uint64_t seed = 0;
  std::vector<MatrixCell> cells;  // 8 scenarios x 2 modes, canonical order
  std::vector<MatrixRow> rows;    // 4 categories x 2 modes

  // Reference outcome: in baseline mode every attack succeeds undetected
  // and unprevented; in secured mode every attack fails, is detected, and
  // is prevented.
  bool matches_reference() const;
};

Expected<MatrixReport> run_matrix(
    std::uint64_t seed, const std::map<std::string, std::int64_t>& params = {},
    const std::optional<AbacPolicy>& policy = {},
    const std::optional<DeviceBundle>& camera_bundle = {});

std::string serialize_matrix(const MatrixReport& report);

// The benign end-to-end walkthrough: advertise, discover, fetch, invoke,
// subscribe, receive an event. In secured mode it must complete with zero
// denied operations.
struct DemoReport {
  SecurityMode mode = SecurityMode::Baseline;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, bool>> steps;
  std::size_t deny_events = 0;
  bool ok = false;
  std::string full_log;
};

DemoReport run_demo(SecurityMode mode, std::uint64_t seed);

std::string serialize_demo(const DemoReport& report);

}  // namespace upnplab
