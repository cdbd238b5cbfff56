#include <map>
#include <numeric>
#include <string>

#include "doctest.h"
#include "upnplab/attacks/scenario.hpp"
#include "upnplab/device/service_device.hpp"

using namespace upnplab;

namespace {

ScenarioConfig make_config(const std::string& name, SecurityMode mode,
                           std::uint64_t seed,
                           std::map<std::string, std::int64_t> params = {}) {
  ScenarioConfig cfg;
  cfg.name = name;
  cfg.mode = mode;
  cfg.seed = seed;
  cfg.params = std::move(params);
  return cfg;
}

ScenarioReport must_run(const ScenarioConfig& cfg) {
  auto report = run_scenario(cfg);
  REQUIRE_MESSAGE(report.ok(),
                  cfg.name << ": " << (report.ok() ? "" : report.error().detail));
  return report.value();
}

std::int64_t measured(const ScenarioReport& r, const std::string& key) {
  auto it = r.measurements.find(key);
  REQUIRE_MESSAGE(it != r.measurements.end(), "missing measurement: " << key);
  return it->second;
}

}  // namespace

TEST_SUITE("scenarios") {

TEST_CASE("unknown scenario names are rejected") {
  auto report = run_scenario(make_config("PortScan", SecurityMode::Baseline, 1));
  REQUIRE_FALSE(report.ok());
  CHECK(report.error().code == Errc::UnknownScenario);
  CHECK(report.error().detail == "PortScan");
}

TEST_CASE("parameters are validated before anything runs") {
  auto expect_bad = [](ScenarioConfig cfg, const std::string& detail) {
    auto report = run_scenario(cfg);
    REQUIRE_FALSE(report.ok());
    CHECK(report.error().code == Errc::BadParams);
    CHECK(report.error().detail == detail);
  };

  SUBCASE("zero") {
    expect_bad(make_config("AdvFlood", SecurityMode::Baseline, 1,
                           {{"flood_count", 0}}),
               "flood_count must be at least 1");
  }
  SUBCASE("negative") {
    expect_bad(
        make_config("DiscoveryReply", SecurityMode::Baseline, 1, {{"mx", -3}}),
        "mx must be at least 1");
  }
  SUBCASE("unknown key") {
    expect_bad(
        make_config("AdvFlood", SecurityMode::Baseline, 1, {{"bogus", 3}}),
        "unknown parameter: bogus");
  }
  SUBCASE("too many responders") {
    expect_bad(make_config("SpoofedDiscoveryAmp", SecurityMode::Baseline, 1,
                           {{"num_sds", 11}}),
               "num_sds must be at most 10");
  }
  SUBCASE("params are checked before the name") {
    expect_bad(
        make_config("PortScan", SecurityMode::Baseline, 1, {{"flood_count", 0}}),
        "flood_count must be at least 1");
  }
  SUBCASE("the responder cap itself is accepted") {
    ScenarioReport r = must_run(make_config(
        "SpoofedDiscoveryAmp", SecurityMode::Baseline, 1, {{"num_sds", 10}}));
    CHECK(measured(r, "responses_delivered") == 10);
  }
}

TEST_CASE("every scenario is deterministic and matches the reference pattern") {
  // Keep floods small for speed; the secured subscription quota still has to
  // be exceeded for that attack to be meaningfully "attempted".
  const std::map<std::string, std::int64_t> params{{"flood_count", 25}};
  REQUIRE(scenario_names().size() == 8);
  for (const std::string& name : scenario_names()) {
    for (SecurityMode mode : {SecurityMode::Baseline, SecurityMode::Secured}) {
      const std::string label =
          name + "/" + std::string(security_mode_name(mode));
      CAPTURE(label);
      ScenarioConfig cfg = make_config(name, mode, 7, params);
      ScenarioReport r = must_run(cfg);
      CHECK(r.name == name);
      CHECK(r.mode == mode);
      CHECK(r.seed == 7);
      if (mode == SecurityMode::Baseline) {
        CHECK(r.attack_succeeded);
        CHECK_FALSE(r.detected);
        CHECK_FALSE(r.prevented);
      } else {
        CHECK_FALSE(r.attack_succeeded);
        CHECK(r.detected);
        CHECK(r.prevented);
      }
      CHECK(r.log_excerpt.size() <= 8);
      CHECK_FALSE(r.log_excerpt.empty());
      CHECK_FALSE(r.full_log.empty());

      ScenarioReport again = must_run(cfg);
      CHECK(serialize_report(r) == serialize_report(again));
      CHECK(r.full_log == again.full_log);
    }
  }
}

TEST_CASE("forged advertisements poison only the baseline control point") {
  SUBCASE("baseline") {
    ScenarioReport r =
        must_run(make_config("AdvForgery", SecurityMode::Baseline, 7));
    CHECK(measured(r, "discovered_from_adv") == 1);
    CHECK(measured(r, "ads_seen") == 2);  // one real, one forged
    CHECK(measured(r, "ads_accepted") == 2);
    CHECK(measured(r, "ads_rejected") == 0);
  }
  SUBCASE("secured") {
    ScenarioReport r =
        must_run(make_config("AdvForgery", SecurityMode::Secured, 7));
    CHECK(measured(r, "discovered_from_adv") == 0);
    CHECK(measured(r, "ads_seen") == 2);
    CHECK(measured(r, "ads_accepted") == 1);  // the camera's own ad
    CHECK(measured(r, "ads_rejected") == 1);
  }
}

TEST_CASE("an advertisement flood fills the baseline device table") {
  const std::map<std::string, std::int64_t> params{{"flood_count", 50}};
  SUBCASE("baseline") {
    ScenarioReport r =
        must_run(make_config("AdvFlood", SecurityMode::Baseline, 7, params));
    CHECK(measured(r, "flood_count") == 50);
    CHECK(measured(r, "discovered_from_adv") == 50);
    CHECK(measured(r, "discovered_total") == 51);  // 50 phantoms + 1 camera
    CHECK(measured(r, "ads_seen") == 51);
    CHECK(measured(r, "ads_rejected") == 0);
  }
  SUBCASE("secured") {
    ScenarioReport r =
        must_run(make_config("AdvFlood", SecurityMode::Secured, 7, params));
    CHECK(measured(r, "discovered_from_adv") == 0);
    CHECK(measured(r, "discovered_total") == 1);
    CHECK(measured(r, "ads_accepted") == 1);
    CHECK(measured(r, "ads_rejected") == 50);
  }
}

TEST_CASE("a captured search replays against the baseline camera only") {
  SUBCASE("baseline") {
    ScenarioReport r =
        must_run(make_config("DiscoveryReply", SecurityMode::Baseline, 7));
    CHECK(measured(r, "captured") == 1);
    CHECK(measured(r, "adv_responses") == 1);
    CHECK(measured(r, "answered_adv") == 1);
    CHECK(measured(r, "answered_cp") == 1);
  }
  SUBCASE("secured") {
    // The eavesdropped request still carries the control point's token; the
    // replaying host does not match its subject.
    ScenarioReport r =
        must_run(make_config("DiscoveryReply", SecurityMode::Secured, 7));
    CHECK(measured(r, "captured") == 1);
    CHECK(measured(r, "adv_responses") == 0);
    CHECK(measured(r, "answered_adv") == 0);
    CHECK(measured(r, "answered_cp") == 1);
  }
}

TEST_CASE("a discovery flood is answered in full by the baseline camera") {
  const std::map<std::string, std::int64_t> params{{"flood_count", 40}};
  SUBCASE("baseline") {
    ScenarioReport r = must_run(
        make_config("DiscoveryFlood", SecurityMode::Baseline, 7, params));
    CHECK(measured(r, "msearch_received") == 41);  // 40 hostile + 1 genuine
    CHECK(measured(r, "answered_adv") == 40);
    CHECK(measured(r, "answered_cp") == 1);
    CHECK(measured(r, "cp_discovered") == 1);
  }
  SUBCASE("secured") {
    ScenarioReport r = must_run(
        make_config("DiscoveryFlood", SecurityMode::Secured, 7, params));
    CHECK(measured(r, "msearch_received") == 41);
    CHECK(measured(r, "answered_adv") == 0);
    CHECK(measured(r, "answered_cp") == 1);
    CHECK(measured(r, "cp_discovered") == 1);
  }
}

TEST_CASE("one spoofed search amplifies into responder-many replies") {
  for (std::int64_t n : {std::int64_t{1}, std::int64_t{3}, std::int64_t{5}}) {
    CAPTURE(n);
    ScenarioReport r =
        must_run(make_config("SpoofedDiscoveryAmp", SecurityMode::Baseline, 7,
                             {{"num_sds", n}}));
    CHECK(measured(r, "num_sds") == n);
    CHECK(measured(r, "responses_delivered") == n);
    CHECK(measured(r, "victim_bytes_in") ==
          n * measured(r, "response_bytes"));

    // The reported factor must equal the reduced ratio of the measured byte
    // counts, computed here without Ratio's own arithmetic.
    std::int64_t num = measured(r, "victim_bytes_in");
    std::int64_t den = measured(r, "request_bytes");
    std::int64_t g = std::gcd(num, den);
    REQUIRE(g > 0);
    REQUIRE(r.amplification.has_value());
    CHECK(r.amplification->num == num / g);
    CHECK(r.amplification->den == den / g);
    CHECK(r.amplification->num > r.amplification->den);
  }

  SUBCASE("pinned three-responder run") {
    ScenarioReport r =
        must_run(make_config("SpoofedDiscoveryAmp", SecurityMode::Baseline, 7,
                             {{"num_sds", 3}}));
    CHECK(measured(r, "request_bytes") == 104);
    CHECK(measured(r, "response_bytes") == 114);
    CHECK(measured(r, "victim_bytes_in") == 342);
    REQUIRE(r.amplification.has_value());
    CHECK(*r.amplification == Ratio(171, 52));
    std::string text = serialize_report(r);
    CHECK(text.find("amplification=171/52\n") != std::string::npos);
  }

  SUBCASE("secured responders stay silent") {
    ScenarioReport r =
        must_run(make_config("SpoofedDiscoveryAmp", SecurityMode::Secured, 7,
                             {{"num_sds", 3}}));
    CHECK(measured(r, "responses_delivered") == 0);
    CHECK(measured(r, "victim_bytes_in") == 0);
    REQUIRE(r.amplification.has_value());
    CHECK(*r.amplification == Ratio(0, 1));
  }
}

TEST_CASE("the malicious action plants a relayed mapping only in baseline") {
  SUBCASE("baseline") {
    ScenarioReport r =
        must_run(make_config("MaliciousAction", SecurityMode::Baseline, 7));
    CHECK(measured(r, "mappings") == 1);
    CHECK(measured(r, "relay_ok") == 1);
  }
  SUBCASE("secured") {
    ScenarioReport r =
        must_run(make_config("MaliciousAction", SecurityMode::Secured, 7));
    CHECK(measured(r, "mappings") == 0);
    CHECK(measured(r, "relay_ok") == 0);
  }
}

TEST_CASE("the subscription flood is capped by the secured quota") {
  const std::map<std::string, std::int64_t> params{{"flood_count", 20}};
  SUBCASE("baseline") {
    ScenarioReport r = must_run(
        make_config("SubscriptionFlood", SecurityMode::Baseline, 7, params));
    CHECK(measured(r, "high_water") == 20);
    CHECK(measured(r, "live_subs") == 20);
    CHECK(measured(r, "deny_events") == 0);
  }
  SUBCASE("secured") {
    ScenarioReport r = must_run(
        make_config("SubscriptionFlood", SecurityMode::Secured, 7, params));
    CHECK(measured(r, "high_water") ==
          static_cast<std::int64_t>(kSubscriptionQuota));
    CHECK(measured(r, "live_subs") ==
          static_cast<std::int64_t>(kSubscriptionQuota));
    CHECK(measured(r, "deny_events") == 12);  // 20 attempts - 8 quota slots
  }
}

TEST_CASE("spoofed callbacks turn each event into victim traffic") {
  SUBCASE("baseline") {
    ScenarioReport r =
        must_run(make_config("SpoofedCallbackAmp", SecurityMode::Baseline, 7));
    CHECK(measured(r, "sub_count") == 6);
    CHECK(measured(r, "event_count") == 5);
    CHECK(measured(r, "live_subs") == 6);
    CHECK(measured(r, "victim_msgs_in") ==
          measured(r, "sub_count") * measured(r, "event_count"));
    CHECK(measured(r, "victim_msgs_in") == 30);
    CHECK(measured(r, "victim_bytes_in") == 2400);
    REQUIRE(r.amplification.has_value());
    CHECK(*r.amplification == Ratio(400, 119));
  }
  SUBCASE("secured") {
    // The camera only accepts callbacks that point back at the subscriber.
    ScenarioReport r =
        must_run(make_config("SpoofedCallbackAmp", SecurityMode::Secured, 7));
    CHECK(measured(r, "live_subs") == 0);
    CHECK(measured(r, "victim_msgs_in") == 0);
    CHECK(measured(r, "victim_bytes_in") == 0);
    REQUIRE(r.amplification.has_value());
    CHECK(*r.amplification == Ratio(0, 1));
  }
}

TEST_CASE("the matrix reproduces the reference outcome pattern") {
  auto matrix = run_matrix(3);
  REQUIRE(matrix.ok());
  const MatrixReport& m = matrix.value();
  CHECK(m.seed == 3);
  REQUIRE(m.cells.size() == 16);
  REQUIRE(m.rows.size() == 8);
  CHECK(m.matches_reference());

  // Canonical ordering: categories in fixed order, baseline before secured.
  CHECK(m.cells[0].scenario == "AdvForgery");
  CHECK(m.cells[0].mode == SecurityMode::Baseline);
  CHECK(m.cells[2].scenario == "AdvForgery");
  CHECK(m.cells[2].mode == SecurityMode::Secured);
  CHECK(m.cells[4].category == "mal_discovery");
  CHECK(m.cells[15].scenario == "SpoofedCallbackAmp");

  for (const MatrixRow& row : m.rows) {
    CAPTURE(row.category);
    if (row.mode == SecurityMode::Baseline) {
      CHECK(row.attack_succeeded);
      CHECK_FALSE(row.detected);
      CHECK_FALSE(row.prevented);
    } else {
      CHECK_FALSE(row.attack_succeeded);
      CHECK(row.detected);
      CHECK(row.prevented);
    }
  }

  // Prevention is only ever claimed for attacks that also failed.
  for (const MatrixCell& cell : m.cells) {
    if (cell.prevented) {
      CHECK_FALSE(cell.attack_succeeded);
    }
  }

  std::string text = serialize_matrix(m);
  CHECK(text.rfind("seed=3\n", 0) == 0);
  CHECK(text.find("cell=mal_advertisement,AdvForgery,baseline,1,0,0\n") !=
        std::string::npos);
  CHECK(text.find("cell=mal_advertisement,AdvForgery,secured,0,1,1\n") !=
        std::string::npos);
  CHECK(text.find("row=mal_discovery,baseline,1,0,0\n") != std::string::npos);
  CHECK(text.find("row=mal_event_subscription,secured,0,1,1\n") !=
        std::string::npos);
  CHECK(text.find("reference_match=1\n") != std::string::npos);
}

TEST_CASE("a policy that grants nothing breaks the secured pattern") {
  // With no grants at all every participant is tokenless. Attacks still fail
  // closed, but a spoofed request denied without a token cannot be pinned on
  // the attacker, so the reference pattern no longer holds.
  auto matrix = run_matrix(3, {}, AbacPolicy{});
  REQUIRE(matrix.ok());
  const MatrixReport& m = matrix.value();
  CHECK_FALSE(m.matches_reference());
  for (const MatrixCell& cell : m.cells) {
    CAPTURE(cell.scenario);
    if (cell.mode == SecurityMode::Baseline) {
      CHECK(cell.attack_succeeded);
      CHECK_FALSE(cell.detected);
      CHECK_FALSE(cell.prevented);
    } else {
      CHECK_FALSE(cell.attack_succeeded);
      CHECK(cell.prevented);
      CHECK(cell.detected == (cell.scenario != "SpoofedDiscoveryAmp"));
    }
  }
}

TEST_CASE("the demo walks the whole stack in both modes") {
  for (SecurityMode mode : {SecurityMode::Baseline, SecurityMode::Secured}) {
    CAPTURE(security_mode_name(mode));
    DemoReport d = run_demo(mode, 11);
    CHECK(d.mode == mode);
    CHECK(d.seed == 11);
    REQUIRE(d.steps.size() == 5);
    for (const auto& [step, passed] : d.steps) {
      CAPTURE(step);
      CHECK(passed);
    }
    CHECK(d.deny_events == 0);
    CHECK(d.ok);
    CHECK_FALSE(d.full_log.empty());

    std::string expected = std::string("mode=") +
                           std::string(security_mode_name(mode)) +
                           "\nseed=11\n"
                           "step.discover=1\n"
                           "step.fetch=1\n"
                           "step.invoke=1\n"
                           "step.subscribe=1\n"
                           "step.event=1\n"
                           "deny_events=0\n"
                           "ok=1\n";
    CHECK(serialize_demo(d) == expected);
  }
}

TEST_CASE("serialized reports lead with identity and verdict") {
  ScenarioReport r =
      must_run(make_config("AdvForgery", SecurityMode::Baseline, 7));
  std::string text = serialize_report(r);
  CHECK(text.rfind("name=AdvForgery\n"
                   "mode=baseline\n"
                   "seed=7\n"
                   "attack_succeeded=1\n"
                   "detected=0\n"
                   "prevented=0\n",
                   0) == 0);
  CHECK(text.find("m.discovered_from_adv=1\n") != std::string::npos);
  CHECK(text.find("log=") != std::string::npos);
}

}  // TEST_SUITE("scenarios")
