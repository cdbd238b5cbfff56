// Acceptance gate: one line per criterion, exit status 0 only when every
// criterion holds. Each check recomputes its expectation independently of
// the code under test (exhaustive oracles, rational arithmetic, repeated
// runs) so a pass certifies behavior, not implementation details.
#include <chrono>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "generators.hpp"
#include "upnplab/attacks/scenario.hpp"
#include "upnplab/attacks/testbed.hpp"
#include "upnplab/security/registration.hpp"
#include "upnplab/security/verify.hpp"

using namespace upnplab;
using testgen::Gen;

namespace {

std::int64_t measured(const ScenarioReport& r, const std::string& key) {
  auto it = r.measurements.find(key);
  return it == r.measurements.end() ? -1 : it->second;
}

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

// 1. Both security modes reproduce the reference outcome matrix, quickly.
bool check_matrix() {
  auto start = std::chrono::steady_clock::now();
  auto matrix = run_matrix(7);
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return matrix.ok() && matrix.value().cells.size() == 16 &&
         matrix.value().matches_reference() && elapsed < 10.0;
}

// 2. Amplification factor == N * response_bytes / request_bytes, exactly,
// for N in {1, 3, 5}. The expected ratio is reduced here with std::gcd,
// independent of the simulator's rational type.
bool check_amplification() {
  for (std::int64_t n : {std::int64_t{1}, std::int64_t{3}, std::int64_t{5}}) {
    auto report = run_scenario(make_config(
        "SpoofedDiscoveryAmp", SecurityMode::Baseline, 7, {{"num_sds", n}}));
    if (!report.ok()) {
      return false;
    }
    const ScenarioReport& r = report.value();
    std::int64_t responses = measured(r, "responses_delivered");
    std::int64_t response_bytes = measured(r, "response_bytes");
    std::int64_t request_bytes = measured(r, "request_bytes");
    if (responses != n || response_bytes <= 0 || request_bytes <= 0) {
      return false;
    }
    std::int64_t num = n * response_bytes;
    std::int64_t den = request_bytes;
    if (measured(r, "victim_bytes_in") != num) {
      return false;
    }
    std::int64_t g = std::gcd(num, den);
    if (!r.amplification.has_value() || r.amplification->num != num / g ||
        r.amplification->den != den / g) {
      return false;
    }
  }
  return true;
}

// 3. The benign walkthrough completes under full enforcement with an empty
// deny trail.
bool check_demo() {
  DemoReport d = run_demo(SecurityMode::Secured, 7);
  if (d.steps.size() != 5) {
    return false;
  }
  for (const auto& [step, passed] : d.steps) {
    (void)step;
    if (!passed) {
      return false;
    }
  }
  return d.ok && d.deny_events == 0;
}

// 4. Credential gates: wrong-CA signature, stolen document, every single-bit
// flip of the first 512 token bits, and expiry -- all rejected, each with
// its specific verdict.
bool check_credential_gates() {
  std::mt19937_64 rng(2026);
  KeyPair ca_keys = keygen(rng);
  KeyPair rogue_keys = keygen(rng);
  KeyPair owner = keygen(rng);
  KeyPair thief = keygen(rng);
  KeyPair ra_keys = keygen(rng);

  CertificationAuthority ca(ca_keys);
  CertificationAuthority rogue(rogue_keys);
  auto doc = ca.enroll(owner, "cam0",
                       {{"sensor", "imaging"}, {"zone", "home"}},
                       {{"svc", "urn:SecurityCamera"}});
  if (!doc.ok()) {
    return false;
  }
  bool wrong_ca = verify_specification(doc.value(), ca.public_key()) &&
                  !verify_specification(doc.value(), rogue.public_key());

  // A leaked document is useless without the matching private key.
  RegistrationAuthority ra(ra_keys, default_policy());
  const PermissionSet requested{{Verb::Advertise, "urn:SecurityCamera"}};
  Bytes nonce = ra.challenge(rng);
  auto stolen_proof = prove_ownership(thief.private_key, nonce);
  if (!stolen_proof.ok()) {
    return false;
  }
  auto theft = ra.register_participant(doc.value(), requested,
                                       stolen_proof.value(), 0,
                                       ca.public_key());
  bool ownership = !theft.ok() && theft.error().code == Errc::OwnershipFailed;

  // The legitimate owner gets a token; the untouched token permits.
  Bytes nonce2 = ra.challenge(rng);
  auto proof = prove_ownership(owner.private_key, nonce2);
  if (!proof.ok()) {
    return false;
  }
  auto token = ra.register_participant(doc.value(), requested, proof.value(),
                                       0, ca.public_key());
  if (!token.ok()) {
    return false;
  }
  auto raw = encode_cap_token(token.value());
  if (!raw.ok() || raw.value().size() * 8 < 512) {
    return false;
  }
  bool flips = verify_operation_bytes(ra.public_key(), raw.value(),
                                      Verb::Advertise, "urn:SecurityCamera",
                                      "cam0", 1) == Decision::Permit;
  for (std::size_t bit = 0; bit < 512 && flips; ++bit) {
    Bytes flipped = raw.value();
    flipped[bit / 8] =
        static_cast<char>(flipped[bit / 8] ^ (1u << (bit % 8)));
    flips = verify_operation_bytes(ra.public_key(), flipped, Verb::Advertise,
                                   "urn:SecurityCamera", "cam0",
                                   1) == Decision::DenyForged;
  }

  bool expiry =
      verify_operation(ra.public_key(), token.value(), Verb::Advertise,
                       "urn:SecurityCamera", "cam0",
                       token.value().expires_at) == Decision::DenyExpired;

  return wrong_ca && ownership && flips && expiry;
}

// 5. Policy evaluation agrees with the brute-force rule x permission oracle
// on 1000 random triples.
bool check_abac_oracle() {
  Gen g(909);
  for (int i = 0; i < 1000; ++i) {
    AbacPolicy policy = testgen::gen_policy(g);
    SpecificationDocument doc = testgen::gen_doc(g);
    PermissionSet requested = testgen::gen_permission_set(g, 4);
    auto got = abac_evaluate(policy, doc, requested);
    if (!got.ok() || got.value() != testgen::oracle_abac(policy, doc,
                                                         requested)) {
      return false;
    }
  }
  return true;
}

// 6. Round-trip identity on 1000 generated messages per wire family, and no
// abort on 100000 random byte strings.
bool check_codecs() {
  Gen g(606);
  for (int i = 0; i < 1000; ++i) {
    SsdpMessage msg = testgen::gen_ssdp(g);
    auto raw = serialize_ssdp(msg);
    if (!raw.ok()) {
      return false;
    }
    auto back = parse_ssdp(raw.value());
    if (!back.ok() || !(back.value() == msg)) {
      return false;
    }
  }
  for (int i = 0; i < 1000; ++i) {
    HttpExchange x = testgen::gen_http(g);
    auto raw = serialize_http(x);
    if (!raw.ok()) {
      return false;
    }
    auto back = parse_http(raw.value());
    if (!back.ok() || !(back.value() == x)) {
      return false;
    }
  }
  for (int i = 0; i < 1000; ++i) {
    DocTree tree = testgen::gen_doc_tree(g);
    auto raw = encode_canonical(tree);
    if (!raw.ok()) {
      return false;
    }
    auto back = decode_canonical(raw.value());
    if (!back.ok() || back.value() != tree) {
      return false;
    }
  }
  for (int i = 0; i < 100000; ++i) {
    Bytes raw = g.raw_bytes(120);
    (void)parse_ssdp(raw);
    (void)parse_http(raw);
    (void)decode_canonical(raw);
  }
  return true;
}

// 7. Equal seeds, equal bytes: every scenario in both modes, run twice.
bool check_determinism() {
  for (const std::string& name : scenario_names()) {
    for (SecurityMode mode : {SecurityMode::Baseline, SecurityMode::Secured}) {
      ScenarioConfig cfg = make_config(name, mode, 5);
      auto first = run_scenario(cfg);
      auto second = run_scenario(cfg);
      if (!first.ok() || !second.ok()) {
        return false;
      }
      if (serialize_report(first.value()) !=
              serialize_report(second.value()) ||
          first.value().full_log != second.value().full_log) {
        return false;
      }
    }
  }
  return true;
}

// 8. Exhaustion contrast at the default flood size: the baseline table
// grows to 1000 entries, the secured table stops at the quota of 8 and the
// overflow is visible as deny events.
bool check_subscription_contrast() {
  auto baseline = run_scenario(
      make_config("SubscriptionFlood", SecurityMode::Baseline, 7));
  if (!baseline.ok() || measured(baseline.value(), "flood_count") != 1000 ||
      measured(baseline.value(), "high_water") != 1000) {
    return false;
  }
  auto secured = run_scenario(
      make_config("SubscriptionFlood", SecurityMode::Secured, 7));
  return secured.ok() && measured(secured.value(), "high_water") == 8 &&
         measured(secured.value(), "deny_events") == 992;
}

}  // namespace

int main() {
  struct Criterion {
    const char* label;
    bool (*check)();
  };
  const std::vector<Criterion> criteria = {
      {"outcome matrix reproduces the reference pattern in under 10 s",
       check_matrix},
      {"amplification equals N x response bytes over request bytes, exactly",
       check_amplification},
      {"secured end-to-end demo completes with zero deny events", check_demo},
      {"credential gates reject wrong CA, theft, 512 bit flips, and expiry",
       check_credential_gates},
      {"policy evaluation matches the brute-force oracle on 1000 triples",
       check_abac_oracle},
      {"codecs round-trip 1000 messages per family, survive 100000 random "
       "inputs",
       check_codecs},
      {"equal seeds yield byte-identical reports and logs for every scenario",
       check_determinism},
      {"subscription flood: baseline high-water 1000, secured quota 8 with "
       "denies",
       check_subscription_contrast},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    bool pass = criteria[i].check();
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << (i + 1) << ". "
              << criteria[i].label << '\n';
    if (!pass) {
      failures += 1;
    }
  }
  return failures == 0 ? 0 : 1;
}
