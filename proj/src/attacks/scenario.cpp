#include "upnplab/attacks/scenario.hpp"

#include <sstream>

namespace upnplab {

namespace {

struct Params {
  std::int64_t flood_count = 1000;
  std::int64_t num_sds = 3;
  std::int64_t sub_count = 6;
  std::int64_t event_count = 5;
  std::int64_t mx = 2;
};

Expected<Params> resolve_params(const std::map<std::string, std::int64_t>& in) {
  Params p;
  for (const auto& [key, value] : in) {
    if (value < 1) {
      return make_error(Errc::BadParams, key + " must be at least 1");
    }
    if (key == "flood_count") {
      p.flood_count = value;
    } else if (key == "num_sds") {
      p.num_sds = value;
    } else if (key == "sub_count") {
      p.sub_count = value;
    } else if (key == "event_count") {
      p.event_count = value;
    } else if (key == "mx") {
      p.mx = value;
    } else {
      return make_error(Errc::BadParams, "unknown parameter: " + key);
    }
  }
  if (p.num_sds > static_cast<std::int64_t>(kMaxCameras)) {
    return make_error(Errc::BadParams, "num_sds must be at most 10");
  }
  return p;
}

LabOptions base_options(const ScenarioConfig& cfg) {
  LabOptions o;
  o.mode = cfg.mode;
  o.seed = cfg.seed;
  o.policy = cfg.policy;
  o.camera_bundle = cfg.camera_bundle;
  return o;
}

ScenarioReport base_report(const ScenarioConfig& cfg) {
  ScenarioReport r;
  r.name = cfg.name;
  r.mode = cfg.mode;
  r.seed = cfg.seed;
  return r;
}

void attach_token(SsdpMessage& msg, Lab& lab, const HostId& id) {
  const Bytes& token = lab.token_of(id);
  if (!token.empty()) {
    msg.set_header(kTokenHeader, hex_encode(token));
  }
}

void attach_token(HttpExchange& x, Lab& lab, const HostId& id) {
  const Bytes& token = lab.token_of(id);
  if (!token.empty()) {
    x.set_header(kTokenHeader, hex_encode(token));
  }
}

bool involves(const LogEvent& e, const HostId& id) {
  return e.true_src == id || e.claimed_src == id || e.dst == id;
}

// Secured runs show the audit trail; baseline runs show the attacker- and
// victim-adjacent packet flow.
void finish_report(ScenarioReport& r, Lab& lab, bool succeeded,
                   bool side_effect_absent) {
  r.attack_succeeded = succeeded;
  r.detected = lab.security().audit.denies_attributable(kAdvHost) > 0;
  r.prevented = !succeeded && side_effect_absent;
  r.full_log = lab.net().export_log();
  if (lab.security().secured()) {
    for (const std::string& line : lab.security().audit.lines()) {
      r.log_excerpt.push_back(line);
      if (r.log_excerpt.size() == 8) {
        break;
      }
    }
    return;
  }
  for (const LogEvent& e : lab.net().events()) {
    if (!involves(e, kAdvHost) && !involves(e, kVictimHost)) {
      continue;
    }
    r.log_excerpt.push_back(log_event_line(e));
    if (r.log_excerpt.size() == 8) {
      break;
    }
  }
}

Bytes adv_notify_payload(Lab& lab, const std::string& usn) {
  SsdpMessage forged = make_notify(kCameraServiceType, usn,
                                   location_for(kAdvHost));
  attach_token(forged, lab, kAdvHost);
  auto raw = serialize_ssdp(forged);
  return raw ? raw.value() : Bytes{};
}

Status adv_multicast(Network& net, Bytes payload, const HostId& claimed_src) {
  SimPacket p;
  p.src = claimed_src;
  p.dst = Destination::multicast(kSsdpMulticastGroup);
  p.payload = std::move(payload);
  return net.send(kAdvHost, std::move(p));
}

Status adv_unicast(Network& net, const HostId& to, Bytes payload) {
  SimPacket p;
  p.dst = Destination::unicast(to);
  p.payload = std::move(payload);
  return net.send(kAdvHost, std::move(p));
}

// --- scenarios ------------------------------------------------------------

ScenarioReport scn_adv_forgery(const ScenarioConfig& cfg, const Params&) {
  LabOptions o = base_options(cfg);
  o.num_cams = 1;
  o.adversary = true;
  o.adv_profile = "appliance";
  Lab lab(o);
  lab.camera(0).start_advertising(1);

  Bytes forged =
      adv_notify_payload(lab, usn_for(kAdvHost, kCameraServiceType));
  lab.net().schedule(3, [forged](Network& net) {
    (void)adv_multicast(net, forged, kAdvHost);
  });
  lab.net().run_until(10);

  ControlPoint& cp = *lab.cp();
  ScenarioReport r = base_report(cfg);
  r.measurements["ads_accepted"] = cp.ads_accepted();
  r.measurements["ads_rejected"] = cp.ads_rejected();
  r.measurements["ads_seen"] = cp.ads_seen();
  r.measurements["discovered_from_adv"] = cp.discovered_from(kAdvHost);
  bool succeeded = cp.discovered_from(kAdvHost) > 0;
  finish_report(r, lab, succeeded, cp.discovered_from(kAdvHost) == 0);
  return r;
}

ScenarioReport scn_adv_flood(const ScenarioConfig& cfg, const Params& p) {
  LabOptions o = base_options(cfg);
  o.num_cams = 1;
  o.adversary = true;
  o.adv_profile = "appliance";
  Lab lab(o);
  lab.camera(0).start_advertising(1);

  std::int64_t flood_count = p.flood_count;
  lab.net().schedule(2, [&lab, flood_count](Network& net) {
    for (std::int64_t i = 0; i < flood_count; ++i) {
      Bytes payload = adv_notify_payload(
          lab, "uuid:adv-" + std::to_string(i) + "::" + kCameraServiceType);
      (void)adv_multicast(net, std::move(payload), kAdvHost);
    }
  });
  lab.net().run_until(8);

  ControlPoint& cp = *lab.cp();
  ScenarioReport r = base_report(cfg);
  r.measurements["ads_accepted"] = cp.ads_accepted();
  r.measurements["ads_rejected"] = cp.ads_rejected();
  r.measurements["ads_seen"] = cp.ads_seen();
  r.measurements["discovered_from_adv"] = cp.discovered_from(kAdvHost);
  r.measurements["discovered_total"] =
      static_cast<std::int64_t>(cp.discovered().size());
  r.measurements["flood_count"] = flood_count;
  bool succeeded = cp.discovered_from(kAdvHost) >= flood_count;
  finish_report(r, lab, succeeded, cp.discovered_from(kAdvHost) == 0);
  return r;
}

ScenarioReport scn_discovery_reply(const ScenarioConfig& cfg, const Params& p) {
  LabOptions o = base_options(cfg);
  o.num_cams = 1;
  o.adversary = true;
  o.adv_profile = "appliance";
  Lab lab(o);

  // The adversary eavesdrops on the discovery group, captures the control
  // point's search, and replays it verbatim later as itself.
  std::optional<Bytes> captured;
  std::int64_t adv_responses = 0;
  (void)lab.net().set_handler(
      kAdvHost, [&captured, &adv_responses](Network&, const HostId&,
                                            const SimPacket& pkt) {
        auto msg = parse_ssdp(pkt.payload);
        if (!msg) {
          return;
        }
        if (msg.value().kind == SsdpKind::MSearch && pkt.src == kCpHost &&
            !captured) {
          captured = pkt.payload;
        } else if (msg.value().kind == SsdpKind::MSearchResponse) {
          adv_responses += 1;
        }
      });
  (void)lab.net().join_multicast(kAdvHost, kSsdpMulticastGroup);

  std::int64_t mx = p.mx;
  lab.net().schedule(1, [&lab, mx](Network&) {
    (void)lab.cp()->discover(kCameraServiceType, mx);
  });
  lab.net().schedule(6, [&captured](Network& net) {
    if (captured) {
      (void)adv_multicast(net, *captured, kAdvHost);
    }
  });
  lab.net().run_until(12);

  ScenarioReport r = base_report(cfg);
  r.measurements["adv_responses"] = adv_responses;
  r.measurements["answered_adv"] = lab.camera(0).msearch_answered_to(kAdvHost);
  r.measurements["answered_cp"] = lab.camera(0).msearch_answered_to(kCpHost);
  r.measurements["captured"] = captured ? 1 : 0;
  bool succeeded = adv_responses > 0;
  finish_report(r, lab, succeeded,
                lab.camera(0).msearch_answered_to(kAdvHost) == 0);
  return r;
}

ScenarioReport scn_discovery_flood(const ScenarioConfig& cfg, const Params& p) {
  LabOptions o = base_options(cfg);
  o.num_cams = 1;
  o.adversary = true;
  o.adv_profile = "appliance";
  Lab lab(o);

  SsdpMessage msearch = make_msearch(kCameraServiceType, p.mx);
  attach_token(msearch, lab, kAdvHost);
  auto raw = serialize_ssdp(msearch);
  Bytes payload = raw ? raw.value() : Bytes{};
  std::int64_t flood_count = p.flood_count;
  lab.net().schedule(1, [payload, flood_count](Network& net) {
    for (std::int64_t i = 0; i < flood_count; ++i) {
      (void)adv_multicast(net, payload, kAdvHost);
    }
  });
  std::int64_t mx = p.mx;
  lab.net().schedule(5, [&lab, mx](Network&) {
    (void)lab.cp()->discover(kCameraServiceType, mx);
  });
  lab.net().run_until(12);

  ScenarioReport r = base_report(cfg);
  r.measurements["answered_adv"] = lab.camera(0).msearch_answered_to(kAdvHost);
  r.measurements["answered_cp"] = lab.camera(0).msearch_answered_to(kCpHost);
  r.measurements["cp_discovered"] =
      static_cast<std::int64_t>(lab.cp()->discovered().size());
  r.measurements["flood_count"] = flood_count;
  r.measurements["msearch_received"] = lab.camera(0).msearch_received();
  bool succeeded = lab.camera(0).msearch_answered_to(kAdvHost) >= flood_count;
  finish_report(r, lab, succeeded,
                lab.camera(0).msearch_answered_to(kAdvHost) == 0);
  return r;
}

ScenarioReport scn_spoofed_discovery_amp(const ScenarioConfig& cfg,
                                         const Params& p) {
  LabOptions o = base_options(cfg);
  o.num_cams = static_cast<std::size_t>(p.num_sds);
  o.control_point = false;
  o.adversary = true;
  o.adv_profile = "appliance";
  o.adv_spoof = true;
  o.victim = true;
  Lab lab(o);

  SsdpMessage msearch = make_msearch(kCameraServiceType, p.mx);
  attach_token(msearch, lab, kAdvHost);
  auto raw = serialize_ssdp(msearch);
  Bytes payload = raw ? raw.value() : Bytes{};
  lab.net().schedule(1, [payload](Network& net) {
    // One spoofed request: every responder unicasts its answer to the
    // claimed source, the victim.
    (void)adv_multicast(net, payload, kVictimHost);
  });
  lab.net().run_until(6);

  const HostMetrics& victim = lab.net().metrics(kVictimHost);
  const HostMetrics& adv = lab.net().metrics(kAdvHost);
  ScenarioReport r = base_report(cfg);
  r.measurements["num_sds"] = p.num_sds;
  r.measurements["request_bytes"] = adv.bytes_out;
  r.measurements["response_bytes"] =
      victim.msgs_in > 0 ? victim.bytes_in / victim.msgs_in : 0;
  r.measurements["responses_delivered"] = victim.msgs_in;
  r.measurements["victim_bytes_in"] = victim.bytes_in;
  auto amp = lab.net().amplification_factor(kAdvHost, kVictimHost);
  if (amp) {
    r.amplification = amp.value();
  }
  bool succeeded = amp.ok() && amp.value().num > amp.value().den;
  finish_report(r, lab, succeeded, victim.msgs_in == 0);
  return r;
}

ScenarioReport scn_malicious_action(const ScenarioConfig& cfg, const Params&) {
  LabOptions o = base_options(cfg);
  o.num_cams = 0;
  o.gateway = true;
  o.ext = true;
  o.adversary = true;
  o.adv_profile = "appliance";
  Lab lab(o);

  DocTree body = DocTree::object();
  body["action"] = "AddPortMapping";
  DocTree args = DocTree::object();
  args["external_port"] = "8080";
  args["internal_host"] = kExtHost;
  args["internal_port"] = "80";
  body["args"] = args;
  auto encoded = encode_canonical(body);
  HttpExchange post = make_request(
      "POST", std::string("/svc/") + kGatewayServiceType + "/control",
      encoded ? encoded.value() : Bytes{});
  attach_token(post, lab, kAdvHost);
  auto raw = serialize_http(post);
  Bytes payload = raw ? raw.value() : Bytes{};
  lab.net().schedule(1, [payload](Network& net) {
    (void)adv_unicast(net, kGatewayHost, payload);
  });
  lab.net().schedule(5, [&lab](Network&) {
    (void)lab.cp()->http_get(kGatewayHost, "/mapped/8080/index");
  });
  lab.net().run_until(12);

  bool mapping_by_adv = false;
  for (const auto& [port, mapping] : lab.gateway()->port_mappings()) {
    (void)port;
    if (mapping.creator == kAdvHost) {
      mapping_by_adv = true;
    }
  }
  const auto& gets = lab.cp()->gets();
  bool relay_ok = !gets.empty() && gets.back().done && gets.back().ok &&
                  gets.back().body.find("served_by=ext") != Bytes::npos;

  ScenarioReport r = base_report(cfg);
  r.measurements["mappings"] =
      static_cast<std::int64_t>(lab.gateway()->port_mappings().size());
  r.measurements["relay_ok"] = relay_ok ? 1 : 0;
  bool succeeded = mapping_by_adv && relay_ok;
  finish_report(r, lab, succeeded, lab.gateway()->port_mappings().empty());
  return r;
}

Bytes adv_subscribe_payload(Lab& lab, const std::string& callback_host) {
  HttpExchange sub = make_subscribe(
      std::string("/svc/") + kCameraServiceType + "/events",
      "http://" + callback_host + "/sink", kDefaultSubscriptionTimeout);
  attach_token(sub, lab, kAdvHost);
  auto raw = serialize_http(sub);
  return raw ? raw.value() : Bytes{};
}

ScenarioReport scn_subscription_flood(const ScenarioConfig& cfg,
                                      const Params& p) {
  LabOptions o = base_options(cfg);
  o.num_cams = 1;
  o.control_point = false;
  o.adversary = true;
  o.adv_profile = "monitor";
  Lab lab(o);

  Bytes payload = adv_subscribe_payload(lab, kAdvHost);
  std::int64_t flood_count = p.flood_count;
  lab.net().schedule(1, [payload, flood_count](Network& net) {
    for (std::int64_t i = 0; i < flood_count; ++i) {
      (void)adv_unicast(net, camera_host(0), payload);
    }
  });
  lab.net().run_until(6);

  ServiceDevice& cam = lab.camera(0);
  ScenarioReport r = base_report(cfg);
  r.measurements["deny_events"] =
      static_cast<std::int64_t>(lab.security().audit.deny_count());
  r.measurements["flood_count"] = flood_count;
  r.measurements["high_water"] =
      static_cast<std::int64_t>(cam.subscription_high_water());
  r.measurements["live_subs"] =
      static_cast<std::int64_t>(cam.live_subscriptions());
  bool succeeded =
      cam.subscription_high_water() >= static_cast<std::size_t>(flood_count);
  finish_report(r, lab, succeeded,
                cam.subscription_high_water() <= kSubscriptionQuota);
  return r;
}

ScenarioReport scn_spoofed_callback_amp(const ScenarioConfig& cfg,
                                        const Params& p) {
  LabOptions o = base_options(cfg);
  o.num_cams = 1;
  o.control_point = false;
  o.adversary = true;
  o.adv_profile = "monitor";
  o.victim = true;
  Lab lab(o);

  Bytes payload = adv_subscribe_payload(lab, kVictimHost);
  std::int64_t sub_count = p.sub_count;
  lab.net().schedule(1, [payload, sub_count](Network& net) {
    for (std::int64_t i = 0; i < sub_count; ++i) {
      (void)adv_unicast(net, camera_host(0), payload);
    }
  });
  for (std::int64_t i = 0; i < p.event_count; ++i) {
    lab.net().schedule(4 + i, [&lab, i](Network&) {
      (void)lab.camera(0).publish_event(kCameraServiceType, "Status",
                                        "evt-" + std::to_string(i));
    });
  }
  lab.net().run_until(4 + p.event_count + 7);

  const HostMetrics& victim = lab.net().metrics(kVictimHost);
  ScenarioReport r = base_report(cfg);
  r.measurements["event_count"] = p.event_count;
  r.measurements["live_subs"] =
      static_cast<std::int64_t>(lab.camera(0).live_subscriptions());
  r.measurements["sub_count"] = sub_count;
  r.measurements["victim_bytes_in"] = victim.bytes_in;
  r.measurements["victim_msgs_in"] = victim.msgs_in;
  auto amp = lab.net().amplification_factor(kAdvHost, kVictimHost);
  if (amp) {
    r.amplification = amp.value();
  }
  bool succeeded = victim.bytes_in > 0 && amp.ok() &&
                   amp.value().num > amp.value().den;
  finish_report(r, lab, succeeded, victim.msgs_in == 0);
  return r;
}

}  // namespace

const std::vector<std::pair<std::string, std::vector<std::string>>>&
scenario_categories() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>>
      kCategories = {
          {"mal_advertisement", {"AdvForgery", "AdvFlood"}},
          {"mal_discovery",
           {"DiscoveryReply", "DiscoveryFlood", "SpoofedDiscoveryAmp"}},
          {"mal_action", {"MaliciousAction"}},
          {"mal_event_subscription",
           {"SubscriptionFlood", "SpoofedCallbackAmp"}},
      };
  return kCategories;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> kNames = [] {
    std::vector<std::string> names;
    for (const auto& [category, scenarios] : scenario_categories()) {
      (void)category;
      names.insert(names.end(), scenarios.begin(), scenarios.end());
    }
    return names;
  }();
  return kNames;
}

Expected<ScenarioReport> run_scenario(const ScenarioConfig& cfg) {
  auto params = resolve_params(cfg.params);
  if (!params) {
    return params.error();
  }
  const Params& p = params.value();
  if (cfg.name == "AdvForgery") {
    return scn_adv_forgery(cfg, p);
  }
  if (cfg.name == "AdvFlood") {
    return scn_adv_flood(cfg, p);
  }
  if (cfg.name == "DiscoveryReply") {
    return scn_discovery_reply(cfg, p);
  }
  if (cfg.name == "DiscoveryFlood") {
    return scn_discovery_flood(cfg, p);
  }
  if (cfg.name == "SpoofedDiscoveryAmp") {
    return scn_spoofed_discovery_amp(cfg, p);
  }
  if (cfg.name == "MaliciousAction") {
    return scn_malicious_action(cfg, p);
  }
  if (cfg.name == "SubscriptionFlood") {
    return scn_subscription_flood(cfg, p);
  }
  if (cfg.name == "SpoofedCallbackAmp") {
    return scn_spoofed_callback_amp(cfg, p);
  }
  return make_error(Errc::UnknownScenario, cfg.name);
}

std::string serialize_report(const ScenarioReport& report) {
  std::ostringstream out;
  out << "name=" << report.name << '\n';
  out << "mode=" << security_mode_name(report.mode) << '\n';
  out << "seed=" << report.seed << '\n';
  out << "attack_succeeded=" << (report.attack_succeeded ? 1 : 0) << '\n';
  out << "detected=" << (report.detected ? 1 : 0) << '\n';
  out << "prevented=" << (report.prevented ? 1 : 0) << '\n';
  for (const auto& [key, value] : report.measurements) {
    out << "m." << key << '=' << value << '\n';
  }
  if (report.amplification) {
    out << "amplification=" << ratio_to_string(*report.amplification) << '\n';
  }
  for (const std::string& line : report.log_excerpt) {
    out << "log=" << line << '\n';
  }
  return out.str();
}

bool MatrixReport::matches_reference() const {
  if (cells.size() != scenario_names().size() * 2) {
    return false;
  }
  for (const MatrixCell& cell : cells) {
    if (cell.mode == SecurityMode::Baseline) {
      if (!cell.attack_succeeded || cell.detected || cell.prevented) {
        return false;
      }
    } else {
      if (cell.attack_succeeded || !cell.detected || !cell.prevented) {
        return false;
      }
    }
  }
  return true;
}

Expected<MatrixReport> run_matrix(
    std::uint64_t seed, const std::map<std::string, std::int64_t>& params,
    const std::optional<AbacPolicy>& policy,
    const std::optional<DeviceBundle>& camera_bundle) {
  MatrixReport m;
  m.seed = seed;
  for (const auto& [category, scenarios] : scenario_categories()) {
    for (SecurityMode mode :
         {SecurityMode::Baseline, SecurityMode::Secured}) {
      MatrixRow row;
      row.category = category;
      row.mode = mode;
      row.prevented = true;
      for (const std::string& scenario : scenarios) {
        ScenarioConfig cfg;
        cfg.name = scenario;
        cfg.mode = mode;
        cfg.seed = seed;
        cfg.params = params;
        cfg.policy = policy;
        cfg.camera_bundle = camera_bundle;
        auto report = run_scenario(cfg);
        if (!report) {
          return report.error();
        }
        const ScenarioReport& rep = report.value();
        m.cells.push_back({category, scenario, mode, rep.attack_succeeded,
                           rep.detected, rep.prevented});
        row.attack_succeeded = row.attack_succeeded || rep.attack_succeeded;
        row.detected = row.detected || rep.detected;
        row.prevented = row.prevented && rep.prevented;
      }
      m.rows.push_back(std::move(row));
    }
  }
  return m;
}

std::string serialize_matrix(const MatrixReport& report) {
  std::ostringstream out;
  out << "seed=" << report.seed << '\n';
  for (const MatrixCell& c : report.cells) {
    out << "cell=" << c.category << ',' << c.scenario << ','
        << security_mode_name(c.mode) << ',' << (c.attack_succeeded ? 1 : 0)
        << ',' << (c.detected ? 1 : 0) << ',' << (c.prevented ? 1 : 0) << '\n';
  }
  for (const MatrixRow& r : report.rows) {
    out << "row=" << r.category << ',' << security_mode_name(r.mode) << ','
        << (r.attack_succeeded ? 1 : 0) << ',' << (r.detected ? 1 : 0) << ','
        << (r.prevented ? 1 : 0) << '\n';
  }
  out << "reference_match=" << (report.matches_reference() ? 1 : 0) << '\n';
  return out.str();
}

DemoReport run_demo(SecurityMode mode, std::uint64_t seed) {
  LabOptions o;
  o.mode = mode;
  o.seed = seed;
  o.num_cams = 1;
  o.control_point = true;
  Lab lab(o);
  ControlPoint& cp = *lab.cp();
  ServiceDevice& cam = lab.camera(0);
  std::string usn = usn_for(camera_host(0), kCameraServiceType);

  cam.start_advertising(1);
  Network& net = lab.net();
  net.schedule(4, [&cp](Network&) { (void)cp.discover(kCameraServiceType); });
  net.schedule(10, [&cp, usn](Network&) { (void)cp.fetch_descriptions(usn); });
  net.schedule(18, [&cp, usn](Network&) {
    (void)cp.invoke(usn, kCameraServiceType, "GetStatus", {});
  });
  net.schedule(22, [&cp, usn](Network&) {
    (void)cp.subscribe(usn, kCameraServiceType, "/sink");
  });
  net.schedule(26, [&cam](Network&) {
    (void)cam.publish_event(kCameraServiceType, "Status", "armed");
  });
  net.run_until(40);

  DemoReport d;
  d.mode = mode;
  d.seed = seed;

  bool discovered = false;
  for (const DiscoveredService& s : cp.discovered()) {
    discovered = discovered || s.usn == usn;
  }
  auto fit = cp.fetched().find(usn);
  bool fetched = fit != cp.fetched().end() && fit->second.complete;
  bool invoked = false;
  for (const InvokeRecord& rec : cp.invokes()) {
    if (rec.done && rec.ok) {
      auto oit = rec.out_args.find("status");
      invoked = oit != rec.out_args.end() && oit->second == "ok";
    }
  }
  bool subscribed = false;
  for (const SubscribeRecord& rec : cp.subscribes()) {
    subscribed = subscribed || (rec.done && rec.ok && !rec.sid.empty());
  }
  bool evented = false;
  for (const EventRecord& ev : cp.events()) {
    evented = evented || (ev.var == "Status" && ev.value == "armed");
  }
  d.steps = {{"discover", discovered},
             {"fetch", fetched},
             {"invoke", invoked},
             {"subscribe", subscribed},
             {"event", evented}};
  d.deny_events = lab.security().audit.deny_count();
  bool all_steps = true;
  for (const auto& [name, passed] : d.steps) {
    (void)name;
    all_steps = all_steps && passed;
  }
  d.ok = all_steps &&
         (mode == SecurityMode::Secured ? d.deny_events == 0 : true);
  d.full_log = net.export_log();
  return d;
}

std::string serialize_demo(const DemoReport& report) {
  std::ostringstream out;
  out << "mode=" << security_mode_name(report.mode) << '\n';
  out << "seed=" << report.seed << '\n';
  for (const auto& [name, passed] : report.steps) {
    out << "step." << name << '=' << (passed ? 1 : 0) << '\n';
  }
  out << "deny_events=" << report.deny_events << '\n';
  out << "ok=" << (report.ok ? 1 : 0) << '\n';
  return out.str();
}

}  // namespace upnplab
