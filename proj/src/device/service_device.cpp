#include "upnplab/device/service_device.hpp"

#include <algorithm>
#include <utility>

namespace upnplab {

namespace {

// Control and event endpoints are per-service; description GETs also hit
// per-service paths. Linear scans are fine at lab scale.
const ServiceDescription* service_by_url(
    const DeviceBundle& bundle,
    const std::string ServiceDescription::*field, const std::string& path) {
  for (const ServiceDescription& sd : bundle.services) {
    if (sd.*field == path) {
      return &sd;
    }
  }
  return nullptr;
}

}  // namespace

ServiceDevice::ServiceDevice(Network& net, HostId host, DeviceBundle bundle,
                             SecurityContext& security)
    : net_(net),
      host_(std::move(host)),
      bundle_(std::move(bundle)),
      security_(security) {
  for (const ServiceDescription& sd : bundle_.services) {
    for (const StateVariable& v : sd.state_variables) {
      state_[sd.service_type][v.name] = "ok";
    }
  }
}

Status ServiceDevice::attach() {
  if (Status st = net_.set_handler(
          host_, [this](Network& net, const HostId&, const SimPacket& pkt) {
            handle_packet(net, pkt);
          })) {
    return st;
  }
  return net_.join_multicast(host_, kSsdpMulticastGroup);
}

const ServiceDescription* ServiceDevice::service_by_type(
    const std::string& type) const {
  for (const ServiceDescription& sd : bundle_.services) {
    if (sd.service_type == type) {
      return &sd;
    }
  }
  return nullptr;
}

std::string ServiceDevice::state_of(const std::string& service_type,
                                    const std::string& var) const {
  auto sit = state_.find(service_type);
  if (sit == state_.end()) {
    return {};
  }
  auto vit = sit->second.find(var);
  return vit == sit->second.end() ? std::string{} : vit->second;
}

std::int64_t ServiceDevice::msearch_answered_to(const HostId& src) const {
  auto it = answered_to_.find(src);
  return it == answered_to_.end() ? 0 : it->second;
}

void ServiceDevice::advertise_now() {
  for (const ServiceDescription& sd : bundle_.services) {
    SsdpMessage notify =
        make_notify(sd.service_type, usn_for(host_, sd.service_type),
                    location_for(host_));
    if (security_.secured() && !token_.empty()) {
      notify.set_header(kTokenHeader, hex_encode(token_));
    }
    auto raw = serialize_ssdp(notify);
    if (!raw) {
      continue;
    }
    SimPacket pkt;
    pkt.dst = Destination::multicast(kSsdpMulticastGroup);
    pkt.payload = raw.value();
    (void)net_.send(host_, std::move(pkt));
  }
}

void ServiceDevice::start_advertising(Tick first_at, Tick interval) {
  net_.schedule(first_at, [this, interval](Network& net) {
    advertise_now();
    start_advertising(net.now() + interval, interval);
  });
}

void ServiceDevice::handle_packet(Network& net, const SimPacket& pkt) {
  if (auto ssdp = parse_ssdp(pkt.payload)) {
    if (ssdp.value().kind == SsdpKind::MSearch) {
      handle_msearch(net, pkt, ssdp.value());
    }
    // Peer advertisements and search responses are control-point business.
    return;
  }
  auto http = parse_http(pkt.payload);
  if (!http) {
    // A SUBSCRIBE that fails framing only because the callback is missing
    // still deserves an addressed error, not silence.
    if (http.error().code == Errc::MissingRequiredHeader &&
        http.error().detail == "CALLBACK") {
      send_fault(net, pkt.src, errc_name(Errc::MissingCallback));
    }
    return;
  }
  const HttpExchange& x = http.value();
  if (!x.is_request()) {
    handle_relay_response(net, pkt);
    return;
  }
  if (x.method_or_status == "GET") {
    handle_get(net, pkt, x);
  } else if (x.method_or_status == "POST") {
    handle_control(net, pkt, x);
  } else if (x.method_or_status == "SUBSCRIBE") {
    handle_subscribe(net, pkt, x);
  }
  // NOTIFY and anything else: not served by devices.
}

void ServiceDevice::audit(Network& net, std::string reason, Verb verb,
                          std::string target, const SimPacket& pkt,
                          const std::optional<Bytes>& token_bytes) {
  AuditEvent ev;
  ev.tick = net.now();
  ev.verifier = host_;
  ev.reason = std::move(reason);
  ev.verb = std::string(verb_name(verb));
  ev.target = std::move(target);
  ev.claimed_subject = pkt.src;
  ev.token_subject = token_subject_of(token_bytes);
  security_.audit.append(std::move(ev));
}

void ServiceDevice::handle_msearch(Network& net, const SimPacket& pkt,
                                   const SsdpMessage& msg) {
  msearch_received_ += 1;
  std::string st = msg.st().value_or("");
  auto token_bytes = token_bytes_from_header(msg.header(kTokenHeader));
  for (const ServiceDescription& sd : bundle_.services) {
    bool matches = st == kSearchAll || st == sd.service_type;
    if (!matches) {
      continue;
    }
    if (security_.secured()) {
      Decision d = verify_operation_bytes(security_.ra_public, token_bytes,
                                          Verb::Discover, sd.service_type,
                                          pkt.src, net.now());
      audit(net, std::string(decision_name(d)), Verb::Discover,
            sd.service_type, pkt, token_bytes);
      if (d != Decision::Permit) {
        continue;
      }
    }
    std::string response_st = st == kSearchAll ? sd.service_type : st;
    SsdpMessage res = make_msearch_response(
        response_st, usn_for(host_, sd.service_type), location_for(host_));
    if (security_.secured() && !token_.empty()) {
      res.set_header(kTokenHeader, hex_encode(token_));
    }
    auto raw = serialize_ssdp(res);
    if (!raw) {
      continue;
    }
    SimPacket out;
    out.dst = Destination::unicast(pkt.src);  // claimed source, by design
    out.payload = raw.value();
    (void)net.send(host_, std::move(out));
    msearch_answered_ += 1;
    answered_to_[pkt.src] += 1;
  }
}

void ServiceDevice::respond(Network& net, const HostId& to,
                            const HttpExchange& res) {
  auto raw = serialize_http(res);
  if (!raw) {
    return;
  }
  SimPacket out;
  out.dst = Destination::unicast(to);
  out.payload = raw.value();
  (void)net.send(host_, std::move(out));
}

void ServiceDevice::send_fault(Network& net, const HostId& to,
                               std::string_view error_name) {
  respond(net, to,
          make_response("401", "Fault",
                        "error=" + std::string(error_name) + "\n"));
}

void ServiceDevice::send_not_found(Network& net, const HostId& to) {
  respond(net, to, make_response("404", "Not Found", "error=NotFound\n"));
}

void ServiceDevice::handle_get(Network& net, const SimPacket& pkt,
                               const HttpExchange& req) {
  if (req.path == kDeviceDescPath) {
    auto body = encode_canonical(device_description_to_tree(bundle_.device));
    if (body) {
      respond(net, pkt.src, make_response("200", "OK", body.value()));
    }
    return;
  }
  for (const ServiceDescription& sd : bundle_.services) {
    if ("/svc/" + sd.service_type + ".desc" == req.path) {
      auto body = encode_canonical(service_description_to_tree(sd));
      if (body) {
        respond(net, pkt.src, make_response("200", "OK", body.value()));
      }
      return;
    }
  }
  // Gateway port-forwarding surface: /mapped/<external_port>/<path...> is
  // relayed to the mapped internal host as GET /<path...>.
  if (req.path.rfind("/mapped/", 0) == 0) {
    std::string rest = req.path.substr(8);
    std::size_t slash = rest.find('/');
    std::string port_str = slash == std::string::npos ? rest : rest.substr(0, slash);
    std::string inner = slash == std::string::npos ? "/" : rest.substr(slash);
    auto port = parse_uint(port_str);
    if (!port) {
      send_not_found(net, pkt.src);
      return;
    }
    auto mit = port_mappings_.find(port.value());
    if (mit == port_mappings_.end()) {
      send_not_found(net, pkt.src);
      return;
    }
    auto raw = serialize_http(make_request("GET", inner));
    if (!raw) {
      return;
    }
    SimPacket fwd;
    fwd.dst = Destination::unicast(mit->second.internal_host);
    fwd.payload = raw.value();
    Status sent = net.send(host_, std::move(fwd));
    if (!sent.has_value()) {  // forwarded; remember who asked
      pending_relays_[mit->second.internal_host].push_back(pkt.src);
    }
    return;
  }
  send_not_found(net, pkt.src);
}

void ServiceDevice::handle_relay_response(Network& net, const SimPacket& pkt) {
  auto qit = pending_relays_.find(pkt.src);
  if (qit == pending_relays_.end() || qit->second.empty()) {
    return;
  }
  HostId requester = qit->second.front();
  qit->second.pop_front();
  if (qit->second.empty()) {
    pending_relays_.erase(qit);
  }
  // Relay verbatim: the requester sees exactly what the internal host sent.
  SimPacket out;
  out.dst = Destination::unicast(requester);
  out.payload = pkt.payload;
  (void)net.send(host_, std::move(out));
}

void ServiceDevice::handle_control(Network& net, const SimPacket& pkt,
                                   const HttpExchange& req) {
  const ServiceDescription* sd =
      service_by_url(bundle_, &ServiceDescription::control_url, req.path);
  if (sd == nullptr) {
    send_not_found(net, pkt.src);
    return;
  }
  auto body = decode_canonical(req.body);
  if (!body) {
    send_fault(net, pkt.src, errc_name(Errc::BadArgs));
    return;
  }
  const DocTree& doc = body.value();
  std::string action_name;
  std::map<std::string, std::string> args;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (it.key() == "action" && it->is_string()) {
      action_name = it->get<std::string>();
    } else if (it.key() == "args" && it->is_object()) {
      for (auto ait = it->begin(); ait != it->end(); ++ait) {
        if (!ait->is_string()) {
          send_fault(net, pkt.src, errc_name(Errc::BadArgs));
          return;
        }
        args[ait.key()] = ait->get<std::string>();
      }
    } else {
      send_fault(net, pkt.src, errc_name(Errc::BadArgs));
      return;
    }
  }
  if (action_name.empty()) {
    send_fault(net, pkt.src, errc_name(Errc::BadArgs));
    return;
  }

  if (security_.secured()) {
    auto token_bytes = token_bytes_from_header(req.header(kTokenHeader));
    std::string target = sd->service_type + ":" + action_name;
    Decision d =
        verify_operation_bytes(security_.ra_public, token_bytes, Verb::Invoke,
                               target, pkt.src, net.now());
    audit(net, std::string(decision_name(d)), Verb::Invoke, target, pkt,
          token_bytes);
    if (d != Decision::Permit) {
      send_fault(net, pkt.src, decision_name(d));
      return;
    }
  }

  const Action* action = sd->find_action(action_name);
  if (action == nullptr) {
    send_fault(net, pkt.src, errc_name(Errc::UnknownAction));
    return;
  }

  if (action_name == "AddPortMapping") {
    auto ep = args.find("external_port");
    auto ih = args.find("internal_host");
    auto ip = args.find("internal_port");
    if (args.size() != 3 || ep == args.end() || ih == args.end() ||
        ip == args.end()) {
      send_fault(net, pkt.src, errc_name(Errc::BadArgs));
      return;
    }
    auto external_port = parse_uint(ep->second);
    auto internal_port = parse_uint(ip->second);
    if (!external_port || !internal_port || external_port.value() < 1 ||
        external_port.value() > 65535 || internal_port.value() < 1 ||
        internal_port.value() > 65535 || ih->second.empty()) {
      send_fault(net, pkt.src, errc_name(Errc::BadArgs));
      return;
    }
    if (port_mappings_.count(external_port.value()) != 0) {
      send_fault(net, pkt.src, errc_name(Errc::PortInUse));
      return;
    }
    port_mappings_[external_port.value()] = {external_port.value(), ih->second,
                                             internal_port.value(), pkt.src};
    respond(net, pkt.src, make_response("200", "OK"));
    return;
  }

  // Generic action: argument names must match the declared in-args exactly;
  // out-args echo current state.
  std::map<std::string, std::string> expected_in;
  for (const ActionArg& a : action->args) {
    if (a.direction == ArgDirection::In) {
      expected_in[a.name];
    }
  }
  if (args.size() != expected_in.size()) {
    send_fault(net, pkt.src, errc_name(Errc::BadArgs));
    return;
  }
  for (const auto& [name, value] : args) {
    (void)value;
    if (expected_in.count(name) == 0) {
      send_fault(net, pkt.src, errc_name(Errc::BadArgs));
      return;
    }
  }
  DocTree out = DocTree::object();
  for (const ActionArg& a : action->args) {
    if (a.direction == ArgDirection::Out) {
      out[a.name] = state_of(sd->service_type, a.state_var);
    }
  }
  auto out_body = encode_canonical(out);
  if (!out_body) {
    send_fault(net, pkt.src, errc_name(Errc::BadArgs));
    return;
  }
  respond(net, pkt.src, make_response("200", "OK", out_body.value()));
}

void ServiceDevice::prune_expired(Tick now) {
  std::erase_if(subscriptions_, [now](const Subscription& s) {
    return now > s.created + s.timeout;
  });
}

void ServiceDevice::handle_subscribe(Network& net, const SimPacket& pkt,
                                     const HttpExchange& req) {
  const ServiceDescription* sd =
      service_by_url(bundle_, &ServiceDescription::event_sub_url, req.path);
  if (sd == nullptr) {
    send_not_found(net, pkt.src);
    return;
  }
  std::string callback = req.callback().value_or("");
  prune_expired(net.now());

  if (security_.secured()) {
    auto token_bytes = token_bytes_from_header(req.header(kTokenHeader));
    Decision d = verify_operation_bytes(security_.ra_public, token_bytes,
                                        Verb::Subscribe, sd->service_type,
                                        pkt.src, net.now());
    audit(net, std::string(decision_name(d)), Verb::Subscribe,
          sd->service_type, pkt, token_bytes);
    if (d != Decision::Permit) {
      send_fault(net, pkt.src, decision_name(d));
      return;
    }
    // Callbacks may only point at the token's own subject; anything else
    // turns eventing into a traffic reflector.
    auto url = parse_url(callback);
    if (!url || url->host != token_subject_of(token_bytes)) {
      audit(net, kReasonDenyCallbackMismatch, Verb::Subscribe,
            sd->service_type, pkt, token_bytes);
      send_fault(net, pkt.src, kReasonDenyCallbackMismatch);
      return;
    }
    std::size_t live_for_subject = static_cast<std::size_t>(
        std::count_if(subscriptions_.begin(), subscriptions_.end(),
                      [&](const Subscription& s) { return s.subject == pkt.src; }));
    if (live_for_subject >= kSubscriptionQuota) {
      audit(net, kReasonDenyQuota, Verb::Subscribe, sd->service_type, pkt,
            token_bytes);
      send_fault(net, pkt.src, kReasonDenyQuota);
      return;
    }
  }

  Subscription sub;
  sid_counter_ += 1;
  sub.sid = "uuid:sub-" + host_ + "-" + std::to_string(sid_counter_);
  sub.callback_url = callback;
  sub.timeout = req.timeout().value_or(kDefaultSubscriptionTimeout);
  sub.created = net.now();
  sub.origin_seq = pkt.seq;
  sub.subject = pkt.src;
  sub.service_type = sd->service_type;
  subscriptions_.push_back(sub);
  sub_high_water_ = std::max(sub_high_water_, subscriptions_.size());

  HttpExchange res = make_response("200", "OK");
  res.headers.insert(res.headers.begin(),
                     {{"SID", sub.sid}, {"TIMEOUT", std::to_string(sub.timeout)}});
  respond(net, pkt.src, res);
}

Status ServiceDevice::publish_event(const std::string& service_type,
                                    const std::string& var,
                                    const std::string& value) {
  const ServiceDescription* sd = service_by_type(service_type);
  if (sd == nullptr) {
    return Error{Errc::NotFound, service_type};
  }
  const StateVariable* v = sd->find_variable(var);
  if (v == nullptr) {
    return Error{Errc::UnknownVariable, var};
  }
  if (!v->send_events) {
    return Error{Errc::NotEvented, var};
  }
  state_[service_type][var] = value;
  prune_expired(net_.now());
  DocTree body = DocTree::object();
  body[var] = value;
  auto encoded = encode_canonical(body);
  if (!encoded) {
    return Error{Errc::InvariantViolation, "unencodable event"};
  }
  for (const Subscription& sub : subscriptions_) {
    if (sub.service_type != service_type) {
      continue;
    }
    auto url = parse_url(sub.callback_url);
    if (!url) {
      continue;
    }
    HttpExchange notify = make_request("NOTIFY", url->path, encoded.value());
    notify.headers.insert(notify.headers.begin(), {"SID", sub.sid});
    auto raw = serialize_http(notify);
    if (!raw) {
      continue;
    }
    SimPacket out;
    out.dst = Destination::unicast(url->host);
    out.payload = raw.value();
    // Event traffic is caused by the subscription that requested it.
    (void)net_.send_attributed(host_, std::move(out), sub.origin_seq);
  }
  return ok_status();
}

}  // namespace upnplab
