#include "upnplab/controlpoint/control_point.hpp"

#include <utility>

namespace upnplab {

std::string_view ad_decision_name(AdDecision d) {
  switch (d) {
    case AdDecision::Accept:
      return "Accept";
    case AdDecision::RejectForged:
      return "RejectForged";
    case AdDecision::RejectUnauthorized:
      return "RejectUnauthorized";
  }
  return "?";
}

ControlPoint::ControlPoint(Network& net, HostId host,
                           SecurityContext& security)
    : net_(net), host_(std::move(host)), security_(security) {}

Status ControlPoint::attach() {
  if (Status st = net_.set_handler(
          host_, [this](Network& net, const HostId&, const SimPacket& pkt) {
            handle_packet(net, pkt);
          })) {
    return st;
  }
  return net_.join_multicast(host_, kSsdpMulticastGroup);
}

std::int64_t ControlPoint::discovered_from(const HostId& src) const {
  std::int64_t n = 0;
  for (const DiscoveredService& d : discovered_) {
    if (d.source == src) {
      ++n;
    }
  }
  return n;
}

Status ControlPoint::discover(const std::string& st, Tick mx) {
  SsdpMessage msearch = make_msearch(st, mx);
  if (security_.secured() && !token_.empty()) {
    msearch.set_header(kTokenHeader, hex_encode(token_));
  }
  auto raw = serialize_ssdp(msearch);
  if (!raw) {
    return raw.error();
  }
  search_window_end_ = net_.now() + mx + 2;
  SimPacket pkt;
  pkt.dst = Destination::multicast(kSsdpMulticastGroup);
  pkt.payload = raw.value();
  return net_.send(host_, std::move(pkt));
}

AdDecision ControlPoint::verify_advertisement(
    const std::optional<std::string>& token_hex,
    const std::string& announced_type, const HostId& claimed_src, Tick now) {
  if (!security_.secured()) {
    return AdDecision::Accept;
  }
  auto token_bytes = token_bytes_from_header(token_hex);
  Decision d = verify_operation_bytes(security_.ra_public, token_bytes,
                                      Verb::Advertise, announced_type,
                                      claimed_src, now);
  AuditEvent ev;
  ev.tick = now;
  ev.verifier = host_;
  ev.reason = std::string(decision_name(d));
  ev.verb = std::string(verb_name(Verb::Advertise));
  ev.target = announced_type;
  ev.claimed_subject = claimed_src;
  ev.token_subject = token_subject_of(token_bytes);
  security_.audit.append(std::move(ev));
  switch (d) {
    case Decision::Permit:
      return AdDecision::Accept;
    case Decision::DenyForged:
      return AdDecision::RejectForged;
    default:
      return AdDecision::RejectUnauthorized;
  }
}

void ControlPoint::admit(const SsdpMessage& msg, const SimPacket& pkt,
                         DiscoverySource via) {
  std::string announced = via == DiscoverySource::Advertisement
                              ? msg.nt().value_or("")
                              : msg.st().value_or("");
  ads_seen_ += 1;
  AdDecision decision = verify_advertisement(msg.header(kTokenHeader),
                                             announced, pkt.src, net_.now());
  if (decision != AdDecision::Accept) {
    ads_rejected_ += 1;
    return;
  }
  ads_accepted_ += 1;
  std::string usn = msg.usn().value_or("");
  if (discovered_by_usn_.count(usn) != 0) {
    return;  // keep the first sighting
  }
  DiscoveredService d;
  d.service_type = announced;
  d.usn = usn;
  d.location = msg.location().value_or("");
  d.source = pkt.src;
  d.via = via;
  discovered_by_usn_[usn] = discovered_.size();
  discovered_.push_back(std::move(d));
}

void ControlPoint::handle_ssdp(Network& net, const SimPacket& pkt,
                               const SsdpMessage& msg) {
  (void)net;
  switch (msg.kind) {
    case SsdpKind::Notify:
      admit(msg, pkt, DiscoverySource::Advertisement);
      return;
    case SsdpKind::MSearchResponse:
      if (net_.now() > search_window_end_) {
        return;  // straggler outside the search window
      }
      admit(msg, pkt, DiscoverySource::SearchResponse);
      return;
    case SsdpKind::MSearch:
      return;  // not a responder (including our own multicast loopback)
  }
}

void ControlPoint::send_request(
    const HostId& to, const HttpExchange& req,
    std::function<void(Network&, const HttpExchange*)> on_done) {
  auto raw = serialize_http(req);
  if (!raw) {
    on_done(net_, nullptr);
    return;
  }
  SimPacket pkt;
  pkt.dst = Destination::unicast(to);
  pkt.payload = raw.value();
  if (Status st = net_.send(host_, std::move(pkt))) {
    on_done(net_, nullptr);
    return;
  }
  std::uint64_t id = next_pending_id_++;
  pending_[to].push_back({id, std::move(on_done)});
  net_.schedule(net_.now() + kRequestTimeout, [this, to, id](Network& net) {
    auto qit = pending_.find(to);
    if (qit == pending_.end()) {
      return;
    }
    for (auto it = qit->second.begin(); it != qit->second.end(); ++it) {
      if (it->id == id) {
        auto cb = std::move(it->on_done);
        qit->second.erase(it);
        if (qit->second.empty()) {
          pending_.erase(qit);
        }
        cb(net, nullptr);
        return;
      }
    }
  });
}

void ControlPoint::handle_http(Network& net, const SimPacket& pkt,
                               const HttpExchange& x) {
  if (x.is_request()) {
    if (x.method_or_status == "NOTIFY") {
      auto body = decode_canonical(x.body);
      if (body) {
        for (auto it = body.value().begin(); it != body.value().end(); ++it) {
          if (it->is_string()) {
            events_.push_back({x.sid().value_or(""), it.key(),
                               it->get<std::string>(), net.now()});
          }
        }
      }
      auto raw = serialize_http(make_response("200", "OK"));
      if (raw) {
        SimPacket out;
        out.dst = Destination::unicast(pkt.src);
        out.payload = raw.value();
        (void)net.send(host_, std::move(out));
      }
    }
    return;
  }
  auto qit = pending_.find(pkt.src);
  if (qit == pending_.end() || qit->second.empty()) {
    return;  // unsolicited response
  }
  auto cb = std::move(qit->second.front().on_done);
  qit->second.pop_front();
  if (qit->second.empty()) {
    pending_.erase(qit);
  }
  cb(net, &x);
}

void ControlPoint::handle_packet(Network& net, const SimPacket& pkt) {
  if (auto ssdp = parse_ssdp(pkt.payload)) {
    handle_ssdp(net, pkt, ssdp.value());
    return;
  }
  if (auto http = parse_http(pkt.payload)) {
    handle_http(net, pkt, http.value());
  }
}

Status ControlPoint::fetch_descriptions(const std::string& usn) {
  auto dit = discovered_by_usn_.find(usn);
  if (dit == discovered_by_usn_.end()) {
    return Error{Errc::NotFound, usn};
  }
  auto url = parse_url(discovered_[dit->second].location);
  if (!url) {
    return Error{Errc::FetchFailed, "bad location"};
  }
  FetchedDevice& slot = fetched_[usn];
  slot.host = url->host;
  std::string usn_copy = usn;
  send_request(
      url->host, make_request("GET", url->path),
      [this, usn_copy](Network& net, const HttpExchange* res) {
        FetchedDevice& dev = fetched_[usn_copy];
        if (res == nullptr || !res->status_is("200")) {
          dev.failed = true;
          return;
        }
        auto tree = decode_canonical(res->body);
        if (!tree) {
          dev.failed = true;
          return;
        }
        auto parsed = device_description_from_tree(tree.value());
        if (!parsed) {
          dev.failed = true;
          return;
        }
        dev.device = std::move(parsed.value());
        request_service_descriptions(net, usn_copy);
      });
  return ok_status();
}

void ControlPoint::request_service_descriptions(Network& net,
                                                const std::string& usn) {
  (void)net;
  FetchedDevice& dev = fetched_[usn];
  if (dev.device.services.empty()) {
    dev.complete = true;
    return;
  }
  for (const ServiceRef& ref : dev.device.services) {
    std::string usn_copy = usn;
    send_request(
        dev.host, make_request("GET", ref.description_url),
        [this, usn_copy](Network&, const HttpExchange* res) {
          FetchedDevice& d = fetched_[usn_copy];
          if (res == nullptr || !res->status_is("200")) {
            d.failed = true;
            return;
          }
          auto tree = decode_canonical(res->body);
          if (!tree) {
            d.failed = true;
            return;
          }
          auto parsed = service_description_from_tree(tree.value());
          if (!parsed) {
            d.failed = true;
            return;
          }
          d.services[parsed.value().service_type] = std::move(parsed.value());
          d.complete = !d.failed &&
                       d.services.size() == d.device.services.size();
        });
  }
}

Status ControlPoint::invoke(const std::string& usn,
                            const std::string& service_type,
                            const std::string& action,
                            const std::map<std::string, std::string>& args) {
  InvokeRecord rec;
  rec.usn = usn;
  rec.service_type = service_type;
  rec.action = action;

  auto fit = fetched_.find(usn);
  if (fit == fetched_.end() || fit->second.services.count(service_type) == 0) {
    rec.done = true;
    rec.fault = std::string(errc_name(Errc::NotFound));
    invokes_.push_back(std::move(rec));
    return Error{Errc::NotFound, usn};
  }
  const FetchedDevice& dev = fit->second;
  const ServiceDescription& sd = dev.services.at(service_type);
  if (sd.find_action(action) == nullptr) {
    // Never learned of such an action; refuse without network traffic.
    rec.done = true;
    rec.fault = std::string(errc_name(Errc::UnknownAction));
    invokes_.push_back(std::move(rec));
    return Error{Errc::UnknownAction, action};
  }
  if (security_.secured() && token_.empty()) {
    rec.done = true;
    rec.fault = std::string(errc_name(Errc::NoToken));
    invokes_.push_back(std::move(rec));
    return Error{Errc::NoToken, action};
  }

  DocTree body = DocTree::object();
  body["action"] = action;
  if (!args.empty()) {
    DocTree a = DocTree::object();
    for (const auto& [k, v] : args) {
      a[k] = v;
    }
    body["args"] = a;
  }
  auto encoded = encode_canonical(body);
  if (!encoded) {
    return Error{Errc::BadArgs, "unencodable arguments"};
  }
  HttpExchange req = make_request("POST", sd.control_url, encoded.value());
  if (security_.secured() && !token_.empty()) {
    req.set_header(kTokenHeader, hex_encode(token_));
  }
  invokes_.push_back(std::move(rec));
  std::size_t slot = invokes_.size() - 1;
  send_request(dev.host, req, [this, slot](Network&, const HttpExchange* res) {
    InvokeRecord& r = invokes_[slot];
    r.done = true;
    if (res == nullptr) {
      r.fault = std::string(errc_name(Errc::FetchFailed));
      return;
    }
    if (res->status_is("200")) {
      r.ok = true;
      if (auto tree = decode_canonical(res->body)) {
        for (auto it = tree.value().begin(); it != tree.value().end(); ++it) {
          if (it->is_string()) {
            r.out_args[it.key()] = it->get<std::string>();
          }
        }
      }
      return;
    }
    r.fault = "Fault";
    if (auto tree = decode_canonical(res->body)) {
      if (auto leaf = doc_get_string(tree.value(), {"error"})) {
        r.fault = leaf.value();
      }
    }
  });
  return ok_status();
}

Status ControlPoint::subscribe(const std::string& usn,
                               const std::string& service_type,
                               const std::string& callback_path) {
  SubscribeRecord rec;
  rec.usn = usn;
  rec.service_type = service_type;
  rec.callback_url = "http://" + host_ + callback_path;

  auto fit = fetched_.find(usn);
  if (fit == fetched_.end() || fit->second.services.count(service_type) == 0) {
    rec.done = true;
    rec.fault = std::string(errc_name(Errc::NotFound));
    subscribes_.push_back(std::move(rec));
    return Error{Errc::NotFound, usn};
  }
  const FetchedDevice& dev = fit->second;
  const ServiceDescription& sd = dev.services.at(service_type);
  HttpExchange req = make_subscribe(sd.event_sub_url, rec.callback_url,
                                    kCpSubscriptionTimeout);
  if (security_.secured() && !token_.empty()) {
    req.set_header(kTokenHeader, hex_encode(token_));
  }
  subscribes_.push_back(std::move(rec));
  std::size_t slot = subscribes_.size() - 1;
  send_request(dev.host, req,
               [this, slot](Network&, const HttpExchange* res) {
                 SubscribeRecord& r = subscribes_[slot];
                 r.done = true;
                 if (res != nullptr && res->status_is("200")) {
                   r.ok = true;
                   r.sid = res->sid().value_or("");
                   return;
                 }
                 r.fault = std::string(errc_name(Errc::SubscribeRejected));
               });
  return ok_status();
}

Status ControlPoint::http_get(const HostId& host, const std::string& path) {
  GetRecord rec;
  rec.host = host;
  rec.path = path;
  gets_.push_back(std::move(rec));
  std::size_t slot = gets_.size() - 1;
  send_request(host, make_request("GET", path),
               [this, slot](Network&, const HttpExchange* res) {
                 GetRecord& r = gets_[slot];
                 r.done = true;
                 if (res == nullptr) {
                   return;
                 }
                 r.status = res->method_or_status;
                 r.body = res->body;
                 r.ok = res->status_is("200");
               });
  return ok_status();
}

}  // namespace upnplab
