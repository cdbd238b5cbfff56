#include "upnplab/attacks/testbed.hpp"

namespace upnplab {

std::string camera_host(std::size_t i) { return "cam" + std::to_string(i); }

Profile camera_profile() {
  Profile p;
  p.hardware = {{"sensor", "imaging"}, {"zone", "home"}};
  p.software = {{"svc", kCameraServiceType}, {"fw", "1.0"}};
  p.requested = {{Verb::Advertise, kCameraServiceType}};
  return p;
}

Profile gateway_profile() {
  Profile p;
  p.hardware = {{"role", "gateway"}, {"zone", "home"}};
  p.software = {{"svc", kGatewayServiceType}, {"fw", "1.0"}};
  p.requested = {{Verb::Advertise, kGatewayServiceType}};
  return p;
}

Profile controller_profile() {
  Profile p;
  p.hardware = {{"zone", "home"}};
  p.software = {{"role", "controller"}, {"fw", "1.0"}};
  p.requested = {{Verb::Discover, "*"},
                 {Verb::Invoke, std::string(kCameraServiceType) + ":GetStatus"},
                 {Verb::Subscribe, kCameraServiceType}};
  return p;
}

Expected<Profile> adversary_profile(const std::string& name) {
  Profile p;
  if (name == "appliance") {
    p.hardware = {{"sensor", "thermal"}, {"zone", "home"}};
    p.software = {{"role", "appliance"}, {"fw", "1.0"}};
    p.requested = {{Verb::Discover, "urn:Refrigeration"}};
    return p;
  }
  if (name == "monitor") {
    p.hardware = {{"zone", "home"}};
    p.software = {{"role", "monitor"}, {"fw", "1.0"}};
    p.requested = {{Verb::Discover, "*"}, {Verb::Subscribe, kCameraServiceType}};
    return p;
  }
  return make_error(Errc::ConfigError, "unknown adversary profile: " + name);
}

AbacPolicy default_policy() {
  AbacPolicy policy;
  policy.rules.push_back(
      {{{"sw.svc", CondOp::Eq, kCameraServiceType},
        {"hw.sensor", CondOp::Eq, "imaging"}},
       {{Verb::Advertise, kCameraServiceType}}});
  policy.rules.push_back(
      {{{"sw.svc", CondOp::Eq, kGatewayServiceType},
        {"hw.role", CondOp::Eq, "gateway"}},
       {{Verb::Advertise, kGatewayServiceType}}});
  policy.rules.push_back(
      {{{"sw.role", CondOp::Eq, "controller"},
        {"hw.zone", CondOp::In, "home,lab"}},
       {{Verb::Discover, "*"},
        {Verb::Invoke, std::string(kCameraServiceType) + ":GetStatus"},
        {Verb::Subscribe, kCameraServiceType}}});
  policy.rules.push_back({{{"sw.role", CondOp::Eq, "monitor"}},
                          {{Verb::Discover, "*"},
                           {Verb::Subscribe, kCameraServiceType}}});
  policy.rules.push_back({{{"sw.role", CondOp::Eq, "appliance"}},
                          {{Verb::Discover, "urn:Refrigeration"}}});
  return policy;
}

DeviceBundle rehost_bundle(DeviceBundle bundle, const std::string& host) {
  bundle.device.udn = udn_for_host(host);
  bundle.device.serial_number = "SN-" + host;
  return bundle;
}

Lab::Lab(const LabOptions& opts) : opts_(opts), net_(opts.seed) {
  security_.mode = opts.mode;

  std::size_t cams = opts.num_cams > kMaxCameras ? kMaxCameras : opts.num_cams;
  for (std::size_t i = 0; i < cams; ++i) {
    (void)net_.create_host(camera_host(i));
  }
  if (opts.gateway) {
    (void)net_.create_host(kGatewayHost);
  }
  if (opts.control_point) {
    (void)net_.create_host(kCpHost);
  }
  if (opts.adversary) {
    (void)net_.create_host(kAdvHost, opts.adv_spoof);
  }
  if (opts.victim) {
    (void)net_.create_host(kVictimHost);
  }
  if (opts.ext) {
    (void)net_.create_host(kExtHost);
  }

  if (opts.mode == SecurityMode::Secured) {
    KeyPair ca_keys = keygen(net_.rng());
    KeyPair ra_keys = keygen(net_.rng());
    security_.ra_public = ra_keys.public_key;
    ca_.emplace(std::move(ca_keys));
    ra_.emplace(std::move(ra_keys),
                opts.policy ? *opts.policy : default_policy());
    // Registration happens out of band, before the simulation clock starts:
    // the scheme assumes participants are provisioned at setup time.
    for (std::size_t i = 0; i < cams; ++i) {
      enroll_and_register(camera_host(i), camera_profile());
    }
    if (opts.gateway) {
      enroll_and_register(kGatewayHost, gateway_profile());
    }
    if (opts.control_point) {
      enroll_and_register(kCpHost, controller_profile());
    }
    if (opts.adversary) {
      if (auto profile = adversary_profile(opts.adv_profile)) {
        enroll_and_register(kAdvHost, profile.value());
      }
    }
  }

  for (std::size_t i = 0; i < cams; ++i) {
    std::string host = camera_host(i);
    DeviceBundle bundle = opts.camera_bundle
                              ? rehost_bundle(*opts.camera_bundle, host)
                              : make_camera_bundle(host);
    cameras_.push_back(
        std::make_unique<ServiceDevice>(net_, host, std::move(bundle), security_));
    (void)cameras_.back()->attach();
    cameras_.back()->set_token(token_of(host));
  }
  if (opts.gateway) {
    DeviceBundle bundle = opts.gateway_bundle
                              ? rehost_bundle(*opts.gateway_bundle, kGatewayHost)
                              : make_gateway_bundle(kGatewayHost);
    gateway_ = std::make_unique<ServiceDevice>(net_, kGatewayHost,
                                               std::move(bundle), security_);
    (void)gateway_->attach();
    gateway_->set_token(token_of(kGatewayHost));
  }
  if (opts.control_point) {
    cp_ = std::make_unique<ControlPoint>(net_, kCpHost, security_);
    (void)cp_->attach();
    cp_->set_token(token_of(kCpHost));
  }
  if (opts.ext) {
    // A plain web host on the far side of the gateway. It only answers
    // requests relayed by the gateway itself.
    (void)net_.set_handler(
        kExtHost, [](Network& net, const HostId& self, const SimPacket& pkt) {
          if (pkt.src != kGatewayHost) {
            return;
          }
          auto http = parse_http(pkt.payload);
          if (!http || !http.value().is_request() ||
              http.value().method_or_status != "GET") {
            return;
          }
          auto raw =
              serialize_http(make_response("200", "OK", "served_by=ext\n"));
          if (!raw) {
            return;
          }
          SimPacket out;
          out.dst = Destination::unicast(pkt.src);
          out.payload = raw.value();
          (void)net.send(self, std::move(out));
        });
  }
}

void Lab::enroll_and_register(const HostId& id, const Profile& profile) {
  KeyPair kp = keygen(net_.rng());
  keys_[id] = kp;
  auto doc = ca_->enroll(kp, id, profile.hardware, profile.software);
  if (!doc) {
    return;  // participant stays tokenless
  }
  Bytes nonce = ra_->challenge(net_.rng());
  auto proof = prove_ownership(kp.private_key, nonce);
  if (!proof) {
    return;
  }
  auto token = ra_->register_participant(doc.value(), profile.requested,
                                         proof.value(), 0, ca_->public_key());
  if (!token) {
    return;
  }
  auto bytes = encode_cap_token(token.value());
  if (bytes) {
    tokens_[id] = bytes.value();
  }
}

const Bytes& Lab::token_of(const HostId& id) const {
  static const Bytes kNone{};
  auto it = tokens_.find(id);
  return it == tokens_.end() ? kNone : it->second;
}

const KeyPair* Lab::keys_of(const HostId& id) const {
  auto it = keys_.find(id);
  return it == keys_.end() ? nullptr : &it->second;
}

}  // namespace upnplab
