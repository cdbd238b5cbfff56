// The lab testbed: assembles one simulated home network out of cameras, an
// internet gateway, a control point, an external web host, an attacker, and
// a silent reflection victim. In secured mode it also stands up the
// certification and registration authorities, enrolls each legitimate
// participant (and the attacker, whose honest attributes earn only narrow
// permissions), and provisions the issued capability tokens.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "upnplab/controlpoint/control_point.hpp"
#include "upnplab/device/service_device.hpp"
#include "upnplab/security/registration.hpp"

namespace upnplab {

inline constexpr char kCpHost[] = "cp1";
inline constexpr char kGatewayHost[] = "gw";
inline constexpr char kAdvHost[] = "adv";
inline constexpr char kVictimHost[] = "victim";
inline constexpr char kExtHost[] = "ext";
inline constexpr std::size_t kMaxCameras = 10;

std::string camera_host(std::size_t i);  // "cam0", "cam1", ...

// Enrollment attributes plus the permissions the participant asks for.
struct Profile {
  std::map<std::string, std::string> hardware;
  std::map<std::string, std::string> software;
  PermissionSet requested;
};

Profile camera_profile();
Profile gateway_profile();
Profile controller_profile();
// "appliance": a fridge-class device that may only discover refrigeration
// services. "monitor": may discover anything and subscribe to camera events.
Expected<Profile> adversary_profile(const std::string& name);

// The policy the lab ships with: each stock role gets exactly the
// permissions its duties need, checked against enrollment attributes.
AbacPolicy default_policy();

struct LabOptions {
  SecurityMode mode = SecurityMode::Baseline;
  std::uint64_t seed = 1;
  std::size_t num_cams = 1;
  bool gateway = false;
  bool ext = false;
  bool adversary = false;
  std::string adv_profile = "appliance";
  bool adv_spoof = false;
  bool victim = false;
  bool control_point = true;
  std::optional<AbacPolicy> policy;  // default_policy() when absent
  std::optional<DeviceBundle> camera_bundle;
  std::optional<DeviceBundle> gateway_bundle;
};

class Lab {
 public:
  explicit Lab(const LabOptions& opts);
  Lab(const Lab&) = delete;
  Lab& operator=(const Lab&) = delete;

  Network& net() { return net_; }
  SecurityContext& security() { return security_; }
  const SecurityContext& security() const { return security_; }

  std::size_t camera_count() const { return cameras_.size(); }
  ServiceDevice& camera(std::size_t i) { return *cameras_.at(i); }
  ServiceDevice* gateway() { return gateway_.get(); }
  ControlPoint* cp() { return cp_.get(); }

  // Empty bytes when the host holds no token (baseline mode, registration
  // denied, or not a participant).
  const Bytes& token_of(const HostId& id) const;
  const KeyPair* keys_of(const HostId& id) const;

  CertificationAuthority* ca() { return ca_ ? &*ca_ : nullptr; }
  RegistrationAuthority* ra() { return ra_ ? &*ra_ : nullptr; }

  const LabOptions& options() const { return opts_; }

 private:
  void enroll_and_register(const HostId& id, const Profile& profile);

  LabOptions opts_;
  Network net_;
  SecurityContext security_;
  std::optional<CertificationAuthority> ca_;
  std::optional<RegistrationAuthority> ra_;
  std::vector<std::unique_ptr<ServiceDevice>> cameras_;
  std::unique_ptr<ServiceDevice> gateway_;
  std::unique_ptr<ControlPoint> cp_;
  std::map<HostId, KeyPair> keys_;
  std::map<HostId, Bytes> tokens_;
};

// Re-stamps host-derived identity fields so a bundle loaded from disk can
// serve as the description of any lab host.
DeviceBundle rehost_bundle(DeviceBundle bundle, const std::string& host);

}  // namespace upnplab
