// Device and service description documents: the self-describing data a
// device serves over HTTP so control points can learn its actions, state
// variables, and endpoint URLs. Round-trips through the canonical tree
// encoding, which is both the wire body and the on-disk bundle format.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "upnplab/wire/canonical.hpp"

namespace upnplab {

enum class ArgDirection { In, Out };

struct ActionArg {
  std::string name;
  ArgDirection direction = ArgDirection::In;
  std::string state_var;  // must name a declared state variable

  friend bool operator==(const ActionArg&, const ActionArg&) = default;
};

struct Action {
  std::string name;
  std::vector<ActionArg> args;

  friend bool operator==(const Action&, const Action&) = default;
};

struct VarRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  friend bool operator==(const VarRange&, const VarRange&) = default;
};

struct StateVariable {
  std::string name;
  std::string data_type;  // "string", "ui2", ...
  std::optional<VarRange> range;
  bool send_events = false;

  friend bool operator==(const StateVariable&, const StateVariable&) = default;
};

struct ServiceDescription {
  std::string service_type;
  std::vector<Action> actions;
  std::vector<StateVariable> state_variables;
  std::string control_url;
  std::string event_sub_url;

  const Action* find_action(const std::string& name) const;
  const StateVariable* find_variable(const std::string& name) const;

  friend bool operator==(const ServiceDescription&,
                         const ServiceDescription&) = default;
};

// How a device description points at one of its services.
struct ServiceRef {
  std::string service_type;
  std::string description_url;
  std::string control_url;
  std::string event_sub_url;

  friend bool operator==(const ServiceRef&, const ServiceRef&) = default;
};

struct DeviceDescription {
  std::string device_type;
  std::string friendly_name;
  std::string serial_number;
  std::string udn;  // "uuid:<host>"
  std::vector<ServiceRef> services;

  friend bool operator==(const DeviceDescription&,
                         const DeviceDescription&) = default;
};

// A device plus the full descriptions of its services: what a host needs to
// come up, and what a bundle file on disk holds.
struct DeviceBundle {
  DeviceDescription device;
  std::vector<ServiceDescription> services;

  friend bool operator==(const DeviceBundle&, const DeviceBundle&) = default;
};

DocTree service_description_to_tree(const ServiceDescription& sd);
Expected<ServiceDescription> service_description_from_tree(const DocTree& t);

DocTree device_description_to_tree(const DeviceDescription& dd);
Expected<DeviceDescription> device_description_from_tree(const DocTree& t);

// Bundle file layout: "device/..." holds the device description and
// "services/#i/..." the service descriptions, in declaration order.
DocTree bundle_to_tree(const DeviceBundle& b);
Expected<DeviceBundle> bundle_from_tree(const DocTree& t);
Expected<DeviceBundle> load_bundle_file(const std::string& path);

// Structural checks: every action arg references a declared state variable,
// URLs are distinct and non-empty, device service refs are consistent with
// the bundled service descriptions.
Status validate_service(const ServiceDescription& sd);
Status validate_bundle(const DeviceBundle& b);

inline constexpr char kCameraServiceType[] = "urn:SecurityCamera";
inline constexpr char kGatewayServiceType[] = "urn:WANIPConnections";
inline constexpr char kDeviceDescPath[] = "/device.desc";

std::string udn_for_host(const std::string& host);
std::string usn_for(const std::string& host, const std::string& service_type);
std::string location_for(const std::string& host);

// The lab's two stock devices.
DeviceBundle make_camera_bundle(const std::string& host);
DeviceBundle make_gateway_bundle(const std::string& host);

}  // namespace upnplab
