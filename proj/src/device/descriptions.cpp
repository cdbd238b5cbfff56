#include "upnplab/device/descriptions.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace upnplab {

namespace {

Status check_keys(const DocTree& node,
                  std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional) {
  if (!node.is_object()) {
    return Error{Errc::MalformedDocument, "expected object node"};
  }
  for (const char* k : required) {
    if (!node.contains(k)) {
      return Error{Errc::MalformedDocument, std::string("missing key: ") + k};
    }
  }
  for (auto it = node.begin(); it != node.end(); ++it) {
    bool known = false;
    for (const char* k : required) {
      known = known || it.key() == k;
    }
    for (const char* k : optional) {
      known = known || it.key() == k;
    }
    if (!known) {
      return Error{Errc::MalformedDocument, "unexpected key: " + it.key()};
    }
  }
  return ok_status();
}

Expected<std::string> get_string(const DocTree& node, const char* key) {
  const auto it = node.find(key);
  if (it == node.end() || !it->is_string()) {
    return make_error(Errc::MalformedDocument,
                      std::string("expected string at ") + key);
  }
  return it->get<std::string>();
}

Expected<std::vector<DocTree>> get_array(const DocTree& node,
                                         const char* key) {
  const auto it = node.find(key);
  if (it == node.end()) {
    return std::vector<DocTree>{};
  }
  if (!it->is_array()) {
    return make_error(Errc::MalformedDocument,
                      std::string("expected list at ") + key);
  }
  std::vector<DocTree> out;
  for (const DocTree& elem : *it) {
    out.push_back(elem);
  }
  return out;
}

}  // namespace

const Action* ServiceDescription::find_action(const std::string& name) const {
  for (const Action& a : actions) {
    if (a.name == name) {
      return &a;
    }
  }
  return nullptr;
}

const StateVariable* ServiceDescription::find_variable(
    const std::string& name) const {
  for (const StateVariable& v : state_variables) {
    if (v.name == name) {
      return &v;
    }
  }
  return nullptr;
}

DocTree service_description_to_tree(const ServiceDescription& sd) {
  DocTree t = DocTree::object();
  t["service_type"] = sd.service_type;
  t["control_url"] = sd.control_url;
  t["event_sub_url"] = sd.event_sub_url;
  if (!sd.actions.empty()) {
    DocTree actions = DocTree::array();
    for (const Action& a : sd.actions) {
      DocTree an = DocTree::object();
      an["name"] = a.name;
      if (!a.args.empty()) {
        DocTree args = DocTree::array();
        for (const ActionArg& arg : a.args) {
          DocTree gn = DocTree::object();
          gn["name"] = arg.name;
          gn["direction"] = arg.direction == ArgDirection::In ? "in" : "out";
          gn["state_var"] = arg.state_var;
          args.push_back(gn);
        }
        an["args"] = args;
      }
      actions.push_back(an);
    }
    t["actions"] = actions;
  }
  if (!sd.state_variables.empty()) {
    DocTree vars = DocTree::array();
    for (const StateVariable& v : sd.state_variables) {
      DocTree vn = DocTree::object();
      vn["name"] = v.name;
      vn["data_type"] = v.data_type;
      vn["send_events"] = v.send_events ? "1" : "0";
      if (v.range) {
        DocTree rn = DocTree::object();
        rn["lo"] = std::to_string(v.range->lo);
        rn["hi"] = std::to_string(v.range->hi);
        vn["range"] = rn;
      }
      vars.push_back(vn);
    }
    t["state_variables"] = vars;
  }
  return t;
}

Expected<ServiceDescription> service_description_from_tree(const DocTree& t) {
  if (Status st = check_keys(
          t, {"control_url", "event_sub_url", "service_type"},
          {"actions", "state_variables"})) {
    return *st;
  }
  ServiceDescription sd;
  auto service_type = get_string(t, "service_type");
  if (!service_type) {
    return service_type.error();
  }
  sd.service_type = service_type.value();
  auto control_url = get_string(t, "control_url");
  if (!control_url) {
    return control_url.error();
  }
  sd.control_url = control_url.value();
  auto event_sub_url = get_string(t, "event_sub_url");
  if (!event_sub_url) {
    return event_sub_url.error();
  }
  sd.event_sub_url = event_sub_url.value();

  auto actions = get_array(t, "actions");
  if (!actions) {
    return actions.error();
  }
  for (const DocTree& an : actions.value()) {
    if (Status st = check_keys(an, {"name"}, {"args"})) {
      return *st;
    }
    Action a;
    auto name = get_string(an, "name");
    if (!name) {
      return name.error();
    }
    a.name = name.value();
    auto args = get_array(an, "args");
    if (!args) {
      return args.error();
    }
    for (const DocTree& gn : args.value()) {
      if (Status st = check_keys(gn, {"direction", "name", "state_var"}, {})) {
        return *st;
      }
      ActionArg arg;
      auto arg_name = get_string(gn, "name");
      auto direction = get_string(gn, "direction");
      auto state_var = get_string(gn, "state_var");
      if (!arg_name || !direction || !state_var) {
        return make_error(Errc::MalformedDocument, "bad action arg");
      }
      arg.name = arg_name.value();
      arg.state_var = state_var.value();
      if (direction.value() == "in") {
        arg.direction = ArgDirection::In;
      } else if (direction.value() == "out") {
        arg.direction = ArgDirection::Out;
      } else {
        return make_error(Errc::MalformedDocument,
                          "bad direction: " + direction.value());
      }
      a.args.push_back(std::move(arg));
    }
    sd.actions.push_back(std::move(a));
  }

  auto vars = get_array(t, "state_variables");
  if (!vars) {
    return vars.error();
  }
  for (const DocTree& vn : vars.value()) {
    if (Status st =
            check_keys(vn, {"data_type", "name", "send_events"}, {"range"})) {
      return *st;
    }
    StateVariable v;
    auto name = get_string(vn, "name");
    auto data_type = get_string(vn, "data_type");
    auto send_events = get_string(vn, "send_events");
    if (!name || !data_type || !send_events) {
      return make_error(Errc::MalformedDocument, "bad state variable");
    }
    v.name = name.value();
    v.data_type = data_type.value();
    if (send_events.value() == "1") {
      v.send_events = true;
    } else if (send_events.value() == "0") {
      v.send_events = false;
    } else {
      return make_error(Errc::MalformedDocument,
                        "send_events must be 0 or 1");
    }
    if (auto rit = vn.find("range"); rit != vn.end()) {
      if (Status st = check_keys(*rit, {"hi", "lo"}, {})) {
        return *st;
      }
      auto lo_s = get_string(*rit, "lo");
      auto hi_s = get_string(*rit, "hi");
      if (!lo_s || !hi_s) {
        return make_error(Errc::MalformedDocument, "bad range");
      }
      auto lo = parse_uint(lo_s.value());
      auto hi = parse_uint(hi_s.value());
      if (!lo || !hi) {
        return make_error(Errc::MalformedDocument, "bad range bound");
      }
      v.range = VarRange{lo.value(), hi.value()};
    }
    sd.state_variables.push_back(std::move(v));
  }
  return sd;
}

DocTree device_description_to_tree(const DeviceDescription& dd) {
  DocTree t = DocTree::object();
  t["device_type"] = dd.device_type;
  t["friendly_name"] = dd.friendly_name;
  t["serial_number"] = dd.serial_number;
  t["udn"] = dd.udn;
  if (!dd.services.empty()) {
    DocTree refs = DocTree::array();
    for (const ServiceRef& r : dd.services) {
      DocTree rn = DocTree::object();
      rn["service_type"] = r.service_type;
      rn["description_url"] = r.description_url;
      rn["control_url"] = r.control_url;
      rn["event_sub_url"] = r.event_sub_url;
      refs.push_back(rn);
    }
    t["services"] = refs;
  }
  return t;
}

Expected<DeviceDescription> device_description_from_tree(const DocTree& t) {
  if (Status st = check_keys(
          t, {"device_type", "friendly_name", "serial_number", "udn"},
          {"services"})) {
    return *st;
  }
  DeviceDescription dd;
  auto device_type = get_string(t, "device_type");
  auto friendly_name = get_string(t, "friendly_name");
  auto serial_number = get_string(t, "serial_number");
  auto udn = get_string(t, "udn");
  if (!device_type || !friendly_name || !serial_number || !udn) {
    return make_error(Errc::MalformedDocument, "bad device fields");
  }
  dd.device_type = device_type.value();
  dd.friendly_name = friendly_name.value();
  dd.serial_number = serial_number.value();
  dd.udn = udn.value();
  auto refs = get_array(t, "services");
  if (!refs) {
    return refs.error();
  }
  for (const DocTree& rn : refs.value()) {
    if (Status st = check_keys(
            rn,
            {"control_url", "description_url", "event_sub_url",
             "service_type"},
            {})) {
      return *st;
    }
    ServiceRef r;
    auto service_type = get_string(rn, "service_type");
    auto description_url = get_string(rn, "description_url");
    auto control_url = get_string(rn, "control_url");
    auto event_sub_url = get_string(rn, "event_sub_url");
    if (!service_type || !description_url || !control_url || !event_sub_url) {
      return make_error(Errc::MalformedDocument, "bad service ref");
    }
    r.service_type = service_type.value();
    r.description_url = description_url.value();
    r.control_url = control_url.value();
    r.event_sub_url = event_sub_url.value();
    dd.services.push_back(std::move(r));
  }
  return dd;
}

DocTree bundle_to_tree(const DeviceBundle& b) {
  DocTree t = DocTree::object();
  t["device"] = device_description_to_tree(b.device);
  if (!b.services.empty()) {
    DocTree services = DocTree::array();
    for (const ServiceDescription& sd : b.services) {
      services.push_back(service_description_to_tree(sd));
    }
    t["services"] = services;
  }
  return t;
}

Expected<DeviceBundle> bundle_from_tree(const DocTree& t) {
  if (Status st = check_keys(t, {"device"}, {"services"})) {
    return *st;
  }
  DeviceBundle b;
  auto dit = t.find("device");
  auto device = device_description_from_tree(*dit);
  if (!device) {
    return device.error();
  }
  b.device = std::move(device.value());
  auto services = get_array(t, "services");
  if (!services) {
    return services.error();
  }
  for (const DocTree& sn : services.value()) {
    auto sd = service_description_from_tree(sn);
    if (!sd) {
      return sd.error();
    }
    b.services.push_back(std::move(sd.value()));
  }
  return b;
}

Expected<DeviceBundle> load_bundle_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return make_error(Errc::ConfigError, "cannot read " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  auto tree = decode_canonical(buf.str());
  if (!tree) {
    return tree.error();
  }
  auto bundle = bundle_from_tree(tree.value());
  if (!bundle) {
    return bundle.error();
  }
  if (Status st = validate_bundle(bundle.value())) {
    return *st;
  }
  return bundle;
}

Status validate_service(const ServiceDescription& sd) {
  if (sd.service_type.empty() || sd.control_url.empty() ||
      sd.event_sub_url.empty()) {
    return Error{Errc::InvariantViolation, "empty service field"};
  }
  if (sd.control_url == sd.event_sub_url) {
    return Error{Errc::InvariantViolation,
                 "control and event URLs must differ"};
  }
  std::set<std::string> var_names;
  for (const StateVariable& v : sd.state_variables) {
    if (!var_names.insert(v.name).second) {
      return Error{Errc::InvariantViolation,
                   "duplicate state variable: " + v.name};
    }
    if (v.range && v.range->lo > v.range->hi) {
      return Error{Errc::InvariantViolation, "inverted range on " + v.name};
    }
  }
  std::set<std::string> action_names;
  for (const Action& a : sd.actions) {
    if (!action_names.insert(a.name).second) {
      return Error{Errc::InvariantViolation, "duplicate action: " + a.name};
    }
    for (const ActionArg& arg : a.args) {
      if (var_names.count(arg.state_var) == 0) {
        return Error{Errc::InvariantViolation,
                     a.name + "." + arg.name + " references unknown variable " +
                         arg.state_var};
      }
    }
  }
  return ok_status();
}

Status validate_bundle(const DeviceBundle& b) {
  if (b.device.udn.empty() || b.device.device_type.empty()) {
    return Error{Errc::InvariantViolation, "empty device field"};
  }
  if (b.device.services.size() != b.services.size()) {
    return Error{Errc::InvariantViolation,
                 "service ref count does not match bundled services"};
  }
  for (std::size_t i = 0; i < b.services.size(); ++i) {
    if (Status st = validate_service(b.services[i])) {
      return st;
    }
    const ServiceRef& r = b.device.services[i];
    const ServiceDescription& sd = b.services[i];
    if (r.service_type != sd.service_type ||
        r.control_url != sd.control_url ||
        r.event_sub_url != sd.event_sub_url) {
      return Error{Errc::InvariantViolation,
                   "service ref mismatch for " + sd.service_type};
    }
  }
  return ok_status();
}

std::string udn_for_host(const std::string& host) { return "uuid:" + host; }

std::string usn_for(const std::string& host, const std::string& service_type) {
  return udn_for_host(host) + "::" + service_type;
}

std::string location_for(const std::string& host) {
  return "http://" + host + kDeviceDescPath;
}

namespace {

ServiceRef ref_for(const ServiceDescription& sd) {
  return {sd.service_type, "/svc/" + sd.service_type + ".desc",
          sd.control_url, sd.event_sub_url};
}

}  // namespace

DeviceBundle make_camera_bundle(const std::string& host) {
  ServiceDescription svc;
  svc.service_type = kCameraServiceType;
  svc.control_url = std::string("/svc/") + kCameraServiceType + "/control";
  svc.event_sub_url = std::string("/svc/") + kCameraServiceType + "/events";
  svc.state_variables.push_back({"Status", "string", std::nullopt, true});
  Action get_status;
  get_status.name = "GetStatus";
  get_status.args.push_back({"status", ArgDirection::Out, "Status"});
  svc.actions.push_back(std::move(get_status));

  DeviceBundle b;
  b.device.device_type = "urn:device:SecurityCamera";
  b.device.friendly_name = "Camera " + host;
  b.device.serial_number = "SN-" + host;
  b.device.udn = udn_for_host(host);
  b.device.services.push_back(ref_for(svc));
  b.services.push_back(std::move(svc));
  return b;
}

DeviceBundle make_gateway_bundle(const std::string& host) {
  ServiceDescription svc;
  svc.service_type = kGatewayServiceType;
  svc.control_url = std::string("/svc/") + kGatewayServiceType + "/control";
  svc.event_sub_url = std::string("/svc/") + kGatewayServiceType + "/events";
  svc.state_variables.push_back(
      {"ExternalPort", "ui2", VarRange{1, 65535}, false});
  svc.state_variables.push_back({"InternalHost", "string", std::nullopt, false});
  svc.state_variables.push_back({"InternalPort", "ui2", std::nullopt, false});
  svc.state_variables.push_back({"Status", "string", std::nullopt, true});
  Action add_mapping;
  add_mapping.name = "AddPortMapping";
  add_mapping.args.push_back(
      {"external_port", ArgDirection::In, "ExternalPort"});
  add_mapping.args.push_back({"internal_host", ArgDirection::In, "InternalHost"});
  add_mapping.args.push_back({"internal_port", ArgDirection::In, "InternalPort"});
  svc.actions.push_back(std::move(add_mapping));
  Action get_status;
  get_status.name = "GetStatus";
  get_status.args.push_back({"status", ArgDirection::Out, "Status"});
  svc.actions.push_back(std::move(get_status));

  DeviceBundle b;
  b.device.device_type = "urn:device:InternetGateway";
  b.device.friendly_name = "Gateway " + host;
  b.device.serial_number = "SN-" + host;
  b.device.udn = udn_for_host(host);
  b.device.services.push_back(ref_for(svc));
  b.services.push_back(std::move(svc));
  return b;
}

}  // namespace upnplab
