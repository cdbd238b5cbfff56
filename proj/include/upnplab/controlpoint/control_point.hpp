// The control point: discovers services (passively via advertisements,
// actively via search), fetches description documents, invokes actions,
// and subscribes to events. In secured mode it verifies the capability
// token presented with every advertisement or search response before
// admitting the service to its discovered set.
#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "upnplab/device/descriptions.hpp"
#include "upnplab/security/verify.hpp"
#include "upnplab/simnet/network.hpp"
#include "upnplab/wire/http.hpp"
#include "upnplab/wire/ssdp.hpp"

namespace upnplab {

inline constexpr Tick kDefaultMx = 2;
inline constexpr Tick kRequestTimeout = 8;
inline constexpr Tick kCpSubscriptionTimeout = 1800;

enum class DiscoverySource { Advertisement, SearchResponse };

enum class AdDecision { Accept, RejectForged, RejectUnauthorized };

std::string_view ad_decision_name(AdDecision d);

struct DiscoveredService {
  std::string service_type;
  std::string usn;
  std::string location;
  HostId source;  // claimed packet source
  DiscoverySource via = DiscoverySource::Advertisement;
};

struct FetchedDevice {
  HostId host;
  DeviceDescription device;
  std::map<std::string, ServiceDescription> services;  // by service type
  bool complete = false;
  bool failed = false;
};

struct InvokeRecord {
  std::string usn;
  std::string service_type;
  std::string action;
  bool done = false;
  bool ok = false;
  std::string fault;  // error name on failure
  std::map<std::string, std::string> out_args;
};

struct SubscribeRecord {
  std::string usn;
  std::string service_type;
  std::string callback_url;
  bool done = false;
  bool ok = false;
  std::string sid;
  std::string fault;
};

struct GetRecord {
  HostId host;
  std::string path;
  bool done = false;
  bool ok = false;
  std::string status;
  Bytes body;
};

struct EventRecord {
  std::string sid;
  std::string var;
  std::string value;
  Tick tick = 0;
};

class ControlPoint {
 public:
  ControlPoint(Network& net, HostId host, SecurityContext& security);

  Status attach();
  void set_token(Bytes token_bytes) { token_ = std::move(token_bytes); }

  // Multicasts an M-SEARCH for `st`; unicast responses are admitted until
  // now + mx + 2.
  Status discover(const std::string& st, Tick mx = kDefaultMx);

  // Pulls the device description behind a discovered USN, then every
  // service description it references. Progress lands in fetched().
  Status fetch_descriptions(const std::string& usn);

  // Invokes an action on a fetched service. Refuses locally (no packet)
  // when the action is not in the fetched description, or when secured and
  // no token is held.
  Status invoke(const std::string& usn, const std::string& service_type,
                const std::string& action,
                const std::map<std::string, std::string>& args);

  Status subscribe(const std::string& usn, const std::string& service_type,
                   const std::string& callback_path = "/sink");

  // Plain GET, outside any description flow.
  Status http_get(const HostId& host, const std::string& path);

  // Secured-mode screening of an advertisement or search response carrying
  // service type `announced_type`; baseline accepts everything.
  AdDecision verify_advertisement(const std::optional<std::string>& token_hex,
                                  const std::string& announced_type,
                                  const HostId& claimed_src, Tick now);

  const std::vector<DiscoveredService>& discovered() const {
    return discovered_;
  }
  std::int64_t discovered_from(const HostId& src) const;
  const std::map<std::string, FetchedDevice>& fetched() const {
    return fetched_;
  }
  const std::vector<InvokeRecord>& invokes() const { return invokes_; }
  const std::vector<SubscribeRecord>& subscribes() const { return subscribes_; }
  const std::vector<GetRecord>& gets() const { return gets_; }
  const std::vector<EventRecord>& events() const { return events_; }

  std::int64_t ads_seen() const { return ads_seen_; }
  std::int64_t ads_accepted() const { return ads_accepted_; }
  std::int64_t ads_rejected() const { return ads_rejected_; }

  const HostId& host() const { return host_; }

 private:
  void handle_packet(Network& net, const SimPacket& pkt);
  void handle_ssdp(Network& net, const SimPacket& pkt, const SsdpMessage& msg);
  void handle_http(Network& net, const SimPacket& pkt, const HttpExchange& x);
  void admit(const SsdpMessage& msg, const SimPacket& pkt,
             DiscoverySource via);

  // One outstanding request to a peer; responses from that peer complete
  // the oldest entry first. `on_done` gets nullptr on timeout.
  void send_request(const HostId& to, const HttpExchange& req,
                    std::function<void(Network&, const HttpExchange*)> on_done);

  void request_service_descriptions(Network& net, const std::string& usn);

  Network& net_;
  HostId host_;
  SecurityContext& security_;
  Bytes token_;

  std::vector<DiscoveredService> discovered_;
  std::map<std::string, std::size_t> discovered_by_usn_;  // keep-first
  Tick search_window_end_ = -1;

  std::map<std::string, FetchedDevice> fetched_;
  std::vector<InvokeRecord> invokes_;
  std::vector<SubscribeRecord> subscribes_;
  std::vector<GetRecord> gets_;
  std::vector<EventRecord> events_;

  struct Pending {
    std::uint64_t id = 0;
    std::function<void(Network&, const HttpExchange*)> on_done;
  };
  std::map<HostId, std::deque<Pending>> pending_;
  std::uint64_t next_pending_id_ = 1;

  std::int64_t ads_seen_ = 0;
  std::int64_t ads_accepted_ = 0;
  std::int64_t ads_rejected_ = 0;
};

}  // namespace upnplab
