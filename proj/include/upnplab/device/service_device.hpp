// A hosted device: advertises its services over multicast, answers search
// requests, serves description documents, executes control actions, and
// manages event subscriptions. In secured mode every advertisement carries
// the device's capability token and every state-changing request from a
// peer is verified before it takes effect.
#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "upnplab/device/descriptions.hpp"
#include "upnplab/security/verify.hpp"
#include "upnplab/simnet/network.hpp"
#include "upnplab/wire/http.hpp"
#include "upnplab/wire/ssdp.hpp"

namespace upnplab {

inline constexpr Tick kAdvertisementInterval = 300;
inline constexpr Tick kDefaultSubscriptionTimeout = 1800;
inline constexpr std::size_t kSubscriptionQuota = 8;

struct Subscription {
  std::string sid;
  std::string callback_url;
  Tick timeout = kDefaultSubscriptionTimeout;
  Tick created = 0;
  std::uint64_t origin_seq = 0;  // causal parent for NOTIFYs it triggers
  HostId subject;                // claimed source of the SUBSCRIBE
  std::string service_type;
};

struct PortMapping {
  std::int64_t external_port = 0;
  std::string internal_host;
  std::int64_t internal_port = 0;
  HostId creator;
};

class ServiceDevice {
 public:
  ServiceDevice(Network& net, HostId host, DeviceBundle bundle,
                SecurityContext& security);

  // Registers the packet handler and joins the discovery multicast group.
  Status attach();

  // Canonical (not hex) token bytes issued by the RA; attached to outgoing
  // messages and presented to peers in secured mode.
  void set_token(Bytes token_bytes) { token_ = std::move(token_bytes); }

  void advertise_now();
  // Self-rescheduling periodic advertisement starting at `first_at`.
  void start_advertising(Tick first_at, Tick interval = kAdvertisementInterval);

  // Updates an evented state variable and notifies live subscribers.
  Status publish_event(const std::string& service_type, const std::string& var,
                       const std::string& value);

  const HostId& host() const { return host_; }
  const DeviceBundle& bundle() const { return bundle_; }

  std::int64_t msearch_received() const { return msearch_received_; }
  std::int64_t msearch_answered() const { return msearch_answered_; }
  std::int64_t msearch_answered_to(const HostId& src) const;

  std::size_t live_subscriptions() const { return subscriptions_.size(); }
  std::size_t subscription_high_water() const { return sub_high_water_; }
  const std::vector<Subscription>& subscriptions() const {
    return subscriptions_;
  }

  const std::map<std::int64_t, PortMapping>& port_mappings() const {
    return port_mappings_;
  }

  std::string state_of(const std::string& service_type,
                       const std::string& var) const;

 private:
  void handle_packet(Network& net, const SimPacket& pkt);
  void handle_msearch(Network& net, const SimPacket& pkt,
                      const SsdpMessage& msg);
  void handle_get(Network& net, const SimPacket& pkt, const HttpExchange& req);
  void handle_control(Network& net, const SimPacket& pkt,
                      const HttpExchange& req);
  void handle_subscribe(Network& net, const SimPacket& pkt,
                        const HttpExchange& req);
  void handle_relay_response(Network& net, const SimPacket& pkt);

  void respond(Network& net, const HostId& to, const HttpExchange& res);
  void send_fault(Network& net, const HostId& to, std::string_view error_name);
  void send_not_found(Network& net, const HostId& to);
  void audit(Network& net, std::string reason, Verb verb, std::string target,
             const SimPacket& pkt, const std::optional<Bytes>& token_bytes);
  void prune_expired(Tick now);

  const ServiceDescription* service_by_type(const std::string& type) const;

  Network& net_;
  HostId host_;
  DeviceBundle bundle_;
  SecurityContext& security_;
  Bytes token_;

  // service_type -> variable -> value; everything starts as "ok".
  std::map<std::string, std::map<std::string, std::string>> state_;
  std::vector<Subscription> subscriptions_;
  std::size_t sub_high_water_ = 0;
  std::uint64_t sid_counter_ = 0;

  std::map<std::int64_t, PortMapping> port_mappings_;
  // internal host -> requesters awaiting a relayed response, oldest first.
  std::map<HostId, std::deque<HostId>> pending_relays_;

  std::int64_t msearch_received_ = 0;
  std::int64_t msearch_answered_ = 0;
  std::map<HostId, std::int64_t> answered_to_;
};

}  // namespace upnplab
