// Deterministic discrete-event network. Hosts exchange opaque byte
// payloads over unicast and multicast with a fixed one-tick latency; every
// send and delivery is logged, per-host byte counters are maintained, and
// causal parent links between packets make traffic amplification exactly
// measurable. All randomness flows through one seeded engine, so equal
// seeds give byte-identical logs.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "upnplab/error.hpp"
#include "upnplab/types.hpp"

namespace upnplab {

inline constexpr std::size_t kMaxDatagramBytes = 4096;
inline constexpr Tick kLinkLatency = 1;

// Exact rational, kept reduced. Amplification factors are ratios of byte
// counts and must compare exactly against oracle values.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Ratio() = default;
  Ratio(std::int64_t n, std::int64_t d) : num(n), den(d) { reduce(); }

  void reduce() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  friend bool operator==(const Ratio&, const Ratio&) = default;
};

std::string ratio_to_string(const Ratio& r);

struct Destination {
  enum class Kind { Unicast, Multicast };
  Kind kind = Kind::Unicast;
  std::string target;  // host id or group name

  static Destination unicast(std::string host) {
    return {Kind::Unicast, std::move(host)};
  }
  static Destination multicast(std::string group) {
    return {Kind::Multicast, std::move(group)};
  }
};

struct SimPacket {
  HostId src;       // claimed source, visible to the receiver
  HostId true_src;  // actual sender, visible only to the log
  Destination dst;
  Bytes payload;
  Tick send_time = 0;
  std::uint64_t seq = 0;         // unique per send call, from 1
  std::uint64_t parent_seq = 0;  // packet this one was sent in response to; 0 = root
};

struct HostMetrics {
  std::int64_t bytes_in = 0;
  std::int64_t bytes_out = 0;
  std::int64_t msgs_in = 0;
  std::int64_t msgs_out = 0;
};

struct LogEvent {
  Tick tick = 0;
  std::uint64_t seq = 0;
  HostId true_src;
  HostId claimed_src;
  std::string dst;  // host id, or "*<group>" for a multicast send
  std::int64_t bytes = 0;
  std::string kind;  // "send", "recv", "drop"
};

// "tick,seq,true_src,claimed_src,dst,bytes,kind"
std::string log_event_line(const LogEvent& e);

class Network {
 public:
  using Handler =
      std::function<void(Network&, const HostId& self, const SimPacket&)>;

  explicit Network(std::uint64_t seed);

  Status create_host(const HostId& id, bool spoof_capable = false);
  Status join_multicast(const HostId& id, const std::string& group);
  Status set_handler(const HostId& id, Handler handler);

  bool has_host(const HostId& id) const { return hosts_.count(id) != 0; }

  // Queues the packet for delivery at now+1. `pkt.src` may differ from
  // `from` only if `from` was created spoof-capable. Multicast fan-out is
  // resolved at send time against the current sorted member set; a sender
  // that joined the group receives its own packet. The packet's parent is
  // the packet currently being delivered, if any.
  Status send(const HostId& from, SimPacket pkt);

  // Same, but with an explicit causal parent (e.g. a deferred reply to a
  // request processed ticks ago).
  Status send_attributed(const HostId& from, SimPacket pkt,
                         std::uint64_t parent_seq);

  // Runs `fn` at time max(at, now()) in deterministic order with deliveries.
  void schedule(Tick at, std::function<void(Network&)> fn);

  void run_until(Tick t);

  Tick now() const { return now_; }

  const HostMetrics& metrics(const HostId& id) const;
  const std::vector<LogEvent>& events() const { return events_; }
  std::int64_t dropped() const { return dropped_; }

  // "tick,seq,true_src,claimed_src,dst,bytes,kind" per event.
  std::string export_log() const;

  // Bytes delivered to `victim` in response chains rooted at a send by
  // `attacker`, divided by the bytes `attacker` itself originated (its
  // parentless sends). Error if the attacker never originated traffic.
  Expected<Ratio> amplification_factor(const HostId& attacker,
                                       const HostId& victim) const;

  std::mt19937_64& rng() { return rng_; }

 private:
  struct HostState {
    bool spoof_capable = false;
    std::set<std::string> groups;
    Handler handler;
    HostMetrics metrics;
  };

  struct Entry {
    Tick at = 0;
    std::uint64_t order = 0;  // tie-break: global entry admission order
    std::optional<SimPacket> packet;  // delivery to `to`
    HostId to;
    std::function<void(Network&)> timer;
  };

  void deliver(const Entry& entry);
  std::uint64_t root_of(std::uint64_t seq) const;
  Status enqueue_delivery(SimPacket pkt, const HostId& to);

  std::map<HostId, HostState> hosts_;
  std::map<std::string, std::set<HostId>> groups_;
  std::map<Tick, std::vector<Entry>> queue_;
  std::vector<LogEvent> events_;
  // seq -> (parent_seq, true_src) for every packet ever sent.
  std::vector<std::pair<std::uint64_t, HostId>> packets_;
  mutable std::vector<std::uint64_t> root_cache_;
  std::mt19937_64 rng_;
  Tick now_ = 0;
  std::uint64_t next_seq_ = 1;
  std::uint64_t next_order_ = 0;
  std::uint64_t in_flight_seq_ = 0;  // packet currently being delivered
  std::int64_t dropped_ = 0;
};

}  // namespace upnplab
