#include "upnplab/simnet/network.hpp"

#include <sstream>
#include <utility>

namespace upnplab {

std::string ratio_to_string(const Ratio& r) {
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

Network::Network(std::uint64_t seed) : rng_(seed) {}

Status Network::create_host(const HostId& id, bool spoof_capable) {
  if (id.empty()) {
    return Error{Errc::UnknownHost, "empty host id"};
  }
  auto [it, inserted] = hosts_.try_emplace(id);
  if (!inserted) {
    return Error{Errc::DuplicateHost, id};
  }
  it->second.spoof_capable = spoof_capable;
  return ok_status();
}

Status Network::join_multicast(const HostId& id, const std::string& group) {
  auto it = hosts_.find(id);
  if (it == hosts_.end()) {
    return Error{Errc::UnknownHost, id};
  }
  it->second.groups.insert(group);
  groups_[group].insert(id);
  return ok_status();
}

Status Network::set_handler(const HostId& id, Handler handler) {
  auto it = hosts_.find(id);
  if (it == hosts_.end()) {
    return Error{Errc::UnknownHost, id};
  }
  it->second.handler = std::move(handler);
  return ok_status();
}

Status Network::send(const HostId& from, SimPacket pkt) {
  return send_attributed(from, std::move(pkt), in_flight_seq_);
}

Status Network::send_attributed(const HostId& from, SimPacket pkt,
                                std::uint64_t parent_seq) {
  auto it = hosts_.find(from);
  if (it == hosts_.end()) {
    return Error{Errc::UnknownHost, from};
  }
  if (pkt.src.empty()) {
    pkt.src = from;
  }
  if (pkt.src != from && !it->second.spoof_capable) {
    return Error{Errc::SpoofDenied, from + " as " + pkt.src};
  }
  if (pkt.payload.size() > kMaxDatagramBytes) {
    return Error{Errc::PayloadTooLarge, std::to_string(pkt.payload.size())};
  }
  pkt.true_src = from;
  pkt.send_time = now_;
  pkt.seq = next_seq_++;
  pkt.parent_seq = parent_seq;
  packets_.emplace_back(parent_seq, from);
  root_cache_.push_back(0);

  auto bytes = static_cast<std::int64_t>(pkt.payload.size());
  it->second.metrics.bytes_out += bytes;
  it->second.metrics.msgs_out += 1;

  std::string dst_label = pkt.dst.kind == Destination::Kind::Multicast
                              ? "*" + pkt.dst.target
                              : pkt.dst.target;
  events_.push_back(
      {now_, pkt.seq, pkt.true_src, pkt.src, dst_label, bytes, "send"});

  if (pkt.dst.kind == Destination::Kind::Multicast) {
    auto git = groups_.find(pkt.dst.target);
    if (git != groups_.end()) {
      // std::set iteration is sorted, so fan-out order is deterministic.
      for (const HostId& member : git->second) {
        Status st = enqueue_delivery(pkt, member);
        if (st) {
          return st;
        }
      }
    }
    return ok_status();
  }
  return enqueue_delivery(pkt, pkt.dst.target);
}

Status Network::enqueue_delivery(SimPacket pkt, const HostId& to) {
  Entry entry;
  entry.at = now_ + kLinkLatency;
  entry.order = next_order_++;
  entry.to = to;
  entry.packet = std::move(pkt);
  queue_[entry.at].push_back(std::move(entry));
  return ok_status();
}

void Network::schedule(Tick at, std::function<void(Network&)> fn) {
  Entry entry;
  entry.at = at < now_ ? now_ : at;
  entry.order = next_order_++;
  entry.timer = std::move(fn);
  queue_[entry.at].push_back(std::move(entry));
}

void Network::run_until(Tick t) {
  while (!queue_.empty()) {
    auto qit = queue_.begin();
    if (qit->first > t) {
      break;
    }
    now_ = qit->first;
    // Entries admitted while processing this tick land at now_+1 or later,
    // so draining the bucket by admission order is stable.
    std::vector<Entry> bucket = std::move(qit->second);
    queue_.erase(qit);
    for (Entry& entry : bucket) {
      if (entry.packet) {
        deliver(entry);
      } else {
        entry.timer(*this);
      }
    }
  }
  if (now_ < t) {
    now_ = t;
  }
}

void Network::deliver(const Entry& entry) {
  const SimPacket& pkt = *entry.packet;
  auto bytes = static_cast<std::int64_t>(pkt.payload.size());
  auto it = hosts_.find(entry.to);
  if (it == hosts_.end()) {
    dropped_ += 1;
    events_.push_back(
        {now_, pkt.seq, pkt.true_src, pkt.src, entry.to, bytes, "drop"});
    return;
  }
  it->second.metrics.bytes_in += bytes;
  it->second.metrics.msgs_in += 1;
  events_.push_back(
      {now_, pkt.seq, pkt.true_src, pkt.src, entry.to, bytes, "recv"});
  if (it->second.handler) {
    std::uint64_t saved = in_flight_seq_;
    in_flight_seq_ = pkt.seq;
    it->second.handler(*this, entry.to, pkt);
    in_flight_seq_ = saved;
  }
}

const HostMetrics& Network::metrics(const HostId& id) const {
  static const HostMetrics kEmpty{};
  auto it = hosts_.find(id);
  return it == hosts_.end() ? kEmpty : it->second.metrics;
}

std::string log_event_line(const LogEvent& e) {
  std::ostringstream out;
  out << e.tick << ',' << e.seq << ',' << e.true_src << ',' << e.claimed_src
      << ',' << e.dst << ',' << e.bytes << ',' << e.kind;
  return out.str();
}

std::string Network::export_log() const {
  std::string out;
  for (const LogEvent& e : events_) {
    out += log_event_line(e);
    out += '\n';
  }
  return out;
}

std::uint64_t Network::root_of(std::uint64_t seq) const {
  // packets_[seq-1] = (parent_seq, true_src). Walk up with path compression.
  std::uint64_t cur = seq;
  while (true) {
    std::uint64_t cached = root_cache_[cur - 1];
    if (cached != 0) {
      cur = cached;
      break;
    }
    std::uint64_t parent = packets_[cur - 1].first;
    if (parent == 0) {
      break;
    }
    cur = parent;
  }
  std::uint64_t root = cur;
  cur = seq;
  while (cur != root) {
    std::uint64_t next = root_cache_[cur - 1] != 0 ? root_cache_[cur - 1]
                                                   : packets_[cur - 1].first;
    root_cache_[cur - 1] = root;
    cur = next;
  }
  return root;
}

Expected<Ratio> Network::amplification_factor(const HostId& attacker,
                                              const HostId& victim) const {
  std::int64_t sent = 0;
  std::int64_t reflected = 0;
  for (const LogEvent& e : events_) {
    if (e.kind == "send" && e.true_src == attacker &&
        packets_[e.seq - 1].first == 0) {
      sent += e.bytes;
    }
    if (e.kind == "recv" && e.dst == victim &&
        packets_[e.seq - 1].first != 0) {
      std::uint64_t root = root_of(e.seq);
      if (packets_[root - 1].second == attacker) {
        reflected += e.bytes;
      }
    }
  }
  if (sent == 0) {
    return make_error(Errc::DivisionByZero,
                      attacker + " originated no traffic");
  }
  return Ratio(reflected, sent);
}

}  // namespace upnplab
