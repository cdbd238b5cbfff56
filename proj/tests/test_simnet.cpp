#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "doctest.h"
#include "upnplab/simnet/network.hpp"

using namespace upnplab;

namespace {

SimPacket unicast_to(const HostId& src, const HostId& dst, Bytes payload) {
  SimPacket pkt;
  pkt.src = src;
  pkt.dst = Destination::unicast(dst);
  pkt.payload = std::move(payload);
  return pkt;
}

SimPacket multicast_to(const HostId& src, const std::string& group,
                       Bytes payload) {
  SimPacket pkt;
  pkt.src = src;
  pkt.dst = Destination::multicast(group);
  pkt.payload = std::move(payload);
  return pkt;
}

}  // namespace

TEST_SUITE("simnet") {

TEST_CASE("fresh hosts start with zero metrics") {
  Network net(1);
  REQUIRE_FALSE(net.create_host("h1").has_value());
  const HostMetrics& m = net.metrics("h1");
  CHECK(m.bytes_in == 0);
  CHECK(m.bytes_out == 0);
  CHECK(m.msgs_in == 0);
  CHECK(m.msgs_out == 0);
}

TEST_CASE("host ids must be unique and non-empty") {
  Network net(1);
  REQUIRE_FALSE(net.create_host("h1").has_value());
  Status dup = net.create_host("h1");
  REQUIRE(dup.has_value());
  CHECK(dup->code == Errc::DuplicateHost);
  CHECK(net.create_host("")->code == Errc::UnknownHost);
}

TEST_CASE("sending requires a registered host") {
  Network net(1);
  net.create_host("h1");
  Status st = net.send("ghost", unicast_to("ghost", "h1", "x"));
  REQUIRE(st.has_value());
  CHECK(st->code == Errc::UnknownHost);
}

TEST_CASE("spoofing is denied unless the host was created spoof-capable") {
  Network net(1);
  net.create_host("honest");
  net.create_host("sneaky", /*spoof_capable=*/true);
  net.create_host("victim");
  net.create_host("sink");

  Status denied = net.send("honest", unicast_to("victim", "sink", "x"));
  REQUIRE(denied.has_value());
  CHECK(denied->code == Errc::SpoofDenied);

  HostId seen_src;
  net.set_handler("sink", [&](Network&, const HostId&, const SimPacket& pkt) {
    seen_src = pkt.src;
  });
  REQUIRE_FALSE(net.send("sneaky", unicast_to("victim", "sink", "x")).has_value());
  net.run_until(2);
  CHECK(seen_src == "victim");

  // The log keeps the true sender: spoofed claimed sources appear only on
  // packets whose true sender is spoof-capable.
  for (const LogEvent& e : net.events()) {
    if (e.true_src != e.claimed_src) CHECK(e.true_src == "sneaky");
  }
}

TEST_CASE("empty claimed source defaults to the sender") {
  Network net(1);
  net.create_host("a");
  net.create_host("b");
  SimPacket pkt;
  pkt.dst = Destination::unicast("b");
  pkt.payload = "hello";
  HostId seen;
  net.set_handler("b", [&](Network&, const HostId&, const SimPacket& p) {
    seen = p.src;
  });
  REQUIRE_FALSE(net.send("a", std::move(pkt)).has_value());
  net.run_until(2);
  CHECK(seen == "a");
}

TEST_CASE("multicast conserves bytes: each member receives one full copy") {
  Network net(7);
  const std::vector<HostId> members = {"sd1", "sd2", "sd3", "sd4"};
  net.create_host("src");
  for (const HostId& m : members) {
    net.create_host(m);
    REQUIRE_FALSE(net.join_multicast(m, "ssdp").has_value());
  }
  net.create_host("outsider");

  const Bytes payload(100, 'p');
  REQUIRE_FALSE(net.send("src", multicast_to("src", "ssdp", payload)).has_value());
  net.run_until(3);

  std::int64_t total_in = 0;
  for (const HostId& m : members) {
    CHECK(net.metrics(m).bytes_in == 100);
    CHECK(net.metrics(m).msgs_in == 1);
    total_in += net.metrics(m).bytes_in;
  }
  CHECK(total_in == 100 * static_cast<std::int64_t>(members.size()));
  CHECK(net.metrics("outsider").msgs_in == 0);
  // One send, one bytes_out increment on the true sender.
  CHECK(net.metrics("src").bytes_out == 100);
  CHECK(net.metrics("src").msgs_out == 1);
  // The sender itself did not join, so no loopback copy.
  CHECK(net.metrics("src").msgs_in == 0);
}

TEST_CASE("a sender that joined the group receives its own multicast") {
  Network net(7);
  net.create_host("a");
  net.create_host("b");
  net.join_multicast("a", "g");
  net.join_multicast("b", "g");
  int a_got = 0;
  net.set_handler("a", [&](Network&, const HostId&, const SimPacket&) {
    ++a_got;
  });
  net.send("a", multicast_to("a", "g", "x"));
  net.run_until(2);
  CHECK(a_got == 1);
  CHECK(net.metrics("a").msgs_in == 1);
}

TEST_CASE("double join is idempotent: still a single copy") {
  Network net(7);
  net.create_host("src");
  net.create_host("m");
  REQUIRE_FALSE(net.join_multicast("m", "g").has_value());
  REQUIRE_FALSE(net.join_multicast("m", "g").has_value());
  net.send("src", multicast_to("src", "g", "xy"));
  net.run_until(2);
  CHECK(net.metrics("m").msgs_in == 1);
  // Delivery-count oracle straight from the log.
  int recv_events = 0;
  for (const LogEvent& e : net.events())
    if (e.kind == "recv" && e.dst == "m") ++recv_events;
  CHECK(recv_events == 1);
}

TEST_CASE("unicast to self is delivered next tick") {
  Network net(7);
  net.create_host("a");
  Tick got_at = -1;
  net.set_handler("a", [&](Network& n, const HostId&, const SimPacket&) {
    got_at = n.now();
  });
  net.send("a", unicast_to("a", "a", "z"));
  net.run_until(5);
  CHECK(got_at == kLinkLatency);
}

TEST_CASE("unicast to an absent host is dropped and counted") {
  Network net(7);
  net.create_host("a");
  net.send("a", unicast_to("a", "nobody", "x"));
  net.run_until(2);
  CHECK(net.dropped() == 1);
  bool drop_logged = false;
  for (const LogEvent& e : net.events())
    if (e.kind == "drop" && e.dst == "nobody") drop_logged = true;
  CHECK(drop_logged);
}

TEST_CASE("payloads above the datagram cap are rejected") {
  Network net(7);
  net.create_host("a");
  net.create_host("b");
  Status st = net.send("a", unicast_to("a", "b", Bytes(kMaxDatagramBytes + 1, 'x')));
  REQUIRE(st.has_value());
  CHECK(st->code == Errc::PayloadTooLarge);
  CHECK_FALSE(
      net.send("a", unicast_to("a", "b", Bytes(kMaxDatagramBytes, 'x'))).has_value());
}

TEST_CASE("an empty network yields an empty log") {
  Network net(7);
  net.run_until(100);
  CHECK(net.events().empty());
  CHECK(net.export_log().empty());
}

TEST_CASE("same-tick packets are delivered in send order") {
  Network net(7);
  net.create_host("a");
  net.create_host("b");
  std::vector<Bytes> order;
  net.set_handler("b", [&](Network&, const HostId&, const SimPacket& p) {
    order.push_back(p.payload);
  });
  net.send("a", unicast_to("a", "b", "first"));
  net.send("a", unicast_to("a", "b", "second"));
  net.send("a", unicast_to("a", "b", "third"));
  net.run_until(2);
  REQUIRE(order.size() == 3);
  CHECK(order[0] == "first");
  CHECK(order[1] == "second");
  CHECK(order[2] == "third");
}

TEST_CASE("every delivery happens exactly one tick after its send") {
  Network net(9);
  net.create_host("a");
  net.create_host("b");
  net.create_host("c");
  net.join_multicast("b", "g");
  net.join_multicast("c", "g");
  // A small cascade: b echoes whatever it hears back to a.
  net.set_handler("b", [](Network& n, const HostId& self, const SimPacket& p) {
    if (p.true_src != self) n.send(self, unicast_to(self, "a", p.payload));
  });
  net.send("a", multicast_to("a", "g", "ping"));
  net.schedule(3, [](Network& n) {
    n.send("c", multicast_to("c", "g", "pong"));
  });
  net.run_until(10);

  std::map<std::uint64_t, Tick> send_tick;
  for (const LogEvent& e : net.events())
    if (e.kind == "send") send_tick[e.seq] = e.tick;
  int recvs = 0;
  for (const LogEvent& e : net.events()) {
    if (e.kind != "recv") continue;
    ++recvs;
    REQUIRE(send_tick.count(e.seq));
    CHECK(e.tick == send_tick[e.seq] + kLinkLatency);
  }
  CHECK(recvs > 2);
}

TEST_CASE("per-packet conservation: metrics equal the event-log sums") {
  Network net(11);
  net.create_host("a");
  net.create_host("b");
  net.create_host("c");
  net.join_multicast("a", "g");
  net.join_multicast("b", "g");
  net.send("a", multicast_to("a", "g", Bytes(10, 'x')));
  net.send("b", unicast_to("b", "c", Bytes(3, 'y')));
  net.send("c", unicast_to("c", "gone", Bytes(5, 'z')));
  net.run_until(4);

  std::map<HostId, std::int64_t> in_bytes, out_bytes;
  for (const LogEvent& e : net.events()) {
    if (e.kind == "send") out_bytes[e.true_src] += e.bytes;
    if (e.kind == "recv") in_bytes[e.dst] += e.bytes;
  }
  for (const HostId& h : {HostId("a"), HostId("b"), HostId("c")}) {
    CHECK(net.metrics(h).bytes_in == in_bytes[h]);
    CHECK(net.metrics(h).bytes_out == out_bytes[h]);
  }
  // The drop neither delivered bytes nor charged a receiver.
  CHECK(in_bytes.count("gone") == 0);
}

TEST_CASE("timers scheduled in the past fire at the current time") {
  Network net(3);
  std::vector<int> fired;
  net.schedule(5, [&](Network& n) {
    fired.push_back(1);
    // now() is 5; asking for 2 must still run (at 5, after this handler).
    n.schedule(2, [&](Network&) { fired.push_back(2); });
  });
  net.run_until(10);
  CHECK(fired == std::vector<int>{1, 2});
}

TEST_CASE("identical seeds and scripts give byte-identical logs") {
  auto script = [](Network& net) {
    net.create_host("a");
    net.create_host("b", true);
    net.create_host("v");
    net.join_multicast("a", "g");
    net.join_multicast("b", "g");
    net.set_handler("a", [](Network& n, const HostId& self, const SimPacket& p) {
      if (p.true_src != self)
        n.send(self, unicast_to(self, p.src, Bytes(30, 'r')));
    });
    net.send("b", multicast_to("v", "g", Bytes(10, 'q')));
    net.schedule(4, [](Network& n) {
      n.send("a", multicast_to("a", "g", Bytes(7, 'w')));
    });
    net.run_until(12);
  };
  Network n1(42), n2(42), n3(43);
  script(n1);
  script(n2);
  script(n3);
  CHECK(n1.export_log() == n2.export_log());
  // A different seed still gives the same packet trace here (no randomness
  // consumed), so determinism does not hinge on the seed value itself.
  CHECK(n1.export_log() == n3.export_log());
  CHECK_FALSE(n1.export_log().empty());
}

TEST_CASE("log lines carry the documented comma format") {
  Network net(1);
  net.create_host("a");
  net.create_host("b");
  net.send("a", unicast_to("a", "b", "xyz"));
  net.run_until(2);
  REQUIRE(net.events().size() == 2);
  CHECK(log_event_line(net.events()[0]) == "0,1,a,a,b,3,send");
  CHECK(log_event_line(net.events()[1]) == "1,1,a,a,b,3,recv");
  CHECK(net.export_log() == "0,1,a,a,b,3,send\n1,1,a,a,b,3,recv\n");
}

TEST_CASE("amplification: one reflector, 300-byte reply to 100-byte trigger") {
  Network net(5);
  net.create_host("atk", true);
  net.create_host("sd");
  net.create_host("vic");
  net.set_handler("sd", [](Network& n, const HostId& self, const SimPacket& p) {
    n.send(self, unicast_to(self, p.src, Bytes(300, 'r')));
  });
  net.send("atk", unicast_to("vic", "sd", Bytes(100, 'q')));
  net.run_until(4);

  auto factor = net.amplification_factor("atk", "vic");
  REQUIRE(factor.ok());
  CHECK(factor.value() == Ratio(3, 1));
  CHECK(net.metrics("vic").bytes_in == 300);
}

TEST_CASE("amplification: N reflectors yield N*r/q") {
  for (std::int64_t n_sds : {1, 2, 5}) {
    Network net(5);
    net.create_host("atk", true);
    net.create_host("vic");
    for (std::int64_t i = 0; i < n_sds; ++i) {
      HostId sd = "sd" + std::to_string(i);
      net.create_host(sd);
      net.join_multicast(sd, "g");
      net.set_handler(sd, [](Network& n, const HostId& self, const SimPacket& p) {
        n.send(self, unicast_to(self, p.src, Bytes(300, 'r')));
      });
    }
    net.send("atk", multicast_to("vic", "g", Bytes(100, 'q')));
    net.run_until(5);
    auto factor = net.amplification_factor("atk", "vic");
    REQUIRE(factor.ok());
    CHECK(factor.value() == Ratio(n_sds * 300, 100));
  }
}

TEST_CASE("amplification without spoofing: attacker as its own victim") {
  Network net(5);
  net.create_host("atk");
  net.create_host("sd");
  net.set_handler("sd", [](Network& n, const HostId& self, const SimPacket& p) {
    n.send(self, unicast_to(self, p.src, Bytes(300, 'r')));
  });
  net.send("atk", unicast_to("atk", "sd", Bytes(100, 'q')));
  net.run_until(4);
  auto factor = net.amplification_factor("atk", "atk");
  REQUIRE(factor.ok());
  CHECK(factor.value() == Ratio(3, 1));
}

TEST_CASE("amplification counts only chains rooted at the attacker") {
  Network net(5);
  net.create_host("atk", true);
  net.create_host("sd");
  net.create_host("noise");
  net.create_host("vic");
  net.set_handler("sd", [](Network& n, const HostId& self, const SimPacket& p) {
    n.send(self, unicast_to(self, p.src, Bytes(200, 'r')));
  });
  net.send("atk", unicast_to("vic", "sd", Bytes(100, 'q')));
  // Unrelated traffic to the victim must not inflate the factor.
  net.send("noise", unicast_to("noise", "vic", Bytes(999, 'n')));
  net.schedule(3, [](Network& n) {
    n.send("noise", unicast_to("noise", "vic", Bytes(50, 'n')));
  });
  net.run_until(6);
  auto factor = net.amplification_factor("atk", "vic");
  REQUIRE(factor.ok());
  CHECK(factor.value() == Ratio(2, 1));
}

TEST_CASE("amplification with a silent attacker is a division error") {
  Network net(5);
  net.create_host("atk");
  net.create_host("vic");
  net.run_until(2);
  auto factor = net.amplification_factor("atk", "vic");
  REQUIRE_FALSE(factor.ok());
  CHECK(factor.error().code == Errc::DivisionByZero);
}

TEST_CASE("ratios reduce and normalize sign") {
  CHECK(Ratio(342, 104) == Ratio(171, 52));
  CHECK(ratio_to_string(Ratio(342, 104)) == "171/52");
  CHECK(Ratio(0, 17) == Ratio(0, 1));
  CHECK(Ratio(-4, -2) == Ratio(2, 1));
  Ratio flipped(4, -2);
  CHECK(flipped.num == -2);
  CHECK(flipped.den == 1);
  CHECK(ratio_to_string(Ratio(15, 1)) == "15/1");
}

TEST_CASE("handlers see their own id and the network clock") {
  Network net(5);
  net.create_host("a");
  net.create_host("b");
  HostId observed;
  net.set_handler("b", [&](Network&, const HostId& self, const SimPacket&) {
    observed = self;
  });
  CHECK(net.set_handler("ghost", nullptr).has_value());
  net.send("a", unicast_to("a", "b", "x"));
  net.run_until(2);
  CHECK(observed == "b");
  CHECK(net.now() == 2);
}

}  // TEST_SUITE
