#include <random>

#include "doctest.h"
#include "upnplab/security/credentials.hpp"
#include "upnplab/security/crypto.hpp"
#include "upnplab/types.hpp"

using namespace upnplab;

namespace {

CapToken sample_token() {
  CapToken token;
  token.subject_id = "cam0";
  token.subject_public_key = Bytes(32, 'p');
  token.permissions = {{Verb::Advertise, "urn:SecurityCamera"},
                       {Verb::Discover, "*"}};
  token.issued_at = 5;
  token.expires_at = 10005;
  token.ra_signature = Bytes(64, 's');
  return token;
}

SpecificationDocument sample_doc() {
  SpecificationDocument doc;
  doc.subject_id = "cam0";
  doc.subject_public_key = Bytes(32, 'p');
  doc.hardware_attrs = {{"sensor", "imaging"}, {"zone", "home"}};
  doc.software_attrs = {{"svc", "urn:SecurityCamera"}};
  doc.owner_signature = Bytes(64, 'o');
  doc.ca_signature = Bytes(64, 'c');
  return doc;
}

}  // namespace

TEST_SUITE("credentials") {

TEST_CASE("verb names round-trip") {
  for (Verb v : {Verb::Advertise, Verb::Discover, Verb::Invoke, Verb::Subscribe}) {
    auto back = verb_from_string(verb_name(v));
    REQUIRE(back.ok());
    CHECK(back.value() == v);
  }
  CHECK(verb_name(Verb::Advertise) == "ADVERTISE");
  CHECK_FALSE(verb_from_string("advertise").ok());
  CHECK_FALSE(verb_from_string("").ok());
}

TEST_CASE("permission validation allows the wildcard only for DISCOVER") {
  CHECK_FALSE(validate_permission({Verb::Discover, "*"}).has_value());
  CHECK_FALSE(validate_permission({Verb::Discover, "urn:X"}).has_value());
  CHECK_FALSE(
      validate_permission({Verb::Invoke, "urn:X:GetStatus"}).has_value());
  CHECK(validate_permission({Verb::Advertise, "*"})->code ==
        Errc::InvariantViolation);
  CHECK(validate_permission({Verb::Subscribe, "*"})->code ==
        Errc::InvariantViolation);
  CHECK(validate_permission({Verb::Invoke, "*"})->code ==
        Errc::InvariantViolation);
  CHECK(validate_permission({Verb::Advertise, ""})->code ==
        Errc::InvariantViolation);
}

TEST_CASE("spec document signing bytes separate owner and ca scopes") {
  SpecificationDocument doc = sample_doc();
  Bytes owner_bytes = spec_doc_owner_signing_bytes(doc);
  Bytes ca_bytes = spec_doc_ca_signing_bytes(doc);
  CHECK(owner_bytes != ca_bytes);

  // The owner's bytes ignore both signatures; the CA's bytes cover the
  // owner signature but not its own.
  SpecificationDocument resigned = doc;
  resigned.owner_signature = Bytes(64, 'O');
  resigned.ca_signature = Bytes(64, 'C');
  CHECK(spec_doc_owner_signing_bytes(resigned) == owner_bytes);
  CHECK(spec_doc_ca_signing_bytes(resigned) != ca_bytes);
  SpecificationDocument ca_only = doc;
  ca_only.ca_signature = Bytes(64, 'C');
  CHECK(spec_doc_ca_signing_bytes(ca_only) == ca_bytes);

  // Any content change moves both.
  SpecificationDocument edited = doc;
  edited.hardware_attrs["sensor"] = "thermal";
  CHECK(spec_doc_owner_signing_bytes(edited) != owner_bytes);
  CHECK(spec_doc_ca_signing_bytes(edited) != ca_bytes);
}

TEST_CASE("spec documents round-trip through canonical bytes") {
  SpecificationDocument doc = sample_doc();
  auto encoded = encode_spec_doc(doc);
  REQUIRE(encoded.ok());
  auto decoded = decode_spec_doc(encoded.value());
  REQUIRE(decoded.ok());
  CHECK(decoded.value() == doc);
}

TEST_CASE("cap tokens round-trip through canonical bytes") {
  CapToken token = sample_token();
  auto encoded = encode_cap_token(token);
  REQUIRE(encoded.ok());
  auto decoded = decode_cap_token(encoded.value());
  REQUIRE(decoded.ok());
  CHECK(decoded.value() == token);
}

TEST_CASE("token signing bytes exclude the signature itself") {
  CapToken token = sample_token();
  Bytes bytes = cap_token_signing_bytes(token);
  CapToken resigned = token;
  resigned.ra_signature = Bytes(64, 'S');
  CHECK(cap_token_signing_bytes(resigned) == bytes);

  CapToken edited = token;
  edited.expires_at += 1;
  CHECK(cap_token_signing_bytes(edited) != bytes);

  CapToken extra = token;
  extra.permissions.insert({Verb::Subscribe, "urn:SecurityCamera"});
  CHECK(cap_token_signing_bytes(extra) != bytes);
}

TEST_CASE("structural decode rejects junk and foreign shapes") {
  CHECK_FALSE(decode_cap_token("not canonical").ok());
  CHECK_FALSE(decode_cap_token("a=1\n").ok());
  CHECK_FALSE(decode_spec_doc("a=1\n").ok());

  // A valid *token* encoding is not a valid *document* encoding.
  auto token_bytes = encode_cap_token(sample_token());
  REQUIRE(token_bytes.ok());
  CHECK_FALSE(decode_spec_doc(token_bytes.value()).ok());
  auto doc_bytes = encode_spec_doc(sample_doc());
  REQUIRE(doc_bytes.ok());
  CHECK_FALSE(decode_cap_token(doc_bytes.value()).ok());
}

TEST_CASE("hex helpers round-trip and reject junk") {
  const Bytes raw("\x00\x7f\xff\x10 data", 9);
  std::string hex = hex_encode(raw);
  auto back = hex_decode(hex);
  REQUIRE(back.ok());
  CHECK(back.value() == raw);
  CHECK_FALSE(hex_decode("zz").ok());
  CHECK_FALSE(hex_decode("abc").ok());  // odd length
  auto empty = hex_decode("");
  REQUIRE(empty.ok());
  CHECK(empty.value().empty());
}

}  // TEST_SUITE
