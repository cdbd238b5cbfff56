// Credential objects of the access-control scheme: permissions, the
// owner-and-CA multi-signed specification document stating a participant's
// hardware/software attributes, and the RA-signed capability token listing
// its permitted operations. All signatures are computed over the canonical
// tree encoding, so signing bytes are reproducible everywhere.
#pragma once

#include <map>
#include <set>
#include <string>

#include "upnplab/error.hpp"
#include "upnplab/types.hpp"
#include "upnplab/wire/canonical.hpp"

namespace upnplab {

enum class Verb { Advertise, Discover, Invoke, Subscribe };

std::string_view verb_name(Verb verb);                  // "ADVERTISE", ...
Expected<Verb> verb_from_string(std::string_view name);

// Targets: a service type for ADVERTISE / DISCOVER / SUBSCRIBE, or
// "service_type:action" for INVOKE. The "*" wildcard is allowed only for
// DISCOVER.
struct Permission {
  Verb verb = Verb::Discover;
  std::string target;

  auto operator<=>(const Permission&) const = default;
};

using PermissionSet = std::set<Permission>;

// Errors: InvariantViolation (empty target, wildcard outside DISCOVER).
Status validate_permission(const Permission& p);

struct SpecificationDocument {
  std::string subject_id;
  Bytes subject_public_key;
  std::map<std::string, std::string> hardware_attrs;
  std::map<std::string, std::string> software_attrs;
  // Signing order is owner-then-CA: the owner signs the content, the CA
  // signs content plus owner signature, endorsing the ownership proof.
  Bytes owner_signature;
  Bytes ca_signature;

  bool operator==(const SpecificationDocument&) const = default;
};

// Canonical bytes the owner signs (all content fields, no signatures) and
// the CA signs (content plus owner signature).
Bytes spec_doc_owner_signing_bytes(const SpecificationDocument& doc);
Bytes spec_doc_ca_signing_bytes(const SpecificationDocument& doc);

Expected<Bytes> encode_spec_doc(const SpecificationDocument& doc);
Expected<SpecificationDocument> decode_spec_doc(const Bytes& raw);

struct CapToken {
  std::string subject_id;
  Bytes subject_public_key;
  PermissionSet permissions;
  Tick issued_at = 0;
  Tick expires_at = 0;
  Bytes ra_signature;

  bool operator==(const CapToken&) const = default;
};

// Canonical bytes covered by the RA signature (everything but the signature).
Bytes cap_token_signing_bytes(const CapToken& token);

Expected<Bytes> encode_cap_token(const CapToken& token);
// Structural decode; semantic checks (expiry, signature) belong to
// verify_operation. Errors: MalformedDocument plus the canonical-decode
// error set.
Expected<CapToken> decode_cap_token(const Bytes& raw);

}  // namespace upnplab
