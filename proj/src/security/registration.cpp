#include "upnplab/security/registration.hpp"

namespace upnplab {

Expected<SpecificationDocument> CertificationAuthority::enroll(
    const KeyPair& owner_keys, const std::string& subject_id,
    const std::map<std::string, std::string>& hardware_attrs,
    const std::map<std::string, std::string>& software_attrs) const {
  if (hardware_attrs.empty() || software_attrs.empty()) {
    return make_error(Errc::EmptyAttributes, subject_id);
  }
  SpecificationDocument doc;
  doc.subject_id = subject_id;
  doc.subject_public_key = owner_keys.public_key;
  doc.hardware_attrs = hardware_attrs;
  doc.software_attrs = software_attrs;

  // Reject attribute keys the canonical encoding cannot carry before
  // signing anything.
  auto content = encode_canonical([&] {
    DocTree probe = DocTree::object();
    for (const auto& [k, v] : hardware_attrs) probe[k] = v;
    for (const auto& [k, v] : software_attrs) probe[k] = v;
    return probe;
  }());
  if (!content.ok()) return content.error();

  auto owner_sig = sign(owner_keys.private_key, spec_doc_owner_signing_bytes(doc));
  if (!owner_sig.ok()) return owner_sig.error();
  doc.owner_signature = owner_sig.value();

  auto ca_sig = sign(keys_.private_key, spec_doc_ca_signing_bytes(doc));
  if (!ca_sig.ok()) return ca_sig.error();
  doc.ca_signature = ca_sig.value();
  return doc;
}

bool verify_specification(const SpecificationDocument& doc, const Bytes& ca_public) {
  if (!verify(doc.subject_public_key, spec_doc_owner_signing_bytes(doc),
              doc.owner_signature)) {
    return false;
  }
  return verify(ca_public, spec_doc_ca_signing_bytes(doc), doc.ca_signature);
}

Expected<Bytes> prove_ownership(const Bytes& owner_private, const Bytes& nonce) {
  return sign(owner_private, nonce);
}

Bytes RegistrationAuthority::challenge(std::mt19937_64& rng) {
  while (true) {
    Bytes nonce;
    nonce.reserve(32);
    for (int i = 0; i < 4; ++i) {
      std::uint64_t word = rng();
      for (int b = 0; b < 8; ++b) {
        nonce.push_back(static_cast<char>((word >> (8 * b)) & 0xff));
      }
    }
    if (auto issued = issue_nonce(std::move(nonce)); issued.ok()) {
      return issued.value();
    }
    // Astronomically unlikely collision with an earlier nonce: draw again.
  }
}

Expected<Bytes> RegistrationAuthority::issue_nonce(Bytes nonce) {
  if (outstanding_.count(nonce) || retired_.count(nonce)) {
    return make_error(Errc::NonceReuse, hex_encode(nonce));
  }
  outstanding_.insert(nonce);
  return nonce;
}

Expected<CapToken> RegistrationAuthority::register_participant(
    const SpecificationDocument& doc, const PermissionSet& requested,
    const Bytes& proof, Tick now, const Bytes& ca_public) {
  if (!verify_specification(doc, ca_public)) {
    return make_error(Errc::SpecInvalid, doc.subject_id);
  }

  // The proof must solve one of the currently outstanding challenges with
  // the key named in the document. A solved nonce is consumed: replaying
  // the proof later fails against every remaining challenge.
  std::optional<Bytes> solved;
  for (const Bytes& nonce : outstanding_) {
    if (verify(doc.subject_public_key, nonce, proof)) {
      solved = nonce;
      break;
    }
  }
  if (!solved) {
    return make_error(Errc::OwnershipFailed, doc.subject_id);
  }
  outstanding_.erase(*solved);
  retired_.insert(std::move(*solved));

  for (const Permission& p : requested) {
    if (Status st = validate_permission(p)) return *st;
  }
  auto granted = abac_evaluate(policy_, doc, requested);
  if (!granted.ok()) return granted.error();
  if (granted.value().empty()) {
    return make_error(Errc::NothingGranted, doc.subject_id);
  }

  CapToken token;
  token.subject_id = doc.subject_id;
  token.subject_public_key = doc.subject_public_key;
  token.permissions = granted.value();
  token.issued_at = now;
  token.expires_at = now + token_lifetime_;
  auto sig = sign(keys_.private_key, cap_token_signing_bytes(token));
  if (!sig.ok()) return sig.error();
  token.ra_signature = sig.value();
  return token;
}

}  // namespace upnplab
