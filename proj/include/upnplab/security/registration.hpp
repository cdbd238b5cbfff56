// Enrollment and registration: a Certification Authority that issues
// multi-signed specification documents, and a Registration Authority that
// verifies them, challenges for proof of key ownership, evaluates the ABAC
// policy, and issues capability tokens.
#pragma once

#include <random>
#include <set>

#include "upnplab/error.hpp"
#include "upnplab/security/abac.hpp"
#include "upnplab/security/credentials.hpp"
#include "upnplab/security/crypto.hpp"

namespace upnplab {

inline constexpr Tick kTokenLifetime = 10000;

class CertificationAuthority {
 public:
  explicit CertificationAuthority(KeyPair keys) : keys_(std::move(keys)) {}

  // Builds the document and applies both signatures in order: the owner
  // signs the content, then the CA signs content + owner signature.
  // Errors: EmptyAttributes, MalformedKey, BadKey (unusable attribute key).
  Expected<SpecificationDocument> enroll(
      const KeyPair& owner_keys, const std::string& subject_id,
      const std::map<std::string, std::string>& hardware_attrs,
      const std::map<std::string, std::string>& software_attrs) const;

  const Bytes& public_key() const { return keys_.public_key; }

 private:
  KeyPair keys_;
};

// True iff both signatures verify in signing order: the owner signature over
// the content and the CA signature over content + owner signature.
bool verify_specification(const SpecificationDocument& doc, const Bytes& ca_public);

// The ownership proof is the challenge nonce signed with the private key
// matching doc.subject_public_key.
Expected<Bytes> prove_ownership(const Bytes& owner_private, const Bytes& nonce);

class RegistrationAuthority {
 public:
  RegistrationAuthority(KeyPair keys, AbacPolicy policy,
                        Tick token_lifetime = kTokenLifetime)
      : keys_(std::move(keys)),
        policy_(std::move(policy)),
        token_lifetime_(token_lifetime) {}

  // Draws a fresh random nonce and records it as outstanding.
  Bytes challenge(std::mt19937_64& rng);

  // Bookkeeping entry point behind challenge(); rejects a nonce this RA has
  // already handed out. Errors: NonceReuse.
  Expected<Bytes> issue_nonce(Bytes nonce);

  // Registration gate: specification verifies under ca_public, the proof
  // solves one outstanding challenge with the document's key (the nonce is
  // consumed), and the ABAC grant is non-empty. The token carries exactly
  // the granted set. Errors: SpecInvalid, OwnershipFailed, NothingGranted,
  // InvariantViolation (malformed requested permission), BadAttrPath.
  Expected<CapToken> register_participant(const SpecificationDocument& doc,
                                          const PermissionSet& requested,
                                          const Bytes& proof, Tick now,
                                          const Bytes& ca_public);

  const Bytes& public_key() const { return keys_.public_key; }
  const AbacPolicy& policy() const { return policy_; }

 private:
  KeyPair keys_;
  AbacPolicy policy_;
  Tick token_lifetime_;
  std::set<Bytes> outstanding_;
  std::set<Bytes> retired_;
};

}  // namespace upnplab
