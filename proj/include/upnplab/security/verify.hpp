// Per-operation verification: the pure decision function every secured
// handler calls before acting, plus the audit log that makes denials
// observable and the shared per-simulation security context.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "upnplab/security/credentials.hpp"
#include "upnplab/types.hpp"

namespace upnplab {

enum class Decision {
  Permit,
  DenyExpired,
  DenyForged,
  DenySubjectMismatch,
  DenyInsufficient,
};

std::string_view decision_name(Decision d);

// Local verification against the provisioned RA public key — no RA
// round-trip. Permit iff the RA signature over the token's canonical bytes
// verifies AND now < expires_at AND claimed_subject == subject_id AND some
// permission matches (verb, target); "*" matches any DISCOVER target.
// Checks run in that order, so e.g. a forged *and* expired token reports
// DenyForged.
Decision verify_operation(const Bytes& ra_public, const CapToken& token,
                          Verb verb, const std::string& target,
                          const std::string& claimed_subject, Tick now);

// Wire-level variant taking raw canonical token bytes as they travel in
// message headers. An absent or undecodable token is DenyForged: bytes that
// cannot have been produced by the RA are treated exactly like a bad
// signature.
Decision verify_operation_bytes(const Bytes& ra_public,
                                const std::optional<Bytes>& token_bytes,
                                Verb verb, const std::string& target,
                                const std::string& claimed_subject, Tick now);

bool permission_matches(const PermissionSet& permissions, Verb verb,
                        const std::string& target);

// Extracts token bytes from a hex-valued message header. Absent header maps
// to nullopt; a value that is not valid hex maps to bytes that cannot
// decode, so verification still lands on DenyForged.
std::optional<Bytes> token_bytes_from_header(
    const std::optional<std::string>& header_value);

// Best-effort subject extraction for audit records; empty when the bytes
// are absent or don't decode.
std::string token_subject_of(const std::optional<Bytes>& token_bytes);

// One verification outcome, recorded by whoever ran the check. Device-level
// policy denials (subscription quota, callback/subject mismatch) use the
// same record with their own reason strings.
struct AuditEvent {
  Tick tick = 0;
  HostId verifier;
  std::string reason;  // "Permit", "DenyForged", ..., "DenyQuota", "DenyCallbackMismatch"
  std::string verb;
  std::string target;
  std::string claimed_subject;
  std::string token_subject;  // empty when no token decoded
};

inline constexpr char kReasonPermit[] = "Permit";
inline constexpr char kReasonDenyQuota[] = "DenyQuota";
inline constexpr char kReasonDenyCallbackMismatch[] = "DenyCallbackMismatch";

class AuditLog {
 public:
  void append(AuditEvent event) { events_.push_back(std::move(event)); }

  const std::vector<AuditEvent>& events() const { return events_; }

  std::size_t deny_count() const;

  // Denials attributable to one actor, by claimed source or token subject.
  std::size_t denies_attributable(const std::string& actor) const;

  // "tick,verifier,reason,verb,target,claimed,subject" per event.
  std::vector<std::string> lines() const;

 private:
  std::vector<AuditEvent> events_;
};

enum class SecurityMode { Baseline, Secured };

std::string_view security_mode_name(SecurityMode mode);
Expected<SecurityMode> security_mode_from_string(std::string_view name);

// Shared by every party in one simulation. In Baseline mode no verification
// happens anywhere, so the audit log stays empty by construction.
struct SecurityContext {
  SecurityMode mode = SecurityMode::Baseline;
  Bytes ra_public;  // provisioned at registration (secured mode)
  AuditLog audit;

  bool secured() const { return mode == SecurityMode::Secured; }
};

}  // namespace upnplab
