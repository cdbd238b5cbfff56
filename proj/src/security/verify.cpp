#include "upnplab/security/verify.hpp"

#include <sstream>

#include "upnplab/security/crypto.hpp"

namespace upnplab {

std::string_view decision_name(Decision d) {
  switch (d) {
    case Decision::Permit:
      return "Permit";
    case Decision::DenyExpired:
      return "DenyExpired";
    case Decision::DenyForged:
      return "DenyForged";
    case Decision::DenySubjectMismatch:
      return "DenySubjectMismatch";
    case Decision::DenyInsufficient:
      return "DenyInsufficient";
  }
  return "?";
}

bool permission_matches(const PermissionSet& permissions, Verb verb,
                        const std::string& target) {
  for (const Permission& p : permissions) {
    if (p.verb != verb) {
      continue;
    }
    if (p.target == target) {
      return true;
    }
    if (verb == Verb::Discover && p.target == "*") {
      return true;
    }
  }
  return false;
}

Decision verify_operation(const Bytes& ra_public, const CapToken& token,
                          Verb verb, const std::string& target,
                          const std::string& claimed_subject, Tick now) {
  Bytes signing = cap_token_signing_bytes(token);
  if (signing.empty() ||
      !verify(ra_public, signing, token.ra_signature)) {
    return Decision::DenyForged;
  }
  if (now >= token.expires_at) {
    return Decision::DenyExpired;
  }
  if (claimed_subject != token.subject_id) {
    return Decision::DenySubjectMismatch;
  }
  if (!permission_matches(token.permissions, verb, target)) {
    return Decision::DenyInsufficient;
  }
  return Decision::Permit;
}

Decision verify_operation_bytes(const Bytes& ra_public,
                                const std::optional<Bytes>& token_bytes,
                                Verb verb, const std::string& target,
                                const std::string& claimed_subject, Tick now) {
  if (!token_bytes) {
    return Decision::DenyForged;
  }
  Expected<CapToken> token = decode_cap_token(*token_bytes);
  if (!token) {
    return Decision::DenyForged;
  }
  return verify_operation(ra_public, token.value(), verb, target,
                          claimed_subject, now);
}

std::optional<Bytes> token_bytes_from_header(
    const std::optional<std::string>& header_value) {
  if (!header_value) {
    return std::nullopt;
  }
  Expected<Bytes> decoded = hex_decode(*header_value);
  if (!decoded) {
    return Bytes{};
  }
  return decoded.value();
}

std::string token_subject_of(const std::optional<Bytes>& token_bytes) {
  if (!token_bytes) {
    return {};
  }
  Expected<CapToken> token = decode_cap_token(*token_bytes);
  if (!token) {
    return {};
  }
  return token.value().subject_id;
}

std::size_t AuditLog::deny_count() const {
  std::size_t n = 0;
  for (const AuditEvent& e : events_) {
    if (e.reason != kReasonPermit) {
      ++n;
    }
  }
  return n;
}

std::size_t AuditLog::denies_attributable(const std::string& actor) const {
  std::size_t n = 0;
  for (const AuditEvent& e : events_) {
    if (e.reason == kReasonPermit) {
      continue;
    }
    if (e.claimed_subject == actor || e.token_subject == actor) {
      ++n;
    }
  }
  return n;
}

std::vector<std::string> AuditLog::lines() const {
  std::vector<std::string> out;
  out.reserve(events_.size());
  for (const AuditEvent& e : events_) {
    std::ostringstream line;
    line << e.tick << ',' << e.verifier << ',' << e.reason << ',' << e.verb
         << ',' << e.target << ',' << e.claimed_subject << ','
         << e.token_subject;
    out.push_back(line.str());
  }
  return out;
}

std::string_view security_mode_name(SecurityMode mode) {
  return mode == SecurityMode::Secured ? "secured" : "baseline";
}

Expected<SecurityMode> security_mode_from_string(std::string_view name) {
  if (name == "baseline") {
    return SecurityMode::Baseline;
  }
  if (name == "secured") {
    return SecurityMode::Secured;
  }
  return make_error(Errc::ConfigError,
                    "unknown mode: " + std::string(name));
}

}  // namespace upnplab
