// Digital-signature substrate (Ed25519 via libsodium). Key generation is
// driven by a caller-supplied RNG so whole scenarios stay reproducible from
// one seed.
#pragma once

#include <random>

#include "upnplab/error.hpp"
#include "upnplab/types.hpp"

namespace upnplab {

inline constexpr std::size_t kPublicKeySize = 32;
inline constexpr std::size_t kPrivateKeySize = 64;
inline constexpr std::size_t kSignatureSize = 64;

struct KeyPair {
  Bytes public_key;
  Bytes private_key;
};

// Deterministic: the same RNG state always yields the same pair.
KeyPair keygen(std::mt19937_64& rng);

// Errors: MalformedKey (wrong private-key size).
Expected<Bytes> sign(const Bytes& private_key, const Bytes& message);

// Total and decision-valued: malformed keys or signatures simply fail
// verification.
bool verify(const Bytes& public_key, const Bytes& message, const Bytes& signature);

}  // namespace upnplab
