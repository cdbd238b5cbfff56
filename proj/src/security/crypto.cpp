#include "upnplab/security/crypto.hpp"

#include <sodium.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace upnplab {

namespace {

void ensure_sodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) {
      // Initialization failure is unrecoverable and cannot happen once the
      // library is installed correctly, so treat it as fatal.
      throw std::runtime_error("libsodium initialization failed");
    }
  });
}

}  // namespace

KeyPair keygen(std::mt19937_64& rng) {
  ensure_sodium();
  unsigned char seed[crypto_sign_SEEDBYTES];
  static_assert(crypto_sign_SEEDBYTES % 8 == 0);
  for (std::size_t i = 0; i < crypto_sign_SEEDBYTES; i += 8) {
    std::uint64_t word = rng();
    std::memcpy(seed + i, &word, 8);
  }
  unsigned char pk[crypto_sign_PUBLICKEYBYTES];
  unsigned char sk[crypto_sign_SECRETKEYBYTES];
  crypto_sign_seed_keypair(pk, sk, seed);
  KeyPair pair;
  pair.public_key.assign(reinterpret_cast<char*>(pk), sizeof pk);
  pair.private_key.assign(reinterpret_cast<char*>(sk), sizeof sk);
  return pair;
}

Expected<Bytes> sign(const Bytes& private_key, const Bytes& message) {
  ensure_sodium();
  if (private_key.size() != kPrivateKeySize) {
    return make_error(Errc::MalformedKey, "private key size");
  }
  unsigned char sig[crypto_sign_BYTES];
  crypto_sign_detached(sig, nullptr,
                       reinterpret_cast<const unsigned char*>(message.data()),
                       message.size(),
                       reinterpret_cast<const unsigned char*>(private_key.data()));
  return Bytes(reinterpret_cast<char*>(sig), sizeof sig);
}

bool verify(const Bytes& public_key, const Bytes& message, const Bytes& signature) {
  ensure_sodium();
  if (public_key.size() != kPublicKeySize || signature.size() != kSignatureSize) {
    return false;
  }
  return crypto_sign_verify_detached(
             reinterpret_cast<const unsigned char*>(signature.data()),
             reinterpret_cast<const unsigned char*>(message.data()),
             message.size(),
             reinterpret_cast<const unsigned char*>(public_key.data())) == 0;
}

}  // namespace upnplab
