#pragma once

// 16-bit fragile signature: the first two bytes of SHA-256(kappa), MSB first.

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <string>

#include "sobomark/errors.hpp"

namespace sobomark {

using Signature = std::array<std::uint8_t, 16>;

inline std::array<std::uint8_t, 32> sha256(const std::string& bytes) {
  std::array<std::uint8_t, 32> out{};
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), out.data(), &len, EVP_sha256(), nullptr) ||
      len != out.size())
    throw Error("SHA-256 digest failed");
  return out;
}

inline Signature fragile_signature(const std::string& kappa) {
  auto d = sha256(kappa);
  Signature s{};
  for (int i = 0; i < 16; ++i) s[i] = (d[i / 8] >> (7 - i % 8)) & 1;
  return s;
}

inline std::string hex_digest(const std::string& bytes) {
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (auto b : sha256(bytes)) {
    out.push_back(hex[b >> 4]);
    out.push_back(hex[b & 15]);
  }
  return out;
}

}  // namespace sobomark
