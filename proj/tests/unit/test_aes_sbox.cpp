#include <array>
#include <cstdint>

#include "ccsc/aes_sbox.hpp"
#include "doctest.h"

namespace {

// Independent reconstruction of the S-box from its algebraic definition:
// multiplicative inverse in GF(2^8) mod x^8+x^4+x^3+x+1, then the affine
// transform b ^ rol(b,1) ^ rol(b,2) ^ rol(b,3) ^ rol(b,4) ^ 0x63.
std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b) {
  std::uint8_t r = 0;
  while (b) {
    if (b & 1) r ^= a;
    const bool hi = a & 0x80;
    a = static_cast<std::uint8_t>(a << 1);
    if (hi) a ^= 0x1B;
    b >>= 1;
  }
  return r;
}

std::uint8_t gf_inverse(std::uint8_t a) {
  if (a == 0) return 0;
  // a^254 by square and multiply.
  std::uint8_t result = 1;
  std::uint8_t base = a;
  int e = 254;
  while (e) {
    if (e & 1) result = gf_mul(result, base);
    base = gf_mul(base, base);
    e >>= 1;
  }
  return result;
}

std::uint8_t rol(std::uint8_t b, int n) {
  return static_cast<std::uint8_t>((b << n) | (b >> (8 - n)));
}

std::uint8_t sbox_from_definition(std::uint8_t x) {
  const std::uint8_t b = gf_inverse(x);
  return static_cast<std::uint8_t>(b ^ rol(b, 1) ^ rol(b, 2) ^ rol(b, 3) ^
                                   rol(b, 4) ^ 0x63);
}

}  // namespace

TEST_SUITE("aes_sbox") {

TEST_CASE("known substitution values") {
  CHECK(ccsc::sbox_lookup(0x00) == 0x63);
  CHECK(ccsc::sbox_lookup(0x01) == 0x7C);
  CHECK(ccsc::sbox_lookup(0x53) == 0xED);
  CHECK(ccsc::sbox_lookup(0xFF) == 0x16);
}

TEST_CASE("table matches the algebraic definition") {
  for (int x = 0; x < 256; ++x) {
    const auto b = static_cast<std::uint8_t>(x);
    CHECK(ccsc::sbox_lookup(b) == sbox_from_definition(b));
  }
}

TEST_CASE("substitution is a bijection") {
  std::array<bool, 256> seen{};
  for (int x = 0; x < 256; ++x) seen[ccsc::sbox_lookup(static_cast<std::uint8_t>(x))] = true;
  for (bool s : seen) CHECK(s);
}

TEST_CASE("intermediate value is sbox of the xor") {
  CHECK(ccsc::intermediate_value(0x00, 0x00) == 0x63);
  CHECK(ccsc::intermediate_value(0xAB, 0xAB) == 0x63);
  for (int x = 0; x < 256; x += 17)
    for (int k = 0; k < 256; k += 13) {
      const auto xb = static_cast<std::uint8_t>(x);
      const auto kb = static_cast<std::uint8_t>(k);
      CHECK(ccsc::intermediate_value(xb, kb) ==
            ccsc::sbox_lookup(static_cast<std::uint8_t>(xb ^ kb)));
      CHECK(ccsc::intermediate_value(xb, kb) == ccsc::intermediate_value(kb, xb));
    }
}

TEST_CASE("hamming weight counts set bits") {
  CHECK(ccsc::hamming_weight(0x00) == 0);
  CHECK(ccsc::hamming_weight(0xFF) == 8);
  CHECK(ccsc::hamming_weight(0x63) == 4);
  CHECK(ccsc::hamming_weight(0x80) == 1);
  int total = 0;
  for (int x = 0; x < 256; ++x) {
    const auto b = static_cast<std::uint8_t>(x);
    CHECK(ccsc::hamming_weight(b) + ccsc::hamming_weight(static_cast<std::uint8_t>(~b)) == 8);
    total += ccsc::hamming_weight(b);
  }
  CHECK(total == 1024);
}

}  // TEST_SUITE
