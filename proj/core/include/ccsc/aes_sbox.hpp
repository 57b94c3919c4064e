#pragma once

#include <cstdint>

namespace ccsc {

/// Forward AES S-box lookup.
std::uint8_t sbox_lookup(std::uint8_t b);

/// Hypothetical sensitive intermediate: SBox(x ^ k).
std::uint8_t intermediate_value(std::uint8_t x, std::uint8_t k);

/// Number of set bits, in [0, 8].
int hamming_weight(std::uint8_t b);

}  // namespace ccsc
