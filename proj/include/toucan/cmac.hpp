#pragma once

#include <cstdint>
#include <span>

#include "toucan/aes128.hpp"

namespace toucan {

/// AES-CMAC (NIST SP 800-38B) with a 128-bit output. Selected when the
/// profile's algorithm is the AES-CMAC label instead of Chaskey.
Block128 aes_cmac(const Aes128Key& key, std::span<const std::uint8_t> message) noexcept;

}  // namespace toucan
