// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace corpusforge {

using Hash64 = std::uint64_t;

inline constexpr Hash64 kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr Hash64 kFnvPrime = 0x100000001b3ULL;

/// Incremental 64-bit FNV-1a. Feeding the same bytes in any chunking gives
/// the same value, so n-gram windows can be hashed without materializing
/// the joined string.
class Fnv1a64 {
public:
    void update(std::string_view bytes) noexcept {
        for (unsigned char c : bytes) {
            state_ ^= c;
            state_ *= kFnvPrime;
        }
    }
    void update(char c) noexcept {
        state_ ^= static_cast<unsigned char>(c);
        state_ *= kFnvPrime;
    }
    Hash64 digest() const noexcept { return state_; }

private:
    Hash64 state_ = kFnvOffset;
};

inline Hash64 fnv1a64(std::string_view bytes) noexcept {
    Fnv1a64 h;
    h.update(bytes);
    return h.digest();
}

/// Lowercase 16-digit hex rendering used in config hashes and leak files.
std::string hash_to_hex(Hash64 value);
Hash64 hash_from_hex(std::string_view hex);

}  // namespace corpusforge
