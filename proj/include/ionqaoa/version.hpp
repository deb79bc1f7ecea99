#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ionqaoa {

inline constexpr std::string_view version = "0.1.0";

// FNV-1a, used to stamp output files with a hash of the producing config.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline std::string hash_hex(std::string_view s) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a64(s);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

}  // namespace ionqaoa
