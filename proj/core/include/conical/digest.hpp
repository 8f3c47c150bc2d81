#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace conical {

/// FNV-1a 64-bit hash, used to fingerprint analysis inputs in reports.
inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string digest_hex(std::string_view s);

} // namespace conical
