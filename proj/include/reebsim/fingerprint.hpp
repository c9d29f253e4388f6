#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

namespace reebsim {

// FNV-1a, 64-bit. Stable across platforms; used for provenance fingerprints,
// not for security.
class Fnv1a {
public:
    void update(const void* data, std::size_t size) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < size; ++i) {
            hash_ ^= bytes[i];
            hash_ *= 1099511628211ULL;
        }
    }

    void update(std::string_view s) { update(s.data(), s.size()); }

    void update_u64(std::uint64_t v) {
        unsigned char buf[8];
        for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
        update(buf, 8);
    }

    void update_i64(std::int64_t v) { update_u64(static_cast<std::uint64_t>(v)); }

    void update_double(double d) { update_u64(std::bit_cast<std::uint64_t>(d)); }

    std::uint64_t value() const { return hash_; }
    std::string hex() const;

private:
    std::uint64_t hash_ = 1469598103934665603ULL;
};

} // namespace reebsim
