#include "reebsim/fingerprint.hpp"

namespace reebsim {

std::string Fnv1a::hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    std::uint64_t v = hash_;
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

} // namespace reebsim
