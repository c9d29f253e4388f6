#include "reebsim/rng.hpp"

#include "reebsim/fingerprint.hpp"

namespace reebsim {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
    Fnv1a h;
    h.update(label);
    std::uint64_t state = seed ^ h.value();
    return splitmix64(state);
}

} // namespace reebsim
