#pragma once

#include <cstdint>
#include <string_view>

namespace fixsearch {

/// Splitmix64 finalizer. Counter-based randomness everywhere in this project
/// is built from this single mixing function so that any drawn value depends
/// only on the integers fed in, never on call order.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// One 64-bit word keyed by (seed, stream, counter).
inline uint64_t counter_u64(uint64_t seed, uint64_t stream, uint64_t counter) {
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ counter);
}

/// Uniform double in [0, 1) keyed by (seed, stream, counter).
inline double counter_u01(uint64_t seed, uint64_t stream, uint64_t counter) {
    return static_cast<double>(counter_u64(seed, stream, counter) >> 11) * 0x1.0p-53;
}

/// FNV-1a 64-bit over raw bytes. Used for output-content hashes in manifests
/// and for labeled seed derivation.
inline uint64_t fnv1a64(const void* data, size_t n, uint64_t h = 0xCBF29CE484222325ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ull;
    }
    return h;
}

inline uint64_t fnv1a64(std::string_view s, uint64_t h = 0xCBF29CE484222325ull) {
    return fnv1a64(s.data(), s.size(), h);
}

/// Derives a module seed from the run seed and a label, e.g. "gmm_a".
inline uint64_t derive_seed(uint64_t seed, std::string_view label) {
    return splitmix64(seed ^ fnv1a64(label));
}

} // namespace fixsearch
