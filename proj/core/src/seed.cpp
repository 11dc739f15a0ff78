#include "dtdr/seed.hpp"

namespace dtdr {

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t root, std::string_view label)
{
    // splitmix64 finalizer over the mixed root and label hash
    std::uint64_t z = root ^ (fnv1a64(label) + 0x9e3779b97f4a7c15ULL + (root << 6) + (root >> 2));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace dtdr
