#include "debtrun/random.hpp"

namespace debtrun {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t path, std::uint64_t stream) {
    std::uint64_t state = seed;
    std::uint64_t h = splitmix64(state);
    state = h ^ path;
    h = splitmix64(state);
    state = h ^ (stream * 0xd1b54a32d192ed03ULL);
    return splitmix64(state);
}

PathRng::PathRng(std::uint64_t seed, std::uint64_t path, std::uint64_t stream)
    : engine_(mix_seed(seed, path, stream)) {}

}  // namespace debtrun
