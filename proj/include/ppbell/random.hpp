#pragma once

#include <cstdint>
#include <random>

namespace ppbell {

using Engine = std::mt19937_64;

/// Independent stream families so that static samples, SDE trajectories and
/// waveguide trajectories never share a substream for the same seed.
enum class StreamDomain : std::uint64_t { Static = 1, Sde = 2, Waveguide = 3, Test = 99 };

std::uint64_t splitmix64(std::uint64_t x);

/// Engine for substream `index` of `domain` under a run seed. The mapping is a
/// pure function of its arguments, so results never depend on which worker
/// draws which substream.
Engine substream(std::uint64_t seed, StreamDomain domain, std::uint64_t index);

}  // namespace ppbell
