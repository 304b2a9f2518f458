#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <boost/random/normal_distribution.hpp>

namespace invmerton {

/// Identifies one reproducible random stream: (master_seed, stream_id).
///
/// The generator is std::mt19937_64, whose output sequence is fixed by the
/// C++ standard, seeded with a SplitMix64 hash of the pair. Normals come from
/// Boost.Random's ziggurat normal_distribution, whose algorithm is part of
/// the Boost source rather than the standard library, so a given Boost
/// version reproduces the same sequence everywhere (std::normal_distribution
/// does not).
struct RngStream {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;

    [[nodiscard]] std::uint64_t engine_seed() const noexcept;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Standard-normal draws from one stream.
class GaussianSource {
public:
    explicit GaussianSource(RngStream stream);

    double next() { return normal_(engine_); }

private:
    std::mt19937_64 engine_;
    boost::random::normal_distribution<double> normal_;
};

/// n_steps i.i.d. Normal(0, dt) increments from `stream`.
std::vector<double> gaussian_increments(RngStream stream, std::size_t n_steps, double dt);

}  // namespace invmerton
