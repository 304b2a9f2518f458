#include "invmerton/numerics/rng.hpp"

#include <cmath>

#include "invmerton/error.hpp"

namespace invmerton {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t RngStream::engine_seed() const noexcept {
    return splitmix64(master_seed ^ splitmix64(stream_id ^ 0xD1B54A32D192ED03ULL));
}

GaussianSource::GaussianSource(RngStream stream) : engine_(stream.engine_seed()) {}

std::vector<double> gaussian_increments(RngStream stream, std::size_t n_steps, double dt) {
    if (n_steps < 1) fail(ErrorKind::InvalidArgument, "gaussian_increments: n_steps must be >= 1");
    if (!(dt > 0.0)) fail(ErrorKind::InvalidArgument, "gaussian_increments: dt must be positive");
    GaussianSource source(stream);
    const double scale = std::sqrt(dt);
    std::vector<double> out(n_steps);
    for (auto& v : out) v = scale * source.next();
    return out;
}

}  // namespace invmerton
