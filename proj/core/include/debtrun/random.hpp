#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace debtrun {

/// Per-path random stream keyed by (seed, path index, stream id), so that a
/// path's draws do not depend on how paths are scheduled.
class PathRng {
public:
    PathRng(std::uint64_t seed, std::uint64_t path, std::uint64_t stream = 0);

    double normal() { return normal_(engine_); }
    /// Uniform on [0, 1).
    double uniform() { return uniform_(engine_); }
    /// Exp(1) variate.
    double exponential() { return exponential_(engine_); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    std::exponential_distribution<double> exponential_{1.0};
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t path, std::uint64_t stream);

}  // namespace debtrun
