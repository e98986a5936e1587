#pragma once

#include <cstdint>
#include <random>

#include "hamca/linalg.hpp"
#include "hamca/single_ca.hpp"

namespace hamca::tools {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// Gaussian integer with both parts uniform in [-bound, bound].
GaussInt random_gauss(Rng& rng, long bound);
GaussVector random_vector(Rng& rng, std::size_t dim, long bound);
/// Nonzero vector (redrawn until some entry is nonzero; bound must be > 0).
GaussVector random_nonzero_vector(Rng& rng, std::size_t dim, long bound);
/// Hermitian: real diagonal, mirrored conjugate off-diagonal entries, all parts in [-bound, bound].
HermitianMatrix random_hermitian(Rng& rng, std::size_t dim, long bound);

std::size_t random_index(Rng& rng, std::size_t lo, std::size_t hi);
long random_long(Rng& rng, long lo, long hi);

struct RandomSystem {
    SingleCA ca;
    GaussVector psi0;
    GaussVector psi1;
};

/// dim uniform in [1, max_dim]; H and initial entries bounded as given.
RandomSystem random_system(Rng& rng, std::size_t max_dim, long h_bound, long init_bound);

}  // namespace hamca::tools
