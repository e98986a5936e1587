#include "hamca_tools/generators.hpp"

namespace hamca::tools {

long random_long(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

std::size_t random_index(Rng& rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

GaussInt random_gauss(Rng& rng, long bound)
{
    const long re = random_long(rng, -bound, bound);
    const long im = random_long(rng, -bound, bound);
    return {re, im};
}

GaussVector random_vector(Rng& rng, std::size_t dim, long bound)
{
    GaussVector v(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        v[k] = random_gauss(rng, bound);
    }
    return v;
}

GaussVector random_nonzero_vector(Rng& rng, std::size_t dim, long bound)
{
    GaussVector v = random_vector(rng, dim, bound);
    while (v.is_zero()) {
        v = random_vector(rng, dim, bound);
    }
    return v;
}

HermitianMatrix random_hermitian(Rng& rng, std::size_t dim, long bound)
{
    GaussMatrix m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        m(r, r) = GaussInt(random_long(rng, -bound, bound));
        for (std::size_t c = r + 1; c < dim; ++c) {
            m(r, c) = random_gauss(rng, bound);
            m(c, r) = m(r, c).conj();
        }
    }
    return HermitianMatrix(std::move(m));
}

RandomSystem random_system(Rng& rng, std::size_t max_dim, long h_bound, long init_bound)
{
    const std::size_t dim = random_index(rng, 1, max_dim);
    HermitianMatrix h = random_hermitian(rng, dim, h_bound);
    GaussVector psi0 = random_vector(rng, dim, init_bound);
    GaussVector psi1 = random_vector(rng, dim, init_bound);
    return {SingleCA(std::move(h)), std::move(psi0), std::move(psi1)};
}

}  // namespace hamca::tools
