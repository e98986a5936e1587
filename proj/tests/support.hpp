#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

#include "hamca_tools/generators.hpp"

namespace hamca::test {

// HAMCA_TEST_SEED overrides the fixed default so a failure can be replayed with another draw.
inline std::uint64_t seed()
{
    if (const char* s = std::getenv("HAMCA_TEST_SEED")) {
        return std::stoull(s);
    }
    return tools::kDefaultSeed;
}

inline tools::Rng rng(std::uint64_t salt = 0) { return tools::Rng(seed() ^ salt); }

}  // namespace hamca::test
