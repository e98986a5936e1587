#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include "hamca_tools/acceptance.hpp"

int main(int argc, char** argv)
{
    std::uint64_t seed = hamca::tools::kDefaultSeed;
    if (argc > 1) {
        seed = std::stoull(argv[1]);
    }
    int failures = 0;
    for (int id : hamca::tools::criterion_ids()) {
        const auto r = hamca::tools::run_criterion(id, seed);
        std::cout << hamca::tools::format_line(r) << std::endl;
        failures += r.passed ? 0 : 1;
    }
    std::cout << (11 - failures) << "/11 acceptance criteria passed" << std::endl;
    return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
