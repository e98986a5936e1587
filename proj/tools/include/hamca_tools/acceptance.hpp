#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hamca_tools/generators.hpp"

namespace hamca::tools {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string summary;
    double seconds = 0.0;
    double time_limit = 0.0;  ///< 0 when the criterion has no runtime bound
    nlohmann::json details;
};

/// Ids 1..11 in order.
std::vector<int> criterion_ids();

/// Runs one acceptance criterion; the random ones draw from `seed`.
CriterionResult run_criterion(int id, std::uint64_t seed = kDefaultSeed);

std::vector<CriterionResult> run_all(std::uint64_t seed = kDefaultSeed);

/// "PASS  3  title  (0.01 s)  summary"
std::string format_line(const CriterionResult& r);

/// verify-all: prints the table to `os`, writes <out>/criterion_NN/report.json when `out` is set.
/// Returns 0 iff every criterion passes, 1 otherwise.
int verify_all(std::uint64_t seed, const std::optional<std::filesystem::path>& out, std::ostream& os);

}  // namespace hamca::tools
