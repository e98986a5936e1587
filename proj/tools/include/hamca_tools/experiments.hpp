#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "hamca/linalg.hpp"
#include "hamca/multi_ca.hpp"

namespace hamca::tools {

using nlohmann::json;

inline constexpr std::size_t kMaxClocks = 6;
inline constexpr std::size_t kMaxSingleLength = 64;
inline constexpr std::size_t kMaxMultiLength = 16;

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;

/// Invalid experiment config; `field` is the path of the offending value, e.g. "/system/H".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message)
        , field_(std::move(field))
    {
    }

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct Outcome {
    bool passed = false;
    json details;
};

/**
 * Validates `config` and runs the experiment it names, writing any trajectory / wave / CSV outputs into
 * `out_dir` (which must exist). Throws ConfigError on invalid input.
 */
Outcome run_experiment(const json& config, const std::filesystem::path& out_dir);

struct RunResult {
    int exit_code = kExitConfigError;
    std::string experiment;
    bool passed = false;
    std::filesystem::path out_dir;
};

/// run <config.json>: parse, run, always write report.json (and metadata.json) into the output directory.
RunResult run_config_file(const std::filesystem::path& config_path, std::ostream& log);

/// "output_dir" from the config (relative to the config file), else <config stem>_out next to it.
std::filesystem::path output_dir_for(const json& config, const std::filesystem::path& config_path);

/// {experiment, passed, details}, sorted keys, byte-identical for equal inputs.
void write_report(const std::filesystem::path& out_dir, const std::string& experiment, bool passed,
                  const json& details);
/// Timestamp and provenance of a run, kept out of report.json.
void write_metadata(const std::filesystem::path& out_dir, const json& extra);

/**
 * Defect at n = 2 between shared-clock evolution of the composite and per-part evolution, from the
 * subset expansion of prod_k (psi0_k - i H_k psi1_k):
 *   sum_k (-i H_k psi1_k) x (psi1_j)_{j != k} - sum_{S nonempty} x_k (k in S ? -i H_k psi1_k : psi0_k)
 */
GaussTensor leibniz_defect_prediction(const MultiCA& sys, std::span<const GaussVector> psi0,
                                      std::span<const GaussVector> psi1);

}  // namespace hamca::tools
