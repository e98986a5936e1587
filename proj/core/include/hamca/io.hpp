#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "hamca/gauss_int.hpp"
#include "hamca/linalg.hpp"
#include "hamca/multi_ca.hpp"
#include "hamca/single_ca.hpp"

namespace hamca::io {

using nlohmann::json;

/// Malformed input; `field` is a JSON-pointer-like path to the offending value.
class FormatError : public std::runtime_error {
public:
    FormatError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message)
        , field_(std::move(field))
    {
    }

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// ["re", "im"] as decimal strings.
json to_json(const GaussInt& z);
json to_json(const GaussVector& v);
/// {"shape": [r, c], "entries": [[..], ..]}
json to_json(const GaussMatrix& m);
/// {"shape": [..], "entries": nested arrays}; a rank-0 tensor stores its single entry bare.
json to_json(const GaussTensor& t);
json to_json(const Trajectory& traj);
json to_json(const MultiWave& psi);
json to_json(const DefectReport& r);
json to_json(const ConservationReport& r);

/// Accepts ["re", "im"] strings; plain JSON integers are accepted as real values.
GaussInt gauss_from_json(const json& j, const std::string& field = "");
GaussVector vector_from_json(const json& j, const std::string& field = "");
/// Accepts {"shape", "entries"} or a bare nested array of rows.
GaussMatrix matrix_from_json(const json& j, const std::string& field = "");
/// Matrix plus a Hermiticity check (FormatError otherwise).
HermitianMatrix hermitian_from_json(const json& j, const std::string& field = "");
GaussTensor tensor_from_json(const json& j, const std::string& field = "");
Trajectory trajectory_from_json(const json& j, const std::string& field = "");
MultiWave multiwave_from_json(const json& j, const std::string& field = "");

/// Two-space indented, sorted keys, trailing newline. Byte-identical for equal values.
std::string dump(const json& j);

}  // namespace hamca::io
