#include "hamca/io.hpp"

#include <functional>

namespace hamca::io {

namespace {

std::string str(const mpz_class& z) { return z.get_str(10); }

json shape_json(const Shape& s)
{
    json out = json::array();
    for (auto d : s) {
        out.push_back(d);
    }
    return out;
}

json nested(const GaussTensor& t, std::size_t axis, std::size_t offset, std::size_t stride)
{
    json out = json::array();
    const std::size_t d = t.shape()[axis];
    const std::size_t inner = stride / d;
    for (std::size_t k = 0; k < d; ++k) {
        if (axis + 1 == t.rank()) {
            out.push_back(to_json(t[offset + k]));
        } else {
            out.push_back(nested(t, axis + 1, offset + k * inner, inner));
        }
    }
    return out;
}

const json& member(const json& j, const char* key, const std::string& field)
{
    if (!j.is_object()) {
        throw FormatError(field.empty() ? "/" : field, "expected an object");
    }
    auto it = j.find(key);
    if (it == j.end()) {
        throw FormatError(field + "/" + key, "missing");
    }
    return *it;
}

long integer_from_json(const json& j, const std::string& field)
{
    if (!j.is_number_integer()) {
        throw FormatError(field, "expected an integer");
    }
    return j.get<long>();
}

std::size_t size_from_json(const json& j, const std::string& field)
{
    if (!j.is_number_unsigned()) {
        throw FormatError(field, "expected a non-negative integer");
    }
    return j.get<std::size_t>();
}

Shape shape_from_json(const json& j, const std::string& field)
{
    if (!j.is_array()) {
        throw FormatError(field, "expected an array of dimensions");
    }
    Shape s;
    for (std::size_t k = 0; k < j.size(); ++k) {
        s.push_back(size_from_json(j[k], field + "/" + std::to_string(k)));
        if (s.back() == 0) {
            throw FormatError(field + "/" + std::to_string(k), "dimension must be positive");
        }
    }
    return s;
}

std::vector<long> longs_from_json(const json& j, const std::string& field)
{
    if (!j.is_array()) {
        throw FormatError(field, "expected an array of integers");
    }
    std::vector<long> out;
    for (std::size_t k = 0; k < j.size(); ++k) {
        out.push_back(integer_from_json(j[k], field + "/" + std::to_string(k)));
    }
    return out;
}

mpz_class mpz_from_json(const json& j, const std::string& field)
{
    if (j.is_number_integer()) {
        return j.is_number_unsigned() ? mpz_class(std::to_string(j.get<unsigned long>()))
                                      : mpz_class(std::to_string(j.get<long>()));
    }
    if (!j.is_string()) {
        throw FormatError(field, "expected a decimal string");
    }
    mpz_class z;
    if (z.set_str(j.get<std::string>(), 10) != 0) {
        throw FormatError(field, "not a decimal integer: \"" + j.get<std::string>() + "\"");
    }
    return z;
}

}  // namespace

json to_json(const GaussInt& z) { return json::array({str(z.re()), str(z.im())}); }

json to_json(const GaussVector& v)
{
    json out = json::array();
    for (const auto& z : v) {
        out.push_back(to_json(z));
    }
    return out;
}

json to_json(const GaussMatrix& m)
{
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            row.push_back(to_json(m(r, c)));
        }
        rows.push_back(std::move(row));
    }
    return {{"shape", json::array({m.rows(), m.cols()})}, {"entries", std::move(rows)}};
}

json to_json(const GaussTensor& t)
{
    json entries = t.rank() == 0 ? to_json(t[0]) : nested(t, 0, 0, t.size());
    return {{"shape", shape_json(t.shape())}, {"entries", std::move(entries)}};
}

json to_json(const Trajectory& traj)
{
    json states = json::array();
    for (const auto& s : traj.states()) {
        states.push_back(to_json(s));
    }
    return {{"dim", traj.ca().dim()},
            {"H", to_json(traj.ca().hamiltonian().matrix())},
            {"n_min", traj.n_min()},
            {"states", std::move(states)}};
}

json to_json(const MultiWave& psi)
{
    const ClockWindow& w = psi.window();
    json values = json::array();
    for (std::size_t i = 0; i < w.size(); ++i) {
        const ClockTuple n = w.tuple_at(i);
        values.push_back({{"n", n}, {"tensor", to_json(psi.values()[i])}});
    }
    return {{"m", w.m()}, {"shape", shape_json(psi.shape())}, {"lo", w.lo()}, {"hi", w.hi()}, {"values", values}};
}

json to_json(const DefectReport& r)
{
    json entries = json::array();
    for (std::size_t k = 0; k < r.defect.size(); ++k) {
        entries.push_back({{"n", r.n_min + static_cast<long>(k)},
                           {"composite", to_json(r.composite[k])},
                           {"product", to_json(r.product[k])},
                           {"defect", to_json(r.defect[k])}});
    }
    return {{"first_nonzero_n", r.first_nonzero_n ? json(*r.first_nonzero_n) : json(nullptr)},
            {"entries", std::move(entries)}};
}

json to_json(const ConservationReport& r)
{
    json values = json::array();
    for (const auto& v : r.values) {
        values.push_back(str(v));
    }
    return {{"is_conserved", r.is_conserved},
            {"commutes_with_H", r.commutes_with_h},
            {"first_n", r.first_n},
            {"values", std::move(values)}};
}

GaussInt gauss_from_json(const json& j, const std::string& field)
{
    if (j.is_number_integer() || j.is_string()) {
        return GaussInt(mpz_from_json(j, field));
    }
    if (!j.is_array() || j.size() != 2) {
        throw FormatError(field, "expected a Gaussian integer [\"re\", \"im\"]");
    }
    return {mpz_from_json(j[0], field + "/0"), mpz_from_json(j[1], field + "/1")};
}

GaussVector vector_from_json(const json& j, const std::string& field)
{
    if (!j.is_array()) {
        throw FormatError(field, "expected an array of Gaussian integers");
    }
    std::vector<GaussInt> out;
    for (std::size_t k = 0; k < j.size(); ++k) {
        out.push_back(gauss_from_json(j[k], field + "/" + std::to_string(k)));
    }
    return GaussVector(std::move(out));
}

GaussMatrix matrix_from_json(const json& j, const std::string& field)
{
    const bool wrapped = j.is_object();
    const std::string rows_field = wrapped ? field + "/entries" : field;
    const json& rows = wrapped ? member(j, "entries", field) : j;
    if (!rows.is_array() || rows.empty()) {
        throw FormatError(rows_field, "expected a non-empty array of rows");
    }
    std::vector<GaussVector> parsed;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        parsed.push_back(vector_from_json(rows[r], rows_field + "/" + std::to_string(r)));
        if (parsed.back().size() != parsed.front().size() || parsed.back().size() == 0) {
            throw FormatError(rows_field + "/" + std::to_string(r), "ragged or empty row");
        }
    }
    GaussMatrix m(parsed.size(), parsed.front().size());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            m(r, c) = parsed[r][c];
        }
    }
    if (wrapped && j.contains("shape")) {
        const Shape s = shape_from_json(j["shape"], field + "/shape");
        if (s != Shape{m.rows(), m.cols()}) {
            throw FormatError(field + "/shape", "does not match the entries");
        }
    }
    return m;
}

HermitianMatrix hermitian_from_json(const json& j, const std::string& field)
{
    GaussMatrix m = matrix_from_json(j, field);
    if (!m.is_square() || !mat_is_hermitian(m)) {
        throw FormatError(field, "matrix is not Hermitian");
    }
    return HermitianMatrix(std::move(m));
}

GaussTensor tensor_from_json(const json& j, const std::string& field)
{
    const Shape shape = shape_from_json(member(j, "shape", field), field + "/shape");
    const json& entries = member(j, "entries", field);
    std::vector<GaussInt> flat;
    std::function<void(const json&, std::size_t, const std::string&)> walk = [&](const json& node, std::size_t axis,
                                                                                 const std::string& path) {
        if (axis == shape.size()) {
            flat.push_back(gauss_from_json(node, path));
            return;
        }
        if (!node.is_array() || node.size() != shape[axis]) {
            throw FormatError(path, "expected an array of length " + std::to_string(shape[axis]));
        }
        for (std::size_t k = 0; k < node.size(); ++k) {
            walk(node[k], axis + 1, path + "/" + std::to_string(k));
        }
    };
    walk(entries, 0, field + "/entries");
    return GaussTensor(shape, std::move(flat));
}

Trajectory trajectory_from_json(const json& j, const std::string& field)
{
    const HermitianMatrix h = hermitian_from_json(member(j, "H", field), field + "/H");
    const std::size_t dim = size_from_json(member(j, "dim", field), field + "/dim");
    if (dim != h.dim()) {
        throw FormatError(field + "/dim", "does not match H");
    }
    const long n_min = integer_from_json(member(j, "n_min", field), field + "/n_min");
    const json& states = member(j, "states", field);
    if (!states.is_array() || states.size() < 2) {
        throw FormatError(field + "/states", "expected at least two slices");
    }
    std::vector<GaussVector> slices;
    for (std::size_t k = 0; k < states.size(); ++k) {
        const std::string path = field + "/states/" + std::to_string(k);
        slices.push_back(vector_from_json(states[k], path));
        if (slices.back().size() != dim) {
            throw FormatError(path, "slice dimension does not match dim");
        }
    }
    return Trajectory(SingleCA(h), n_min, std::move(slices));
}

MultiWave multiwave_from_json(const json& j, const std::string& field)
{
    const std::size_t m = size_from_json(member(j, "m", field), field + "/m");
    const Shape shape = shape_from_json(member(j, "shape", field), field + "/shape");
    const std::vector<long> lo = longs_from_json(member(j, "lo", field), field + "/lo");
    const std::vector<long> hi = longs_from_json(member(j, "hi", field), field + "/hi");
    if (shape.size() != m || lo.size() != m || hi.size() != m) {
        throw FormatError(field + "/m", "shape, lo and hi must all have m entries");
    }
    MultiWave psi = [&] {
        try {
            return MultiWave(ClockWindow(lo, hi), shape);
        } catch (const std::invalid_argument& e) {
            throw FormatError(field + "/hi", e.what());
        }
    }();
    const json& values = member(j, "values", field);
    if (!values.is_array()) {
        throw FormatError(field + "/values", "expected an array");
    }
    for (std::size_t k = 0; k < values.size(); ++k) {
        const std::string path = field + "/values/" + std::to_string(k);
        const std::vector<long> n = longs_from_json(member(values[k], "n", path), path + "/n");
        if (!psi.window().contains(n)) {
            throw FormatError(path + "/n", "clock tuple outside the window");
        }
        GaussTensor t = tensor_from_json(member(values[k], "tensor", path), path + "/tensor");
        if (t.shape() != shape) {
            throw FormatError(path + "/tensor/shape", "does not match the wave shape");
        }
        psi.at(n) = std::move(t);
    }
    return psi;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace hamca::io
