#include "hamca_tools/experiments.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "hamca/io.hpp"
#include "hamca/sampling.hpp"
#include "hamca/single_ca.hpp"

namespace hamca::tools {

namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------------------
// Config access

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t k) { return path + "/" + std::to_string(k); }

const json& require(const json& j, const std::string& key, const std::string& path)
{
    if (!j.is_object()) {
        throw ConfigError(path.empty() ? "/" : path, "expected an object");
    }
    auto it = j.find(key);
    if (it == j.end()) {
        throw ConfigError(child(path, key), "missing required field");
    }
    return *it;
}

const json* optional_field(const json& j, const std::string& key)
{
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

std::size_t get_size(const json& j, const std::string& path)
{
    if (!j.is_number_unsigned()) {
        throw ConfigError(path, "expected a non-negative integer");
    }
    return j.get<std::size_t>();
}

double get_double(const json& j, const std::string& path)
{
    if (!j.is_number()) {
        throw ConfigError(path, "expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw ConfigError(path, "expected a finite number");
    }
    return v;
}

std::vector<double> get_doubles(const json& j, const std::string& path)
{
    if (!j.is_array() || j.empty()) {
        throw ConfigError(path, "expected a non-empty array of numbers");
    }
    std::vector<double> out;
    for (std::size_t k = 0; k < j.size(); ++k) {
        out.push_back(get_double(j[k], child(path, k)));
    }
    return out;
}

std::vector<long> get_longs(const json& j, const std::string& path)
{
    if (!j.is_array()) {
        throw ConfigError(path, "expected an array of integers");
    }
    std::vector<long> out;
    for (std::size_t k = 0; k < j.size(); ++k) {
        if (!j[k].is_number_integer()) {
            throw ConfigError(child(path, k), "expected an integer");
        }
        out.push_back(j[k].get<long>());
    }
    return out;
}

template <typename F>
auto wrap_format(F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const io::FormatError& e) {
        throw ConfigError(e.field(), std::string(e.what()).substr(e.field().size() + 2));
    }
}

HermitianMatrix get_hermitian(const json& j, const std::string& path)
{
    return wrap_format([&] { return io::hermitian_from_json(j, path); });
}

GaussVector get_vector(const json& j, const std::string& path, std::size_t dim)
{
    GaussVector v = wrap_format([&] { return io::vector_from_json(j, path); });
    if (v.size() != dim) {
        throw ConfigError(path, "expected " + std::to_string(dim) + " entries, got " + std::to_string(v.size()));
    }
    return v;
}

mpz_class get_integer(const json& j, const std::string& path)
{
    const GaussInt z = wrap_format([&] { return io::gauss_from_json(j, path); });
    if (!z.is_real()) {
        throw ConfigError(path, "expected a real integer");
    }
    return z.re();
}

// ---------------------------------------------------------------------------
// System specs

struct SingleSetup {
    SingleCA ca;
    GaussVector psi0;
    GaussVector psi1;
    std::size_t steps = 0;
};

struct InitialPair {
    GaussVector psi0;
    GaussVector psi1;
};

InitialPair parse_initial_pair(const json& j, const std::string& path, std::size_t dim)
{
    return {get_vector(require(j, "psi0", path), child(path, "psi0"), dim),
            get_vector(require(j, "psi1", path), child(path, "psi1"), dim)};
}

std::size_t parse_steps(const json& cfg, std::size_t max_length)
{
    const std::size_t steps = get_size(require(cfg, "steps", ""), "/steps");
    if (steps + 2 > max_length) {
        throw ConfigError("/steps", "trajectory length steps + 2 exceeds " + std::to_string(max_length));
    }
    return steps;
}

SingleSetup parse_single(const json& cfg)
{
    const json& system = require(cfg, "system", "");
    HermitianMatrix h = get_hermitian(require(system, "H", "/system"), "/system/H");
    const std::size_t dim = h.dim();
    InitialPair init = parse_initial_pair(require(cfg, "initial", ""), "/initial", dim);
    return {SingleCA(std::move(h)), std::move(init.psi0), std::move(init.psi1), parse_steps(cfg, kMaxSingleLength)};
}

struct MultiSetup {
    MultiCA sys;
    std::vector<GaussVector> psi0;
    std::vector<GaussVector> psi1;
};

MultiSetup parse_multi(const json& cfg)
{
    const json& system = require(cfg, "system", "");
    const json& parts = require(system, "parts", "/system");
    if (!parts.is_array() || parts.empty() || parts.size() > kMaxClocks) {
        throw ConfigError("/system/parts", "expected 1 to " + std::to_string(kMaxClocks) + " parts");
    }
    std::vector<SingleCA> cas;
    std::size_t total = 1;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        const std::string path = child("/system/parts", k);
        cas.emplace_back(get_hermitian(require(parts[k], "H", path), child(path, "H")));
        total *= cas.back().dim();
    }
    std::optional<HermitianMatrix> interaction;
    if (const json* inter = optional_field(system, "interaction"); inter && !inter->is_null()) {
        interaction = get_hermitian(*inter, "/system/interaction");
        if (interaction->dim() != total) {
            throw ConfigError("/system/interaction", "dimension must be the product of the part dimensions ("
                                                          + std::to_string(total) + ")");
        }
    }
    const json& initial = require(cfg, "initial", "");
    if (!initial.is_array() || initial.size() != parts.size()) {
        throw ConfigError("/initial", "expected one {psi0, psi1} entry per part");
    }
    MultiSetup setup{MultiCA(cas, interaction), {}, {}};
    for (std::size_t k = 0; k < cas.size(); ++k) {
        InitialPair init = parse_initial_pair(initial[k], child("/initial", k), cas[k].dim());
        setup.psi0.push_back(std::move(init.psi0));
        setup.psi1.push_back(std::move(init.psi1));
    }
    return setup;
}

ClockWindow parse_window(const json& cfg, std::size_t m)
{
    const json& window = require(cfg, "window", "");
    const std::vector<long> lo = get_longs(require(window, "lo", "/window"), "/window/lo");
    const std::vector<long> hi = get_longs(require(window, "hi", "/window"), "/window/hi");
    if (lo.size() != m) {
        throw ConfigError("/window/lo", "expected " + std::to_string(m) + " clocks");
    }
    if (hi.size() != m) {
        throw ConfigError("/window/hi", "expected " + std::to_string(m) + " clocks");
    }
    for (std::size_t k = 0; k < m; ++k) {
        if (lo[k] > 0) {
            throw ConfigError(child("/window/lo", k), "window must contain the initial clocks 0 and 1");
        }
        if (hi[k] < 1) {
            throw ConfigError(child("/window/hi", k), "window must contain the initial clocks 0 and 1");
        }
        if (static_cast<std::size_t>(hi[k] - lo[k] + 1) > kMaxMultiLength) {
            throw ConfigError(child("/window/hi", k), "clock length exceeds " + std::to_string(kMaxMultiLength));
        }
    }
    return ClockWindow(lo, hi);
}

std::vector<Trajectory> factor_trajectories(const MultiSetup& s, const ClockWindow& w)
{
    std::vector<Trajectory> out;
    for (std::size_t k = 0; k < s.sys.m(); ++k) {
        out.push_back(evolve_window(s.sys.part(k), s.psi0[k], s.psi1[k], w.lo()[k], w.hi()[k]));
    }
    return out;
}

std::string str(const mpz_class& z) { return z.get_str(10); }

json strings(const std::vector<mpz_class>& values)
{
    json out = json::array();
    for (const auto& v : values) {
        out.push_back(str(v));
    }
    return out;
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot write " + path.string());
    }
    os << text;
}

// ---------------------------------------------------------------------------
// Experiments

Outcome run_evolve(const json& cfg, const fs::path& out)
{
    const SingleSetup s = parse_single(cfg);
    const Trajectory traj = evolve(s.ca, s.psi0, s.psi1, s.steps);
    write_text(out / "trajectory.json", io::dump(io::to_json(traj)));
    std::vector<mpz_class> norms;
    for (const auto& psi : traj.states()) {
        norms.push_back(inner(psi, psi).re());
    }
    const bool solved = is_solution(traj);
    return {solved, {{"n_min", traj.n_min()}, {"n_max", traj.n_max()}, {"norms", strings(norms)},
                     {"is_solution", solved}, {"trajectory", "trajectory.json"}}};
}

Outcome run_conserve(const json& cfg, const fs::path& out)
{
    const SingleSetup s = parse_single(cfg);
    const HermitianMatrix& h = s.ca.hamiltonian();
    std::vector<std::pair<std::string, HermitianMatrix>> observables;
    if (const json* obs = optional_field(cfg, "observables")) {
        if (!obs->is_array() || obs->empty()) {
            throw ConfigError("/observables", "expected a non-empty array of matrices");
        }
        for (std::size_t k = 0; k < obs->size(); ++k) {
            HermitianMatrix g = get_hermitian((*obs)[k], child("/observables", k));
            if (g.dim() != h.dim()) {
                throw ConfigError(child("/observables", k), "dimension does not match H");
            }
            observables.emplace_back("G" + std::to_string(k), std::move(g));
        }
    } else {
        observables.emplace_back("identity", HermitianMatrix::identity(h.dim()));
        observables.emplace_back("H", h);
        observables.emplace_back("H^2", HermitianMatrix(h.matrix() * h.matrix()));
    }
    const Trajectory traj = evolve(s.ca, s.psi0, s.psi1, s.steps);
    write_text(out / "trajectory.json", io::dump(io::to_json(traj)));
    bool passed = true;
    json reports = json::array();
    for (const auto& [name, g] : observables) {
        const ConservationReport r = conservation_report(traj, g);
        json entry = io::to_json(r);
        entry["observable"] = name;
        entry["G"] = io::to_json(g.matrix());
        reports.push_back(std::move(entry));
        if (r.commutes_with_h && !r.is_conserved) {
            passed = false;
        }
    }
    return {passed, {{"observables", std::move(reports)}, {"trajectory", "trajectory.json"}}};
}

Outcome run_variation(const json& cfg, const fs::path& out)
{
    const SingleSetup s = parse_single(cfg);
    if (s.steps < 1) {
        throw ConfigError("/steps", "variation needs at least one interior site (steps >= 1)");
    }
    std::vector<mpz_class> deltas{1, 2, 7};
    if (const json* d = optional_field(cfg, "deltas")) {
        if (!d->is_array() || d->empty()) {
            throw ConfigError("/deltas", "expected a non-empty array of integers");
        }
        deltas.clear();
        for (std::size_t k = 0; k < d->size(); ++k) {
            deltas.push_back(get_integer((*d)[k], child("/deltas", k)));
            if (sgn(deltas.back()) == 0) {
                throw ConfigError(child("/deltas", k), "delta must be nonzero");
            }
        }
    }
    const Trajectory traj = evolve(s.ca, s.psi0, s.psi1, s.steps);
    write_text(out / "trajectory.json", io::dump(io::to_json(traj)));
    const mpz_class s_value = action(traj);
    std::size_t checked = 0;
    json nonzero = json::array();
    for (long n = traj.n_min() + 1; n < traj.n_max(); ++n) {
        for (std::size_t alpha = 0; alpha < s.ca.dim(); ++alpha) {
            for (Component part : {Component::Real, Component::Imag}) {
                for (VariedSlot slot : {VariedSlot::Psi, VariedSlot::PsiConj}) {
                    for (const auto& delta : deltas) {
                        const GaussInt v = discrete_variation(traj, {n, alpha, part, slot}, delta);
                        ++checked;
                        if (!v.is_zero()) {
                            nonzero.push_back({{"n", n}, {"alpha", alpha},
                                               {"part", part == Component::Real ? "re" : "im"},
                                               {"slot", slot == VariedSlot::Psi ? "psi" : "psi*"},
                                               {"delta", str(delta)}, {"value", io::to_json(v)}});
                        }
                    }
                }
            }
        }
    }
    const bool passed = sgn(s_value) == 0 && nonzero.empty();
    return {passed, {{"action", str(s_value)}, {"variations_checked", checked}, {"nonzero_variations", nonzero},
                     {"trajectory", "trajectory.json"}}};
}

Outcome run_compose(const json& cfg, const fs::path& out)
{
    const MultiSetup s = parse_multi(cfg);
    const ClockWindow window = parse_window(cfg, s.sys.m());
    if (!window.has_interior()) {
        throw ConfigError("/window", "every clock needs at least three values for an interior");
    }
    const std::vector<ProductTerm> terms{{GaussInt(1), factor_trajectories(s, window)}};
    const MultiWave psi = assemble(terms, window);
    write_text(out / "multiwave.json", io::dump(io::to_json(psi)));

    const MultiWave residual = multi_eom_residual(psi, s.sys);
    const ClockWindow inner_window = window.interior();

    std::size_t non_product = 0;
    json ranks = json::array();
    if (s.sys.m() >= 2) {
        for (std::size_t i = 0; i < window.size(); ++i) {
            const ClockTuple n = window.tuple_at(i);
            json per_cut = json::array();
            for (std::size_t k = 0; k < s.sys.m(); ++k) {
                const std::vector<std::size_t> rows{k};
                const WitnessReport w = entanglement_witness(psi, n, rows);
                per_cut.push_back(w.matrix_rank);
                non_product += w.is_product ? 0 : 1;
            }
            ranks.push_back({{"n", n}, {"ranks", per_cut}});
        }
    }

    const HermitianMatrix identity = HermitianMatrix::identity(s.sys.total_dim());
    const HermitianMatrix total_h = s.sys.total_hamiltonian();
    std::size_t divergence_failures = 0;
    std::vector<mpz_class> q_values;
    json q_entries = json::array();
    for (std::size_t i = 0; i < inner_window.size(); ++i) {
        const ClockTuple n = inner_window.tuple_at(i);
        for (const auto* g : {&identity, &total_h}) {
            divergence_failures += sgn(multi_conserved_divergence(psi, *g, n)) != 0 ? 1 : 0;
        }
        q_values.push_back(multi_q(psi, n));
        q_entries.push_back({{"n", n}, {"multi_q", str(q_values.back())}});
    }
    bool q_constant = true;
    for (const auto& q : q_values) {
        q_constant = q_constant && q == q_values.front();
    }

    const bool passed = residual.is_zero() && non_product == 0 && divergence_failures == 0;
    return {passed,
            {{"residual_zero", residual.is_zero()},
             {"witness_ranks", std::move(ranks)},
             {"non_product_count", non_product},
             {"divergence_nonzero_count", divergence_failures},
             {"multi_q", std::move(q_entries)},
             {"multi_q_constant", q_constant},
             {"wave", "multiwave.json"}}};
}

Outcome run_defect(const json& cfg, const fs::path& out)
{
    const MultiSetup s = parse_multi(cfg);
    if (s.sys.interaction()) {
        throw ConfigError("/system/interaction", "the defect experiment takes non-interacting parts only");
    }
    const std::size_t steps = parse_steps(cfg, kMaxMultiLength);
    if (steps < 1) {
        throw ConfigError("/steps", "the defect at n = 2 needs steps >= 1");
    }
    const DefectReport report = single_time_defect(s.sys, s.psi0, s.psi1, steps);
    write_text(out / "defect.json", io::dump(io::to_json(report)));
    const GaussTensor predicted = leibniz_defect_prediction(s.sys, s.psi0, s.psi1);
    const GaussTensor& at2 = report.defect[static_cast<std::size_t>(2 - report.n_min)];
    const bool matches = at2 == predicted;
    return {matches,
            {{"first_nonzero_n", report.first_nonzero_n ? json(*report.first_nonzero_n) : json(nullptr)},
             {"defect_n2", io::to_json(at2)},
             {"predicted_n2", io::to_json(predicted)},
             {"matches_prediction", matches},
             {"report", "defect.json"}}};
}

Outcome run_bell(const json& cfg, const fs::path& out)
{
    const json& system = require(cfg, "system", "");
    const HermitianMatrix h = get_hermitian(require(system, "H", "/system"), "/system/H");
    if (h.dim() != 2) {
        throw ConfigError("/system/H", "the Bell construction needs a two-level automaton");
    }
    const SingleCA ca(h);
    const json& initial = require(cfg, "initial", "");
    const InitialPair a = parse_initial_pair(require(initial, "a", "/initial"), "/initial/a", 2);
    const InitialPair b = parse_initial_pair(require(initial, "b", "/initial"), "/initial/b", 2);
    const ClockWindow window = parse_window(cfg, 2);

    std::vector<ClockTuple> points;
    if (const json* at = optional_field(cfg, "witness_at")) {
        if (!at->is_array()) {
            throw ConfigError("/witness_at", "expected an array of clock tuples");
        }
        for (std::size_t k = 0; k < at->size(); ++k) {
            points.push_back(get_longs((*at)[k], child("/witness_at", k)));
            if (!window.contains(points.back())) {
                throw ConfigError(child("/witness_at", k), "clock tuple outside the window");
            }
        }
    } else {
        points = {window.lo(), window.hi()};
    }

    std::optional<MultiWave> maybe;
    try {
        // Both factors must cover both clock ranges.
        const long lo = std::min(window.lo()[0], window.lo()[1]);
        const long hi = std::max(window.hi()[0], window.hi()[1]);
        maybe = bell_state(evolve_window(ca, a.psi0, a.psi1, lo, hi), evolve_window(ca, b.psi0, b.psi1, lo, hi),
                           window);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("/initial", e.what());
    }
    const MultiWave& psi = *maybe;
    write_text(out / "multiwave.json", io::dump(io::to_json(psi)));

    const MultiCA sys({ca, ca});
    const bool residual_zero = multi_eom_residual(psi, sys).is_zero();

    bool ranks_ok = true;
    json witnesses = json::array();
    const std::vector<std::size_t> rows{0};
    for (const auto& n : points) {
        const WitnessReport w = entanglement_witness(psi, n, rows);
        const GaussInt det = determinant(bipartite_matrix(psi.at(n), rows));
        ranks_ok = ranks_ok && w.matrix_rank == 2;
        witnesses.push_back({{"n", n}, {"rank", w.matrix_rank}, {"is_product", w.is_product},
                             {"determinant", io::to_json(det)}, {"psi", io::to_json(psi.at(n))}});
    }

    bool antisymmetric = true;
    for (long n = std::max(window.lo()[0], window.lo()[1]); n <= std::min(window.hi()[0], window.hi()[1]); ++n) {
        const GaussTensor& t = psi.at({n, n});
        for (std::size_t x = 0; x < 2; ++x) {
            for (std::size_t y = 0; y < 2; ++y) {
                const std::array<std::size_t, 2> xy{x, y}, yx{y, x};
                antisymmetric = antisymmetric && t.at(xy) == -t.at(yx);
            }
        }
    }

    return {residual_zero && ranks_ok && antisymmetric,
            {{"residual_zero", residual_zero},
             {"witnesses", std::move(witnesses)},
             {"antisymmetric_at_equal_clocks", antisymmetric},
             {"wave", "multiwave.json"}}};
}

ReconstructionOptions parse_reconstruction(const json& cfg)
{
    ReconstructionOptions opt;
    if (const json* r = optional_field(cfg, "radius")) {
        opt.radius = get_size(*r, "/radius");
        if (opt.radius == 0) {
            throw ConfigError("/radius", "must be positive");
        }
    }
    if (const json* b = optional_field(cfg, "band_limit")) {
        opt.band_limit = get_double(*b, "/band_limit");
        if (opt.band_limit < 0.0 || opt.band_limit >= std::numbers::pi) {
            throw ConfigError("/band_limit", "must lie in [0, pi)");
        }
    }
    if (const json* g = optional_field(cfg, "regularized")) {
        if (!g->is_boolean()) {
            throw ConfigError("/regularized", "expected a boolean");
        }
        opt.regularized = g->get<bool>();
    }
    return opt;
}

double positive_scale(const json& cfg)
{
    const double l = get_double(require(cfg, "l", ""), "/l");
    if (!(l > 0.0)) {
        throw ConfigError("/l", "discreteness scale must be positive");
    }
    return l;
}

Outcome run_sample(const json& cfg, const fs::path& out)
{
    const SingleSetup s = parse_single(cfg);
    const double l = positive_scale(cfg);
    const ReconstructionOptions opt = parse_reconstruction(cfg);
    const Trajectory traj = evolve(s.ca, s.psi0, s.psi1, s.steps);
    write_text(out / "trajectory.json", io::dump(io::to_json(traj)));

    std::optional<ContinuumWave> maybe;
    try {
        maybe = reconstruct(traj, l, opt);
    } catch (const std::range_error& e) {
        return {false, {{"error", std::string("samples exceed the exactly representable range: ") + e.what()}}};
    }
    const ContinuumWave& wave = *maybe;

    double round_trip = 0.0;
    const auto resampled = resample(wave, traj.n_min(), traj.n_max());
    for (long n = traj.n_min(); n <= traj.n_max(); ++n) {
        const ComplexVector exact = wave.sample(n);
        const ComplexVector& back = resampled[static_cast<std::size_t>(n - traj.n_min())];
        for (std::size_t a = 0; a < exact.size(); ++a) {
            round_trip = std::max(round_trip, std::abs(back[a] - exact[a]));
        }
    }

    double worst = 0.0;
    json lattice = json::array();
    std::vector<double> times;
    for (long n = traj.n_min() + 1; n < traj.n_max(); ++n) {
        const double t = static_cast<double>(n) * l;
        if (!wave.is_reliable(t - l) || !wave.is_reliable(t + l)) {
            continue;
        }
        const double exact = q_symmetrized(traj, n).get_d() / 2.0;
        const double cont = q_continuum(wave, t);
        const double rel = std::abs(cont - exact) / std::max(std::abs(exact), 1.0);
        worst = std::max(worst, rel);
        lattice.push_back({{"n", n}, {"q_exact", exact}, {"q_continuum", cont}, {"relative_error", rel}});
        times.push_back(t);
        times.push_back(t + l / 2.0);
    }
    if (lattice.empty()) {
        throw ConfigError("/steps", "trajectory too short: no clock is " + std::to_string(opt.radius + 1)
                                        + " samples from both ends");
    }
    std::ostringstream csv;
    write_reconstruction_csv(csv, wave, times);
    write_text(out / "reconstruction.csv", csv.str());

    const bool passed = round_trip <= 1e-12 && worst <= 1e-10;
    return {passed, {{"round_trip_error", round_trip}, {"max_relative_q_error", worst}, {"lattice", lattice},
                     {"csv", "reconstruction.csv"}, {"trajectory", "trajectory.json"}}};
}

struct PhysicalMode {
    ComplexVector amplitude;
    double frequency = 0.0;
};

std::vector<PhysicalMode> parse_modes(const json& cfg)
{
    const json& modes = require(cfg, "modes", "");
    if (!modes.is_array() || modes.empty()) {
        throw ConfigError("/modes", "expected a non-empty array of modes");
    }
    std::vector<PhysicalMode> out;
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const std::string path = child("/modes", k);
        PhysicalMode m;
        m.frequency = get_double(require(modes[k], "frequency", path), child(path, "frequency"));
        const json& amp = require(modes[k], "amplitude", path);
        if (!amp.is_array() || amp.empty()) {
            throw ConfigError(child(path, "amplitude"), "expected an array of [re, im] numbers");
        }
        for (std::size_t a = 0; a < amp.size(); ++a) {
            const std::string apath = child(child(path, "amplitude"), a);
            if (amp[a].is_number()) {
                m.amplitude.emplace_back(get_double(amp[a], apath), 0.0);
            } else if (amp[a].is_array() && amp[a].size() == 2) {
                m.amplitude.emplace_back(get_double(amp[a][0], child(apath, 0)), get_double(amp[a][1], child(apath, 1)));
            } else {
                throw ConfigError(apath, "expected a number or [re, im]");
            }
        }
        if (!out.empty() && m.amplitude.size() != out.front().amplitude.size()) {
            throw ConfigError(child(path, "amplitude"), "modes differ in dimension");
        }
        out.push_back(std::move(m));
    }
    return out;
}

Outcome run_scaling(const json& cfg, const fs::path& out)
{
    const std::vector<PhysicalMode> modes = parse_modes(cfg);
    const double t = get_double(require(cfg, "t", ""), "/t");
    const std::vector<double> ls = get_doubles(require(cfg, "l_values", ""), "/l_values");
    if (ls.size() < 2) {
        throw ConfigError("/l_values", "a slope needs at least two scales");
    }
    double expected = 4.0;
    double tolerance = 0.3;
    if (const json* e = optional_field(cfg, "expected_slope")) {
        expected = get_double(*e, "/expected_slope");
    }
    if (const json* e = optional_field(cfg, "slope_tolerance")) {
        tolerance = get_double(*e, "/slope_tolerance");
    }
    std::vector<ScalingRow> rows;
    std::vector<double> rem, rem2;
    for (std::size_t k = 0; k < ls.size(); ++k) {
        const double l = ls[k];
        if (!(l > 0.0)) {
            throw ConfigError(child("/l_values", k), "must be positive");
        }
        std::vector<Mode> clock_modes;
        for (std::size_t j = 0; j < modes.size(); ++j) {
            const double omega = modes[j].frequency * l;
            if (std::abs(omega) > std::numbers::pi) {
                throw ConfigError(child("/l_values", k), "frequency * l exceeds the band limit pi for mode "
                                                               + std::to_string(j));
            }
            clock_modes.push_back({modes[j].amplitude, omega});
        }
        const ContinuumWave wave = ContinuumWave::from_modes(ModeSet(std::move(clock_modes)), l);
        rows.push_back({l, expansion_error(wave, t)});
        rem.push_back(rows.back().report.remainder);
        rem2.push_back(rows.back().report.remainder_without_order2());
    }
    std::ostringstream csv;
    write_scaling_csv(csv, rows);
    write_text(out / "scaling.csv", csv.str());

    double slope = std::nan("");
    double slope_without = std::nan("");
    try {
        slope = fit_loglog_slope(ls, rem);
        slope_without = fit_loglog_slope(ls, rem2);
    } catch (const std::invalid_argument& e) {
        return {false, {{"error", e.what()}, {"csv", "scaling.csv"}}};
    }
    const double expected_without = expected - 2.0;
    const bool passed = std::abs(slope - expected) <= tolerance && std::abs(slope_without - expected_without) <= tolerance;
    return {passed, {{"slope", slope}, {"slope_without_order2", slope_without}, {"expected_slope", expected},
                     {"slope_tolerance", tolerance}, {"csv", "scaling.csv"}}};
}

Outcome run_dispersion(const json& cfg, const fs::path&)
{
    const std::vector<double> energies = get_doubles(require(cfg, "energies", ""), "/energies");
    std::size_t steps = 100;
    double tolerance = 1e-10;
    if (const json* s = optional_field(cfg, "steps")) {
        steps = get_size(*s, "/steps");
    }
    if (const json* tol = optional_field(cfg, "tolerance")) {
        tolerance = get_double(*tol, "/tolerance");
    }
    bool passed = true;
    json entries = json::array();
    for (double e : energies) {
        const std::optional<double> omega = dispersion_frequency(e);
        if (!omega) {
            entries.push_back({{"E", e}, {"evanescent", true}});
            continue;
        }
        const bool ok_relation = dispersion_check(e, *omega);
        const double residual = mode_recursion_residual(e, *omega, steps);
        const bool ok = ok_relation && residual <= tolerance;
        passed = passed && ok;
        entries.push_back({{"E", e}, {"evanescent", false}, {"omega", *omega}, {"dispersion_holds", ok_relation},
                           {"recursion_residual", residual}, {"passed", ok}});
    }
    return {passed, {{"modes", std::move(entries)}, {"steps", steps}, {"tolerance", tolerance}}};
}

std::string timestamp_utc()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

}  // namespace

GaussTensor leibniz_defect_prediction(const MultiCA& sys, std::span<const GaussVector> psi0,
                                      std::span<const GaussVector> psi1)
{
    const std::size_t m = sys.m();
    if (psi0.size() != m || psi1.size() != m) {
        throw std::invalid_argument("leibniz_defect_prediction: one initial pair per part");
    }
    std::vector<GaussTensor> kicked, first, second;
    for (std::size_t k = 0; k < m; ++k) {
        kicked.push_back(GaussTensor::from_vector(GaussInt(0, -1) * (sys.part(k).hamiltonian() * psi1[k])));
        first.push_back(GaussTensor::from_vector(psi0[k]));
        second.push_back(GaussTensor::from_vector(psi1[k]));
    }
    GaussTensor total(sys.shape());
    for (std::size_t k = 0; k < m; ++k) {
        GaussTensor term = GaussTensor::scalar(GaussInt(1));
        for (std::size_t j = 0; j < m; ++j) {
            term = kron(term, j == k ? kicked[j] : second[j]);
        }
        total += term;
    }
    for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
        GaussTensor term = GaussTensor::scalar(GaussInt(1));
        for (std::size_t j = 0; j < m; ++j) {
            term = kron(term, (mask >> j) & 1U ? kicked[j] : first[j]);
        }
        total -= term;
    }
    return total;
}

Outcome run_experiment(const json& config, const fs::path& out_dir)
{
    const json& kind_j = require(config, "kind", "");
    if (!kind_j.is_string()) {
        throw ConfigError("/kind", "expected a string");
    }
    const std::string kind = kind_j.get<std::string>();
    if (kind == "evolve") {
        return run_evolve(config, out_dir);
    }
    if (kind == "conserve") {
        return run_conserve(config, out_dir);
    }
    if (kind == "variation") {
        return run_variation(config, out_dir);
    }
    if (kind == "compose") {
        return run_compose(config, out_dir);
    }
    if (kind == "defect") {
        return run_defect(config, out_dir);
    }
    if (kind == "bell") {
        return run_bell(config, out_dir);
    }
    if (kind == "sample") {
        return run_sample(config, out_dir);
    }
    if (kind == "scaling") {
        return run_scaling(config, out_dir);
    }
    if (kind == "dispersion") {
        return run_dispersion(config, out_dir);
    }
    throw ConfigError("/kind", "unknown experiment \"" + kind
                                   + "\" (expected evolve, conserve, variation, compose, defect, bell, sample, scaling "
                                     "or dispersion)");
}

fs::path output_dir_for(const json& config, const fs::path& config_path)
{
    const fs::path base = config_path.parent_path();
    if (config.is_object()) {
        if (const json* o = optional_field(config, "output_dir")) {
            if (!o->is_string() || o->get<std::string>().empty()) {
                throw ConfigError("/output_dir", "expected a non-empty path string");
            }
            return base / o->get<std::string>();
        }
    }
    return base / (config_path.stem().string() + "_out");
}

void write_report(const fs::path& out_dir, const std::string& experiment, bool passed, const json& details)
{
    const json report{{"experiment", experiment}, {"passed", passed}, {"details", details}};
    write_text(out_dir / "report.json", io::dump(report));
}

void write_metadata(const fs::path& out_dir, const json& extra)
{
    json meta = extra;
    meta["created_utc"] = timestamp_utc();
    meta["tool"] = "hamca";
    write_text(out_dir / "metadata.json", io::dump(meta));
}

RunResult run_config_file(const fs::path& config_path, std::ostream& log)
{
    RunResult result;
    json config;
    {
        std::ifstream is(config_path);
        if (!is) {
            log << "config error: config_path: cannot open " << config_path << "\n";
            return result;
        }
        try {
            config = json::parse(is);
        } catch (const json::parse_error& e) {
            log << "config error: /: invalid JSON: " << e.what() << "\n";
            result.out_dir = config_path.parent_path() / (config_path.stem().string() + "_out");
            fs::create_directories(result.out_dir);
            write_report(result.out_dir, "unknown", false,
                         {{"config_error", {{"field", "/"}, {"message", "invalid JSON"}}}});
            write_metadata(result.out_dir, {{"config", fs::absolute(config_path).string()}});
            return result;
        }
    }
    if (config.is_object() && config.contains("kind") && config["kind"].is_string()) {
        result.experiment = config["kind"].get<std::string>();
    } else {
        result.experiment = "unknown";
    }
    try {
        result.out_dir = output_dir_for(config, config_path);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        result.out_dir = config_path.parent_path() / (config_path.stem().string() + "_out");
    }
    fs::create_directories(result.out_dir);
    write_metadata(result.out_dir, {{"config", fs::absolute(config_path).string()}});
    try {
        const Outcome outcome = run_experiment(config, result.out_dir);
        result.passed = outcome.passed;
        result.exit_code = outcome.passed ? kExitPass : kExitCheckFailed;
        write_report(result.out_dir, result.experiment, outcome.passed, outcome.details);
        log << result.experiment << ": " << (outcome.passed ? "passed" : "FAILED") << " (report in "
            << (result.out_dir / "report.json").string() << ")\n";
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        write_report(result.out_dir, result.experiment, false,
                     {{"config_error", {{"field", e.field()}, {"message", e.what()}}}});
        result.exit_code = kExitConfigError;
    }
    return result;
}

}  // namespace hamca::tools
