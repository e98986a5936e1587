#include "hamca/multi_ca.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace hamca {

namespace {

mpz_class real_part_checked(const GaussInt& z, const char* what)
{
    if (!z.is_real()) {
        throw std::logic_error(std::string(what) + ": expected a real value, got " + z.to_string());
    }
    return z.re();
}

void require_arity(const MultiWave& psi, const MultiCA& sys, const char* what)
{
    if (psi.window().m() != sys.m() || psi.shape() != sys.shape()) {
        throw std::invalid_argument(std::string(what) + ": wave does not match the multipartite system");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// MultiCA

MultiCA::MultiCA(std::vector<SingleCA> parts, std::optional<HermitianMatrix> interaction)
    : parts_(std::move(parts))
    , interaction_(std::move(interaction))
{
    if (parts_.empty()) {
        throw std::invalid_argument("MultiCA: needs at least one part");
    }
    if (interaction_ && interaction_->dim() != total_dim()) {
        throw std::invalid_argument("MultiCA: interaction dimension " + std::to_string(interaction_->dim())
                                    + " does not match tensor space dimension " + std::to_string(total_dim()));
    }
}

Shape MultiCA::shape() const
{
    Shape s;
    for (const auto& p : parts_) {
        s.push_back(p.dim());
    }
    return s;
}

std::size_t MultiCA::total_dim() const { return shape_size(shape()); }

HermitianMatrix MultiCA::total_hamiltonian() const
{
    std::vector<HermitianMatrix> hs;
    for (const auto& p : parts_) {
        hs.push_back(p.hamiltonian());
    }
    HermitianMatrix sum = kronecker_sum(hs);
    if (interaction_) {
        return HermitianMatrix(sum.matrix() + interaction_->matrix());
    }
    return sum;
}

// ---------------------------------------------------------------------------
// ClockWindow

ClockWindow::ClockWindow(std::vector<long> lo, std::vector<long> hi)
    : lo_(std::move(lo))
    , hi_(std::move(hi))
{
    if (lo_.empty() || lo_.size() != hi_.size()) {
        throw std::invalid_argument("ClockWindow: lo and hi must be non-empty and of equal length");
    }
    for (std::size_t k = 0; k < lo_.size(); ++k) {
        if (hi_[k] < lo_[k] + 1) {
            throw std::invalid_argument("ClockWindow: clock " + std::to_string(k) + " spans fewer than two values");
        }
    }
}

std::size_t ClockWindow::size() const
{
    std::size_t total = 1;
    for (std::size_t k = 0; k < m(); ++k) {
        total *= length(k);
    }
    return total;
}

bool ClockWindow::contains(const ClockTuple& n) const
{
    if (n.size() != m()) {
        return false;
    }
    for (std::size_t k = 0; k < m(); ++k) {
        if (n[k] < lo_[k] || n[k] > hi_[k]) {
            return false;
        }
    }
    return true;
}

bool ClockWindow::is_interior(const ClockTuple& n) const
{
    if (n.size() != m()) {
        return false;
    }
    for (std::size_t k = 0; k < m(); ++k) {
        if (n[k] <= lo_[k] || n[k] >= hi_[k]) {
            return false;
        }
    }
    return true;
}

bool ClockWindow::is_interior_in(const ClockTuple& n, std::size_t k) const
{
    return contains(n) && n[k] > lo_[k] && n[k] < hi_[k];
}

bool ClockWindow::has_interior() const
{
    for (std::size_t k = 0; k < m(); ++k) {
        if (hi_[k] - lo_[k] < 2) {
            return false;
        }
    }
    return true;
}

std::size_t ClockWindow::linear_index(const ClockTuple& n) const
{
    if (!contains(n)) {
        throw std::out_of_range("ClockWindow: tuple outside the window");
    }
    std::size_t index = 0;
    for (std::size_t k = 0; k < m(); ++k) {
        index = index * length(k) + static_cast<std::size_t>(n[k] - lo_[k]);
    }
    return index;
}

ClockTuple ClockWindow::tuple_at(std::size_t index) const
{
    ClockTuple n(m());
    for (std::size_t k = m(); k-- > 0;) {
        n[k] = lo_[k] + static_cast<long>(index % length(k));
        index /= length(k);
    }
    return n;
}

ClockWindow ClockWindow::interior() const
{
    if (!has_interior()) {
        throw std::invalid_argument("ClockWindow: degenerate window without interior");
    }
    std::vector<long> lo = lo_, hi = hi_;
    for (std::size_t k = 0; k < m(); ++k) {
        ++lo[k];
        --hi[k];
    }
    // A one-point interior is still a valid set of tuples; ClockWindow itself needs two values per clock.
    ClockWindow w = *this;
    w.lo_ = std::move(lo);
    w.hi_ = std::move(hi);
    return w;
}

ClockTuple shifted(ClockTuple n, std::size_t k, long by)
{
    n.at(k) += by;
    return n;
}

// ---------------------------------------------------------------------------
// MultiWave

MultiWave::MultiWave(ClockWindow window, Shape shape)
    : window_(std::move(window))
    , shape_(std::move(shape))
    , values_(window_.size(), GaussTensor(shape_))
{
    if (shape_.size() != window_.m()) {
        throw std::invalid_argument("MultiWave: tensor rank must equal the number of clocks");
    }
}

const GaussTensor& MultiWave::at(const ClockTuple& n) const { return values_[window_.linear_index(n)]; }

GaussTensor& MultiWave::at(const ClockTuple& n) { return values_[window_.linear_index(n)]; }

bool MultiWave::is_zero() const
{
    return std::all_of(values_.begin(), values_.end(), [](const GaussTensor& t) { return t.is_zero(); });
}

MultiWave& MultiWave::operator+=(const MultiWave& o)
{
    if (!(window_ == o.window_) || shape_ != o.shape_) {
        throw std::invalid_argument("MultiWave +: window or shape mismatch");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        values_[i] += o.values_[i];
    }
    return *this;
}

MultiWave operator+(MultiWave a, const MultiWave& b) { return a += b; }

MultiWave operator*(const GaussInt& s, const MultiWave& w)
{
    MultiWave out(w.window(), w.shape());
    for (std::size_t i = 0; i < w.window().size(); ++i) {
        const ClockTuple n = w.window().tuple_at(i);
        out.at(n) = s * w.at(n);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Operations

MultiWave assemble(std::span<const ProductTerm> terms, const ClockWindow& window)
{
    if (terms.empty()) {
        throw std::invalid_argument("assemble: no terms");
    }
    Shape shape;
    for (const auto& f : terms.front().factors) {
        shape.push_back(f.ca().dim());
    }
    for (const auto& term : terms) {
        if (term.factors.size() != window.m()) {
            throw std::invalid_argument("assemble: term has " + std::to_string(term.factors.size())
                                        + " factors for " + std::to_string(window.m()) + " clocks");
        }
        for (std::size_t k = 0; k < window.m(); ++k) {
            const Trajectory& f = term.factors[k];
            if (f.ca().dim() != shape[k]) {
                throw std::invalid_argument("assemble: factor dimensions differ between terms");
            }
            if (!f.contains(window.lo()[k]) || !f.contains(window.hi()[k])) {
                throw std::invalid_argument("assemble: factor " + std::to_string(k) + " does not cover clock range ["
                                            + std::to_string(window.lo()[k]) + ", " + std::to_string(window.hi()[k])
                                            + "]");
            }
        }
    }

    MultiWave wave(window, shape);
    for (std::size_t i = 0; i < window.size(); ++i) {
        const ClockTuple n = window.tuple_at(i);
        GaussTensor& value = wave.at(n);
        for (const auto& term : terms) {
            GaussTensor product = GaussTensor::scalar(term.coeff);
            for (std::size_t k = 0; k < window.m(); ++k) {
                product = kron(product, GaussTensor::from_vector(term.factors[k].at(n[k])));
            }
            value += product;
        }
    }
    return wave;
}

MultiWave multi_eom_residual(const MultiWave& psi, const MultiCA& sys)
{
    require_arity(psi, sys, "multi_eom_residual");
    const ClockWindow interior = psi.window().interior();
    MultiWave residual(interior, psi.shape());
    for (std::size_t i = 0; i < interior.size(); ++i) {
        const ClockTuple n = interior.tuple_at(i);
        const GaussTensor& here = psi.at(n);
        GaussTensor r(psi.shape());
        GaussTensor h_psi(psi.shape());
        for (std::size_t k = 0; k < sys.m(); ++k) {
            r += psi.at(shifted(n, k, +1));
            r -= psi.at(shifted(n, k, -1));
            h_psi += apply_on_axis(sys.part(k).hamiltonian().matrix(), here, k);
        }
        if (sys.interaction()) {
            h_psi += apply_full(sys.interaction()->matrix(), here);
        }
        r += times_i(h_psi);
        residual.at(n) = std::move(r);
    }
    return residual;
}

mpz_class multi_action(const MultiWave& psi, const MultiCA& sys)
{
    require_arity(psi, sys, "multi_action");
    const ClockWindow& w = psi.window();
    if (!w.has_interior()) {
        throw std::invalid_argument("multi_action: degenerate window without interior");
    }
    mpz_class total = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const ClockTuple n = w.tuple_at(i);
        const GaussTensor& here = psi.at(n);
        for (std::size_t k = 0; k < sys.m(); ++k) {
            if (!w.is_interior_in(n, k)) {
                continue;
            }
            const GaussTensor dot = psi.at(shifted(n, k, +1)) - psi.at(shifted(n, k, -1));
            total += inner(here, dot).im();
            total += real_part_checked(inner(here, apply_on_axis(sys.part(k).hamiltonian().matrix(), here, k)),
                                       "multi_action");
        }
        if (sys.interaction()) {
            total += real_part_checked(inner(here, apply_full(sys.interaction()->matrix(), here)), "multi_action");
        }
    }
    return total;
}

mpz_class multi_clock_correlator(const MultiWave& psi, const HermitianMatrix& g, const ClockTuple& n, std::size_t k)
{
    if (k >= psi.window().m()) {
        throw std::out_of_range("multi_clock_correlator: clock index out of range");
    }
    const ClockTuple prev_n = shifted(n, k, -1);
    if (!psi.window().contains(n) || !psi.window().contains(prev_n)) {
        throw std::out_of_range("multi_clock_correlator: tuple or its predecessor outside the window");
    }
    if (g.dim() != shape_size(psi.shape())) {
        throw std::invalid_argument("multi_clock_correlator: observable does not match tensor space");
    }
    const GaussTensor& cur = psi.at(n);
    const GaussTensor& prev = psi.at(prev_n);
    return real_part_checked(inner(cur, apply_full(g.matrix(), prev)) + inner(prev, apply_full(g.matrix(), cur)),
                             "multi_clock_correlator");
}

mpz_class multi_conserved_divergence(const MultiWave& psi, const HermitianMatrix& g, const ClockTuple& n)
{
    if (!psi.window().is_interior(n)) {
        throw std::out_of_range("multi_conserved_divergence: tuple is not interior");
    }
    mpz_class total = 0;
    for (std::size_t k = 0; k < psi.window().m(); ++k) {
        total += multi_clock_correlator(psi, g, shifted(n, k, +1), k);
        total -= multi_clock_correlator(psi, g, n, k);
    }
    return total;
}

mpz_class multi_q(const MultiWave& psi, const ClockTuple& n)
{
    if (!psi.window().is_interior(n)) {
        throw std::out_of_range("multi_q: tuple is not interior");
    }
    const GaussTensor& here = psi.at(n);
    mpz_class total = 0;
    for (std::size_t k = 0; k < psi.window().m(); ++k) {
        total += inner(here, psi.at(shifted(n, k, +1)) + psi.at(shifted(n, k, -1))).re();
    }
    return total;
}

DefectReport single_time_defect(const MultiCA& sys, std::span<const GaussVector> psi0,
                                std::span<const GaussVector> psi1, std::size_t steps)
{
    if (sys.interaction()) {
        throw std::invalid_argument("single_time_defect: the shared-clock demo is defined without interaction");
    }
    if (psi0.size() != sys.m() || psi1.size() != sys.m()) {
        throw std::invalid_argument("single_time_defect: need one pair of initial slices per part");
    }

    std::vector<Trajectory> parts;
    GaussTensor composite_prev = GaussTensor::scalar(1);
    GaussTensor composite_cur = GaussTensor::scalar(1);
    for (std::size_t k = 0; k < sys.m(); ++k) {
        parts.push_back(evolve(sys.part(k), psi0[k], psi1[k], steps));
        composite_prev = kron(composite_prev, GaussTensor::from_vector(psi0[k]));
        composite_cur = kron(composite_cur, GaussTensor::from_vector(psi1[k]));
    }

    DefectReport report;
    report.n_min = 0;
    report.composite.push_back(composite_prev);
    report.composite.push_back(composite_cur);
    for (std::size_t s = 0; s < steps; ++s) {
        GaussTensor h_psi(sys.shape());
        for (std::size_t k = 0; k < sys.m(); ++k) {
            h_psi += apply_on_axis(sys.part(k).hamiltonian().matrix(), composite_cur, k);
        }
        GaussTensor next = composite_prev - times_i(h_psi);
        composite_prev = std::move(composite_cur);
        composite_cur = next;
        report.composite.push_back(std::move(next));
    }

    for (std::size_t idx = 0; idx < report.composite.size(); ++idx) {
        const long n = static_cast<long>(idx);
        GaussTensor product = GaussTensor::scalar(1);
        for (const auto& p : parts) {
            product = kron(product, GaussTensor::from_vector(p.at(n)));
        }
        GaussTensor defect = report.composite[idx] - product;
        if (!report.first_nonzero_n && !defect.is_zero()) {
            report.first_nonzero_n = n;
        }
        report.product.push_back(std::move(product));
        report.defect.push_back(std::move(defect));
    }
    return report;
}

std::array<ProductTerm, 2> bell_terms(const Trajectory& a, const Trajectory& b)
{
    return {ProductTerm{GaussInt(1), {a, b}}, ProductTerm{GaussInt(-1), {b, a}}};
}

MultiWave bell_state(const Trajectory& a, const Trajectory& b, const ClockWindow& window)
{
    if (window.m() != 2) {
        throw std::invalid_argument("bell_state: needs exactly two clocks");
    }
    if (a.ca().dim() != 2 || b.ca().dim() != 2) {
        throw std::invalid_argument("bell_state: both parts must have two degrees of freedom");
    }
    if (!(a.ca() == b.ca())) {
        throw std::invalid_argument("bell_state: trajectories must belong to the same automaton");
    }
    if (!is_solution(a) || !is_solution(b)) {
        throw std::invalid_argument("bell_state: both trajectories must be solutions");
    }
    // Initial data (psi_n, psi_{n+1}) at the earliest common clock, as rows of a 2x4 matrix.
    const long n0 = std::max(a.n_min(), b.n_min());
    if (!a.contains(n0 + 1) || !b.contains(n0 + 1)) {
        throw std::invalid_argument("bell_state: trajectories share fewer than two clock values");
    }
    GaussMatrix data(2, 4);
    for (std::size_t alpha = 0; alpha < 2; ++alpha) {
        data(0, alpha) = a.at(n0)[alpha];
        data(0, 2 + alpha) = a.at(n0 + 1)[alpha];
        data(1, alpha) = b.at(n0)[alpha];
        data(1, 2 + alpha) = b.at(n0 + 1)[alpha];
    }
    if (exact_rank(data) < 2) {
        throw std::invalid_argument("bell_state: initial data are linearly dependent");
    }
    const auto terms = bell_terms(a, b);
    return assemble(terms, window);
}

WitnessReport entanglement_witness(const MultiWave& psi, const ClockTuple& n, std::span<const std::size_t> row_axes)
{
    const GaussMatrix m = bipartite_matrix(psi.at(n), row_axes);
    WitnessReport report;
    report.matrix_rank = exact_rank(m);
    report.is_product = report.matrix_rank <= 1;
    return report;
}

}  // namespace hamca
