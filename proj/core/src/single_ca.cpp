#include "hamca/single_ca.hpp"

#include <stdexcept>
#include <string>

namespace hamca {

namespace {

void require_dim(const SingleCA& ca, const GaussVector& v, const char* what)
{
    if (v.size() != ca.dim()) {
        throw std::invalid_argument(std::string(what) + ": state has dimension " + std::to_string(v.size())
                                    + ", automaton has " + std::to_string(ca.dim()));
    }
}

// psi_prev - i H psi_cur
GaussVector forward_step(const HermitianMatrix& h, const GaussVector& prev, const GaussVector& cur)
{
    GaussVector hpsi = h * cur;
    GaussVector next = prev;
    for (std::size_t k = 0; k < next.size(); ++k) {
        next[k] += hpsi[k].times_minus_i();
    }
    return next;
}

// psi_next + i H psi_cur
GaussVector backward_step(const HermitianMatrix& h, const GaussVector& next, const GaussVector& cur)
{
    GaussVector hpsi = h * cur;
    GaussVector prev = next;
    for (std::size_t k = 0; k < prev.size(); ++k) {
        prev[k] += hpsi[k].times_i();
    }
    return prev;
}

// chi . psi without conjugation: chi holds the independent psi* variables.
GaussInt bilinear(const GaussVector& chi, const GaussVector& psi)
{
    GaussInt acc;
    for (std::size_t k = 0; k < psi.size(); ++k) {
        acc += chi[k] * psi[k];
    }
    return acc;
}

GaussVector conjugate(const GaussVector& v)
{
    GaussVector out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        out[k] = v[k].conj();
    }
    return out;
}

// -i (chi_a psi_{a+1} - chi_{a+1} psi_a): one full-weight kinetic link.
GaussInt link_term(const GaussVector& chi_a, const GaussVector& psi_a, const GaussVector& chi_b,
                   const GaussVector& psi_b)
{
    return (bilinear(chi_a, psi_b) - bilinear(chi_b, psi_a)).times_minus_i();
}

GaussInt site_term(const HermitianMatrix& h, const GaussVector& chi, const GaussVector& psi)
{
    return bilinear(chi, h * psi);
}

mpz_class real_part_checked(const GaussInt& z, const char* what)
{
    if (!z.is_real()) {
        throw std::logic_error(std::string(what) + ": expected a real value, got " + z.to_string());
    }
    return z.re();
}

}  // namespace

Trajectory::Trajectory(SingleCA ca, long n_min, std::vector<GaussVector> states)
    : ca_(std::move(ca))
    , n_min_(n_min)
    , states_(std::move(states))
{
    if (states_.size() < 2) {
        throw std::invalid_argument("Trajectory: needs at least two slices");
    }
    for (const auto& s : states_) {
        require_dim(ca_, s, "Trajectory");
    }
}

const GaussVector& Trajectory::at(long n) const
{
    if (!contains(n)) {
        throw std::out_of_range("Trajectory: clock " + std::to_string(n) + " outside [" + std::to_string(n_min()) + ", "
                                + std::to_string(n_max()) + "]");
    }
    return states_[static_cast<std::size_t>(n - n_min_)];
}

GaussVector& Trajectory::at(long n)
{
    return const_cast<GaussVector&>(static_cast<const Trajectory&>(*this).at(n));
}

Trajectory evolve(const SingleCA& ca, const GaussVector& psi_a, const GaussVector& psi_b, std::size_t steps)
{
    require_dim(ca, psi_a, "evolve");
    require_dim(ca, psi_b, "evolve");
    std::vector<GaussVector> states;
    states.reserve(steps + 2);
    states.push_back(psi_a);
    states.push_back(psi_b);
    for (std::size_t s = 0; s < steps; ++s) {
        const std::size_t n = states.size() - 1;
        states.push_back(forward_step(ca.hamiltonian(), states[n - 1], states[n]));
    }
    return Trajectory(ca, 0, std::move(states));
}

Trajectory evolve_backward(const SingleCA& ca, const GaussVector& psi_y, const GaussVector& psi_z, std::size_t steps)
{
    require_dim(ca, psi_y, "evolve_backward");
    require_dim(ca, psi_z, "evolve_backward");
    // Built in reverse clock order, then flipped.
    std::vector<GaussVector> rev;
    rev.reserve(steps + 2);
    rev.push_back(psi_z);
    rev.push_back(psi_y);
    for (std::size_t s = 0; s < steps; ++s) {
        const std::size_t k = rev.size() - 1;
        rev.push_back(backward_step(ca.hamiltonian(), rev[k - 1], rev[k]));
    }
    return Trajectory(ca, -static_cast<long>(steps), std::vector<GaussVector>(rev.rbegin(), rev.rend()));
}

Trajectory evolve_window(const SingleCA& ca, const GaussVector& psi_0, const GaussVector& psi_1, long n_lo, long n_hi)
{
    if (n_lo > 0 || n_hi < 1) {
        throw std::invalid_argument("evolve_window: window must contain clocks 0 and 1");
    }
    const Trajectory back = evolve_backward(ca, psi_0, psi_1, static_cast<std::size_t>(-n_lo));
    const Trajectory fwd = evolve(ca, psi_0, psi_1, static_cast<std::size_t>(n_hi - 1));
    std::vector<GaussVector> states(back.states().begin(), back.states().end() - 2);
    states.insert(states.end(), fwd.states().begin(), fwd.states().end());
    return Trajectory(ca, n_lo, std::move(states));
}

GaussVector eom_residual(const Trajectory& traj, long n)
{
    if (!traj.is_interior(n)) {
        throw std::out_of_range("eom_residual: clock " + std::to_string(n) + " is not interior");
    }
    GaussVector r = traj.at(n + 1) - traj.at(n - 1);
    return r + times_i(traj.ca().hamiltonian() * traj.at(n));
}

bool is_solution(const Trajectory& traj)
{
    for (long n = traj.n_min() + 1; n < traj.n_max(); ++n) {
        if (!eom_residual(traj, n).is_zero()) {
            return false;
        }
    }
    return true;
}

RealPhaseState RealPhaseState::from_complex(const GaussVector& psi)
{
    RealPhaseState s;
    for (const auto& z : psi) {
        s.x.push_back(z.re());
        s.p.push_back(z.im());
    }
    return s;
}

GaussVector RealPhaseState::to_complex() const
{
    if (x.size() != p.size()) {
        throw std::invalid_argument("RealPhaseState: x and p differ in dimension");
    }
    GaussVector psi(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        psi[k] = GaussInt(x[k], p[k]);
    }
    return psi;
}

RealPhaseState step_real_form(const SingleCA& ca, const RealPhaseState& previous, const RealPhaseState& current)
{
    const std::size_t d = ca.dim();
    for (const auto* s : {&previous, &current}) {
        if (s->x.size() != d || s->p.size() != d) {
            throw std::invalid_argument("step_real_form: state dimension does not match automaton");
        }
    }
    const HermitianSplit split = split_hermitian(ca.hamiltonian());
    RealPhaseState next{previous.x, previous.p};
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
            const mpz_class& hs = split.symmetric(a, b).re();
            const mpz_class& ha = split.antisymmetric(a, b).re();
            next.x[a] += hs * current.p[b] + ha * current.x[b];
            next.p[a] += -hs * current.x[b] + ha * current.p[b];
        }
    }
    return next;
}

mpz_class action(const Trajectory& traj)
{
    if (traj.size() < 3) {
        throw std::invalid_argument("action: needs at least three slices");
    }
    const HermitianMatrix& h = traj.ca().hamiltonian();
    mpz_class total = 0;
    for (long n = traj.n_min() + 1; n < traj.n_max(); ++n) {
        const GaussVector& psi = traj.at(n);
        const GaussInt kinetic = inner(psi, traj.at(n + 1) - traj.at(n - 1));
        total += kinetic.im();
        total += real_part_checked(inner(psi, h * psi), "action");
    }
    return total;
}

mpz_class variational_action(const Trajectory& traj)
{
    const HermitianMatrix& h = traj.ca().hamiltonian();
    GaussInt total;
    for (long a = traj.n_min(); a < traj.n_max(); ++a) {
        total += link_term(conjugate(traj.at(a)), traj.at(a), conjugate(traj.at(a + 1)), traj.at(a + 1));
    }
    for (long n = traj.n_min() + 1; n < traj.n_max(); ++n) {
        total += site_term(h, conjugate(traj.at(n)), traj.at(n));
    }
    return real_part_checked(total, "variational_action");
}

GaussInt integer_variation(const std::function<GaussInt(const GaussInt&)>& g, const GaussInt& f,
                           const GaussInt& delta)
{
    if (delta.is_zero()) {
        return GaussInt();
    }
    const GaussInt diff = g(f + delta) - g(f - delta);
    return diff.divide_exact(GaussInt(2) * delta);
}

GaussInt discrete_variation(const Trajectory& traj, const VariationSite& site, const mpz_class& delta)
{
    if (!traj.is_interior(site.n)) {
        throw std::out_of_range("discrete_variation: clock " + std::to_string(site.n)
                                + " is a boundary site; variations are defined at interior sites only");
    }
    if (site.alpha >= traj.ca().dim()) {
        throw std::invalid_argument("discrete_variation: alpha out of range");
    }
    if (sgn(delta) == 0) {
        throw std::invalid_argument("discrete_variation: delta must be nonzero");
    }
    const HermitianMatrix& h = traj.ca().hamiltonian();
    const long n = site.n;

    // Only the two links touching slice n and its site term depend on the varied variable;
    // every other term of variational_action() cancels in the difference.
    GaussVector psi_prev = traj.at(n - 1), psi = traj.at(n), psi_next = traj.at(n + 1);
    GaussVector chi_prev = conjugate(psi_prev), chi = conjugate(psi), chi_next = conjugate(psi_next);

    auto local_action = [&](const GaussInt& value) {
        GaussVector p = psi;
        GaussVector c = chi;
        (site.slot == VariedSlot::Psi ? p : c)[site.alpha] = value;
        return link_term(chi_prev, psi_prev, c, p) + link_term(c, p, chi_next, psi_next) + site_term(h, c, p);
    };

    const GaussInt& f = (site.slot == VariedSlot::Psi ? psi : chi)[site.alpha];
    const GaussInt step = site.part == Component::Real ? GaussInt(delta) : GaussInt(mpz_class(0), delta);
    return integer_variation(local_action, f, step);
}

mpz_class q_correlator(const Trajectory& traj, const HermitianMatrix& g, long n)
{
    if (!traj.contains(n) || !traj.contains(n - 1)) {
        throw std::out_of_range("q_correlator: clocks " + std::to_string(n - 1) + ", " + std::to_string(n)
                                + " not both inside the window");
    }
    if (g.dim() != traj.ca().dim()) {
        throw std::invalid_argument("q_correlator: observable dimension does not match automaton");
    }
    const GaussVector& cur = traj.at(n);
    const GaussVector& prev = traj.at(n - 1);
    return real_part_checked(inner(cur, g * prev) + inner(prev, g * cur), "q_correlator");
}

mpz_class q_symmetrized(const Trajectory& traj, long n)
{
    if (!traj.is_interior(n)) {
        throw std::out_of_range("q_symmetrized: clock " + std::to_string(n) + " is not interior");
    }
    return inner(traj.at(n), traj.at(n + 1) + traj.at(n - 1)).re();
}

ConservationReport conservation_report(const Trajectory& traj, const HermitianMatrix& g)
{
    if (!is_solution(traj)) {
        throw std::invalid_argument("conservation_report: trajectory does not solve the equation of motion");
    }
    ConservationReport report;
    report.commutes_with_h = commutes(g, traj.ca().hamiltonian());
    report.first_n = traj.n_min() + 1;
    for (long n = traj.n_min() + 1; n <= traj.n_max(); ++n) {
        report.values.push_back(q_correlator(traj, g, n));
    }
    report.is_conserved = true;
    for (const auto& v : report.values) {
        if (v != report.values.front()) {
            report.is_conserved = false;
            break;
        }
    }
    return report;
}

}  // namespace hamca
