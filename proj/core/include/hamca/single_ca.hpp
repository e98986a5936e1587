#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "hamca/linalg.hpp"

namespace hamca {

/// A single Hamiltonian cellular automaton: dim degrees of freedom coupled by an integer Hermitian H.
class SingleCA {
public:
    explicit SingleCA(HermitianMatrix h) : h_(std::move(h)) {}

    std::size_t dim() const noexcept { return h_.dim(); }
    const HermitianMatrix& hamiltonian() const noexcept { return h_; }

    friend bool operator==(const SingleCA&, const SingleCA&) = default;

private:
    HermitianMatrix h_;
};

/**
 * State history psi_n over the clock window [n_min, n_max].
 *
 * Holds at least two slices (the initial data of the two-step recursion) and
 * every slice has dimension ca.dim(). Whether it solves the equation of motion
 * is a property checked by is_solution(), not a construction invariant.
 */
class Trajectory {
public:
    Trajectory(SingleCA ca, long n_min, std::vector<GaussVector> states);

    const SingleCA& ca() const noexcept { return ca_; }
    long n_min() const noexcept { return n_min_; }
    long n_max() const noexcept { return n_min_ + static_cast<long>(states_.size()) - 1; }
    std::size_t size() const noexcept { return states_.size(); }

    bool contains(long n) const noexcept { return n >= n_min() && n <= n_max(); }
    bool is_interior(long n) const noexcept { return n > n_min() && n < n_max(); }

    /// Throws std::out_of_range outside [n_min, n_max].
    const GaussVector& at(long n) const;
    GaussVector& at(long n);

    const std::vector<GaussVector>& states() const noexcept { return states_; }

    friend bool operator==(const Trajectory&, const Trajectory&) = default;

private:
    SingleCA ca_;
    long n_min_;
    std::vector<GaussVector> states_;
};

/// Forward evolution from psi_0 = psi_a, psi_1 = psi_b by psi_{n+1} = psi_{n-1} - i H psi_n. Window [0, steps + 1].
Trajectory evolve(const SingleCA& ca, const GaussVector& psi_a, const GaussVector& psi_b, std::size_t steps);

/// Backward evolution from the final slices psi_0 = psi_y, psi_1 = psi_z by psi_{n-1} = psi_{n+1} + i H psi_n.
/// Window [-steps, 1].
Trajectory evolve_backward(const SingleCA& ca, const GaussVector& psi_y, const GaussVector& psi_z, std::size_t steps);

/// Solution through (psi_0, psi_1) extended both ways to the window [n_lo, n_hi] (n_lo <= 0, n_hi >= 1).
Trajectory evolve_window(const SingleCA& ca, const GaussVector& psi_0, const GaussVector& psi_1, long n_lo, long n_hi);

/// psi_{n+1} - psi_{n-1} + i H psi_n at an interior n.
GaussVector eom_residual(const Trajectory& traj, long n);

/// True iff the residual vanishes at every interior n.
bool is_solution(const Trajectory& traj);

/// psi = x + i p with integer x, p.
struct RealPhaseState {
    std::vector<mpz_class> x;
    std::vector<mpz_class> p;

    static RealPhaseState from_complex(const GaussVector& psi);
    GaussVector to_complex() const;

    friend bool operator==(const RealPhaseState&, const RealPhaseState&) = default;
};

/**
 * One step of the real (oscillator-network) form of the recursion:
 *   x_{n+1} = x_{n-1} + h_S p_n + h_A x_n
 *   p_{n+1} = p_{n-1} - h_S x_n + h_A p_n
 * where H = h_S + i h_A. Takes the states at n-1 and n, returns the state at n+1.
 */
RealPhaseState step_real_form(const SingleCA& ca, const RealPhaseState& previous, const RealPhaseState& current);

/// Sum over interior n of Im(psi_n^dag psi_dot_n) + psi_n^dag H psi_n, psi_dot_n = psi_{n+1} - psi_{n-1}.
/// Throws std::invalid_argument for fewer than three slices.
mpz_class action(const Trajectory& traj);

/**
 * The action completed by its two boundary link terms Im(psi_a^dag psi_{a+1}) at
 * a = n_min and a = n_max - 1, so every link carries full weight:
 *
 *   S_var = sum_{a=n_min}^{n_max-1} 2 Im(psi_a^dag psi_{a+1}) + sum_{interior n} psi_n^dag H psi_n
 *
 * The boundary slices are the fixed initial/final data; with them present the
 * variation at every interior site reproduces the equation of motion.
 */
mpz_class variational_action(const Trajectory& traj);

enum class VariedSlot { Psi, PsiConj };
enum class Component { Real, Imag };

/// One of the independent variables psi_n^alpha or psi*_n^alpha, displaced along its real or imaginary axis.
struct VariationSite {
    long n = 0;
    std::size_t alpha = 0;
    Component part = Component::Real;
    VariedSlot slot = VariedSlot::PsiConj;
};

/**
 * Integer-valued variation [g(f + delta) - g(f - delta)] / (2 delta) of a polynomial g.
 * delta == 0 gives 0. The quotient must be exact (true for g of degree <= 2); otherwise std::logic_error.
 */
GaussInt integer_variation(const std::function<GaussInt(const GaussInt&)>& g, const GaussInt& f,
                           const GaussInt& delta);

/**
 * Integer variation of variational_action() with psi and psi* treated as independent variables.
 * The displacement is delta (Real part) or i*delta (Imag part). Returns the exact quotient, which equals
 * -i R_n^alpha for the psi* slot and conj(-i R_n^alpha) for the psi slot, R_n the equation-of-motion residual.
 *
 * Throws std::out_of_range for a boundary site, std::invalid_argument for delta == 0 or a bad alpha.
 */
GaussInt discrete_variation(const Trajectory& traj, const VariationSite& site, const mpz_class& delta);

/// psi_n^dag G psi_{n-1} + psi_{n-1}^dag G psi_n (real by hermiticity of G).
mpz_class q_correlator(const Trajectory& traj, const HermitianMatrix& g, long n);

/// Re psi_n^dag (psi_{n+1} + psi_{n-1}), i.e. twice psi_n^dag Q psi_n, kept doubled to stay integral.
mpz_class q_symmetrized(const Trajectory& traj, long n);

struct ConservationReport {
    bool is_conserved = false;
    bool commutes_with_h = false;
    long first_n = 0;  ///< clock value of values[0]
    std::vector<mpz_class> values;
};

/// q_correlator at every n in [n_min + 1, n_max]. Throws std::invalid_argument if traj is not a solution.
ConservationReport conservation_report(const Trajectory& traj, const HermitianMatrix& g);

}  // namespace hamca
