#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hamca/linalg.hpp"
#include "hamca/single_ca.hpp"

namespace hamca {

/// m single automata, each with its own clock, plus an optional interaction on the tensor-product space.
class MultiCA {
public:
    explicit MultiCA(std::vector<SingleCA> parts, std::optional<HermitianMatrix> interaction = std::nullopt);

    std::size_t m() const noexcept { return parts_.size(); }
    const std::vector<SingleCA>& parts() const noexcept { return parts_; }
    const SingleCA& part(std::size_t k) const { return parts_.at(k); }
    const std::optional<HermitianMatrix>& interaction() const noexcept { return interaction_; }

    /// (d_1, .., d_m)
    Shape shape() const;
    std::size_t total_dim() const;

    /// Kronecker sum of the part Hamiltonians, plus the interaction if present.
    HermitianMatrix total_hamiltonian() const;

private:
    std::vector<SingleCA> parts_;
    std::optional<HermitianMatrix> interaction_;
};

using ClockTuple = std::vector<long>;

/// Hyperrectangle of clock tuples lo_k <= n_k <= hi_k, with hi_k >= lo_k + 1.
class ClockWindow {
public:
    ClockWindow(std::vector<long> lo, std::vector<long> hi);

    std::size_t m() const noexcept { return lo_.size(); }
    const std::vector<long>& lo() const noexcept { return lo_; }
    const std::vector<long>& hi() const noexcept { return hi_; }
    std::size_t length(std::size_t k) const { return static_cast<std::size_t>(hi_[k] - lo_[k] + 1); }

    /// Number of clock tuples.
    std::size_t size() const;

    bool contains(const ClockTuple& n) const;
    /// Strictly inside in every clock.
    bool is_interior(const ClockTuple& n) const;
    /// Strictly inside in clock k (any value in the others).
    bool is_interior_in(const ClockTuple& n, std::size_t k) const;
    bool has_interior() const;

    /// Row-major position of a tuple (last clock fastest).
    std::size_t linear_index(const ClockTuple& n) const;
    ClockTuple tuple_at(std::size_t index) const;

    /// [lo + 1, hi - 1] in every clock. Throws std::invalid_argument if some clock has no interior.
    ClockWindow interior() const;

    friend bool operator==(const ClockWindow&, const ClockWindow&) = default;

private:
    std::vector<long> lo_;
    std::vector<long> hi_;
};

ClockTuple shifted(ClockTuple n, std::size_t k, long by);

/// Psi(n_1..n_m)^{alpha_1..alpha_m}, stored densely over the window.
class MultiWave {
public:
    MultiWave(ClockWindow window, Shape shape);

    const ClockWindow& window() const noexcept { return window_; }
    const Shape& shape() const noexcept { return shape_; }

    const GaussTensor& at(const ClockTuple& n) const;
    GaussTensor& at(const ClockTuple& n);

    const std::vector<GaussTensor>& values() const noexcept { return values_; }

    bool is_zero() const;

    MultiWave& operator+=(const MultiWave& o);

    friend bool operator==(const MultiWave&, const MultiWave&) = default;

private:
    ClockWindow window_;
    Shape shape_;
    std::vector<GaussTensor> values_;
};

MultiWave operator+(MultiWave a, const MultiWave& b);
MultiWave operator*(const GaussInt& s, const MultiWave& w);

/// coeff * psi^(1)_{n_1} x .. x psi^(m)_{n_m}
struct ProductTerm {
    GaussInt coeff{1};
    std::vector<Trajectory> factors;
};

/// Psi(n) = sum over terms of coeff * prod_k psi^(k)_{n_k}. Throws std::invalid_argument if a factor
/// does not cover its clock range or the terms disagree in shape.
MultiWave assemble(std::span<const ProductTerm> terms, const ClockWindow& window);

/**
 * R(n) = sum_k [Psi(n + e_k) - Psi(n - e_k)] + i (sum_k H_(k) on alpha_k) Psi(n) + i I Psi(n)
 * on the interior sub-window. All-zero iff Psi solves the many-time equation of motion there.
 */
MultiWave multi_eom_residual(const MultiWave& psi, const MultiCA& sys);

/**
 * sum_k sum_{n interior in clock k} [Im(Psi^dag d_k Psi) + Psi^dag H_(k) Psi] + sum_n Psi^dag I Psi,
 * with d_k the symmetric difference in clock k.
 */
mpz_class multi_action(const MultiWave& psi, const MultiCA& sys);

/// c_k(n) = Psi^dag(n) G Psi(n - e_k) + Psi^dag(n - e_k) G Psi(n).
mpz_class multi_clock_correlator(const MultiWave& psi, const HermitianMatrix& g, const ClockTuple& n, std::size_t k);

/// Psi^dag G D Psi + (D Psi)^dag G Psi = sum_k [c_k(n + e_k) - c_k(n)] at an interior tuple.
mpz_class multi_conserved_divergence(const MultiWave& psi, const HermitianMatrix& g, const ClockTuple& n);

/// sum_k Re Psi^dag(n) [Psi(n + e_k) + Psi(n - e_k)] (twice Psi^dag Q Psi).
mpz_class multi_q(const MultiWave& psi, const ClockTuple& n);

struct DefectReport {
    long n_min = 0;
    std::vector<GaussTensor> composite;  ///< single-clock evolution of the composite, per n
    std::vector<GaussTensor> product;    ///< tensor product of the independently evolved parts, per n
    std::vector<GaussTensor> defect;     ///< composite - product, per n
    std::optional<long> first_nonzero_n;
};

/**
 * Evolves the factorized initial data psi0 = x_k psi0_k, psi1 = x_k psi1_k on the tensor space with
 * the shared-clock recursion Psi_{n+1} = Psi_{n-1} - i H_0 Psi_n (H_0 the Kronecker sum), and each part
 * independently with its own recursion; reports the difference for n in [0, steps + 1].
 */
DefectReport single_time_defect(const MultiCA& sys, std::span<const GaussVector> psi0,
                                std::span<const GaussVector> psi1, std::size_t steps);

/// a(n_1) x b(n_2) - b(n_1) x a(n_2) as two product terms.
std::array<ProductTerm, 2> bell_terms(const Trajectory& a, const Trajectory& b);

/**
 * Antisymmetric two-part wave from two solutions of the same two-level automaton.
 * Throws std::invalid_argument unless both are 2-dimensional solutions of the same automaton
 * with linearly independent initial data.
 */
MultiWave bell_state(const Trajectory& a, const Trajectory& b, const ClockWindow& window);

struct WitnessReport {
    std::size_t matrix_rank = 0;
    bool is_product = false;
};

/// Exact rank of Psi(n) reshaped across the bipartition (row_axes | rest). Product state iff rank <= 1.
WitnessReport entanglement_witness(const MultiWave& psi, const ClockTuple& n, std::span<const std::size_t> row_axes);

}  // namespace hamca
