#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "hamca/multi_ca.hpp"
#include "hamca/single_ca.hpp"

namespace hamca {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// One plane wave amplitude * exp(-i omega n), omega in clock units.
struct Mode {
    ComplexVector amplitude;
    double omega = 0.0;
};

/// psi_n = sum of modes. Every |omega| <= pi (the band limit in clock units).
class ModeSet {
public:
    explicit ModeSet(std::vector<Mode> modes);

    std::size_t dim() const noexcept { return dim_; }
    const std::vector<Mode>& modes() const noexcept { return modes_; }

    ComplexVector sample(long n) const;

private:
    std::vector<Mode> modes_;
    std::size_t dim_ = 0;
};

/**
 * Truncation control for the sampled sinc series.
 *
 * With `regularized` set, each sample is weighted by sinc(pi u) * exp(-alpha u^2 / radius) for |u| <= radius,
 * u = t/l - n, alpha = (pi - band_limit) / 2. The kernel still vanishes at every nonzero integer, so the
 * series interpolates the samples exactly, and it is shift invariant, so linear recursions satisfied by the
 * samples carry over to off-lattice points. The truncation error for a signal with clock-unit band
 * <= band_limit falls off like exp(-alpha * radius).
 *
 * Without it, the plain sinc series over all stored samples is used; its error decays only like 1/distance.
 */
struct ReconstructionOptions {
    std::size_t radius = 16;
    double band_limit = std::numbers::pi / 2;
    bool regularized = true;
};

/**
 * Bandlimited continuous-time wave function psi^alpha(t) with discreteness scale l.
 *
 * Either a reconstruction from samples psi_n (psi(n l) = psi_n), or the closed-form continuation
 * sum a exp(-i omega t / l) of a ModeSet.
 */
class ContinuumWave {
public:
    /// Throws std::invalid_argument for l <= 0, an empty window or ragged samples.
    static ContinuumWave from_samples(double l, long n_min, std::vector<ComplexVector> samples,
                                      ReconstructionOptions options = {});
    static ContinuumWave from_modes(ModeSet modes, double l);

    double scale() const noexcept { return l_; }
    std::size_t dim() const noexcept;
    bool is_modal() const noexcept { return std::holds_alternative<ModeSet>(source_); }

    ComplexVector value(double t) const;
    /// d^order/dt^order psi(t), order in {0, 1, 2}; closed form, never finite differences.
    ComplexVector derivative(double t, int order) const;

    /// Sample psi_n (the stored value, or the mode sum at n).
    ComplexVector sample(long n) const;

    /// Sample window [n_min, n_max] (sampled waves only).
    long n_min() const;
    long n_max() const;

    /// At least `radius` samples from each edge (always true for modal waves).
    bool is_reliable(double t) const;

    const ReconstructionOptions& options() const noexcept { return options_; }

private:
    struct Sampled {
        long n_min = 0;
        std::vector<ComplexVector> samples;
    };

    ContinuumWave(double l, std::variant<Sampled, ModeSet> source, ReconstructionOptions options)
        : l_(l)
        , source_(std::move(source))
        , options_(options)
    {
    }

    double l_;
    std::variant<Sampled, ModeSet> source_;
    ReconstructionOptions options_;
};

/// Converts exactly; throws std::range_error beyond 2^53.
ComplexVector to_complex(const GaussVector& v);

/// Sinc reconstruction of a trajectory. Throws std::invalid_argument for l <= 0.
ContinuumWave reconstruct(const Trajectory& traj, double l, ReconstructionOptions options = {});

/// psi(n l) for every n in the window; the inverse of reconstruct.
std::vector<ComplexVector> resample(const ContinuumWave& wave, long n_min, long n_max);

struct ShiftReport {
    double forward_err = 0.0;
    double backward_err = 0.0;
};

/// Max-abs deviation of psi(n l +- l) from the samples psi_{n +- 1}. Throws std::out_of_range at the edges.
ShiftReport shift_check(const ContinuumWave& wave, long n);

/// Re psi^dag(t) (psi(t + l) + psi(t - l)) / 2. Throws std::out_of_range outside the reliable region.
double q_continuum(const ContinuumWave& wave, double t);

struct ExpansionReport {
    double q_exact = 0.0;
    double q_order0 = 0.0;  ///< |psi(t)|^2
    double q_order2 = 0.0;  ///< (l^2 / 2) Re psi^dag psi''
    double remainder = 0.0; ///< q_exact - q_order0 - q_order2

    double remainder_without_order2() const { return q_exact - q_order0; }
};

/// Compares the cosh form of the conserved quantity with its l^2 truncation at time t.
ExpansionReport expansion_error(const ContinuumWave& wave, double t);

/// Continuum counterpart of a superposition of product terms: one ContinuumWave per clock and term.
class ContinuumMultiWave {
public:
    struct Term {
        Complex coeff{1.0, 0.0};
        std::vector<ContinuumWave> factors;
    };

    explicit ContinuumMultiWave(std::vector<Term> terms);

    std::size_t m() const noexcept { return shape_.size(); }
    const Shape& shape() const noexcept { return shape_; }
    double scale() const noexcept { return terms_.front().factors.front().scale(); }
    const std::vector<Term>& terms() const noexcept { return terms_; }

    /// Flat row-major tensor Psi(t_1..t_m).
    ComplexVector value(std::span<const double> t) const;
    bool is_reliable(std::span<const double> t) const;

private:
    std::vector<Term> terms_;
    Shape shape_;
};

ContinuumMultiWave reconstruct_terms(std::span<const ProductTerm> terms, double l, ReconstructionOptions options = {});

/**
 * sum_k [Psi(.. t_k + l ..) - Psi(.. t_k - l ..)] + i (sum_k H_(k) + I) Psi(t), i.e. the multi-time
 * equation with sinh[l d/dt_k] and the factor of two kept on the left, matching the discrete residual
 * at lattice points. Throws std::out_of_range if t or a +-l shift is unreliable.
 */
ComplexVector multi_time_residual_continuum(const ContinuumMultiWave& wave, const MultiCA& sys,
                                            std::span<const double> t);

/// Re sum_k Psi^dag(t) (Psi(t + l e_k) + Psi(t - l e_k)) / 2; tends to m |Psi|^2 as l -> 0.
double multi_q_continuum(const ContinuumMultiWave& wave, std::span<const double> t);

/// |2 sin(omega) - E| <= 1e-12
bool dispersion_check(double energy, double omega);

/// omega = arcsin(E / 2) for |E| <= 2; nullopt (evanescent) otherwise.
std::optional<double> dispersion_frequency(double energy);

/// Largest |psi_n - exp(-i omega n)| over n <= steps, psi_n from the float recursion
/// psi_{n+1} = psi_{n-1} - i E psi_n started on the mode.
double mode_recursion_residual(double energy, double omega, std::size_t steps);

/// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

struct ScalingRow {
    double l = 0.0;
    ExpansionReport report;
};

void write_scaling_csv(std::ostream& os, std::span<const ScalingRow> rows);

/// Columns t, re_0, im_0, re_1, im_1, ...
void write_reconstruction_csv(std::ostream& os, const ContinuumWave& wave, std::span<const double> times);

}  // namespace hamca
