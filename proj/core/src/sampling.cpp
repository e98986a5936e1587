#include "hamca/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

namespace hamca {

namespace {

constexpr double kPi = std::numbers::pi;
// Slack on reliability bounds so that t = n * l lands inside despite rounding of t / l.
constexpr double kClockSlack = 1e-9;

// sinc(x) = sin(x)/x and its first two derivatives in x, given sin(x) and cos(x).
struct SincDerivs {
    double s0, s1, s2;
};

SincDerivs sinc_derivs(double x, double sin_x, double cos_x)
{
    if (std::abs(x) < 0.5) {
        // Power series; the closed forms cancel badly near zero.
        double s0 = 0.0, s1 = 0.0, s2 = 0.0;
        double fact = 1.0;  // (2j+1)!
        const double x2 = x * x;
        double x_pow = 1.0;  // x^(2j)
        for (int j = 0; j <= 10; ++j) {
            if (j > 0) {
                fact *= (2.0 * j) * (2.0 * j + 1.0);
            }
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            s0 += sign * x_pow / fact;
            if (j > 0) {
                s1 += sign * 2.0 * j * (x_pow / x2) * x / fact;
                s2 += sign * 2.0 * j * (2.0 * j - 1.0) * (x_pow / x2) / fact;
            }
            x_pow *= x2;
        }
        return {s0, s1, s2};
    }
    const double x2 = x * x;
    return {sin_x / x, (x * cos_x - sin_x) / x2, ((2.0 - x2) * sin_x - 2.0 * x * cos_x) / (x2 * x)};
}

// Kernel K(u) and its u-derivatives up to `order`.
std::array<double, 3> kernel(double u, const ReconstructionOptions& opt, int order)
{
    // sin(pi u), cos(pi u) with the integer part removed exactly, so the kernel vanishes at lattice points.
    const double k = std::nearbyint(u);
    const double r = u - k;
    const double parity = (static_cast<long long>(k) % 2 == 0) ? 1.0 : -1.0;
    const double sin_pu = parity * std::sin(kPi * r);
    const double cos_pu = parity * std::cos(kPi * r);
    const SincDerivs s = sinc_derivs(kPi * u, sin_pu, cos_pu);
    const double k0 = s.s0, k1 = kPi * s.s1, k2 = kPi * kPi * s.s2;
    if (!opt.regularized) {
        return {k0, k1, k2};
    }
    const double alpha = (kPi - opt.band_limit) / 2.0;
    const double c = alpha / static_cast<double>(opt.radius);
    const double g = std::exp(-c * u * u);
    if (order == 0) {
        return {k0 * g, 0.0, 0.0};
    }
    const double g1 = -2.0 * c * u * g;
    const double g2 = (4.0 * c * c * u * u - 2.0 * c) * g;
    return {k0 * g, k1 * g + k0 * g1, k2 * g + 2.0 * k1 * g1 + k0 * g2};
}

double max_abs_diff(const ComplexVector& a, const ComplexVector& b)
{
    double err = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        err = std::max(err, std::abs(a[k] - b[k]));
    }
    return err;
}

Complex dot_conj(const ComplexVector& a, const ComplexVector& b)
{
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < a.size(); ++k) {
        acc += std::conj(a[k]) * b[k];
    }
    return acc;
}

ComplexVector complex_apply_on_axis(const GaussMatrix& op, const ComplexVector& t, const Shape& shape, std::size_t axis)
{
    const std::size_t d = shape[axis];
    std::size_t inner_stride = 1;
    for (std::size_t k = axis + 1; k < shape.size(); ++k) {
        inner_stride *= shape[k];
    }
    const std::size_t outer = t.size() / (d * inner_stride);
    ComplexVector out(t.size());
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t s = 0; s < inner_stride; ++s) {
            const std::size_t base = o * d * inner_stride + s;
            for (std::size_t r = 0; r < d; ++r) {
                Complex acc{0.0, 0.0};
                for (std::size_t c = 0; c < d; ++c) {
                    acc += to_complex(op(r, c)) * t[base + c * inner_stride];
                }
                out[base + r * inner_stride] = acc;
            }
        }
    }
    return out;
}

ComplexVector complex_apply_full(const GaussMatrix& op, const ComplexVector& t)
{
    ComplexVector out(t.size());
    for (std::size_t r = 0; r < t.size(); ++r) {
        for (std::size_t c = 0; c < t.size(); ++c) {
            out[r] += to_complex(op(r, c)) * t[c];
        }
    }
    return out;
}

ComplexVector complex_kron(const ComplexVector& a, const ComplexVector& b)
{
    ComplexVector out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a) {
        for (const auto& y : b) {
            out.push_back(x * y);
        }
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// ModeSet

ModeSet::ModeSet(std::vector<Mode> modes)
    : modes_(std::move(modes))
{
    if (modes_.empty()) {
        throw std::invalid_argument("ModeSet: needs at least one mode");
    }
    dim_ = modes_.front().amplitude.size();
    for (const auto& m : modes_) {
        if (m.amplitude.size() != dim_) {
            throw std::invalid_argument("ModeSet: amplitudes differ in dimension");
        }
        if (std::abs(m.omega) > kPi) {
            throw std::invalid_argument("ModeSet: |omega| exceeds the band limit pi");
        }
    }
}

ComplexVector ModeSet::sample(long n) const
{
    ComplexVector out(dim_);
    for (const auto& m : modes_) {
        const Complex phase = std::polar(1.0, -m.omega * static_cast<double>(n));
        for (std::size_t k = 0; k < dim_; ++k) {
            out[k] += m.amplitude[k] * phase;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// ContinuumWave

ContinuumWave ContinuumWave::from_samples(double l, long n_min, std::vector<ComplexVector> samples,
                                          ReconstructionOptions options)
{
    if (!(l > 0.0)) {
        throw std::invalid_argument("ContinuumWave: discreteness scale l must be positive");
    }
    if (samples.empty()) {
        throw std::invalid_argument("ContinuumWave: empty sample window");
    }
    for (const auto& s : samples) {
        if (s.size() != samples.front().size()) {
            throw std::invalid_argument("ContinuumWave: samples differ in dimension");
        }
    }
    if (options.regularized && (options.radius == 0 || options.band_limit < 0.0 || options.band_limit >= kPi)) {
        throw std::invalid_argument("ContinuumWave: regularization needs radius > 0 and 0 <= band_limit < pi");
    }
    return ContinuumWave(l, Sampled{n_min, std::move(samples)}, options);
}

ContinuumWave ContinuumWave::from_modes(ModeSet modes, double l)
{
    if (!(l > 0.0)) {
        throw std::invalid_argument("ContinuumWave: discreteness scale l must be positive");
    }
    return ContinuumWave(l, std::move(modes), {});
}

std::size_t ContinuumWave::dim() const noexcept
{
    if (const auto* s = std::get_if<Sampled>(&source_)) {
        return s->samples.front().size();
    }
    return std::get<ModeSet>(source_).dim();
}

long ContinuumWave::n_min() const
{
    if (const auto* s = std::get_if<Sampled>(&source_)) {
        return s->n_min;
    }
    throw std::logic_error("ContinuumWave: a modal wave has no sample window");
}

long ContinuumWave::n_max() const
{
    if (const auto* s = std::get_if<Sampled>(&source_)) {
        return s->n_min + static_cast<long>(s->samples.size()) - 1;
    }
    throw std::logic_error("ContinuumWave: a modal wave has no sample window");
}

ComplexVector ContinuumWave::sample(long n) const
{
    if (const auto* s = std::get_if<Sampled>(&source_)) {
        if (n < n_min() || n > n_max()) {
            throw std::out_of_range("ContinuumWave: sample " + std::to_string(n) + " outside the window");
        }
        return s->samples[static_cast<std::size_t>(n - s->n_min)];
    }
    return std::get<ModeSet>(source_).sample(n);
}

bool ContinuumWave::is_reliable(double t) const
{
    if (is_modal()) {
        return true;
    }
    const double tau = t / l_;
    const auto pad = static_cast<double>(options_.radius);
    return tau >= static_cast<double>(n_min()) + pad - kClockSlack
        && tau <= static_cast<double>(n_max()) - pad + kClockSlack;
}

ComplexVector ContinuumWave::value(double t) const { return derivative(t, 0); }

ComplexVector ContinuumWave::derivative(double t, int order) const
{
    if (order < 0 || order > 2) {
        throw std::invalid_argument("ContinuumWave: derivative order must be 0, 1 or 2");
    }
    ComplexVector out(dim());
    if (const auto* modes = std::get_if<ModeSet>(&source_)) {
        for (const auto& m : modes->modes()) {
            const double freq = m.omega / l_;
            Complex factor = std::polar(1.0, -freq * t);
            for (int k = 0; k < order; ++k) {
                factor *= Complex(0.0, -freq);
            }
            for (std::size_t a = 0; a < out.size(); ++a) {
                out[a] += m.amplitude[a] * factor;
            }
        }
        return out;
    }

    const auto& s = std::get<Sampled>(source_);
    const double tau = t / l_;
    long first = s.n_min;
    long last = n_max();
    if (options_.regularized) {
        const auto r = static_cast<double>(options_.radius);
        first = std::max(first, static_cast<long>(std::ceil(tau - r)));
        last = std::min(last, static_cast<long>(std::floor(tau + r)));
    }
    const double scale = std::pow(1.0 / l_, order);
    for (long n = first; n <= last; ++n) {
        const double w = kernel(tau - static_cast<double>(n), options_, order)[static_cast<std::size_t>(order)] * scale;
        if (w == 0.0) {
            continue;
        }
        const ComplexVector& v = s.samples[static_cast<std::size_t>(n - s.n_min)];
        for (std::size_t a = 0; a < out.size(); ++a) {
            out[a] += w * v[a];
        }
    }
    return out;
}

ComplexVector to_complex(const GaussVector& v)
{
    ComplexVector out;
    out.reserve(v.size());
    for (const auto& z : v) {
        out.push_back(to_complex(z));
    }
    return out;
}

ContinuumWave reconstruct(const Trajectory& traj, double l, ReconstructionOptions options)
{
    std::vector<ComplexVector> samples;
    samples.reserve(traj.size());
    for (const auto& s : traj.states()) {
        samples.push_back(to_complex(s));
    }
    return ContinuumWave::from_samples(l, traj.n_min(), std::move(samples), options);
}

std::vector<ComplexVector> resample(const ContinuumWave& wave, long n_min, long n_max)
{
    std::vector<ComplexVector> out;
    for (long n = n_min; n <= n_max; ++n) {
        out.push_back(wave.value(static_cast<double>(n) * wave.scale()));
    }
    return out;
}

ShiftReport shift_check(const ContinuumWave& wave, long n)
{
    if (!wave.is_modal() && (n - 1 < wave.n_min() || n + 1 > wave.n_max())) {
        throw std::out_of_range("shift_check: clock " + std::to_string(n) + " has no neighbour sample");
    }
    const double l = wave.scale();
    const double t = static_cast<double>(n) * l;
    return {max_abs_diff(wave.value(t + l), wave.sample(n + 1)), max_abs_diff(wave.value(t - l), wave.sample(n - 1))};
}

double q_continuum(const ContinuumWave& wave, double t)
{
    const double l = wave.scale();
    if (!wave.is_reliable(t - l) || !wave.is_reliable(t + l)) {
        throw std::out_of_range("q_continuum: t = " + std::to_string(t) + " outside the reliable region");
    }
    const ComplexVector here = wave.value(t);
    ComplexVector sum = wave.value(t + l);
    const ComplexVector back = wave.value(t - l);
    for (std::size_t a = 0; a < sum.size(); ++a) {
        sum[a] += back[a];
    }
    return dot_conj(here, sum).real() / 2.0;
}

ExpansionReport expansion_error(const ContinuumWave& wave, double t)
{
    ExpansionReport r;
    r.q_exact = q_continuum(wave, t);
    const ComplexVector psi = wave.value(t);
    const ComplexVector second = wave.derivative(t, 2);
    const double l = wave.scale();
    r.q_order0 = dot_conj(psi, psi).real();
    r.q_order2 = l * l / 2.0 * dot_conj(psi, second).real();
    r.remainder = r.q_exact - r.q_order0 - r.q_order2;
    return r;
}

// ---------------------------------------------------------------------------
// ContinuumMultiWave

ContinuumMultiWave::ContinuumMultiWave(std::vector<Term> terms)
    : terms_(std::move(terms))
{
    if (terms_.empty() || terms_.front().factors.empty()) {
        throw std::invalid_argument("ContinuumMultiWave: needs at least one term with one factor");
    }
    for (const auto& f : terms_.front().factors) {
        shape_.push_back(f.dim());
    }
    const double l = terms_.front().factors.front().scale();
    for (const auto& term : terms_) {
        if (term.factors.size() != shape_.size()) {
            throw std::invalid_argument("ContinuumMultiWave: terms differ in the number of clocks");
        }
        for (std::size_t k = 0; k < shape_.size(); ++k) {
            if (term.factors[k].dim() != shape_[k] || term.factors[k].scale() != l) {
                throw std::invalid_argument("ContinuumMultiWave: factor dimension or scale mismatch");
            }
        }
    }
}

ComplexVector ContinuumMultiWave::value(std::span<const double> t) const
{
    if (t.size() != m()) {
        throw std::invalid_argument("ContinuumMultiWave: wrong number of times");
    }
    ComplexVector out(shape_size(shape_));
    for (const auto& term : terms_) {
        ComplexVector product{term.coeff};
        for (std::size_t k = 0; k < m(); ++k) {
            product = complex_kron(product, term.factors[k].value(t[k]));
        }
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] += product[i];
        }
    }
    return out;
}

bool ContinuumMultiWave::is_reliable(std::span<const double> t) const
{
    if (t.size() != m()) {
        return false;
    }
    return std::all_of(terms_.begin(), terms_.end(), [&](const Term& term) {
        for (std::size_t k = 0; k < m(); ++k) {
            if (!term.factors[k].is_reliable(t[k])) {
                return false;
            }
        }
        return true;
    });
}

ContinuumMultiWave reconstruct_terms(std::span<const ProductTerm> terms, double l, ReconstructionOptions options)
{
    std::vector<ContinuumMultiWave::Term> out;
    for (const auto& term : terms) {
        ContinuumMultiWave::Term t;
        t.coeff = to_complex(term.coeff);
        for (const auto& f : term.factors) {
            t.factors.push_back(reconstruct(f, l, options));
        }
        out.push_back(std::move(t));
    }
    return ContinuumMultiWave(std::move(out));
}

ComplexVector multi_time_residual_continuum(const ContinuumMultiWave& wave, const MultiCA& sys,
                                            std::span<const double> t)
{
    if (sys.m() != wave.m() || sys.shape() != wave.shape()) {
        throw std::invalid_argument("multi_time_residual_continuum: wave does not match the system");
    }
    const double l = wave.scale();
    std::vector<double> tt(t.begin(), t.end());
    if (!wave.is_reliable(tt)) {
        throw std::out_of_range("multi_time_residual_continuum: unreliable evaluation point");
    }
    const ComplexVector here = wave.value(tt);
    ComplexVector residual(here.size());
    ComplexVector h_psi(here.size());
    for (std::size_t k = 0; k < wave.m(); ++k) {
        std::vector<double> fwd = tt, back = tt;
        fwd[k] += l;
        back[k] -= l;
        if (!wave.is_reliable(fwd) || !wave.is_reliable(back)) {
            throw std::out_of_range("multi_time_residual_continuum: unreliable shifted point");
        }
        const ComplexVector vf = wave.value(fwd);
        const ComplexVector vb = wave.value(back);
        const ComplexVector hk = complex_apply_on_axis(sys.part(k).hamiltonian().matrix(), here, wave.shape(), k);
        for (std::size_t i = 0; i < here.size(); ++i) {
            residual[i] += vf[i] - vb[i];
            h_psi[i] += hk[i];
        }
    }
    if (sys.interaction()) {
        const ComplexVector hi = complex_apply_full(sys.interaction()->matrix(), here);
        for (std::size_t i = 0; i < here.size(); ++i) {
            h_psi[i] += hi[i];
        }
    }
    for (std::size_t i = 0; i < here.size(); ++i) {
        residual[i] += Complex(0.0, 1.0) * h_psi[i];
    }
    return residual;
}

double multi_q_continuum(const ContinuumMultiWave& wave, std::span<const double> t)
{
    const double l = wave.scale();
    std::vector<double> tt(t.begin(), t.end());
    const ComplexVector here = wave.value(tt);
    double total = 0.0;
    for (std::size_t k = 0; k < wave.m(); ++k) {
        std::vector<double> fwd = tt, back = tt;
        fwd[k] += l;
        back[k] -= l;
        if (!wave.is_reliable(fwd) || !wave.is_reliable(back)) {
            throw std::out_of_range("multi_q_continuum: unreliable shifted point");
        }
        ComplexVector sum = wave.value(fwd);
        const ComplexVector vb = wave.value(back);
        for (std::size_t i = 0; i < sum.size(); ++i) {
            sum[i] += vb[i];
        }
        total += dot_conj(here, sum).real() / 2.0;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Dispersion

bool dispersion_check(double energy, double omega) { return std::abs(2.0 * std::sin(omega) - energy) <= 1e-12; }

std::optional<double> dispersion_frequency(double energy)
{
    if (std::abs(energy) > 2.0) {
        return std::nullopt;
    }
    return std::asin(energy / 2.0);
}

double mode_recursion_residual(double energy, double omega, std::size_t steps)
{
    Complex prev{1.0, 0.0};
    Complex cur = std::polar(1.0, -omega);
    double err = std::abs(cur - std::polar(1.0, -omega));
    for (std::size_t n = 1; n < steps; ++n) {
        const Complex next = prev - Complex(0.0, energy) * cur;
        prev = cur;
        cur = next;
        err = std::max(err, std::abs(cur - std::polar(1.0, -omega * static_cast<double>(n + 1))));
    }
    return err;
}

double fit_loglog_slope(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("fit_loglog_slope: need at least two paired points");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const auto n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || y[i] == 0.0) {
            throw std::invalid_argument("fit_loglog_slope: x must be positive and y nonzero");
        }
        const double lx = std::log(x[i]);
        const double ly = std::log(std::abs(y[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void write_scaling_csv(std::ostream& os, std::span<const ScalingRow> rows)
{
    os << "l,q_exact,q_order0,q_order2,remainder\n";
    os << std::setprecision(17);
    for (const auto& row : rows) {
        os << row.l << ',' << row.report.q_exact << ',' << row.report.q_order0 << ',' << row.report.q_order2 << ','
           << row.report.remainder << '\n';
    }
}

void write_reconstruction_csv(std::ostream& os, const ContinuumWave& wave, std::span<const double> times)
{
    os << 't';
    for (std::size_t a = 0; a < wave.dim(); ++a) {
        os << ",re_" << a << ",im_" << a;
    }
    os << '\n' << std::setprecision(17);
    for (double t : times) {
        os << t;
        for (const auto& z : wave.value(t)) {
            os << ',' << z.real() << ',' << z.imag();
        }
        os << '\n';
    }
}

}  // namespace hamca
