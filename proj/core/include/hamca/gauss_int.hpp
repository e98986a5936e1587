#pragma once

#include <complex>
#include <optional>
#include <ostream>
#include <string>

#include <gmpxx.h>

namespace hamca {

/**
 * Gaussian integer re + i*im with arbitrary-precision components.
 *
 * Every operation is exact. The ring has no general inverse, so division is
 * only offered where the caller knows the quotient exists (divide_exact) or
 * wants to test for it (try_divide).
 */
class GaussInt {
public:
    GaussInt() = default;
    GaussInt(long re) : re_(re), im_(0) {}  // NOLINT(google-explicit-constructor)
    GaussInt(long re, long im) : re_(re), im_(im) {}
    GaussInt(mpz_class re, mpz_class im) : re_(std::move(re)), im_(std::move(im)) {}
    explicit GaussInt(mpz_class re) : re_(std::move(re)), im_(0) {}

    static GaussInt i() { return {0, 1}; }

    const mpz_class& re() const noexcept { return re_; }
    const mpz_class& im() const noexcept { return im_; }

    bool is_zero() const noexcept { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const noexcept { return sgn(im_) == 0; }

    GaussInt conj() const { return {re_, -im_}; }
    GaussInt times_i() const { return {-im_, re_}; }
    GaussInt times_minus_i() const { return {im_, -re_}; }

    /// |z|^2
    mpz_class norm() const { return re_ * re_ + im_ * im_; }

    GaussInt& operator+=(const GaussInt& o);
    GaussInt& operator-=(const GaussInt& o);
    GaussInt& operator*=(const GaussInt& o);

    // Quotient by a rational integer. Throws std::logic_error on a remainder
    // or a zero divisor: callers only divide where divisibility is guaranteed.
    GaussInt divide_exact(const mpz_class& d) const;
    GaussInt divide_exact(const GaussInt& d) const;

    // Quotient in Z[i] if d divides *this, otherwise nullopt.
    std::optional<GaussInt> try_divide(const GaussInt& d) const;

    std::string to_string() const;

    friend bool operator==(const GaussInt& a, const GaussInt& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
    friend bool operator!=(const GaussInt& a, const GaussInt& b) { return !(a == b); }

private:
    mpz_class re_{0};
    mpz_class im_{0};
};

GaussInt gauss_mul(const GaussInt& a, const GaussInt& b);

inline GaussInt operator+(GaussInt a, const GaussInt& b) { return a += b; }
inline GaussInt operator-(GaussInt a, const GaussInt& b) { return a -= b; }
inline GaussInt operator*(const GaussInt& a, const GaussInt& b) { return gauss_mul(a, b); }
inline GaussInt operator-(const GaussInt& a) { return {-a.re(), -a.im()}; }

std::ostream& operator<<(std::ostream& os, const GaussInt& z);

/// Largest magnitude that converts to double without rounding.
inline constexpr long kMaxExactDouble = 1L << 53;

/**
 * Converts to a complex double. Throws std::range_error if either component
 * has magnitude >= 2^53, where the conversion would round.
 */
std::complex<double> to_complex(const GaussInt& z);

}  // namespace hamca
