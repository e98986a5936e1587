#include "hamca/gauss_int.hpp"

#include <sstream>
#include <stdexcept>

namespace hamca {

GaussInt& GaussInt::operator+=(const GaussInt& o)
{
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

GaussInt& GaussInt::operator-=(const GaussInt& o)
{
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

GaussInt& GaussInt::operator*=(const GaussInt& o)
{
    *this = gauss_mul(*this, o);
    return *this;
}

GaussInt gauss_mul(const GaussInt& a, const GaussInt& b)
{
    mpz_class re = a.re() * b.re() - a.im() * b.im();
    mpz_class im = a.re() * b.im() + a.im() * b.re();
    return {std::move(re), std::move(im)};
}

GaussInt GaussInt::divide_exact(const mpz_class& d) const
{
    if (sgn(d) == 0) {
        throw std::logic_error("GaussInt: division by zero");
    }
    if (!mpz_divisible_p(re_.get_mpz_t(), d.get_mpz_t()) || !mpz_divisible_p(im_.get_mpz_t(), d.get_mpz_t())) {
        throw std::logic_error("GaussInt: inexact division of " + to_string() + " by " + d.get_str());
    }
    mpz_class re, im;
    mpz_divexact(re.get_mpz_t(), re_.get_mpz_t(), d.get_mpz_t());
    mpz_divexact(im.get_mpz_t(), im_.get_mpz_t(), d.get_mpz_t());
    return {std::move(re), std::move(im)};
}

std::optional<GaussInt> GaussInt::try_divide(const GaussInt& d) const
{
    if (d.is_zero()) {
        return std::nullopt;
    }
    // a / d = a * conj(d) / |d|^2
    const GaussInt num = gauss_mul(*this, d.conj());
    const mpz_class n = d.norm();
    if (!mpz_divisible_p(num.re_.get_mpz_t(), n.get_mpz_t()) || !mpz_divisible_p(num.im_.get_mpz_t(), n.get_mpz_t())) {
        return std::nullopt;
    }
    return num.divide_exact(n);
}

GaussInt GaussInt::divide_exact(const GaussInt& d) const
{
    auto q = try_divide(d);
    if (!q) {
        throw std::logic_error("GaussInt: inexact division of " + to_string() + " by " + d.to_string());
    }
    return *std::move(q);
}

std::string GaussInt::to_string() const
{
    std::ostringstream os;
    os << *this;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const GaussInt& z)
{
    if (z.is_real()) {
        return os << z.re().get_str();
    }
    if (sgn(z.re()) != 0) {
        os << z.re().get_str() << (sgn(z.im()) > 0 ? "+" : "");
    }
    return os << z.im().get_str() << "i";
}

std::complex<double> to_complex(const GaussInt& z)
{
    static const mpz_class limit(kMaxExactDouble);
    if (abs(z.re()) >= limit || abs(z.im()) >= limit) {
        throw std::range_error("GaussInt " + z.to_string() + " exceeds the exact double range (2^53)");
    }
    return {z.re().get_d(), z.im().get_d()};
}

}  // namespace hamca
