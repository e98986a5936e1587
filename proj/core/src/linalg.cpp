#include "hamca/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hamca {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what)
{
    if (a != b) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs "
                                    + std::to_string(b) + ")");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// GaussVector

GaussVector GaussVector::unit(std::size_t dim, std::size_t k)
{
    GaussVector v(dim);
    v[k] = 1;
    return v;
}

bool GaussVector::is_zero() const
{
    return std::all_of(entries_.begin(), entries_.end(), [](const GaussInt& z) { return z.is_zero(); });
}

GaussVector& GaussVector::operator+=(const GaussVector& o)
{
    require_same_size(size(), o.size(), "GaussVector +");
    for (std::size_t k = 0; k < size(); ++k) {
        entries_[k] += o.entries_[k];
    }
    return *this;
}

GaussVector& GaussVector::operator-=(const GaussVector& o)
{
    require_same_size(size(), o.size(), "GaussVector -");
    for (std::size_t k = 0; k < size(); ++k) {
        entries_[k] -= o.entries_[k];
    }
    return *this;
}

GaussVector operator+(GaussVector a, const GaussVector& b) { return a += b; }
GaussVector operator-(GaussVector a, const GaussVector& b) { return a -= b; }

GaussVector operator*(const GaussInt& s, const GaussVector& v)
{
    GaussVector out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        out[k] = s * v[k];
    }
    return out;
}

GaussVector times_i(const GaussVector& v)
{
    GaussVector out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        out[k] = v[k].times_i();
    }
    return out;
}

GaussInt inner(const GaussVector& a, const GaussVector& b)
{
    require_same_size(a.size(), b.size(), "inner");
    GaussInt acc;
    for (std::size_t k = 0; k < a.size(); ++k) {
        acc += a[k].conj() * b[k];
    }
    return acc;
}

// ---------------------------------------------------------------------------
// GaussMatrix

GaussMatrix::GaussMatrix(std::initializer_list<std::initializer_list<GaussInt>> rows)
    : rows_(rows.size())
    , cols_(rows.size() == 0 ? 0 : rows.begin()->size())
{
    entries_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) {
            throw std::invalid_argument("GaussMatrix: ragged initializer");
        }
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
}

GaussMatrix GaussMatrix::identity(std::size_t dim)
{
    GaussMatrix m(dim, dim);
    for (std::size_t k = 0; k < dim; ++k) {
        m(k, k) = 1;
    }
    return m;
}

GaussMatrix GaussMatrix::diagonal(std::span<const GaussInt> diag)
{
    GaussMatrix m(diag.size(), diag.size());
    for (std::size_t k = 0; k < diag.size(); ++k) {
        m(k, k) = diag[k];
    }
    return m;
}

bool GaussMatrix::is_zero() const
{
    return std::all_of(entries_.begin(), entries_.end(), [](const GaussInt& z) { return z.is_zero(); });
}

GaussMatrix GaussMatrix::conj_transpose() const
{
    GaussMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            t(c, r) = (*this)(r, c).conj();
        }
    }
    return t;
}

GaussMatrix& GaussMatrix::operator+=(const GaussMatrix& o)
{
    require_same_size(rows_, o.rows_, "GaussMatrix +");
    require_same_size(cols_, o.cols_, "GaussMatrix +");
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        entries_[k] += o.entries_[k];
    }
    return *this;
}

GaussMatrix& GaussMatrix::operator-=(const GaussMatrix& o)
{
    require_same_size(rows_, o.rows_, "GaussMatrix -");
    require_same_size(cols_, o.cols_, "GaussMatrix -");
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        entries_[k] -= o.entries_[k];
    }
    return *this;
}

GaussMatrix operator+(GaussMatrix a, const GaussMatrix& b) { return a += b; }
GaussMatrix operator-(GaussMatrix a, const GaussMatrix& b) { return a -= b; }

GaussMatrix operator*(const GaussMatrix& a, const GaussMatrix& b)
{
    require_same_size(a.cols(), b.rows(), "GaussMatrix *");
    GaussMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const GaussInt& ark = a(r, k);
            if (ark.is_zero()) {
                continue;
            }
            for (std::size_t c = 0; c < b.cols(); ++c) {
                out(r, c) += ark * b(k, c);
            }
        }
    }
    return out;
}

GaussMatrix operator*(const GaussInt& s, const GaussMatrix& m)
{
    GaussMatrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out(r, c) = s * m(r, c);
        }
    }
    return out;
}

GaussVector operator*(const GaussMatrix& m, const GaussVector& v)
{
    require_same_size(m.cols(), v.size(), "GaussMatrix * GaussVector");
    GaussVector out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        GaussInt acc;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (!m(r, c).is_zero()) {
                acc += m(r, c) * v[c];
            }
        }
        out[r] = std::move(acc);
    }
    return out;
}

GaussMatrix power(const GaussMatrix& m, unsigned exponent)
{
    if (!m.is_square()) {
        throw std::invalid_argument("power: matrix is not square");
    }
    GaussMatrix result = GaussMatrix::identity(m.rows());
    GaussMatrix base = m;
    while (exponent > 0) {
        if (exponent & 1U) {
            result = result * base;
        }
        exponent >>= 1U;
        if (exponent > 0) {
            base = base * base;
        }
    }
    return result;
}

GaussMatrix kron(const GaussMatrix& a, const GaussMatrix& b)
{
    GaussMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar) {
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            if (a(ar, ac).is_zero()) {
                continue;
            }
            for (std::size_t br = 0; br < b.rows(); ++br) {
                for (std::size_t bc = 0; bc < b.cols(); ++bc) {
                    out(ar * b.rows() + br, ac * b.cols() + bc) = a(ar, ac) * b(br, bc);
                }
            }
        }
    }
    return out;
}

bool mat_is_hermitian(const GaussMatrix& m)
{
    if (!m.is_square()) {
        throw std::invalid_argument("mat_is_hermitian: matrix is " + std::to_string(m.rows()) + "x"
                                    + std::to_string(m.cols()) + ", not square");
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = r; c < m.cols(); ++c) {
            if (m(r, c) != m(c, r).conj()) {
                return false;
            }
        }
    }
    return true;
}

HermitianMatrix::HermitianMatrix(GaussMatrix m)
    : m_(std::move(m))
{
    if (m_.rows() == 0) {
        throw std::invalid_argument("HermitianMatrix: dimension must be positive");
    }
    if (!mat_is_hermitian(m_)) {
        throw std::invalid_argument("HermitianMatrix: matrix is not self-adjoint");
    }
}

HermitianSplit split_hermitian(const HermitianMatrix& h)
{
    const std::size_t d = h.dim();
    HermitianSplit split{GaussMatrix(d, d), GaussMatrix(d, d)};
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            mpz_class s = h(r, c).re() + h(c, r).re();
            mpz_class a = h(r, c).im() - h(c, r).im();
            split.symmetric(r, c) = GaussInt(s).divide_exact(mpz_class(2));
            split.antisymmetric(r, c) = GaussInt(a).divide_exact(mpz_class(2));
        }
    }
    return split;
}

GaussMatrix commutator(const GaussMatrix& a, const GaussMatrix& b) { return a * b - b * a; }

bool commutes(const HermitianMatrix& a, const HermitianMatrix& b)
{
    require_same_size(a.dim(), b.dim(), "commutes");
    return commutator(a.matrix(), b.matrix()).is_zero();
}

HermitianMatrix kronecker_sum(std::span<const HermitianMatrix> parts)
{
    if (parts.empty()) {
        throw std::invalid_argument("kronecker_sum: no parts");
    }
    std::size_t total = 1;
    for (const auto& p : parts) {
        total *= p.dim();
    }
    GaussMatrix sum(total, total);
    for (std::size_t k = 0; k < parts.size(); ++k) {
        GaussMatrix term = GaussMatrix::identity(1);
        for (std::size_t j = 0; j < parts.size(); ++j) {
            term = kron(term, j == k ? parts[j].matrix() : GaussMatrix::identity(parts[j].dim()));
        }
        sum += term;
    }
    return HermitianMatrix(std::move(sum));
}

namespace {

// Fraction-free elimination in place. Returns the rank; `sign` tracks row swaps.
// Every intermediate entry is a minor of the input, so each division is exact.
std::size_t bareiss(GaussMatrix& m, int& sign)
{
    sign = 1;
    GaussInt prev(1);
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t pivot = row;
        while (pivot < m.rows() && m(pivot, col).is_zero()) {
            ++pivot;
        }
        if (pivot == m.rows()) {
            continue;
        }
        if (pivot != row) {
            for (std::size_t c = 0; c < m.cols(); ++c) {
                std::swap(m(pivot, c), m(row, c));
            }
            sign = -sign;
        }
        for (std::size_t r = row + 1; r < m.rows(); ++r) {
            for (std::size_t c = col + 1; c < m.cols(); ++c) {
                GaussInt num = m(r, c) * m(row, col) - m(r, col) * m(row, c);
                m(r, c) = num.divide_exact(prev);
            }
            m(r, col) = GaussInt();
        }
        prev = m(row, col);
        ++row;
    }
    return row;
}

}  // namespace

std::size_t exact_rank(const GaussMatrix& m)
{
    GaussMatrix work = m;
    int sign = 1;
    return bareiss(work, sign);
}

GaussInt determinant(const GaussMatrix& m)
{
    if (!m.is_square()) {
        throw std::invalid_argument("determinant: matrix is not square");
    }
    if (m.rows() == 0) {
        return GaussInt(1);
    }
    GaussMatrix work = m;
    int sign = 1;
    if (bareiss(work, sign) < m.rows()) {
        return GaussInt();
    }
    const GaussInt& last = work(m.rows() - 1, m.cols() - 1);
    return sign > 0 ? last : -last;
}

// ---------------------------------------------------------------------------
// Tensors

std::size_t shape_size(const Shape& shape)
{
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::size_t flat_index(const Shape& shape, std::span<const std::size_t> index)
{
    if (index.size() != shape.size()) {
        throw std::invalid_argument("flat_index: index rank " + std::to_string(index.size()) + " != tensor rank "
                                    + std::to_string(shape.size()));
    }
    std::size_t flat = 0;
    for (std::size_t k = 0; k < shape.size(); ++k) {
        if (index[k] >= shape[k]) {
            throw std::out_of_range("flat_index: index out of range on axis " + std::to_string(k));
        }
        flat = flat * shape[k] + index[k];
    }
    return flat;
}

std::vector<std::size_t> unflatten_index(const Shape& shape, std::size_t flat)
{
    std::vector<std::size_t> index(shape.size());
    for (std::size_t k = shape.size(); k-- > 0;) {
        index[k] = flat % shape[k];
        flat /= shape[k];
    }
    return index;
}

GaussTensor::GaussTensor(Shape shape)
    : shape_(std::move(shape))
    , entries_(shape_size(shape_))
{
}

GaussTensor::GaussTensor(Shape shape, std::vector<GaussInt> entries)
    : shape_(std::move(shape))
    , entries_(std::move(entries))
{
    if (entries_.size() != shape_size(shape_)) {
        throw std::invalid_argument("GaussTensor: " + std::to_string(entries_.size()) + " entries for shape of size "
                                    + std::to_string(shape_size(shape_)));
    }
}

GaussTensor GaussTensor::scalar(GaussInt value) { return GaussTensor({}, {std::move(value)}); }

GaussTensor GaussTensor::from_vector(const GaussVector& v) { return GaussTensor({v.size()}, v.entries()); }

bool GaussTensor::is_zero() const
{
    return std::all_of(entries_.begin(), entries_.end(), [](const GaussInt& z) { return z.is_zero(); });
}

GaussTensor& GaussTensor::operator+=(const GaussTensor& o)
{
    if (shape_ != o.shape_) {
        throw std::invalid_argument("GaussTensor +: shape mismatch");
    }
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        entries_[k] += o.entries_[k];
    }
    return *this;
}

GaussTensor& GaussTensor::operator-=(const GaussTensor& o)
{
    if (shape_ != o.shape_) {
        throw std::invalid_argument("GaussTensor -: shape mismatch");
    }
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        entries_[k] -= o.entries_[k];
    }
    return *this;
}

GaussTensor operator+(GaussTensor a, const GaussTensor& b) { return a += b; }
GaussTensor operator-(GaussTensor a, const GaussTensor& b) { return a -= b; }

GaussTensor operator*(const GaussInt& s, const GaussTensor& t)
{
    std::vector<GaussInt> out;
    out.reserve(t.size());
    for (const auto& z : t.entries()) {
        out.push_back(s * z);
    }
    return GaussTensor(t.shape(), std::move(out));
}

GaussTensor times_i(const GaussTensor& t)
{
    std::vector<GaussInt> out;
    out.reserve(t.size());
    for (const auto& z : t.entries()) {
        out.push_back(z.times_i());
    }
    return GaussTensor(t.shape(), std::move(out));
}

GaussInt inner(const GaussTensor& a, const GaussTensor& b)
{
    if (a.shape() != b.shape()) {
        throw std::invalid_argument("inner: tensor shape mismatch");
    }
    GaussInt acc;
    for (std::size_t k = 0; k < a.size(); ++k) {
        acc += a[k].conj() * b[k];
    }
    return acc;
}

GaussTensor kron(const GaussTensor& a, const GaussTensor& b)
{
    Shape shape = a.shape();
    shape.insert(shape.end(), b.shape().begin(), b.shape().end());
    std::vector<GaussInt> entries;
    entries.reserve(a.size() * b.size());
    for (const auto& x : a.entries()) {
        for (const auto& y : b.entries()) {
            entries.push_back(x * y);
        }
    }
    return GaussTensor(std::move(shape), std::move(entries));
}

GaussTensor apply_on_axis(const GaussMatrix& op, const GaussTensor& t, std::size_t axis)
{
    if (axis >= t.rank()) {
        throw std::out_of_range("apply_on_axis: axis " + std::to_string(axis) + " out of range");
    }
    const std::size_t d = t.shape()[axis];
    if (!op.is_square() || op.rows() != d) {
        throw std::invalid_argument("apply_on_axis: operator does not match axis dimension");
    }
    std::size_t inner_stride = 1;
    for (std::size_t k = axis + 1; k < t.rank(); ++k) {
        inner_stride *= t.shape()[k];
    }
    const std::size_t outer = t.size() / (d * inner_stride);

    GaussTensor out(t.shape());
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t s = 0; s < inner_stride; ++s) {
            const std::size_t base = o * d * inner_stride + s;
            for (std::size_t r = 0; r < d; ++r) {
                GaussInt acc;
                for (std::size_t c = 0; c < d; ++c) {
                    if (!op(r, c).is_zero()) {
                        acc += op(r, c) * t[base + c * inner_stride];
                    }
                }
                out[base + r * inner_stride] = std::move(acc);
            }
        }
    }
    return out;
}

GaussTensor apply_full(const GaussMatrix& op, const GaussTensor& t)
{
    if (!op.is_square() || op.rows() != t.size()) {
        throw std::invalid_argument("apply_full: operator does not match tensor size");
    }
    GaussVector flat = op * GaussVector(t.entries());
    return GaussTensor(t.shape(), flat.entries());
}

GaussMatrix bipartite_matrix(const GaussTensor& t, std::span<const std::size_t> row_axes)
{
    std::vector<bool> is_row(t.rank(), false);
    for (std::size_t a : row_axes) {
        if (a >= t.rank() || is_row[a]) {
            throw std::invalid_argument("bipartite_matrix: invalid or repeated axis " + std::to_string(a));
        }
        is_row[a] = true;
    }
    std::vector<std::size_t> col_axes;
    for (std::size_t a = 0; a < t.rank(); ++a) {
        if (!is_row[a]) {
            col_axes.push_back(a);
        }
    }
    if (row_axes.empty() || col_axes.empty()) {
        throw std::invalid_argument("bipartite_matrix: both sides of the bipartition must be non-empty");
    }
    Shape row_shape, col_shape;
    for (std::size_t a : row_axes) {
        row_shape.push_back(t.shape()[a]);
    }
    for (std::size_t a : col_axes) {
        col_shape.push_back(t.shape()[a]);
    }
    GaussMatrix m(shape_size(row_shape), shape_size(col_shape));
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
        const auto idx = unflatten_index(t.shape(), flat);
        std::vector<std::size_t> ri, ci;
        for (std::size_t a : row_axes) {
            ri.push_back(idx[a]);
        }
        for (std::size_t a : col_axes) {
            ci.push_back(idx[a]);
        }
        m(flat_index(row_shape, ri), flat_index(col_shape, ci)) = t[flat];
    }
    return m;
}

}  // namespace hamca
