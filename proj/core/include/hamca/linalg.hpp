#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "hamca/gauss_int.hpp"

namespace hamca {

/// State vector psi^alpha at a fixed clock value.
class GaussVector {
public:
    GaussVector() = default;
    explicit GaussVector(std::size_t dim) : entries_(dim) {}
    explicit GaussVector(std::vector<GaussInt> entries) : entries_(std::move(entries)) {}
    GaussVector(std::initializer_list<GaussInt> entries) : entries_(entries) {}

    static GaussVector unit(std::size_t dim, std::size_t k);

    std::size_t size() const noexcept { return entries_.size(); }
    bool is_zero() const;

    GaussInt& operator[](std::size_t k) { return entries_[k]; }
    const GaussInt& operator[](std::size_t k) const { return entries_[k]; }

    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }
    const std::vector<GaussInt>& entries() const noexcept { return entries_; }

    GaussVector& operator+=(const GaussVector& o);
    GaussVector& operator-=(const GaussVector& o);

    friend bool operator==(const GaussVector&, const GaussVector&) = default;

private:
    std::vector<GaussInt> entries_;
};

GaussVector operator+(GaussVector a, const GaussVector& b);
GaussVector operator-(GaussVector a, const GaussVector& b);
GaussVector operator*(const GaussInt& s, const GaussVector& v);
GaussVector times_i(const GaussVector& v);

/// a^dagger b
GaussInt inner(const GaussVector& a, const GaussVector& b);

/// Dense rows x cols matrix, row-major.
class GaussMatrix {
public:
    GaussMatrix() = default;
    GaussMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}
    GaussMatrix(std::initializer_list<std::initializer_list<GaussInt>> rows);

    static GaussMatrix identity(std::size_t dim);
    static GaussMatrix diagonal(std::span<const GaussInt> diag);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    bool is_zero() const;

    GaussInt& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const GaussInt& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    GaussMatrix conj_transpose() const;

    GaussMatrix& operator+=(const GaussMatrix& o);
    GaussMatrix& operator-=(const GaussMatrix& o);

    friend bool operator==(const GaussMatrix&, const GaussMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<GaussInt> entries_;
};

GaussMatrix operator+(GaussMatrix a, const GaussMatrix& b);
GaussMatrix operator-(GaussMatrix a, const GaussMatrix& b);
GaussMatrix operator*(const GaussMatrix& a, const GaussMatrix& b);
GaussMatrix operator*(const GaussInt& s, const GaussMatrix& m);
GaussVector operator*(const GaussMatrix& m, const GaussVector& v);

GaussMatrix power(const GaussMatrix& m, unsigned exponent);
GaussMatrix kron(const GaussMatrix& a, const GaussMatrix& b);

/// True iff m equals its conjugate transpose. Throws std::invalid_argument if m is not square.
bool mat_is_hermitian(const GaussMatrix& m);

/**
 * Self-adjoint matrix with Gaussian-integer entries (a Hamiltonian or an observable).
 * Construction validates hermiticity and throws std::invalid_argument otherwise.
 */
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(GaussMatrix m);
    HermitianMatrix(std::initializer_list<std::initializer_list<GaussInt>> rows)
        : HermitianMatrix(GaussMatrix(rows))
    {
    }

    static HermitianMatrix identity(std::size_t dim) { return HermitianMatrix(GaussMatrix::identity(dim)); }
    static HermitianMatrix zero(std::size_t dim) { return HermitianMatrix(GaussMatrix(dim, dim)); }

    std::size_t dim() const noexcept { return m_.rows(); }
    const GaussMatrix& matrix() const noexcept { return m_; }
    const GaussInt& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

    friend bool operator==(const HermitianMatrix&, const HermitianMatrix&) = default;

private:
    GaussMatrix m_;
};

inline GaussVector operator*(const HermitianMatrix& h, const GaussVector& v) { return h.matrix() * v; }

/// H = h_S + i h_A with h_S real symmetric and h_A real antisymmetric (entries have zero imaginary part).
struct HermitianSplit {
    GaussMatrix symmetric;
    GaussMatrix antisymmetric;
};

HermitianSplit split_hermitian(const HermitianMatrix& h);

/// AB - BA
GaussMatrix commutator(const GaussMatrix& a, const GaussMatrix& b);

/// Exact test of [A, B] = 0. Throws std::invalid_argument on a dimension mismatch.
bool commutes(const HermitianMatrix& a, const HermitianMatrix& b);

/// Sum_k 1 x .. x H_k x .. x 1 on the tensor product space.
HermitianMatrix kronecker_sum(std::span<const HermitianMatrix> parts);

/// Exact rank by fraction-free (Bareiss) elimination over Z[i].
std::size_t exact_rank(const GaussMatrix& m);

/// Exact determinant by Bareiss elimination. Throws std::invalid_argument if m is not square.
GaussInt determinant(const GaussMatrix& m);

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);

/// Row-major flat offset of a multi-index. Every tensor index computation goes through here.
std::size_t flat_index(const Shape& shape, std::span<const std::size_t> index);
std::vector<std::size_t> unflatten_index(const Shape& shape, std::size_t flat);

/// Psi^{alpha_1..alpha_m} at a fixed clock tuple. A rank-0 tensor (empty shape) holds one scalar.
class GaussTensor {
public:
    GaussTensor() : entries_(1) {}
    explicit GaussTensor(Shape shape);
    GaussTensor(Shape shape, std::vector<GaussInt> entries);

    static GaussTensor scalar(GaussInt value);
    static GaussTensor from_vector(const GaussVector& v);

    const Shape& shape() const noexcept { return shape_; }
    std::size_t rank() const noexcept { return shape_.size(); }
    std::size_t size() const noexcept { return entries_.size(); }
    bool is_zero() const;

    GaussInt& operator[](std::size_t flat) { return entries_[flat]; }
    const GaussInt& operator[](std::size_t flat) const { return entries_[flat]; }
    const GaussInt& at(std::span<const std::size_t> index) const { return entries_[flat_index(shape_, index)]; }
    GaussInt& at(std::span<const std::size_t> index) { return entries_[flat_index(shape_, index)]; }

    const std::vector<GaussInt>& entries() const noexcept { return entries_; }

    GaussTensor& operator+=(const GaussTensor& o);
    GaussTensor& operator-=(const GaussTensor& o);

    friend bool operator==(const GaussTensor&, const GaussTensor&) = default;

private:
    Shape shape_;
    std::vector<GaussInt> entries_;
};

GaussTensor operator+(GaussTensor a, const GaussTensor& b);
GaussTensor operator-(GaussTensor a, const GaussTensor& b);
GaussTensor operator*(const GaussInt& s, const GaussTensor& t);
GaussTensor times_i(const GaussTensor& t);

/// a^dagger b over all entries.
GaussInt inner(const GaussTensor& a, const GaussTensor& b);

/// Tensor product: shapes concatenate, entries are all pairwise products in row-major order.
GaussTensor kron(const GaussTensor& a, const GaussTensor& b);

/// Applies op to index `axis` only (op acts as 1 x .. x op x .. x 1).
GaussTensor apply_on_axis(const GaussMatrix& op, const GaussTensor& t, std::size_t axis);

/// Applies op to the flattened tensor (op must be size() x size()).
GaussTensor apply_full(const GaussMatrix& op, const GaussTensor& t);

/// Reshapes t into a matrix whose rows run over `row_axes` and columns over the remaining axes.
GaussMatrix bipartite_matrix(const GaussTensor& t, std::span<const std::size_t> row_axes);

}  // namespace hamca
