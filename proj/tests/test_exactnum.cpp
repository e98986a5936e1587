#include <gtest/gtest.h>

#include <sstream>
#include <stdexcept>

#include "hamca/gauss_int.hpp"
#include "hamca/linalg.hpp"
#include "support.hpp"

using namespace hamca;

TEST(GaussInt, SpecProducts)
{
    EXPECT_EQ(gauss_mul({1, -1}, {1, -1}), GaussInt(0, -2));
    EXPECT_EQ(gauss_mul({0, 1}, {0, 1}), GaussInt(-1, 0));
    EXPECT_EQ(gauss_mul({3, 2}, {1, -4}), GaussInt(11, -10));
}

TEST(GaussInt, UnitsAndConjugate)
{
    const GaussInt z(5, -7);
    EXPECT_EQ(z.times_i(), GaussInt::i() * z);
    EXPECT_EQ(z.times_minus_i(), GaussInt(0, -1) * z);
    EXPECT_EQ(z.conj(), GaussInt(5, 7));
    EXPECT_EQ(z.norm(), 74);
    EXPECT_EQ((z * z.conj()), GaussInt(74));
}

TEST(GaussInt, BeyondSixtyFourBits)
{
    GaussInt z(1, 1);
    for (int k = 0; k < 200; ++k) {
        z *= GaussInt(1, 1);
    }
    // (1+i)^201 = (1+i) * (2i)^100 = 2^100 (1+i)
    const mpz_class two100 = mpz_class(1) << 100;
    EXPECT_EQ(z, GaussInt(two100, two100));
    EXPECT_THROW((void)to_complex(z), std::range_error);
}

TEST(GaussInt, ExactDivision)
{
    EXPECT_EQ(GaussInt(6, -4).divide_exact(mpz_class(2)), GaussInt(3, -2));
    EXPECT_THROW((void)GaussInt(3, 1).divide_exact(mpz_class(2)), std::logic_error);
    EXPECT_THROW((void)GaussInt(3, 1).divide_exact(mpz_class(0)), std::logic_error);
    const GaussInt a(3, 2), b(1, -4);
    EXPECT_EQ((a * b).divide_exact(b), a);
    EXPECT_EQ((a * b).try_divide(a), b);
    EXPECT_FALSE(GaussInt(1).try_divide(GaussInt(1, 1)).has_value());
}

TEST(GaussInt, Formatting)
{
    std::ostringstream os;
    os << GaussInt(3, -4) << ' ' << GaussInt(0, 1) << ' ' << GaussInt(-2) << ' ' << GaussInt();
    EXPECT_EQ(os.str(), "3-4i 1i -2 0");
}

TEST(GaussInt, ToComplexExactBelowLimit)
{
    const auto c = to_complex(GaussInt(kMaxExactDouble - 1, -(kMaxExactDouble - 1)));
    EXPECT_EQ(c.real(), static_cast<double>(kMaxExactDouble - 1));
    EXPECT_THROW((void)to_complex(GaussInt(kMaxExactDouble, 0)), std::range_error);
}

TEST(GaussIntProperty, RingIdentities)
{
    auto rng = test::rng(1);
    for (int trial = 0; trial < 500; ++trial) {
        const GaussInt a = tools::random_gauss(rng, 1000);
        const GaussInt b = tools::random_gauss(rng, 1000);
        const GaussInt c = tools::random_gauss(rng, 1000);
        EXPECT_EQ((a + b) * c, a * c + b * c);
        EXPECT_EQ((a * b).conj(), a.conj() * b.conj());
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ((a * b) * c, a * (b * c));
    }
}

TEST(Hermitian, SpecExamples)
{
    EXPECT_TRUE(mat_is_hermitian(GaussMatrix{{0, 1}, {1, 0}}));
    EXPECT_FALSE(mat_is_hermitian(GaussMatrix{{0, GaussInt(0, 1)}, {GaussInt(0, 1), 0}}));
    EXPECT_TRUE(mat_is_hermitian(GaussMatrix{{2, GaussInt(1, 1)}, {GaussInt(1, -1), 3}}));
}

TEST(Hermitian, RejectsNonSquareAndNonHermitian)
{
    EXPECT_THROW((void)mat_is_hermitian(GaussMatrix(2, 3)), std::invalid_argument);
    EXPECT_THROW(HermitianMatrix(GaussMatrix{{0, GaussInt(0, 1)}, {GaussInt(0, 1), 0}}), std::invalid_argument);
    EXPECT_THROW(HermitianMatrix(GaussMatrix{{GaussInt(0, 1)}}), std::invalid_argument);
}

TEST(Hermitian, Commutes)
{
    const HermitianMatrix sx{{0, 1}, {1, 0}}, sz{{1, 0}, {0, -1}};
    EXPECT_TRUE(commutes(HermitianMatrix::identity(2), sz));
    EXPECT_FALSE(commutes(sx, sz));
    EXPECT_TRUE(commutes(sx, sx));
    EXPECT_THROW((void)commutes(sx, HermitianMatrix::identity(3)), std::invalid_argument);
}

TEST(HermitianProperty, SplitReconstructs)
{
    auto rng = test::rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const HermitianMatrix h = tools::random_hermitian(rng, tools::random_index(rng, 1, 5), 9);
        const HermitianSplit s = split_hermitian(h);
        EXPECT_EQ(s.symmetric + GaussInt::i() * s.antisymmetric, h.matrix());
        for (std::size_t r = 0; r < h.dim(); ++r) {
            for (std::size_t c = 0; c < h.dim(); ++c) {
                EXPECT_TRUE(s.symmetric(r, c).is_real());
                EXPECT_TRUE(s.antisymmetric(r, c).is_real());
                EXPECT_EQ(s.symmetric(r, c), s.symmetric(c, r));
                EXPECT_EQ(s.antisymmetric(r, c), -s.antisymmetric(c, r));
                EXPECT_EQ(s.symmetric(r, c).re(), h(r, c).re());
            }
        }
    }
}

TEST(Kron, SpecExamples)
{
    const GaussTensor e0 = GaussTensor::from_vector({1, 0});
    const GaussTensor e1 = GaussTensor::from_vector({0, 1});
    const GaussTensor p = kron(e0, e1);
    EXPECT_EQ(p.shape(), (Shape{2, 2}));
    EXPECT_EQ(p.entries(), (std::vector<GaussInt>{0, 1, 0, 0}));

    const GaussTensor a = GaussTensor::from_vector({1, GaussInt(0, -1)});
    const GaussTensor b = GaussTensor::from_vector({GaussInt(0, -1), 1});
    EXPECT_EQ(kron(a, b).entries(), (std::vector<GaussInt>{GaussInt(0, -1), 1, -1, GaussInt(0, -1)}));

    EXPECT_EQ(kron(a, GaussTensor::scalar(1)), a);
    EXPECT_EQ(kron(GaussTensor::scalar(1), a), a);
}

TEST(KronProperty, AssociativeAndBilinear)
{
    auto rng = test::rng(3);
    auto random_tensor = [&] {
        Shape shape;
        for (std::size_t k = tools::random_index(rng, 0, 2); k > 0; --k) {
            shape.push_back(tools::random_index(rng, 1, 3));
        }
        GaussTensor t(shape);
        for (std::size_t i = 0; i < t.size(); ++i) {
            t[i] = tools::random_gauss(rng, 5);
        }
        return t;
    };
    for (int trial = 0; trial < 100; ++trial) {
        const GaussTensor a = random_tensor(), b = random_tensor(), c = random_tensor();
        const GaussInt s = tools::random_gauss(rng, 5);
        EXPECT_EQ(kron(kron(a, b), c), kron(a, kron(b, c)));
        EXPECT_EQ(kron(s * a, b), s * kron(a, b));
        EXPECT_EQ(kron(a, s * b), s * kron(a, b));
        const GaussTensor a2 = random_tensor();
        if (a2.shape() == a.shape()) {
            EXPECT_EQ(kron(a + a2, b), kron(a, b) + kron(a2, b));
        }
    }
}

TEST(Tensor, IndexHelpersRoundTrip)
{
    const Shape shape{2, 3, 4};
    for (std::size_t f = 0; f < shape_size(shape); ++f) {
        const auto idx = unflatten_index(shape, f);
        EXPECT_EQ(flat_index(shape, idx), f);
    }
    const std::vector<std::size_t> bad{2, 0, 0};
    EXPECT_THROW((void)flat_index(shape, bad), std::out_of_range);
    EXPECT_THROW(GaussTensor(Shape{2, 2}, std::vector<GaussInt>(3)), std::invalid_argument);
}

TEST(Tensor, ApplyOnAxisMatchesKronOperator)
{
    auto rng = test::rng(4);
    GaussTensor t(Shape{2, 3});
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = tools::random_gauss(rng, 4);
    }
    const HermitianMatrix a = tools::random_hermitian(rng, 2, 3);
    const HermitianMatrix b = tools::random_hermitian(rng, 3, 3);
    EXPECT_EQ(apply_on_axis(a.matrix(), t, 0), apply_full(kron(a.matrix(), GaussMatrix::identity(3)), t));
    EXPECT_EQ(apply_on_axis(b.matrix(), t, 1), apply_full(kron(GaussMatrix::identity(2), b.matrix()), t));
    const std::array<HermitianMatrix, 2> parts{a, b};
    EXPECT_EQ(kronecker_sum(parts).matrix(),
              kron(a.matrix(), GaussMatrix::identity(3)) + kron(GaussMatrix::identity(2), b.matrix()));
}

TEST(Rank, SmallCases)
{
    EXPECT_EQ(exact_rank(GaussMatrix(3, 3)), 0U);
    EXPECT_EQ(exact_rank(GaussMatrix::identity(4)), 4U);
    EXPECT_EQ(exact_rank(GaussMatrix{{1, GaussInt(0, 1)}, {GaussInt(0, 1), -1}}), 1U);
    EXPECT_EQ(exact_rank(GaussMatrix{{0, 0, 1}, {0, 0, 2}}), 1U);
    EXPECT_EQ(exact_rank(GaussMatrix{{0, 1, 0}, {0, 0, 1}}), 2U);
    EXPECT_EQ(determinant(GaussMatrix{{0, 1}, {-1, 0}}), GaussInt(1));
    EXPECT_EQ(determinant(GaussMatrix{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}), GaussInt(-1));
    EXPECT_EQ(determinant(GaussMatrix{{2, GaussInt(1, 1)}, {GaussInt(1, -1), 3}}), GaussInt(4));
    EXPECT_THROW((void)determinant(GaussMatrix(2, 3)), std::invalid_argument);
}

TEST(RankProperty, OuterProductsAndSums)
{
    auto rng = test::rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t rows = tools::random_index(rng, 1, 4), cols = tools::random_index(rng, 1, 4);
        const std::size_t r = tools::random_index(rng, 0, std::min(rows, cols));
        GaussMatrix m(rows, cols);
        for (std::size_t k = 0; k < r; ++k) {
            // Echelon-shaped factors keep the rank exactly r.
            GaussVector u(rows), v(cols);
            for (std::size_t i = k; i < rows; ++i) {
                u[i] = i == k ? GaussInt(1) : tools::random_gauss(rng, 3);
            }
            for (std::size_t j = k; j < cols; ++j) {
                v[j] = j == k ? GaussInt(1) : tools::random_gauss(rng, 3);
            }
            for (std::size_t i = 0; i < rows; ++i) {
                for (std::size_t j = 0; j < cols; ++j) {
                    m(i, j) += u[i] * v[j];
                }
            }
        }
        EXPECT_EQ(exact_rank(m), r);
    }
}

TEST(RankProperty, DeterminantMultiplicative)
{
    auto rng = test::rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t d = tools::random_index(rng, 1, 4);
        GaussMatrix a(d, d), b(d, d);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                a(i, j) = tools::random_gauss(rng, 4);
                b(i, j) = tools::random_gauss(rng, 4);
            }
        }
        EXPECT_EQ(determinant(a * b), determinant(a) * determinant(b));
        EXPECT_EQ(exact_rank(a) == d, !determinant(a).is_zero());
    }
}
