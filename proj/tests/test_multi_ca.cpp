#include <gtest/gtest.h>

#include <set>
#include <stdexcept>

#include "hamca/multi_ca.hpp"
#include "support.hpp"

using namespace hamca;

namespace {

const GaussInt I(0, 1);

SingleCA unit_ca() { return SingleCA(HermitianMatrix{{1}}); }
SingleCA sigma_x() { return SingleCA(HermitianMatrix{{0, 1}, {1, 0}}); }
SingleCA free_ca(std::size_t d) { return SingleCA(HermitianMatrix::zero(d)); }

GaussTensor vec(const GaussVector& v) { return GaussTensor::from_vector(v); }

MultiWave product(const std::vector<Trajectory>& factors, const ClockWindow& w, GaussInt coeff = 1)
{
    const std::vector<ProductTerm> terms{{std::move(coeff), factors}};
    return assemble(terms, w);
}

}  // namespace

TEST(ClockWindow, IndexingAndInterior)
{
    const ClockWindow w({-1, 0, 2}, {1, 3, 4});
    EXPECT_EQ(w.size(), 3U * 4U * 3U);
    for (std::size_t i = 0; i < w.size(); ++i) {
        EXPECT_EQ(w.linear_index(w.tuple_at(i)), i);
    }
    EXPECT_TRUE(w.is_interior({0, 1, 3}));
    EXPECT_FALSE(w.is_interior({0, 0, 3}));
    EXPECT_TRUE(w.is_interior_in({-1, 1, 2}, 1));
    const ClockWindow in = w.interior();
    EXPECT_EQ(in.lo(), (std::vector<long>{0, 1, 3}));
    EXPECT_EQ(in.hi(), (std::vector<long>{0, 2, 3}));
    EXPECT_EQ(in.size(), 2U);
    EXPECT_THROW(ClockWindow({0}, {0}), std::invalid_argument);
    EXPECT_THROW((void)ClockWindow({0, 0}, {1, 3}).interior(), std::invalid_argument);
}

TEST(Assemble, FreeProductIsConstant)
{
    const Trajectory e = evolve(free_ca(2), GaussVector::unit(2, 0), GaussVector::unit(2, 0), 3);
    const MultiWave psi = product({e, e}, ClockWindow({0, 0}, {4, 4}));
    for (const auto& t : psi.values()) {
        EXPECT_EQ(t, kron(vec(GaussVector::unit(2, 0)), vec(GaussVector::unit(2, 0))));
    }
}

TEST(Assemble, MatchesKron)
{
    const Trajectory a = evolve(sigma_x(), GaussVector::unit(2, 0), GaussVector::unit(2, 0), 2);
    const Trajectory b = evolve(sigma_x(), GaussVector::unit(2, 1), GaussVector::unit(2, 1), 2);
    const MultiWave psi = product({a, b}, ClockWindow({0, 0}, {3, 3}));
    EXPECT_EQ(psi.at({2, 2}), kron(vec(a.at(2)), vec(b.at(2))));
    EXPECT_EQ(psi.at({2, 2}), kron(vec({1, -I}), vec({-I, 1})));
}

TEST(Assemble, Errors)
{
    const Trajectory a = evolve(sigma_x(), GaussVector::unit(2, 0), GaussVector::unit(2, 0), 2);
    const Trajectory u = evolve(unit_ca(), GaussVector{1}, GaussVector{1}, 2);
    EXPECT_THROW((void)product({a, a}, ClockWindow({0, 0}, {4, 3})), std::invalid_argument);
    const std::vector<ProductTerm> mixed{{1, {a, a}}, {1, {a, u}}};
    EXPECT_THROW((void)assemble(mixed, ClockWindow({0, 0}, {3, 3})), std::invalid_argument);
}

TEST(MultiResidual, FactorizedSolutionVanishes)
{
    auto rng = test::rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<SingleCA> parts;
        std::vector<Trajectory> factors;
        for (int k = 0; k < 3; ++k) {
            const tools::RandomSystem s = tools::random_system(rng, 3, 3, 3);
            parts.push_back(s.ca);
            factors.push_back(evolve_window(s.ca, s.psi0, s.psi1, -2, 3));
        }
        const MultiWave psi = product(factors, ClockWindow({-2, -2, -2}, {3, 3, 3}));
        EXPECT_TRUE(multi_eom_residual(psi, MultiCA(parts)).is_zero());
    }
}

TEST(MultiResidual, ZeroWaveAndNonSolution)
{
    const MultiCA sys({unit_ca(), unit_ca()});
    const ClockWindow w({0, 0}, {2, 2});
    EXPECT_TRUE(multi_eom_residual(MultiWave(w, {1, 1}), sys).is_zero());
    const Trajectory constant(unit_ca(), 0, {GaussVector{1}, GaussVector{1}, GaussVector{1}});
    const MultiWave psi = product({constant, constant}, w);
    const MultiWave r = multi_eom_residual(psi, sys);
    EXPECT_FALSE(r.is_zero());
    EXPECT_EQ(r.at({1, 1}), GaussTensor(Shape{1, 1}, {GaussInt(0, 2)}));
}

TEST(MultiResidual, InteractionBreaksFactorization)
{
    const Trajectory a = evolve_window(sigma_x(), GaussVector::unit(2, 0), GaussVector::unit(2, 0), -1, 3);
    const MultiWave psi = product({a, a}, ClockWindow({-1, -1}, {3, 3}));
    const HermitianMatrix zz(kron(GaussMatrix{{1, 0}, {0, -1}}, GaussMatrix{{1, 0}, {0, -1}}));
    EXPECT_TRUE(multi_eom_residual(psi, MultiCA({sigma_x(), sigma_x()})).is_zero());
    EXPECT_FALSE(multi_eom_residual(psi, MultiCA({sigma_x(), sigma_x()}, zz)).is_zero());
    EXPECT_THROW(MultiCA({sigma_x(), sigma_x()}, HermitianMatrix::identity(3)), std::invalid_argument);
}

TEST(MultiAction, Examples)
{
    auto rng = test::rng(22);
    const tools::RandomSystem s1 = tools::random_system(rng, 2, 3, 3);
    const tools::RandomSystem s2 = tools::random_system(rng, 2, 3, 3);
    const MultiWave psi = product({evolve_window(s1.ca, s1.psi0, s1.psi1, -2, 2),
                                   evolve_window(s2.ca, s2.psi0, s2.psi1, -2, 2)},
                                  ClockWindow({-2, -2}, {2, 2}));
    EXPECT_EQ(multi_action(psi, MultiCA({s1.ca, s2.ca})), 0);

    const MultiCA units({unit_ca(), unit_ca()});
    EXPECT_EQ(multi_action(MultiWave(ClockWindow({0, 0}, {2, 2}), {1, 1}), units), 0);

    // Constant 1 on a 3x3 window: each clock has 3 tuples interior in it, each contributing Psi^dag H Psi = 1.
    const Trajectory constant(unit_ca(), 0, {GaussVector{1}, GaussVector{1}, GaussVector{1}});
    EXPECT_EQ(multi_action(product({constant, constant}, ClockWindow({0, 0}, {2, 2})), units), 6);
}

TEST(MultiConservation, DivergenceVanishesAndPerClockConstancy)
{
    auto rng = test::rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<SingleCA> parts;
        std::vector<Trajectory> factors;
        for (int k = 0; k < 2; ++k) {
            const tools::RandomSystem s = tools::random_system(rng, 3, 3, 3);
            parts.push_back(s.ca);
            factors.push_back(evolve_window(s.ca, s.psi0, s.psi1, -2, 3));
        }
        const MultiCA sys(parts);
        const ClockWindow w({-2, -2}, {3, 3});
        const MultiWave psi = product(factors, w);
        const HermitianMatrix g = HermitianMatrix::identity(sys.total_dim());
        const ClockWindow in = w.interior();
        for (std::size_t i = 0; i < in.size(); ++i) {
            EXPECT_EQ(multi_conserved_divergence(psi, g, in.tuple_at(i)), 0);
            EXPECT_EQ(multi_conserved_divergence(psi, sys.total_hamiltonian(), in.tuple_at(i)), 0);
        }
        for (std::size_t k = 0; k < 2; ++k) {
            for (long other = -2; other <= 3; ++other) {
                std::set<mpz_class> values;
                for (long nk = -1; nk <= 3; ++nk) {
                    ClockTuple n{other, other};
                    n[k] = nk;
                    values.insert(multi_clock_correlator(psi, g, n, k));
                }
                EXPECT_EQ(values.size(), 1U) << "clock " << k << " at other clock " << other;
            }
        }
    }
    const MultiWave zero(ClockWindow({0, 0}, {2, 2}), {2, 2});
    EXPECT_EQ(multi_conserved_divergence(zero, HermitianMatrix::identity(4), {1, 1}), 0);
}

TEST(MultiQ, FreeProduct)
{
    const Trajectory e = evolve(free_ca(2), GaussVector::unit(2, 0), GaussVector::unit(2, 0), 3);
    const MultiWave psi = product({e, e}, ClockWindow({0, 0}, {4, 4}));
    EXPECT_EQ(multi_q(psi, {1, 1}), 4);
    EXPECT_EQ(multi_q(psi, {2, 3}), 4);
}

TEST(MultiQ, UnitProductIsNotConstant)
{
    // multi_q = q(n1) |psi(n2)|^2 + q(n2) |psi(n1)|^2 with q = 2 and |psi|^2 = 1, 2 at n = 1, 2;
    // norm is not conserved, so neither is multi_q on a factorized wave.
    const Trajectory t = evolve(unit_ca(), GaussVector{1}, GaussVector{1}, 2);
    const MultiWave psi = product({t, t}, ClockWindow({0, 0}, {3, 3}));
    EXPECT_EQ(multi_q(psi, {1, 1}), 4);
    EXPECT_EQ(multi_q(psi, {1, 2}), 6);
    EXPECT_EQ(multi_q(psi, {2, 1}), 6);
    EXPECT_EQ(multi_q(psi, {2, 2}), 8);
    EXPECT_THROW((void)multi_q(psi, {0, 1}), std::out_of_range);
}

TEST(Defect, SigmaXPair)
{
    const std::vector<GaussVector> e0{GaussVector::unit(2, 0), GaussVector::unit(2, 0)};
    const DefectReport r = single_time_defect(MultiCA({sigma_x(), sigma_x()}), e0, e0, 4);
    EXPECT_EQ(r.n_min, 0);
    EXPECT_EQ(r.first_nonzero_n, 2);
    EXPECT_EQ(r.defect[2], kron(vec(GaussVector::unit(2, 1)), vec(GaussVector::unit(2, 1))));
    EXPECT_EQ(r.composite[2], kron(vec(GaussVector::unit(2, 0)), vec(GaussVector::unit(2, 0)))
                                  - GaussTensor(Shape{2, 2}, {0, I, I, 0}));
    for (std::size_t n = 0; n < r.defect.size(); ++n) {
        EXPECT_EQ(r.defect[n], r.composite[n] - r.product[n]);
    }
}

TEST(Defect, FreeAndHalfFree)
{
    const std::vector<GaussVector> e0{GaussVector::unit(2, 0), GaussVector::unit(2, 0)};
    EXPECT_FALSE(single_time_defect(MultiCA({free_ca(2), free_ca(2)}), e0, e0, 6).first_nonzero_n.has_value());
    EXPECT_FALSE(single_time_defect(MultiCA({sigma_x(), free_ca(2)}), e0, e0, 6).first_nonzero_n.has_value());
    const HermitianMatrix zz(kron(GaussMatrix{{1, 0}, {0, -1}}, GaussMatrix{{1, 0}, {0, -1}}));
    EXPECT_THROW((void)single_time_defect(MultiCA({sigma_x(), sigma_x()}, zz), e0, e0, 2), std::invalid_argument);
}

TEST(Bell, FreeIsConstantSinglet)
{
    const Trajectory a = evolve(free_ca(2), GaussVector::unit(2, 0), GaussVector::unit(2, 0), 3);
    const Trajectory b = evolve(free_ca(2), GaussVector::unit(2, 1), GaussVector::unit(2, 1), 3);
    const MultiWave psi = bell_state(a, b, ClockWindow({0, 0}, {4, 4}));
    for (const auto& t : psi.values()) {
        EXPECT_EQ(t, GaussTensor(Shape{2, 2}, {0, 1, -1, 0}));
    }
}

TEST(Bell, SigmaX)
{
    const Trajectory a = evolve_window(sigma_x(), GaussVector::unit(2, 0), GaussVector::unit(2, 0), -2, 4);
    const Trajectory b = evolve_window(sigma_x(), GaussVector::unit(2, 1), GaussVector::unit(2, 1), -2, 4);
    const MultiWave psi = bell_state(a, b, ClockWindow({-2, -2}, {4, 4}));
    EXPECT_EQ(psi.at({2, 2}), GaussTensor(Shape{2, 2}, {0, 2, -2, 0}));
    EXPECT_TRUE(multi_eom_residual(psi, MultiCA({sigma_x(), sigma_x()})).is_zero());

    const std::vector<std::size_t> rows{0};
    const WitnessReport w00 = entanglement_witness(psi, {0, 0}, rows);
    EXPECT_EQ(w00.matrix_rank, 2U);
    EXPECT_FALSE(w00.is_product);
    EXPECT_EQ(determinant(bipartite_matrix(psi.at({0, 0}), rows)), GaussInt(1));
    EXPECT_EQ(entanglement_witness(psi, {2, 2}, rows).matrix_rank, 2U);
    EXPECT_EQ(determinant(bipartite_matrix(psi.at({2, 2}), rows)), GaussInt(4));

    for (long n = -2; n <= 4; ++n) {
        const GaussTensor& t = psi.at({n, n});
        for (std::size_t x = 0; x < 2; ++x) {
            for (std::size_t y = 0; y < 2; ++y) {
                const std::array<std::size_t, 2> xy{x, y}, yx{y, x};
                EXPECT_EQ(t.at(xy), -t.at(yx));
            }
        }
    }
}

TEST(Bell, Errors)
{
    const ClockWindow w({0, 0}, {3, 3});
    const Trajectory a = evolve(sigma_x(), GaussVector::unit(2, 0), GaussVector::unit(2, 0), 2);
    const Trajectory same = evolve(sigma_x(), GaussVector{2, 0}, GaussVector{2, 0}, 2);
    const Trajectory other = evolve(free_ca(2), GaussVector::unit(2, 1), GaussVector::unit(2, 1), 2);
    const Trajectory scalar = evolve(unit_ca(), GaussVector{1}, GaussVector{1}, 2);
    EXPECT_THROW((void)bell_state(a, same, w), std::invalid_argument);
    EXPECT_THROW((void)bell_state(a, other, w), std::invalid_argument);
    EXPECT_THROW((void)bell_state(scalar, scalar, w), std::invalid_argument);
}

TEST(Witness, ProductsHaveRankOne)
{
    auto rng = test::rng(24);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Trajectory> factors;
        for (int k = 0; k < 3; ++k) {
            const SingleCA ca(tools::random_hermitian(rng, 2, 2));
            factors.push_back(evolve(ca, tools::random_nonzero_vector(rng, 2, 3), tools::random_nonzero_vector(rng, 2, 3), 1));
        }
        const MultiWave psi = product(factors, ClockWindow({0, 0, 0}, {1, 1, 1}));
        const std::vector<std::size_t> cut{0, 2};
        for (std::size_t i = 0; i < psi.window().size(); ++i) {
            const ClockTuple n = psi.window().tuple_at(i);
            const bool nonzero = !psi.at(n).is_zero();
            EXPECT_EQ(entanglement_witness(psi, n, cut).matrix_rank, nonzero ? 1U : 0U);
            EXPECT_TRUE(entanglement_witness(psi, n, cut).is_product);
        }
    }
}

TEST(Witness, SuperpositionOfTwoIndependentProducts)
{
    const Trajectory a = evolve(free_ca(2), GaussVector::unit(2, 0), GaussVector::unit(2, 0), 1);
    const Trajectory b = evolve(free_ca(2), GaussVector::unit(2, 1), GaussVector::unit(2, 1), 1);
    const std::vector<ProductTerm> terms{{1, {a, a}}, {GaussInt(0, 3), {b, b}}};
    const MultiWave psi = assemble(terms, ClockWindow({0, 0}, {2, 2}));
    const std::vector<std::size_t> rows{1};
    EXPECT_EQ(entanglement_witness(psi, {1, 1}, rows).matrix_rank, 2U);
}
