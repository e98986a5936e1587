#include <gtest/gtest.h>

#include <stdexcept>

#include "hamca/single_ca.hpp"
#include "support.hpp"

using namespace hamca;

namespace {

const GaussInt I(0, 1);

SingleCA unit_ca() { return SingleCA(HermitianMatrix{{1}}); }
SingleCA sigma_x() { return SingleCA(HermitianMatrix{{0, 1}, {1, 0}}); }

Trajectory unit_solution() { return evolve(unit_ca(), GaussVector{1}, GaussVector{1}, 3); }

Trajectory constant_non_solution() { return Trajectory(unit_ca(), 0, {GaussVector{1}, GaussVector{1}, GaussVector{1}}); }

}  // namespace

TEST(Evolve, UnitHamiltonian)
{
    const Trajectory t = unit_solution();
    ASSERT_EQ(t.size(), 5U);
    const std::vector<GaussInt> expected{1, 1, GaussInt(1, -1), GaussInt(0, -1), GaussInt(0, -1)};
    for (long n = 0; n <= 4; ++n) {
        EXPECT_EQ(t.at(n)[0], expected[static_cast<std::size_t>(n)]) << "n = " << n;
    }
    EXPECT_TRUE(is_solution(t));
}

TEST(Evolve, FreeAlternates)
{
    const GaussVector v{1, GaussInt(2, -3), 0}, w{GaussInt(0, 5), -1, 7};
    const Trajectory t = evolve(SingleCA(HermitianMatrix::zero(3)), v, w, 10);
    for (long n = 0; n <= t.n_max(); ++n) {
        EXPECT_EQ(t.at(n), n % 2 == 0 ? v : w);
    }
}

TEST(Evolve, SigmaX)
{
    const Trajectory t = evolve(sigma_x(), GaussVector::unit(2, 0), GaussVector::unit(2, 0), 2);
    EXPECT_EQ(t.at(2), (GaussVector{1, -I}));
    EXPECT_EQ(t.at(3), (GaussVector{0, -I}));
}

TEST(Evolve, RejectsDimensionMismatch)
{
    EXPECT_THROW((void)evolve(sigma_x(), GaussVector{1}, GaussVector{1, 0}, 2), std::invalid_argument);
    EXPECT_THROW(Trajectory(unit_ca(), 0, {GaussVector{1}}), std::invalid_argument);
}

TEST(EvolveBackward, RecoversForwardHistory)
{
    const Trajectory back = evolve_backward(unit_ca(), GaussVector{-I}, GaussVector{-I}, 3);
    EXPECT_EQ(back.n_min(), -3);
    EXPECT_EQ(back.at(-3)[0], GaussInt(1));
    EXPECT_EQ(back.at(-2)[0], GaussInt(1));
    EXPECT_EQ(back.at(-1)[0], GaussInt(1, -1));
    EXPECT_TRUE(is_solution(back));
}

TEST(EvolveBackward, FreeAlternatesBothWays)
{
    const GaussVector v{3}, w{GaussInt(0, 2)};
    const Trajectory t = evolve_window(SingleCA(HermitianMatrix::zero(1)), v, w, -6, 6);
    for (long n = -6; n <= 6; ++n) {
        EXPECT_EQ(t.at(n), (n % 2 == 0) ? v : w);
    }
}

TEST(EvolveProperty, RoundTrip)
{
    auto rng = test::rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const tools::RandomSystem s = tools::random_system(rng, 4, 3, 3);
        const Trajectory fwd = evolve(s.ca, s.psi0, s.psi1, 50);
        const Trajectory back = evolve_backward(s.ca, fwd.at(50), fwd.at(51), 50);
        for (long n = 0; n <= 51; ++n) {
            ASSERT_EQ(back.at(n - 50), fwd.at(n));
        }
        const Trajectory again = evolve(s.ca, back.at(-50), back.at(-49), 50);
        EXPECT_EQ(again.states(), fwd.states());
    }
}

TEST(EvolveProperty, WindowIsSolution)
{
    auto rng = test::rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const tools::RandomSystem s = tools::random_system(rng, 3, 3, 3);
        const Trajectory t = evolve_window(s.ca, s.psi0, s.psi1, -7, 9);
        EXPECT_EQ(t.at(0), s.psi0);
        EXPECT_EQ(t.at(1), s.psi1);
        EXPECT_TRUE(is_solution(t));
    }
}

TEST(Residual, DetectsNonSolution)
{
    const Trajectory t = constant_non_solution();
    EXPECT_FALSE(is_solution(t));
    EXPECT_EQ(eom_residual(t, 1), (GaussVector{I}));
    EXPECT_THROW((void)eom_residual(t, 0), std::out_of_range);
}

TEST(RealForm, UnitHamiltonian)
{
    const RealPhaseState s0{{1}, {0}}, s1{{1}, {0}};
    const RealPhaseState s2 = step_real_form(unit_ca(), s0, s1);
    EXPECT_EQ(s2.x[0], 1);
    EXPECT_EQ(s2.p[0], -1);
    EXPECT_EQ(s2.to_complex(), unit_solution().at(2));
}

TEST(RealForm, FreeAlternates)
{
    const RealPhaseState a{{2, -1}, {0, 4}}, b{{5, 5}, {-3, 1}};
    const SingleCA ca(HermitianMatrix::zero(2));
    EXPECT_EQ(step_real_form(ca, a, b), a);
}

TEST(RealFormProperty, AgreesWithComplexStep)
{
    auto rng = test::rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const SingleCA ca(tools::random_hermitian(rng, 3, 3));
        const Trajectory t = evolve(ca, tools::random_vector(rng, 3, 3), tools::random_vector(rng, 3, 3), 20);
        RealPhaseState prev = RealPhaseState::from_complex(t.at(0));
        RealPhaseState cur = RealPhaseState::from_complex(t.at(1));
        for (long n = 2; n <= 21; ++n) {
            RealPhaseState next = step_real_form(ca, prev, cur);
            ASSERT_EQ(next.to_complex(), t.at(n)) << "n = " << n;
            prev = std::move(cur);
            cur = std::move(next);
        }
    }
}

TEST(Action, SpecExamples)
{
    EXPECT_EQ(action(unit_solution()), 0);
    EXPECT_EQ(action(Trajectory(unit_ca(), 0, std::vector<GaussVector>(4, GaussVector(1)))), 0);
    EXPECT_EQ(action(constant_non_solution()), 1);
    EXPECT_THROW((void)action(evolve(unit_ca(), GaussVector{1}, GaussVector{1}, 0)), std::invalid_argument);
}

TEST(Action, VariationalFormVanishesOnSolutions)
{
    EXPECT_EQ(variational_action(unit_solution()), 0);
}

TEST(Variation, SolutionIsStationary)
{
    const Trajectory t = unit_solution();
    for (long n = 1; n <= 3; ++n) {
        for (Component part : {Component::Real, Component::Imag}) {
            for (VariedSlot slot : {VariedSlot::Psi, VariedSlot::PsiConj}) {
                for (long delta : {1L, 2L, 5L}) {
                    EXPECT_TRUE(discrete_variation(t, {n, 0, part, slot}, delta).is_zero());
                }
            }
        }
    }
}

TEST(Variation, QuadraticMonomial)
{
    const auto square = [](const GaussInt& f) { return f * f; };
    for (long f : {-3L, 0L, 4L, 11L}) {
        for (long delta : {1L, 2L, 7L}) {
            EXPECT_EQ(integer_variation(square, f, delta), GaussInt(2 * f));
        }
    }
}

TEST(Variation, NonSolutionMatchesResidual)
{
    // R_1 = psi_2 - psi_0 + i H psi_1 = i, so d S / d psi*_1 = -i R_1 = 1 and d S / d psi_1 = conj(-i R_1) = 1.
    const Trajectory t = constant_non_solution();
    for (long delta : {1L, 2L, 7L}) {
        EXPECT_EQ(discrete_variation(t, {1, 0, Component::Real, VariedSlot::Psi}, delta), GaussInt(1));
        EXPECT_EQ(discrete_variation(t, {1, 0, Component::Real, VariedSlot::PsiConj}, delta), GaussInt(1));
        // Stepping the imaginary part by i delta recovers the same complex derivative.
        EXPECT_EQ(discrete_variation(t, {1, 0, Component::Imag, VariedSlot::Psi}, delta), GaussInt(1));
        EXPECT_EQ(discrete_variation(t, {1, 0, Component::Imag, VariedSlot::PsiConj}, delta), GaussInt(1));
    }
}

TEST(Variation, Errors)
{
    const Trajectory t = unit_solution();
    EXPECT_THROW((void)discrete_variation(t, {0, 0, Component::Real, VariedSlot::Psi}, 1), std::out_of_range);
    EXPECT_THROW((void)discrete_variation(t, {4, 0, Component::Real, VariedSlot::Psi}, 1), std::out_of_range);
    EXPECT_THROW((void)discrete_variation(t, {1, 1, Component::Real, VariedSlot::Psi}, 1), std::invalid_argument);
    EXPECT_THROW((void)discrete_variation(t, {1, 0, Component::Real, VariedSlot::Psi}, 0), std::invalid_argument);
}

TEST(VariationProperty, MatchesBruteForceAction)
{
    // Local variation equals the brute-force difference of the whole variational action.
    auto rng = test::rng(14);
    for (int trial = 0; trial < 30; ++trial) {
        const SingleCA ca(tools::random_hermitian(rng, 2, 3));
        std::vector<GaussVector> states;
        for (int n = 0; n < 6; ++n) {
            states.push_back(tools::random_vector(rng, 2, 3));
        }
        const Trajectory t(ca, 0, states);
        const long n = tools::random_long(rng, 1, 4);
        const std::size_t alpha = tools::random_index(rng, 0, 1);
        const long delta = tools::random_long(rng, 1, 7);
        // Varying Re psi and Re psi* together is a real variation of x; S changes by 2 Re(d S / d psi*) * delta.
        auto shifted = [&](long by) {
            Trajectory u = t;
            u.at(n)[alpha] += GaussInt(by);
            return variational_action(u);
        };
        const mpz_class brute = shifted(delta) - shifted(-delta);
        const GaussInt d_conj = discrete_variation(t, {n, alpha, Component::Real, VariedSlot::PsiConj}, delta);
        const GaussInt d_psi = discrete_variation(t, {n, alpha, Component::Real, VariedSlot::Psi}, delta);
        EXPECT_EQ(d_psi, d_conj.conj());
        EXPECT_EQ(brute, 2 * delta * (d_psi + d_conj).re());
        // And the variation is -i times the residual.
        EXPECT_EQ(d_conj, eom_residual(t, n)[alpha].times_minus_i());
    }
}

TEST(Correlator, SpecExamples)
{
    const Trajectory t = unit_solution();
    for (long n = 1; n <= 4; ++n) {
        EXPECT_EQ(q_correlator(t, HermitianMatrix::identity(1), n), 2);
    }
    const Trajectory sx = evolve(sigma_x(), GaussVector::unit(2, 0), GaussVector::unit(2, 0), 2);
    EXPECT_EQ(q_correlator(sx, sigma_x().hamiltonian(), 1), 0);
    EXPECT_EQ(q_correlator(sx, sigma_x().hamiltonian(), 2), 0);
    const Trajectory zero(unit_ca(), 0, std::vector<GaussVector>(3, GaussVector(1)));
    EXPECT_EQ(q_correlator(zero, HermitianMatrix::identity(1), 1), 0);
    EXPECT_THROW((void)q_correlator(t, HermitianMatrix::identity(1), 0), std::out_of_range);
    EXPECT_THROW((void)q_correlator(t, HermitianMatrix::identity(2), 1), std::invalid_argument);
}

TEST(Correlator, Symmetrized)
{
    const Trajectory t = unit_solution();
    EXPECT_EQ(q_symmetrized(t, 1), 2);
    EXPECT_EQ(q_symmetrized(t, 2), 2);
    const Trajectory free = evolve(SingleCA(HermitianMatrix::zero(2)), GaussVector::unit(2, 0),
                                   GaussVector::unit(2, 0), 5);
    for (long n = 1; n < free.n_max(); ++n) {
        EXPECT_EQ(q_symmetrized(free, n), 2);
    }
}

TEST(CorrelatorProperty, SymmetrizedEqualsIdentityCorrelator)
{
    auto rng = test::rng(15);
    for (int trial = 0; trial < 30; ++trial) {
        const tools::RandomSystem s = tools::random_system(rng, 4, 3, 3);
        const Trajectory t = evolve(s.ca, s.psi0, s.psi1, 20);
        const HermitianMatrix one = HermitianMatrix::identity(s.ca.dim());
        for (long n = 1; n < t.n_max(); ++n) {
            EXPECT_EQ(q_symmetrized(t, n), q_correlator(t, one, n));
        }
    }
}

TEST(Conservation, IdentityAndHamiltonian)
{
    const Trajectory t = unit_solution();
    const ConservationReport r = conservation_report(t, HermitianMatrix::identity(1));
    EXPECT_TRUE(r.is_conserved);
    EXPECT_TRUE(r.commutes_with_h);
    EXPECT_EQ(r.first_n, 1);
    EXPECT_EQ(r.values, (std::vector<mpz_class>{2, 2, 2, 2}));
    EXPECT_TRUE(conservation_report(t, t.ca().hamiltonian()).is_conserved);
    EXPECT_THROW((void)conservation_report(constant_non_solution(), HermitianMatrix::identity(1)),
                 std::invalid_argument);
}

TEST(Conservation, NonCommutingObservableCanDrift)
{
    const HermitianMatrix sz{{1, 0}, {0, -1}};
    bool found = false;
    for (long a = -1; a <= 1 && !found; ++a) {
        for (long b = -1; b <= 1 && !found; ++b) {
            const Trajectory t = evolve(sigma_x(), GaussVector{1, a}, GaussVector{b, 1}, 6);
            const ConservationReport r = conservation_report(t, sz);
            EXPECT_FALSE(r.commutes_with_h);
            found = !r.is_conserved;
        }
    }
    EXPECT_TRUE(found);
}

TEST(ConservationProperty, CommutingObservablesAreConserved)
{
    auto rng = test::rng(16);
    for (int trial = 0; trial < 40; ++trial) {
        const tools::RandomSystem s = tools::random_system(rng, 4, 3, 3);
        const Trajectory t = evolve(s.ca, s.psi0, s.psi1, 60);
        const GaussMatrix& h = s.ca.hamiltonian().matrix();
        // Any real polynomial in H commutes with H.
        const HermitianMatrix g(GaussInt(3) * power(h, 3) - GaussInt(2) * h + GaussMatrix::identity(s.ca.dim()));
        const ConservationReport r = conservation_report(t, g);
        EXPECT_TRUE(r.commutes_with_h);
        EXPECT_TRUE(r.is_conserved);
    }
}

TEST(Conservation, NormIsNotConserved)
{
    const Trajectory t = unit_solution();
    std::vector<mpz_class> norms;
    for (long n = 0; n <= 4; ++n) {
        norms.push_back(inner(t.at(n), t.at(n)).re());
    }
    EXPECT_EQ(norms, (std::vector<mpz_class>{1, 1, 2, 1, 1}));
}

TEST(Mutation, FlippedRecursionSignBreaksConservation)
{
    // psi_{n+1} = -psi_{n-1} - i H psi_n: one flipped sign in the recursion.
    const HermitianMatrix h{{1}};
    std::vector<GaussVector> states{GaussVector{1}, GaussVector{1}};
    for (int n = 1; n < 6; ++n) {
        const GaussVector& prev = states[static_cast<std::size_t>(n - 1)];
        const GaussVector& cur = states[static_cast<std::size_t>(n)];
        states.push_back(GaussInt(-1) * prev - times_i(h * cur));
    }
    const Trajectory mutant(SingleCA(h), 0, states);
    EXPECT_FALSE(is_solution(mutant));
    std::vector<mpz_class> q;
    for (long n = 1; n <= mutant.n_max(); ++n) {
        q.push_back(q_correlator(mutant, HermitianMatrix::identity(1), n));
    }
    EXPECT_NE(q.front(), q.back());
}
