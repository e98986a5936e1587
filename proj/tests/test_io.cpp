#include <gtest/gtest.h>

#include "hamca/io.hpp"
#include "support.hpp"

using namespace hamca;
using io::json;

TEST(Json, GaussIntAsDecimalStrings)
{
    EXPECT_EQ(io::to_json(GaussInt(3, -4)).dump(), R"(["3","-4"])");
    const GaussInt big(mpz_class("123456789012345678901234567890"), mpz_class(-1));
    EXPECT_EQ(io::gauss_from_json(io::to_json(big)), big);
    EXPECT_EQ(io::gauss_from_json(json(7)), GaussInt(7));
    EXPECT_THROW((void)io::gauss_from_json(json::parse(R"(["1.5","0"])"), "/x"), io::FormatError);
    try {
        (void)io::gauss_from_json(json::parse(R"(["1","x"])"), "/H/0/1");
        FAIL();
    } catch (const io::FormatError& e) {
        EXPECT_EQ(e.field(), "/H/0/1/1");
    }
}

TEST(Json, MatrixForms)
{
    const GaussMatrix m{{2, GaussInt(1, 1)}, {GaussInt(1, -1), 3}};
    const json j = io::to_json(m);
    EXPECT_EQ(j["shape"], json::array({2, 2}));
    EXPECT_EQ(io::matrix_from_json(j), m);
    EXPECT_EQ(io::matrix_from_json(j["entries"]), m);
    EXPECT_EQ(io::hermitian_from_json(j).matrix(), m);
    const json bad = json::parse(R"([[["0","0"],["0","1"]],[["0","1"],["0","0"]]])");
    EXPECT_THROW((void)io::hermitian_from_json(bad, "/system/H"), io::FormatError);
    EXPECT_THROW((void)io::matrix_from_json(json::parse(R"([[1,2],[3]])")), io::FormatError);
}

TEST(Json, TensorRoundTrip)
{
    auto rng = test::rng(31);
    for (const Shape& shape : {Shape{}, Shape{3}, Shape{2, 3}, Shape{2, 1, 2}}) {
        GaussTensor t(shape);
        for (std::size_t i = 0; i < t.size(); ++i) {
            t[i] = tools::random_gauss(rng, 50);
        }
        EXPECT_EQ(io::tensor_from_json(io::to_json(t)), t);
    }
}

TEST(Json, TrajectoryRoundTripAndDeterminism)
{
    auto rng = test::rng(32);
    const tools::RandomSystem s = tools::random_system(rng, 3, 3, 3);
    const Trajectory t = evolve(s.ca, s.psi0, s.psi1, 40);
    const std::string text = io::dump(io::to_json(t));
    EXPECT_EQ(io::trajectory_from_json(json::parse(text)), t);
    EXPECT_EQ(io::dump(io::to_json(evolve(s.ca, s.psi0, s.psi1, 40))), text);
    const json j = json::parse(text);
    EXPECT_TRUE(j.contains("dim"));
    EXPECT_TRUE(j.contains("H"));
    EXPECT_TRUE(j.contains("n_min"));
    EXPECT_TRUE(j.contains("states"));
}

TEST(Json, MultiWaveRoundTrip)
{
    const SingleCA sx(HermitianMatrix{{0, 1}, {1, 0}});
    const Trajectory a = evolve(sx, GaussVector::unit(2, 0), GaussVector::unit(2, 0), 2);
    const Trajectory b = evolve(sx, GaussVector::unit(2, 1), GaussVector::unit(2, 1), 2);
    const MultiWave psi = bell_state(a, b, ClockWindow({0, 1}, {3, 3}));
    const json j = io::to_json(psi);
    EXPECT_EQ(j["m"], 2);
    EXPECT_EQ(j["lo"], json::array({0, 1}));
    EXPECT_EQ(io::multiwave_from_json(j), psi);
}

TEST(Json, DefectReportEntries)
{
    const SingleCA sx(HermitianMatrix{{0, 1}, {1, 0}});
    const std::vector<GaussVector> e0{GaussVector::unit(2, 0), GaussVector::unit(2, 0)};
    const json j = io::to_json(single_time_defect(MultiCA({sx, sx}), e0, e0, 2));
    EXPECT_EQ(j["first_nonzero_n"], 2);
    ASSERT_EQ(j["entries"].size(), 4U);
    EXPECT_EQ(io::tensor_from_json(j["entries"][2]["defect"]),
              kron(GaussTensor::from_vector(GaussVector::unit(2, 1)), GaussTensor::from_vector(GaussVector::unit(2, 1))));
}
