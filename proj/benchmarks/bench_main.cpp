#include <benchmark/benchmark.h>

#include <vector>

#include "hamca/multi_ca.hpp"
#include "hamca/sampling.hpp"
#include "hamca/single_ca.hpp"
#include "hamca_tools/generators.hpp"

using namespace hamca;

namespace {

void BM_Evolve(benchmark::State& state)
{
    tools::Rng rng(tools::kDefaultSeed);
    const auto dim = static_cast<std::size_t>(state.range(0));
    const SingleCA ca(tools::random_hermitian(rng, dim, 3));
    const GaussVector a = tools::random_vector(rng, dim, 5);
    const GaussVector b = tools::random_vector(rng, dim, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(evolve(ca, a, b, 64));
    }
}
BENCHMARK(BM_Evolve)->Arg(2)->Arg(4)->Arg(8);

void BM_ExactRank(benchmark::State& state)
{
    tools::Rng rng(tools::kDefaultSeed);
    const auto n = static_cast<std::size_t>(state.range(0));
    GaussMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            m(r, c) = tools::random_gauss(rng, 9);
        }
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact_rank(m));
    }
}
BENCHMARK(BM_ExactRank)->Arg(4)->Arg(8)->Arg(16);

void BM_BellWitness(benchmark::State& state)
{
    const SingleCA ca(HermitianMatrix{{0, 1}, {1, 0}});
    const Trajectory a = evolve_window(ca, {1, 0}, {1, 0}, -8, 8);
    const Trajectory b = evolve_window(ca, {0, 1}, {0, 1}, -8, 8);
    const ClockWindow window({-8, -8}, {8, 8});
    const std::vector<std::size_t> rows{0};
    for (auto _ : state) {
        const MultiWave psi = bell_state(a, b, window);
        benchmark::DoNotOptimize(entanglement_witness(psi, {2, 2}, rows));
    }
}
BENCHMARK(BM_BellWitness);

void BM_Reconstruct(benchmark::State& state)
{
    const SingleCA ca(HermitianMatrix{{1}});
    const Trajectory traj = evolve_window(ca, {1}, {GaussInt(0, -1)}, -48, 48);
    const ContinuumWave wave = reconstruct(traj, 0.5);
    double t = -4.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(q_continuum(wave, t));
        t = t > 4.0 ? -4.0 : t + 0.013;
    }
}
BENCHMARK(BM_Reconstruct);

}  // namespace

BENCHMARK_MAIN();
