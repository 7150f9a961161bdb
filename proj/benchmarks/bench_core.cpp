#include <benchmark/benchmark.h>

#include <random>

#include "solsurf/immersion.hpp"

using namespace solsurf;
using matlie::cd;
using matlie::CMatrix;
using sigma::Chart;
using sigma::Grid2;

namespace {

const Grid2 kEuclid = Grid2::centered(Chart::euclidean, 0.0, 0.0, 0.05, 101);
const Grid2 kMink = Grid2::box(Chart::minkowski, -2.0, 2.0, 101);

void BM_expm(benchmark::State& st)
{
    const int n = static_cast<int>(st.range(0));
    std::mt19937 rng(1);
    std::normal_distribution<double> d;
    CMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = cd(d(rng), d(rng));
    a = matlie::project_su(a).mat;
    for (auto _ : st) benchmark::DoNotOptimize(matlie::expm(a));
}
BENCHMARK(BM_expm)->Arg(2)->Arg(3)->Arg(6);

void BM_veronese_ladder(benchmark::State& st)
{
    const int n = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(sigma::veronese_ladder(n, kEuclid));
}
BENCHMARK(BM_veronese_ladder)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_stencil_jets(benchmark::State& st)
{
    const auto p = sigma::veronese_field(3, kEuclid);
    for (auto _ : st) benchmark::DoNotOptimize(sigma::stencil_jets(p));
}
BENCHMARK(BM_stencil_jets)->Unit(benchmark::kMillisecond);

void BM_phi_euclidean(benchmark::State& st)
{
    const auto l = sigma::veronese_ladder(3, kEuclid);
    for (auto _ : st) benchmark::DoNotOptimize(spectral::phi_euclidean(l, spectral::SpectralParam(0.5), 2));
}
BENCHMARK(BM_phi_euclidean)->Unit(benchmark::kMillisecond);

void BM_frechet_apply(benchmark::State& st)
{
    const auto l = sigma::veronese_ladder(2, kEuclid);
    const auto th = sigma::theta_of(l.levels[0]);
    const auto q = symmetry::conformal_characteristic(symmetry::ConformalSpec::euclidean({0.0, 0.0, 1.0}), th);
    const symmetry::Functional u1 = [](const sigma::JetField& j) { return sigma::u_pair(j, 0.5).u1; };
    for (auto _ : st) benchmark::DoNotOptimize(symmetry::frechet_apply(u1, th, q));
}
BENCHMARK(BM_frechet_apply)->Unit(benchmark::kMillisecond);

void BM_integrate_surface(benchmark::State& st)
{
    const auto t = sigma::traveling_solution(2.0, 1.0, kMink);
    const auto w = spectral::phi_traveling(t, spectral::SpectralParam(0.5));
    immersion::ImmersionInputs inp;
    inp.a = symmetry::Poly{{1.0}};
    const auto tan = immersion::assemble_tangents(inp, t.jets, 0.5);
    for (auto _ : st) benchmark::DoNotOptimize(immersion::integrate_surface(tan.A, tan.B, w));
}
BENCHMARK(BM_integrate_surface)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
