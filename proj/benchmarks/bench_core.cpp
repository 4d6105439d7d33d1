#include <benchmark/benchmark.h>

#include "pimlab/pimlab.hpp"

using namespace pimlab;

namespace {

ProblemSpec headline_problem(std::size_t n_x, std::size_t m) {
    const OperatorSpec op{100.0, n_x, n_x, EigenvalueMode::discrete};
    const DelayGrid delay{0.5, m};
    return ProblemSpec{op,
                       delay,
                       make_constant_kernel(0.5, m, 6e-5, 1.8e-4, 8e-4),
                       certified(NonlinearitySpec::nicholson(1.0)),
                       KernelVariant::full,
                       0,
                       10,
                       1};
}

}  // namespace

static void BM_SineForward(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const SineBasis basis(OperatorSpec{100.0, n, n, EigenvalueMode::discrete});
    GridField field(n, 1.0);
    ModeVector out(n);
    for (auto _ : state) {
        basis.forward(field.values, out.coeffs);
        benchmark::DoNotOptimize(out.coeffs.data());
    }
}
BENCHMARK(BM_SineForward)->Arg(64)->Arg(128)->Arg(256);

static void BM_DelayTerm(benchmark::State& state) {
    const auto p = headline_problem(128, static_cast<std::size_t>(state.range(0)));
    const auto v = make_initial(p.op, p.delay, InitialFamily::random_signed_fourier, 0.5, 7);
    for (auto _ : state) {
        auto f = delay_term(p.nonlinearity, p.kernel, v, KernelVariant::full);
        benchmark::DoNotOptimize(f.values.data());
    }
}
BENCHMARK(BM_DelayTerm)->Arg(20)->Arg(50)->Arg(100);

static void BM_IntegratorStep(benchmark::State& state) {
    const auto p = headline_problem(static_cast<std::size_t>(state.range(0)), 50);
    Integrator integ(p, make_initial(p.op, p.delay, InitialFamily::random_positive_fourier, 1.0, 3));
    for (auto _ : state) integ.step();
}
BENCHMARK(BM_IntegratorStep)->Arg(64)->Arg(128)->Arg(256);

static void BM_Synthesize(benchmark::State& state) {
    const auto nl = certified(NonlinearitySpec::nicholson(1.0));
    for (auto _ : state) {
        auto res = synthesize_params(1, nl, 100.0);
        benchmark::DoNotOptimize(res.feasible.has_value());
    }
}
BENCHMARK(BM_Synthesize);

BENCHMARK_MAIN();
