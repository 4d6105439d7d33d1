#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "pimlab/pimlab.hpp"

namespace testing {

inline pimlab::ProblemSpec make_problem(double L, std::size_t nx, double r, std::size_t m, double M_xi,
                                        double plus, double minus, double p = 1.0,
                                        pimlab::KernelVariant variant = pimlab::KernelVariant::full) {
    pimlab::OperatorSpec op{L, nx, nx, pimlab::EigenvalueMode::discrete};
    pimlab::DelayGrid grid{r, m};
    return pimlab::ProblemSpec{op,
                               grid,
                               pimlab::make_constant_kernel(r, m, plus, minus, M_xi),
                               pimlab::certified(pimlab::NonlinearitySpec::nicholson(p)),
                               variant,
                               0,
                               10,
                               1};
}

inline pimlab::ProblemSpec headline(std::size_t nx = 128, std::size_t m = 50) {
    return make_problem(100.0, nx, 0.5, m, 8e-4, 6e-5, 1.8e-4);
}

// L = pi, N = 3 gap configuration: xi+ = 0.5, xi- = -0.5 on [-0.1, 0].
inline pimlab::ProblemSpec pi_gap(std::size_t nx = 64, std::size_t m = 20) {
    auto pr = make_problem(std::numbers::pi, nx, 0.1, m, 1.0, 0.05, 0.05, 1.0, pimlab::KernelVariant::p);
    pr.low_modes = 3;
    return pr;
}

// Random history with values in [lo, hi], smooth in x and in theta.
inline pimlab::HistorySegment random_segment(const pimlab::OperatorSpec& op, pimlab::DelayGrid grid,
                                             std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double a = u(rng), b = u(rng), c = u(rng), ph = 6.283185307179586 * u(rng);
    const double L = op.domain_length;
    return pimlab::HistorySegment::from_function(op, grid, [&](double th, double x) {
        const double s = 0.5 + 0.5 * std::sin(ph + a * 7.0 * x / L + b * 3.0 * th + c * std::sin(5.0 * x / L));
        return lo + (hi - lo) * s;
    });
}

}  // namespace testing
