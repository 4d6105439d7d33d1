#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace pimlab;

namespace {

KernelSpec random_kernel(DelayGrid g, double cap, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 0.5 * cap);
    std::vector<double> plus(g.nodes()), minus(g.nodes());
    for (auto& v : plus) v = u(rng);
    for (auto& v : minus) v = -u(rng);
    return KernelSpec(g, plus, minus, cap);
}

double weighted_l1(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& w) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += w[j] * std::abs(a[j] - b[j]);
    return s;
}

}  // namespace

TEST_CASE("constant kernel factory") {
    const auto k = make_constant_kernel(0.5, 50, 6e-5, 1.8e-4, 8e-4);
    for (double v : k.xi_plus()) CHECK(v == doctest::Approx(1.2e-4).epsilon(1e-14));
    for (double v : k.xi_minus()) CHECK(v == doctest::Approx(-3.6e-4).epsilon(1e-14));
    CHECK(k.plus_integral() == doctest::Approx(6e-5).epsilon(1e-13));
    CHECK(k.minus_integral() == doctest::Approx(1.8e-4).epsilon(1e-13));
    CHECK(l11_constant(k, KernelVariant::full) == doctest::Approx(1.8e-4).epsilon(1e-13));
    CHECK(l11_constant(k, KernelVariant::p) == doctest::Approx(6e-5).epsilon(1e-13));
    CHECK(l11_constant(k, KernelVariant::n) == doctest::Approx(1.8e-4).epsilon(1e-13));

    const auto zero = make_constant_kernel(0.5, 10, 0.0, 0.0, 1.0);
    for (double v : zero.xi_plus()) CHECK(v == 0.0);

    const auto only_plus = make_constant_kernel(0.3, 6, 0.09, 0.0, 1.0);
    CHECK(l11_constant(only_plus, KernelVariant::full) == l11_constant(only_plus, KernelVariant::p));
    CHECK(l11_constant(only_plus, KernelVariant::p) == doctest::Approx(0.3 * 0.3).epsilon(1e-13));

    CHECK_THROWS_AS(make_constant_kernel(0.5, 50, 6e-5, 0.5 * 8e-4, 8e-4), ContractViolation);
    try {
        make_constant_kernel(0.5, 50, 6e-5, 0.5 * 8e-4, 8e-4);
    } catch (const ContractViolation& e) {
        CHECK(std::string(e.what()).find("minus") != std::string::npos);
    }
}

TEST_CASE("kernel spec rejects sign and cap violations") {
    const DelayGrid g{1.0, 2};
    CHECK_THROWS_AS(KernelSpec(g, {0.1, -0.1, 0.1}, {0, 0, 0}, 1.0), ContractViolation);
    CHECK_THROWS_AS(KernelSpec(g, {0.1, 0.1, 0.1}, {0, 0.1, 0}, 1.0), ContractViolation);
    CHECK_THROWS_AS(KernelSpec(g, {0.6, 0.1, 0.1}, {0, 0, 0}, 1.0), ContractViolation);
    CHECK_THROWS_AS(KernelSpec(g, {0.1, 0.1}, {0, 0, 0}, 1.0), ContractViolation);
    CHECK_NOTHROW(KernelSpec(g, {0.5, 0.5, 0.5}, {-0.5, -0.5, -0.5}, 1.0));
}

TEST_CASE("variant names round trip") {
    for (auto v : {KernelVariant::full, KernelVariant::p, KernelVariant::n})
        CHECK(kernel_variant_from_string(to_string(v)) == v);
    CHECK_THROWS(kernel_variant_from_string("plus"));
}

TEST_CASE("eval_xi examples") {
    const OperatorSpec op{100.0, 16, 16};
    const DelayGrid g{0.5, 10};
    const auto k = make_constant_kernel(0.5, 10, 6e-5, 1.8e-4, 8e-4);
    const auto zero = HistorySegment::constant(op, g, 0.0);
    for (auto v : {KernelVariant::full, KernelVariant::p, KernelVariant::n})
        for (double x : eval_xi(k, zero, v)) CHECK(x == 0.0);

    // ||v+|| = 0.5 exactly: pick c so that r * h * n * c = 0.5
    const double c = 0.5 / (0.5 * op.grid_spacing() * 16);
    const auto half = HistorySegment::constant(op, g, c);
    REQUIRE(norm_l1l1(half) == doctest::Approx(0.5).epsilon(1e-14));
    const auto full = eval_xi(k, half, KernelVariant::full);
    const auto n = eval_xi(k, half, KernelVariant::n);
    for (std::size_t j = 0; j < g.nodes(); ++j) {
        CHECK(full[j] == doctest::Approx(0.5 * k.xi_plus()[j]).epsilon(1e-14));
        CHECK(n[j] == 0.0);
    }
    const auto big = HistorySegment::constant(op, g, 14.0 * c);
    const auto clipped = eval_xi(k, big, KernelVariant::full);
    for (std::size_t j = 0; j < g.nodes(); ++j) CHECK(clipped[j] == k.xi_plus()[j]);
}

TEST_CASE("clip inequality property") {
    std::mt19937_64 rng(23);
    std::exponential_distribution<double> e(0.7);
    for (int i = 0; i < 100000; ++i) {
        const double a = e(rng), b = e(rng);
        CHECK_UNARY(std::min(a, 1.0) - std::min(b, 1.0) <= std::abs(a - b));
    }
}

TEST_CASE("kernel properties on random segments and kernels") {
    std::mt19937_64 rng(29);
    const OperatorSpec op{4.0, 24, 24};
    const DelayGrid g{0.6, 12};
    const auto w = trapezoid_weights(g);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 1000; ++t) {
        const double cap = std::pow(10.0, -4.0 + 4.0 * u(rng));
        const auto k = random_kernel(g, cap, rng);
        const double scale = std::pow(10.0, -3.0 + 4.0 * u(rng));
        const auto v1 = testing::random_segment(op, g, rng, -scale, scale);
        const auto v2 = testing::random_segment(op, g, rng, -0.3 * scale, 2.0 * scale);

        const auto full = eval_xi(k, v1, KernelVariant::full);
        const auto p = eval_xi(k, v1, KernelVariant::p);
        const auto n = eval_xi(k, v1, KernelVariant::n);
        for (std::size_t j = 0; j < g.nodes(); ++j) {
            CHECK(full[j] == p[j] + n[j]);
            CHECK(std::abs(full[j]) <= cap);
        }

        const double dn = norm_l1l1(difference(v1, v2));
        for (auto var : {KernelVariant::full, KernelVariant::p, KernelVariant::n}) {
            const double lhs = weighted_l1(eval_xi(k, v1, var), eval_xi(k, v2, var), w);
            CHECK(lhs <= l11_constant(k, var) * dn * (1 + 1e-10));
        }

        // on D+ the full and p kernels agree bitwise
        const auto pos = positive_part(v1);
        CHECK(eval_xi(k, pos, KernelVariant::full) == eval_xi(k, pos, KernelVariant::p));
        const auto neg = negative_part(v1);
        CHECK(eval_xi(k, neg, KernelVariant::full) == eval_xi(k, neg, KernelVariant::n));
    }
}
