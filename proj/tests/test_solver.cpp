#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

using namespace pimlab;

namespace {

ProblemSpec small_problem(KernelVariant v = KernelVariant::full) {
    auto pr = testing::make_problem(std::numbers::pi, 32, 0.1, 10, 1.0, 0.05, 0.05, 1.0, v);
    pr.low_modes = 3;
    return pr;
}

ProblemSpec zero_kernel(double L, std::size_t n, double r, std::size_t m) {
    return testing::make_problem(L, n, r, m, 1.0, 0.0, 0.0);
}

double field_distance(const OperatorSpec& op, std::span<const double> a, std::span<const double> b) {
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return l2_norm(op, d);
}

}  // namespace

TEST_CASE("zero history is a fixed point") {
    auto pr = small_problem();
    pr.steps = 50;
    const auto zero = HistorySegment::constant(pr.op, pr.delay, 0.0);
    CHECK(step(pr, zero) == zero);
    const auto rec = evolve(pr, zero);
    for (const auto& s : rec.samples) {
        CHECK(s.full_norm == 0.0);
        CHECK(s.high_norm == 0.0);
        for (double a : s.low) CHECK(a == 0.0);
    }
}

TEST_CASE("pure linear flow is propagated exactly") {
    const auto pr = zero_kernel(100.0, 128, 0.5, 50);
    const SineBasis basis(pr.op);
    const auto phi = HistorySegment::constant_in_time(pr.op, pr.delay, basis.mode_field(0));
    Integrator integ(pr, phi);
    const double lh1 = discrete_eigenvalue(100.0, 128, 1);
    for (int block = 0; block < 20; ++block) {
        integ.advance(250);
        const double expected = std::exp(-lh1 * integ.time());
        CHECK(std::abs(integ.modes()[0] - expected) <= 1e-12 * expected);
        for (std::size_t k = 1; k < pr.op.modes; ++k) CHECK(std::abs(integ.modes()[k]) < 1e-13);
    }
}

TEST_CASE("one step changes each mode by at most h M_b M_xi r sqrt(L)") {
    std::mt19937_64 rng(41);
    for (auto pr : {small_problem(), testing::headline(64, 20)}) {
        const auto lam = eigenvalues(pr.op);
        const double h = pr.step_size();
        const double bound = h * pr.nonlinearity.M_b * pr.kernel.cap() * pr.delay.r * std::sqrt(pr.op.domain_length);
        for (int t = 0; t < 100; ++t) {
            const auto v = testing::random_segment(pr.op, pr.delay, rng, -6.0, 6.0);
            const auto before = forward(pr.op, v.snapshot_field(pr.delay.m));
            const auto after = forward(pr.op, step(pr, v).snapshot_field(pr.delay.m));
            for (std::size_t k = 0; k < pr.op.modes; ++k)
                CHECK(std::abs(after[k] - std::exp(-lam[k] * h) * before[k]) <= bound * (1 + 1e-9) + 1e-15);
        }
    }
}

TEST_CASE("evolve is deterministic and samples on the stride") {
    auto pr = small_problem();
    pr.steps = 123;
    pr.stride = 10;
    const auto phi = make_initial(pr.op, pr.delay, InitialFamily::random_signed_fourier, 2.0, 9);
    const auto a = evolve(pr, phi, {{0, 50, 123}});
    const auto b = evolve(pr, phi, {{0, 50, 123}});
    CHECK(a == b);
    REQUIRE(a.samples.size() == 14);
    CHECK(a.samples.front().t == 0.0);
    CHECK(a.samples.back().t == doctest::Approx(123 * pr.step_size()));
    for (std::size_t i = 1; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].t > a.samples[i - 1].t);
        CHECK(a.samples[i].full_norm >= 0.0);
        CHECK(a.samples[i].high_norm >= 0.0);
        CHECK(a.samples[i].low.size() == 3);
    }
    CHECK(a.snapshots.size() == 3);
}

TEST_CASE("positivity is preserved for full and p") {
    for (auto v : {KernelVariant::full, KernelVariant::p}) {
        for (auto pr : {small_problem(v), testing::headline(64, 20).with_variant(v)}) {
            for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                const auto phi = make_initial(pr.op, pr.delay, InitialFamily::random_positive_fourier, 3.0, seed);
                Integrator integ(pr, phi);
                double lowest = 0.0;
                for (int n = 0; n < 400; ++n) {
                    integ.step();
                    for (double x : integ.current()) lowest = std::min(lowest, x);
                }
                CHECK(lowest >= -1e-12);
            }
        }
    }
}

TEST_CASE("step halving converges at first order") {
    // fixed T = 0.4, r = 0.1, m = 4, 8, 16, 32; differences between successive
    // refinements should shrink by about two
    std::vector<std::vector<double>> finals;
    for (std::size_t m : {4u, 8u, 16u, 32u}) {
        auto pr = testing::make_problem(std::numbers::pi, 32, 0.1, m, 1.0, 0.05, 0.05);
        pr.steps = pr.steps_for(0.4);
        const auto phi = HistorySegment::from_function(pr.op, pr.delay, [](double th, double x) {
            return 2.0 * std::sin(x) * (1.0 + 3.0 * th) - 1.5 * std::sin(2.0 * x) + 0.5 * std::sin(3.0 * x);
        });
        Integrator integ(pr, phi);
        integ.advance(pr.steps);
        finals.emplace_back(integ.current().begin(), integ.current().end());
    }
    const OperatorSpec op{std::numbers::pi, 32, 32};
    const double e1 = field_distance(op, finals[0], finals[1]);
    const double e2 = field_distance(op, finals[1], finals[2]);
    const double e3 = field_distance(op, finals[2], finals[3]);
    CHECK(e1 > 0.0);
    CHECK(std::log2(e1 / e2) >= 0.9);
    CHECK(std::log2(e2 / e3) >= 0.9);
}

TEST_CASE("dissipativity probe") {
    auto pr = small_problem();
    CHECK(dissipativity_probe(pr, HistorySegment::constant(pr.op, pr.delay, 0.0), 1.0) == 0.0);

    const auto lin = zero_kernel(std::numbers::pi, 32, 0.1, 10);
    const auto phi = make_initial(lin.op, lin.delay, InitialFamily::random_positive_fourier, 1.0, 3);
    const double T = 2.0;
    const double lh1 = discrete_eigenvalue(std::numbers::pi, 32, 1);
    CHECK(dissipativity_probe(lin, phi, T) <=
          std::exp(-lh1 * T / 2) * l2_norm(lin.op, phi.current()) * (1 + 1e-12));

    // headline parameters on a coarser grid, long enough to forget the initial data
    const auto hl = testing::headline(32, 10);
    const auto phi_h = make_initial(hl.op, hl.delay, InitialFamily::random_positive_fourier, 1.0, 4);
    CHECK(dissipativity_probe(hl, phi_h, 10000.0) <= 1.01 * absorbing_radius(hl));
}

TEST_CASE("non-finite values raise an integration failure with the step index") {
    auto pr = small_problem();
    const auto phi = HistorySegment::constant(pr.op, pr.delay, 1e308);
    Integrator integ(pr, phi);
    try {
        integ.advance(10);
        FAIL("expected an integration failure");
    } catch (const IntegrationFailure& e) {
        CHECK(e.step_index() == 1);
    }
}

TEST_CASE("problem validation") {
    auto pr = small_problem();
    CHECK(pr.steps_for(0.5) == 50);
    CHECK_THROWS_AS(pr.steps_for(0.005), ContractViolation);
    auto bad = pr;
    bad.delay = DelayGrid{0.1, 11};
    CHECK_THROWS_AS(bad.validate(), ContractViolation);
    bad = pr;
    bad.nonlinearity.constants_certified = false;
    CHECK_THROWS_AS(bad.validate(), CertificationError);
    bad = pr;
    bad.nonlinearity = NonlinearitySpec::custom(1.0, 1.0);
    CHECK_THROWS_AS(Integrator(bad, HistorySegment::constant(pr.op, pr.delay, 0.0)), ContractViolation);
    CHECK_THROWS_AS(Integrator(pr, HistorySegment::constant(pr.op, DelayGrid{0.1, 5}, 0.0)), ContractViolation);
}

TEST_CASE("trajectory csv columns") {
    auto pr = small_problem();
    pr.steps = 3;
    pr.stride = 1;
    std::ostringstream out;
    write_csv(out, evolve(pr, HistorySegment::constant(pr.op, pr.delay, 0.1)));
    std::string header;
    std::getline(std::istringstream(out.str()) >> std::ws, header);
    CHECK(header == "t,a_1,a_2,a_3,high_norm,full_norm,min_value,max_value");
    const std::string s = out.str();
    CHECK(std::count(s.begin(), s.end(), '\n') == 5);
}
