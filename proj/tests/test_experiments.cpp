#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

using namespace pimlab;

namespace {

ExperimentConfig quick(std::size_t trials, double horizon) {
    ExperimentConfig c;
    c.trials = trials;
    c.horizon = horizon;
    c.seed = 5;
    c.jobs = 2;
    return c;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("initial families") {
    const OperatorSpec op{10.0, 32, 32};
    const DelayGrid g{0.2, 5};
    for (auto f : {InitialFamily::random_positive_fourier, InitialFamily::gaussian_bumps, InitialFamily::constant}) {
        CHECK(family_is_positive(f));
        const auto v = make_initial(op, g, f, 2.0, 3);
        CHECK(v.min_value() > 0.0);
        CHECK(v == make_initial(op, g, f, 2.0, 3));
        CHECK(initial_family_from_string(to_string(f)) == f);
    }
    CHECK_FALSE(family_is_positive(InitialFamily::random_signed_fourier));
    const auto s = make_initial(op, g, InitialFamily::random_signed_fourier, 1.0, 3);
    CHECK(s.min_value() < 0.0);
    CHECK(s.max_value() > 0.0);
    CHECK_FALSE(make_initial(op, g, InitialFamily::random_positive_fourier, 1.0, 3) ==
                make_initial(op, g, InitialFamily::random_positive_fourier, 1.0, 4));
    CHECK_THROWS_AS(initial_family_from_string("white_noise"), ContractViolation);
    CHECK(cone_from_string("negative") == Cone::negative);
    CHECK_THROWS_AS(cone_from_string("up"), ContractViolation);
}

TEST_CASE("cone invariance: constant positive data with a zero kernel") {
    const auto pr = testing::make_problem(std::numbers::pi, 32, 0.1, 10, 1.0, 0.0, 0.0);
    auto cfg = quick(2, 1.0);
    cfg.family = InitialFamily::constant;
    const auto res = run_cone_invariance(pr, cfg);
    CHECK(res.passed);
    CHECK(res.summary_value("max_violation") == 0.0);
    CHECK(res.summary_value("tolerance") == 1e-12);
}

TEST_CASE("cone invariance in both cones; signed data rejected") {
    const auto pr = testing::pi_gap(32, 10).with_variant(KernelVariant::full);
    for (auto cone : {Cone::positive, Cone::negative}) {
        auto cfg = quick(4, 1.0);
        cfg.cone = cone;
        cfg.amplitude = 3.0;
        const auto res = run_cone_invariance(pr, cfg);
        CHECK(res.passed);
        CHECK(res.status == "pass");
        CHECK(res.trials.size() == 4);
        CHECK(res.summary_value("max_violation") <= res.summary_value("tolerance"));
    }
    auto bad = quick(1, 1.0);
    bad.family = InitialFamily::random_signed_fourier;
    CHECK_THROWS_AS(run_cone_invariance(pr, bad), ContractViolation);
    CHECK_THROWS_AS(run_coincidence(pr, bad), ContractViolation);
}

TEST_CASE("coincidence is exact and the witness diverges") {
    const auto pr = testing::pi_gap(32, 10);
    for (auto cone : {Cone::positive, Cone::negative}) {
        auto cfg = quick(3, 1.0);
        cfg.cone = cone;
        cfg.amplitude = 2.0;
        const auto res = run_coincidence(pr, cfg);
        CHECK(res.passed);
        CHECK(res.summary_value("max_distance") == 0.0);
    }
    auto cfg = quick(1, 1.0);
    cfg.amplitude = 2.0;
    const auto w = run_coincidence_witness(pr, cfg);
    CHECK(w.informational);
    CHECK(w.status == "informational");
    CHECK(w.summary_value("max_distance") > 0.0);
}

TEST_CASE("lipschitz sampling stays below the bounds") {
    const auto pr = testing::headline(32, 10);
    auto cfg = quick(200, 0.0);
    const auto res = run_lipschitz_sampling(pr, cfg);
    CHECK(res.passed);
    CHECK(res.summary_value("pairs_used") == 200);
    CHECK(res.summary_value("max_B_ratio") <= 1.0 + 1e-8);
    CHECK(res.summary_value("max_kernel_ratio") <= 1.0 + 1e-8);
    CHECK(res.summary_value("max_B_ratio") > 0.0);
    CHECK(res.summary_value("tolerance") == 1e-8);
}

TEST_CASE("attraction on the gap-certified configuration") {
    const auto pr = testing::pi_gap(32, 10);
    auto cfg = quick(4, 2.0);
    const auto res = run_attraction_rate(pr, cfg, 3);
    CHECK(res.passed);
    CHECK(res.summary_value("mu") == doctest::Approx(3.5));
    CHECK(res.summary_value("alpha_min") == doctest::Approx(1.75));
    CHECK(res.summary_value("median_alpha_hat") >= 1.75);
    CHECK(res.summary_value("median_r2") >= 0.9);
    for (const auto& t : res.trials) CHECK(t.status != "inconclusive");
    // the headline kernel fails A5 for p at N = 3 on this domain
    auto bad = testing::make_problem(std::numbers::pi, 32, 0.1, 10, 10.0, 0.5, 0.5);
    CHECK_THROWS_AS(run_attraction_rate(bad, cfg, 3), ContractViolation);
}

TEST_CASE("a window that ends early is inconclusive, not a failure") {
    const auto pr = testing::pi_gap(32, 10);
    auto cfg = quick(2, 0.2);
    cfg.min_window_samples = 1000;
    const auto res = run_attraction_rate(pr, cfg, 3);
    CHECK_FALSE(res.passed);
    CHECK(res.status == "inconclusive");
}

TEST_CASE("fit_line and median") {
    const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
    const auto f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r2 == doctest::Approx(1.0));
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK_THROWS_AS(median({}), ContractViolation);
    CHECK_THROWS_AS(fit_line(std::vector<double>{1.0}, std::vector<double>{1.0}), ContractViolation);
}

TEST_CASE("results are independent of the worker count") {
    const auto pr = testing::pi_gap(32, 10);
    auto one = quick(6, 1.0);
    one.jobs = 1;
    auto four = one;
    four.jobs = 4;
    CHECK(to_json({run_cone_invariance(pr, one)}) == to_json({run_cone_invariance(pr, four)}));
    CHECK(to_csv({run_attraction_rate(pr, one, 3)}) == to_csv({run_attraction_rate(pr, four, 3)}));
}

TEST_CASE("emit writes parseable json and long-format csv") {
    const auto dir = std::filesystem::temp_directory_path() / "pimlab_emit_test";
    std::filesystem::create_directories(dir);
    const auto pr = testing::pi_gap(16, 5);
    auto cfg = quick(2, 0.5);
    const std::vector<ExperimentResult> results{run_coincidence(pr, cfg)};

    emit(results, (dir / "one.json").string(), OutputFormat::json);
    const auto j = nlohmann::json::parse(slurp(dir / "one.json"));
    REQUIRE(j.is_array());
    CHECK(j.size() == 1);
    CHECK(j[0].at("name") == "coincidence-positive");
    CHECK(j[0].at("summary").at("tolerance") == 0.0);

    emit(results, (dir / "one.csv").string(), OutputFormat::csv);
    const auto csv = slurp(dir / "one.csv");
    CHECK(csv.rfind("experiment,trial,status,metric,value\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);

    emit({}, (dir / "empty.json").string(), OutputFormat::json);
    CHECK(nlohmann::json::parse(slurp(dir / "empty.json")).empty());
    emit({}, (dir / "empty.csv").string(), OutputFormat::csv);
    CHECK(slurp(dir / "empty.csv") == "experiment,trial,status,metric,value\n");

    CHECK_THROWS_AS(emit(results, (dir / "missing" / "x.json").string(), OutputFormat::json), std::runtime_error);
    CHECK(output_format_from_string("csv") == OutputFormat::csv);
    CHECK_THROWS(output_format_from_string("xml"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("config validation") {
    auto c = quick(1, 1.0);
    c.trials = 0;
    CHECK_THROWS_AS(c.validate(), ContractViolation);
    c = quick(1, 1.0);
    c.perturbation_fraction = 1.0;
    CHECK_THROWS_AS(c.validate(), ContractViolation);
    const auto pr = testing::pi_gap(16, 5);
    c = quick(1, 0.123);
    CHECK_THROWS_AS(run_cone_invariance(pr, c), ContractViolation);
}
