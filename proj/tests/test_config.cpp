#include <string>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

using namespace pimlab;
using nlohmann::json;

namespace {

json base() {
    return json::parse(R"({
      "operator": {"domain_length": 100, "grid_points": 16, "modes": 16},
      "delay": {"r": 0.5, "m": 50},
      "kernel": {"M_xi": 8e-4, "plus_integral": 6e-5, "minus_integral": 1.8e-4},
      "nonlinearity": {"kind": "nicholson", "p": 1}
    })");
}

std::string key_path_of(const json& doc) {
    try {
        parse_run_config(doc.dump());
    } catch (const ConfigError& e) {
        return e.key_path();
    }
    return "<accepted>";
}

}  // namespace

TEST_CASE("minimal config") {
    const auto rc = parse_run_config(base().dump());
    CHECK(rc.problem.op.domain_length == 100.0);
    CHECK(rc.problem.delay.m == 50);
    CHECK(rc.problem.kernel.plus_integral() == doctest::Approx(6e-5));
    CHECK(rc.problem.nonlinearity.constants_certified);
    CHECK(rc.problem.variant == KernelVariant::full);
    CHECK(rc.N == 1);
    CHECK_FALSE(rc.mu);
    CHECK(condition_report(rc.problem, rc.N).verdict == Verdict::PIM_only);
}

TEST_CASE("optional sections") {
    auto d = base();
    d["variant"] = "p";
    d["conditions"] = {{"N", 2}, {"mu", 1e-3}};
    d["simulation"] = {{"horizon", 2.0}, {"stride", 5}, {"family", "gaussian_bumps"}, {"amplitude", 0.5}, {"seed", 9}};
    d["experiments"] = {{"trials", 7}, {"seed", 3}, {"horizon", 1.0}, {"cone", "negative"}, {"alpha_min", 0.1}};
    d["synthesis"] = {{"plus_margin", 0.2}, {"r_grid", {{"min", 0.01}, {"max", 1.0}, {"points", 10}}}};
    const auto rc = parse_run_config(d.dump());
    CHECK(rc.problem.variant == KernelVariant::p);
    CHECK(rc.N == 2);
    CHECK(*rc.mu == 1e-3);
    CHECK(rc.problem.steps == 200);
    CHECK(rc.problem.stride == 5);
    CHECK(rc.simulation.family == InitialFamily::gaussian_bumps);
    CHECK(rc.simulation.seed == 9);
    CHECK(rc.experiment.trials == 7);
    CHECK(rc.experiment.cone == Cone::negative);
    CHECK(*rc.experiment.alpha_min == 0.1);
    CHECK(rc.synthesis.plus_margin == 0.2);
    CHECK(rc.synthesis.r_grid.points == 10);
    CHECK(rc.synthesis.xi_grid.points == 120);
}

TEST_CASE("kernel profiles") {
    auto d = base();
    d["delay"] = {{"r", 1.0}, {"m", 2}};
    d["kernel"] = {{"M_xi", 1.0}, {"xi_plus", {0.1, 0.2, 0.3}}, {"xi_minus", {0.0, -0.5, 0.0}}};
    const auto rc = parse_run_config(d.dump());
    CHECK(rc.problem.kernel.plus_integral() == doctest::Approx(0.2));
    CHECK(rc.problem.kernel.minus_integral() == doctest::Approx(0.25));
    d["kernel"]["xi_minus"] = {0.0, 0.5, 0.0};
    CHECK(key_path_of(d) == "kernel");
    d["kernel"]["xi_minus"] = {0.0, 0.0};
    CHECK(key_path_of(d) == "kernel");
}

TEST_CASE("bounded custom nonlinearity") {
    auto d = base();
    d["nonlinearity"] = {{"kind", "bounded_custom"}, {"M_b", 0.5}, {"L_b", 0.4}};
    const auto rc = parse_run_config(d.dump());
    CHECK_FALSE(rc.problem.nonlinearity.evaluable());
    CHECK(rc.problem.nonlinearity.M_b == 0.5);
    CHECK(condition_report(rc.problem, 1).M1_p > 0.0);
}

TEST_CASE("errors carry the key path") {
    auto d = base();
    d["operator"]["colour"] = "red";
    CHECK(key_path_of(d) == "operator.colour");

    d = base();
    d["extra"] = 1;
    CHECK(key_path_of(d) == "extra");

    d = base();
    d.erase("delay");
    CHECK(key_path_of(d) == "delay");

    d = base();
    d["delay"]["r"] = -1;
    CHECK(key_path_of(d) == "delay.r");

    d = base();
    d["delay"]["m"] = 2.5;
    CHECK(key_path_of(d) == "delay.m");

    d = base();
    d["kernel"]["minus_integral"] = 1.0;
    CHECK(key_path_of(d) == "kernel");

    d = base();
    d["nonlinearity"]["kind"] = "logistic";
    CHECK(key_path_of(d) == "nonlinearity.kind");

    d = base();
    d["operator"]["modes"] = 32;
    CHECK(key_path_of(d) == "operator");

    d = base();
    d["variant"] = "both";
    CHECK(key_path_of(d) == "variant");

    d = base();
    d["conditions"] = {{"N", 16}};
    CHECK(key_path_of(d) == "conditions.N");

    d = base();
    d["simulation"] = {{"horizon", 0.015}};
    CHECK(key_path_of(d) == "simulation.horizon");

    d = base();
    d["simulation"] = {{"family", "noise"}};
    CHECK(key_path_of(d) == "simulation.family");

    d = base();
    d["experiments"] = {{"trials", 0}};
    CHECK(key_path_of(d) == "experiments");

    d = base();
    d["synthesis"] = {{"minus_position", 0.0}};
    CHECK(key_path_of(d) == "synthesis.minus_position");

    CHECK_THROWS_AS(parse_run_config("{not json"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("[1, 2]"), ConfigError);
    CHECK_THROWS_AS(load_run_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("shipped configs parse") {
    for (const char* name : {"headline.json", "gap_certified.json"}) {
        const auto rc = load_run_config(std::string(PIMLAB_CONFIG_DIR) + "/" + name);
        CHECK(rc.problem.op.modes == rc.problem.op.grid_points);
    }
}
