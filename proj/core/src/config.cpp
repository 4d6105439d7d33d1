#include "pimlab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "pimlab/error.hpp"

namespace pimlab {

using nlohmann::json;

namespace {

// A JSON object view that records which keys were read so leftovers can be rejected.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string key_path(std::string_view key) const {
        return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    }

    bool has(std::string_view key) const { return j_.contains(std::string(key)) && !j_.at(std::string(key)).is_null(); }

    const json& raw(std::string_view key) {
        seen_.insert(std::string(key));
        if (!j_.contains(std::string(key))) throw ConfigError(key_path(key), "missing required key");
        return j_.at(std::string(key));
    }

    Section section(std::string_view key) {
        return Section(raw(key), key_path(key));
    }

    std::optional<Section> optional_section(std::string_view key) {
        seen_.insert(std::string(key));
        if (!has(key)) return std::nullopt;
        return Section(j_.at(std::string(key)), key_path(key));
    }

    double number(std::string_view key) {
        const auto& v = raw(key);
        if (!v.is_number()) throw ConfigError(key_path(key), "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ConfigError(key_path(key), "must be finite");
        return x;
    }

    double positive(std::string_view key) {
        const double x = number(key);
        if (!(x > 0.0)) throw ConfigError(key_path(key), "must be positive");
        return x;
    }

    double nonnegative(std::string_view key) {
        const double x = number(key);
        if (!(x >= 0.0)) throw ConfigError(key_path(key), "must be nonnegative");
        return x;
    }

    double number_or(std::string_view key, double fallback) {
        seen_.insert(std::string(key));
        return has(key) ? number(key) : fallback;
    }

    std::uint64_t integer(std::string_view key) {
        const auto& v = raw(key);
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (d >= 0.0 && std::floor(d) == d && d < 9.0e15) return static_cast<std::uint64_t>(d);
        }
        throw ConfigError(key_path(key), "expected a nonnegative integer");
    }

    std::uint64_t integer_or(std::string_view key, std::uint64_t fallback) {
        seen_.insert(std::string(key));
        return has(key) ? integer(key) : fallback;
    }

    std::string string(std::string_view key) {
        const auto& v = raw(key);
        if (!v.is_string()) throw ConfigError(key_path(key), "expected a string");
        return v.get<std::string>();
    }

    std::string string_or(std::string_view key, std::string fallback) {
        seen_.insert(std::string(key));
        return has(key) ? string(key) : fallback;
    }

    std::vector<double> numbers(std::string_view key) {
        const auto& v = raw(key);
        if (!v.is_array()) throw ConfigError(key_path(key), "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) throw ConfigError(key_path(key) + "[" + std::to_string(i) + "]", "expected a number");
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.contains(it.key())) throw ConfigError(key_path(it.key()), "unknown key");
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

template <class F>
auto wrap(const std::string& path, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(path, e.what());
    }
}

LogGrid parse_grid(Section s, LogGrid fallback) {
    LogGrid g;
    g.min = s.number_or("min", fallback.min);
    g.max = s.number_or("max", fallback.max);
    g.points = s.integer_or("points", fallback.points);
    s.finish();
    if (!(g.min > 0.0 && g.max >= g.min)) throw ConfigError(s.key_path("min"), "need 0 < min <= max");
    if (g.points < 1) throw ConfigError(s.key_path("points"), "must be >= 1");
    return g;
}

}  // namespace

RunConfig parse_run_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
    }
    Section root(doc, "");

    OperatorSpec op;
    {
        auto s = root.section("operator");
        op.domain_length = s.positive("domain_length");
        op.grid_points = s.integer("grid_points");
        op.modes = s.integer_or("modes", op.grid_points);
        s.finish();
        wrap("operator", [&] { op.validate(); });
    }

    DelayGrid delay;
    {
        auto s = root.section("delay");
        delay.r = s.positive("r");
        delay.m = s.integer("m");
        s.finish();
        wrap("delay", [&] { delay.validate(); });
    }

    auto ks = [&] {
        auto s = root.section("kernel");
        const double cap = s.nonnegative("M_xi");
        const bool profiles = s.has("xi_plus") || s.has("xi_minus");
        std::optional<KernelSpec> out;
        if (profiles) {
            auto plus = s.numbers("xi_plus");
            auto minus = s.numbers("xi_minus");
            s.finish();
            out = wrap("kernel", [&] { return KernelSpec(delay, plus, minus, cap); });
        } else {
            const double ip = s.nonnegative("plus_integral");
            const double im = s.nonnegative("minus_integral");
            s.finish();
            out = wrap("kernel", [&] { return make_constant_kernel(delay.r, delay.m, ip, im, cap); });
        }
        return *out;
    }();

    NonlinearitySpec nl;
    {
        auto s = root.section("nonlinearity");
        const auto kind = s.string("kind");
        if (kind == "nicholson") {
            const double p = s.positive("p");
            s.finish();
            nl = wrap("nonlinearity", [&] { return certified(NonlinearitySpec::nicholson(p)); });
        } else if (kind == "bounded_custom") {
            const double mb = s.nonnegative("M_b");
            const double lb = s.nonnegative("L_b");
            s.finish();
            nl = NonlinearitySpec::custom(mb, lb);
        } else {
            throw ConfigError(s.key_path("kind"), "expected 'nicholson' or 'bounded_custom'");
        }
    }

    KernelVariant variant = KernelVariant::full;
    {
        const auto v = root.string_or("variant", "full");
        variant = wrap("variant", [&] { return kernel_variant_from_string(v); });
    }

    std::size_t N = 1;
    std::optional<double> mu;
    if (auto s = root.optional_section("conditions")) {
        N = s->integer_or("N", 1);
        if (s->has("mu")) mu = s->positive("mu");
        else s->number_or("mu", 0.0);
        s->finish();
        if (N < 1 || N >= op.modes) throw ConfigError("conditions.N", "must satisfy 1 <= N < modes");
    }

    SimulationConfig sim;
    if (auto s = root.optional_section("simulation")) {
        sim.horizon = s->number_or("horizon", sim.horizon);
        sim.stride = s->integer_or("stride", sim.stride);
        const auto fam = s->string_or("family", std::string(to_string(sim.family)));
        sim.family = wrap(s->key_path("family"), [&] { return initial_family_from_string(fam); });
        sim.amplitude = s->number_or("amplitude", sim.amplitude);
        sim.seed = s->integer_or("seed", sim.seed);
        s->finish();
        if (sim.stride < 1) throw ConfigError("simulation.stride", "must be >= 1");
        if (!(sim.horizon >= 0.0)) throw ConfigError("simulation.horizon", "must be nonnegative");
    }

    ExperimentConfig ex;
    if (auto s = root.optional_section("experiments")) {
        ex.trials = s->integer_or("trials", ex.trials);
        ex.seed = s->integer_or("seed", ex.seed);
        ex.horizon = s->number_or("horizon", ex.horizon);
        const auto fam = s->string_or("family", std::string(to_string(ex.family)));
        ex.family = wrap(s->key_path("family"), [&] { return initial_family_from_string(fam); });
        ex.amplitude = s->number_or("amplitude", ex.amplitude);
        const auto cone = s->string_or("cone", "positive");
        ex.cone = wrap(s->key_path("cone"), [&] { return cone_from_string(cone); });
        ex.stride = s->integer_or("stride", ex.stride);
        ex.jobs = s->integer_or("jobs", ex.jobs);
        ex.cone_tolerance = s->number_or("cone_tolerance", ex.cone_tolerance);
        ex.lipschitz_tolerance = s->number_or("lipschitz_tolerance", ex.lipschitz_tolerance);
        if (s->has("alpha_min")) ex.alpha_min = s->number("alpha_min");
        else s->number_or("alpha_min", 0.0);
        ex.r2_min = s->number_or("r2_min", ex.r2_min);
        ex.noise_floor = s->number_or("noise_floor", ex.noise_floor);
        ex.min_window_samples = s->integer_or("min_window_samples", ex.min_window_samples);
        ex.perturbation_fraction = s->number_or("perturbation_fraction", ex.perturbation_fraction);
        s->finish();
        wrap("experiments", [&] { ex.validate(); });
    }

    SynthesisOptions syn;
    if (auto s = root.optional_section("synthesis")) {
        syn.plus_margin = s->number_or("plus_margin", syn.plus_margin);
        syn.minus_position = s->number_or("minus_position", syn.minus_position);
        if (auto g = s->optional_section("r_grid")) syn.r_grid = parse_grid(*g, syn.r_grid);
        if (auto g = s->optional_section("xi_grid")) syn.xi_grid = parse_grid(*g, syn.xi_grid);
        s->finish();
        if (!(syn.plus_margin >= 0.0 && syn.plus_margin < 1.0)) throw ConfigError("synthesis.plus_margin", "must lie in [0, 1)");
        if (!(syn.minus_position > 0.0 && syn.minus_position <= 1.0)) {
            throw ConfigError("synthesis.minus_position", "must lie in (0, 1]");
        }
    }

    root.finish();

    ProblemSpec problem{op, delay, ks, nl, variant, 0, sim.stride, N};
    problem.steps = wrap("simulation.horizon", [&] { return problem.steps_for(sim.horizon); });

    return RunConfig{std::move(problem), N, mu, sim, ex, syn, doc.dump()};
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("<file>", "cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

}  // namespace pimlab
