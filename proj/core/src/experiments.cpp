#include "pimlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "pimlab/conditions.hpp"
#include "pimlab/error.hpp"
#include "pimlab/parallel.hpp"

namespace pimlab {

using detail::require;
using nlohmann::ordered_json;

std::string_view to_string(InitialFamily f) {
    switch (f) {
        case InitialFamily::random_positive_fourier: return "random_positive_fourier";
        case InitialFamily::random_signed_fourier: return "random_signed_fourier";
        case InitialFamily::gaussian_bumps: return "gaussian_bumps";
        case InitialFamily::constant: return "constant";
    }
    return "unknown";
}

InitialFamily initial_family_from_string(std::string_view s) {
    for (auto f : {InitialFamily::random_positive_fourier, InitialFamily::random_signed_fourier,
                   InitialFamily::gaussian_bumps, InitialFamily::constant}) {
        if (s == to_string(f)) return f;
    }
    throw ContractViolation("unknown initial-data family '" + std::string(s) + "'");
}

std::string_view to_string(Cone c) { return c == Cone::positive ? "positive" : "negative"; }

Cone cone_from_string(std::string_view s) {
    if (s == "positive") return Cone::positive;
    if (s == "negative") return Cone::negative;
    throw ContractViolation("unknown cone '" + std::string(s) + "' (expected positive or negative)");
}

bool family_is_positive(InitialFamily f) { return f != InitialFamily::random_signed_fourier; }

void ExperimentConfig::validate() const {
    require(trials >= 1, "ExperimentConfig: trials must be >= 1");
    require(std::isfinite(horizon) && horizon >= 0.0, "ExperimentConfig: horizon must be nonnegative");
    require(std::isfinite(amplitude), "ExperimentConfig: amplitude must be finite");
    require(stride >= 1, "ExperimentConfig: stride must be >= 1");
    require(min_window_samples >= 2, "ExperimentConfig: min_window_samples must be >= 2");
    require(perturbation_fraction > 0.0 && perturbation_fraction < 1.0,
            "ExperimentConfig: perturbation_fraction must lie in (0, 1)");
}

double ExperimentResult::summary_value(std::string_view key) const {
    for (const auto& [k, v] : summary) {
        if (k == key) return v;
    }
    throw std::out_of_range("summary key not found: " + std::string(key));
}

namespace {

constexpr std::size_t kFourierTerms = 8;

struct FourierSeries {
    std::vector<double> start;  // coefficient at theta = -r
    std::vector<double> slope;  // change over the delay interval
};

FourierSeries random_series(std::mt19937_64& rng, std::size_t terms) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    FourierSeries s;
    for (std::size_t k = 1; k <= terms; ++k) {
        s.start.push_back(u(rng) / static_cast<double>(k));
        s.slope.push_back(u(rng) / static_cast<double>(k));
    }
    return s;
}

double eval_series(const FourierSeries& s, double theta, double r, double x, double L) {
    const double frac = (theta + r) / r;
    double acc = 0.0;
    for (std::size_t k = 0; k < s.start.size(); ++k) {
        acc += (s.start[k] + s.slope[k] * frac) * std::sin(static_cast<double>(k + 1) * std::numbers::pi * x / L);
    }
    return acc;
}

}  // namespace

HistorySegment make_initial(const OperatorSpec& op, DelayGrid grid, InitialFamily family, double amplitude,
                            std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double L = op.domain_length;
    const double r = grid.r;
    switch (family) {
        case InitialFamily::constant: return HistorySegment::constant(op, grid, amplitude);
        case InitialFamily::random_positive_fourier:
        case InitialFamily::random_signed_fourier: {
            const auto series = random_series(rng, std::min(kFourierTerms, op.grid_points));
            const bool positive = family == InitialFamily::random_positive_fourier;
            return HistorySegment::from_function(op, grid, [&](double theta, double x) {
                const double g = eval_series(series, theta, r, x, L);
                return positive ? amplitude * (std::max(g, 0.0) + 0.25) : amplitude * g;
            });
        }
        case InitialFamily::gaussian_bumps: {
            std::uniform_real_distribution<double> centre(0.1 * L, 0.9 * L);
            std::uniform_real_distribution<double> width(0.03 * L, 0.15 * L);
            std::uniform_real_distribution<double> weight(0.5, 1.0);
            struct Bump {
                double c, s, w0, w1;
            };
            std::vector<Bump> bumps;
            for (int b = 0; b < 3; ++b) {
                const double c = centre(rng);
                const double s = width(rng);
                const double w0 = weight(rng);
                const double w1 = weight(rng);
                bumps.push_back({c, s, w0, w1});
            }
            return HistorySegment::from_function(op, grid, [&](double theta, double x) {
                const double frac = (theta + r) / r;
                double acc = 0.05;
                for (const auto& b : bumps) {
                    const double z = (x - b.c) / b.s;
                    acc += (b.w0 + (b.w1 - b.w0) * frac) * std::exp(-0.5 * z * z);
                }
                return amplitude * acc;
            });
        }
    }
    throw ContractViolation("make_initial: unknown family");
}

namespace {

std::uint64_t trial_seed(const ExperimentConfig& cfg, std::size_t trial) { return cfg.seed + trial; }

HistorySegment cone_member(const ProblemSpec& problem, const ExperimentConfig& cfg, std::size_t trial) {
    auto v = make_initial(problem.op, problem.delay, cfg.family, std::fabs(cfg.amplitude), trial_seed(cfg, trial));
    if (cfg.cone == Cone::negative) v = v.map([](double x) { return -x; });
    return v;
}

void require_cone_family(const ExperimentConfig& cfg, const char* who) {
    if (!family_is_positive(cfg.family)) {
        throw ContractViolation(std::string(who) + ": initial family '" + std::string(to_string(cfg.family)) +
                                "' does not produce cone members");
    }
}

void add_common(ExperimentResult& res, const ProblemSpec& problem, const ExperimentConfig& cfg) {
    res.summary.emplace_back("trials", static_cast<double>(cfg.trials));
    res.summary.emplace_back("seed", static_cast<double>(cfg.seed));
    res.summary.emplace_back("horizon", cfg.horizon);
    res.summary.emplace_back("step", problem.step_size());
    res.summary.emplace_back("amplitude", cfg.amplitude);
    res.notes.emplace_back("variant", std::string(to_string(problem.variant)));
    res.notes.emplace_back("family", std::string(to_string(cfg.family)));
    res.notes.emplace_back("cone", std::string(to_string(cfg.cone)));
}

double max_abs_diff_l2(const OperatorSpec& op, std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(op.grid_spacing() * acc);
}

}  // namespace

ExperimentResult run_cone_invariance(const ProblemSpec& problem, const ExperimentConfig& cfg) {
    cfg.validate();
    require_cone_family(cfg, "run_cone_invariance");
    const std::size_t steps = problem.steps_for(cfg.horizon);
    const bool positive = cfg.cone == Cone::positive;

    ExperimentResult res;
    res.name = positive ? "cone-invariance-positive" : "cone-invariance-negative";
    res.trials.resize(cfg.trials);
    parallel_for(cfg.trials, cfg.jobs, [&](std::size_t t) {
        auto phi = cone_member(problem, cfg, t);
        const double initial_extreme = positive ? phi.min_value() : phi.max_value();
        if (positive ? initial_extreme < 0.0 : initial_extreme > 0.0) {
            throw ContractViolation("run_cone_invariance: initial data is not a cone member");
        }
        Integrator integ(problem, std::move(phi));
        double extreme = initial_extreme;
        for (std::size_t n = 0; n < steps; ++n) {
            integ.step();
            const auto u = integ.current();
            extreme = positive ? std::min(extreme, *std::min_element(u.begin(), u.end()))
                               : std::max(extreme, *std::max_element(u.begin(), u.end()));
        }
        const double violation = positive ? std::max(0.0, -extreme) : std::max(0.0, extreme);
        auto& rec = res.trials[t];
        rec.trial = t;
        rec.status = violation <= cfg.cone_tolerance ? "pass" : "fail";
        rec.metrics = {{positive ? "min_value" : "max_value", extreme},
                       {"violation", violation},
                       {"final_norm", l2_norm(problem.op, integ.current())}};
    });

    double max_violation = 0.0;
    for (const auto& rec : res.trials) max_violation = std::max(max_violation, rec.metrics[1].second);
    res.passed = max_violation <= cfg.cone_tolerance;
    res.status = res.passed ? "pass" : "fail";
    add_common(res, problem, cfg);
    res.summary.emplace_back("max_violation", max_violation);
    res.summary.emplace_back("tolerance", cfg.cone_tolerance);
    return res;
}

namespace {

KernelVariant partner_variant(Cone c) { return c == Cone::positive ? KernelVariant::p : KernelVariant::n; }

// Lockstep comparison of the full kernel against the cone's partner variant.
double lockstep_distance(const ProblemSpec& problem, const HistorySegment& phi, std::size_t steps, Cone cone) {
    Integrator a(problem.with_variant(KernelVariant::full), phi);
    Integrator b(problem.with_variant(partner_variant(cone)), phi);
    double worst = 0.0;
    for (std::size_t n = 0; n < steps; ++n) {
        a.step();
        b.step();
        worst = std::max(worst, max_abs_diff_l2(problem.op, a.current(), b.current()));
    }
    return worst;
}

}  // namespace

ExperimentResult run_coincidence(const ProblemSpec& problem, const ExperimentConfig& cfg) {
    cfg.validate();
    require_cone_family(cfg, "run_coincidence");
    const std::size_t steps = problem.steps_for(cfg.horizon);

    ExperimentResult res;
    res.name = cfg.cone == Cone::positive ? "coincidence-positive" : "coincidence-negative";
    res.trials.resize(cfg.trials);
    parallel_for(cfg.trials, cfg.jobs, [&](std::size_t t) {
        const auto phi = cone_member(problem, cfg, t);
        const double d = lockstep_distance(problem, phi, steps, cfg.cone);
        res.trials[t] = {t, d == 0.0 ? "pass" : "fail", {{"max_distance", d}}};
    });
    double worst = 0.0;
    for (const auto& rec : res.trials) worst = std::max(worst, rec.metrics[0].second);
    res.passed = worst == 0.0;
    res.status = res.passed ? "pass" : "fail";
    add_common(res, problem, cfg);
    res.summary.emplace_back("max_distance", worst);
    res.summary.emplace_back("tolerance", 0.0);
    res.notes.emplace_back("compared", std::string("full vs ") + std::string(to_string(partner_variant(cfg.cone))));
    return res;
}

ExperimentResult run_coincidence_witness(const ProblemSpec& problem, const ExperimentConfig& cfg) {
    cfg.validate();
    require_cone_family(cfg, "run_coincidence_witness");
    const std::size_t steps = problem.steps_for(cfg.horizon);
    auto phi = cone_member(problem, cfg, 0);
    // Flip the sign of one node at the current time so that the cone is left.
    const std::size_t node = problem.op.grid_points / 2;
    auto now = phi.snapshot(problem.delay.m);
    now[node] = -now[node];
    const double d = lockstep_distance(problem, phi, steps, cfg.cone);

    ExperimentResult res;
    res.name = "coincidence-witness";
    res.informational = true;
    res.passed = d > 0.0;
    res.status = "informational";
    res.trials.push_back({0, d > 0.0 ? "diverged" : "coincided", {{"max_distance", d}, {"node", double(node)}}});
    add_common(res, problem, cfg);
    res.summary.emplace_back("max_distance", d);
    return res;
}

namespace {

HistorySegment random_segment(const ProblemSpec& problem, std::mt19937_64& rng, double scale) {
    const auto series = random_series(rng, std::min(kFourierTerms, problem.op.grid_points));
    const double L = problem.op.domain_length;
    const double r = problem.delay.r;
    return HistorySegment::from_function(problem.op, problem.delay, [&](double theta, double x) {
        return scale * eval_series(series, theta, r, x, L);
    });
}

double kernel_difference(const KernelSpec& ks, const HistorySegment& a, const HistorySegment& b, KernelVariant v) {
    const auto xa = eval_xi(ks, a, v);
    const auto xb = eval_xi(ks, b, v);
    const auto w = trapezoid_weights(ks.grid());
    double acc = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * std::fabs(xa[j] - xb[j]);
    return acc;
}

}  // namespace

ExperimentResult run_lipschitz_sampling(const ProblemSpec& problem, const ExperimentConfig& cfg) {
    cfg.validate();
    problem.validate();
    const auto inputs = lipschitz_inputs(problem);
    constexpr KernelVariant variants[] = {KernelVariant::full, KernelVariant::p, KernelVariant::n};

    ExperimentResult res;
    res.name = "lipschitz";
    res.trials.resize(cfg.trials);
    parallel_for(cfg.trials, cfg.jobs, [&](std::size_t t) {
        std::mt19937_64 rng(trial_seed(cfg, t));
        std::uniform_real_distribution<double> log_scale(-4.0, 1.0);
        std::uniform_real_distribution<double> log_rel(-3.0, 0.0);
        const double s1 = std::pow(10.0, log_scale(rng));
        const auto v1 = random_segment(problem, rng, s1);
        HistorySegment v2 = v1;
        if (t % 2 == 0) {
            v2 = random_segment(problem, rng, std::pow(10.0, log_scale(rng)));
        } else {
            const auto dv = random_segment(problem, rng, s1 * std::pow(10.0, log_rel(rng)));
            v2 = difference(v1, dv);
        }
        auto& rec = res.trials[t];
        rec.trial = t;
        const auto dv = difference(v1, v2);
        const double dc = norm_c(dv);
        const double dl1 = norm_l1l1(dv);
        if (dc == 0.0) {
            rec.status = "skipped";
            return;
        }
        double worst = 0.0;
        for (auto v : variants) {
            const auto b1 = delay_term(problem.nonlinearity, problem.kernel, v1, v);
            const auto b2 = delay_term(problem.nonlinearity, problem.kernel, v2, v);
            GridField d(b1.size());
            for (std::size_t i = 0; i < d.size(); ++i) d[i] = b1[i] - b2[i];
            const double db = l2_norm(problem.op, d);
            const double m1 = lipschitz_M1(inputs, v);
            const double m1s = lipschitz_M1_strict(inputs, v);
            const double b_ratio = m1 > 0.0 ? db / (m1 * dc) : (db == 0.0 ? 0.0 : INFINITY);
            const double strict_ratio = m1s > 0.0 ? db / (m1s * dc) : (db == 0.0 ? 0.0 : INFINITY);
            const double l11 = l11_constant(problem.kernel, v);
            const double dk = kernel_difference(problem.kernel, v1, v2, v);
            const double k_ratio = l11 > 0.0 && dl1 > 0.0 ? dk / (l11 * dl1) : (dk == 0.0 ? 0.0 : INFINITY);
            const std::string tag(to_string(v));
            rec.metrics.emplace_back("B_ratio_" + tag, b_ratio);
            rec.metrics.emplace_back("kernel_ratio_" + tag, k_ratio);
            rec.metrics.emplace_back("B_ratio_strict_" + tag, strict_ratio);
            worst = std::max({worst, b_ratio, k_ratio});
        }
        rec.metrics.emplace_back("norm_c_diff", dc);
        rec.status = worst <= 1.0 + cfg.lipschitz_tolerance ? "pass" : "fail";
    });

    double max_b = 0.0, max_k = 0.0, max_strict = 0.0;
    std::size_t used = 0;
    for (const auto& rec : res.trials) {
        if (rec.status == "skipped") continue;
        ++used;
        for (const auto& [k, v] : rec.metrics) {
            if (k.starts_with("B_ratio_strict_")) max_strict = std::max(max_strict, v);
            else if (k.starts_with("B_ratio_")) max_b = std::max(max_b, v);
            else if (k.starts_with("kernel_ratio_")) max_k = std::max(max_k, v);
        }
    }
    const double limit = 1.0 + cfg.lipschitz_tolerance;
    res.passed = used > 0 && max_b <= limit && max_k <= limit;
    res.status = res.passed ? "pass" : "fail";
    res.summary.emplace_back("trials", static_cast<double>(cfg.trials));
    res.summary.emplace_back("pairs_used", static_cast<double>(used));
    res.summary.emplace_back("seed", static_cast<double>(cfg.seed));
    res.summary.emplace_back("max_B_ratio", max_b);
    res.summary.emplace_back("max_kernel_ratio", max_k);
    res.summary.emplace_back("max_B_ratio_strict", max_strict);
    res.summary.emplace_back("max_violation", std::max(0.0, std::max(max_b, max_k) - 1.0));
    res.summary.emplace_back("tolerance", cfg.lipschitz_tolerance);
    res.summary.emplace_back("M1_full", lipschitz_M1(inputs, KernelVariant::full));
    res.summary.emplace_back("M1_p", lipschitz_M1(inputs, KernelVariant::p));
    res.summary.emplace_back("M1_n", lipschitz_M1(inputs, KernelVariant::n));
    return res;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size() && x.size() >= 2, "fit_line: need at least two points of equal length");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    require(sxx > 0.0, "fit_line: abscissae are all equal");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += e * e;
    }
    f.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return f;
}

double median(std::vector<double> values) {
    require(!values.empty(), "median of an empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ExperimentResult run_attraction_rate(const ProblemSpec& problem, const ExperimentConfig& cfg, std::size_t N) {
    cfg.validate();
    require(N >= 1 && N < problem.op.modes, "run_attraction_rate: N must satisfy 1 <= N < K");
    require_cone_family(cfg, "run_attraction_rate");
    const auto report = condition_report(problem, N);
    if (!(report.A4_pass && report.A5_pass_p)) {
        throw ContractViolation("run_attraction_rate: variant p does not pass A4/A5 at N = " + std::to_string(N));
    }
    const double alpha_min = cfg.alpha_min.value_or(report.mu / 2.0);
    const std::size_t steps = problem.steps_for(cfg.horizon);
    const ProblemSpec pp = problem.with_variant(KernelVariant::p);
    const std::size_t K = problem.op.modes;
    const std::size_t high_terms = std::min<std::size_t>(6, K - N);

    ExperimentResult res;
    res.name = "attraction";
    res.trials.resize(cfg.trials);
    parallel_for(cfg.trials, cfg.jobs, [&](std::size_t t) {
        auto& rec = res.trials[t];
        rec.trial = t;
        auto phi1 = make_initial(problem.op, problem.delay, cfg.family, std::fabs(cfg.amplitude), trial_seed(cfg, t));
        const double floor_value = phi1.min_value();
        if (!(floor_value > 0.0)) {
            throw ContractViolation("run_attraction_rate: initial data must lie in the interior of D+");
        }
        // Perturbation in modes N+1 .. N+high_terms, scaled so phi2 stays in D+.
        std::mt19937_64 rng(trial_seed(cfg, t) ^ 0x9e3779b97f4a7c15ULL);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const SineBasis basis(problem.op);
        ModeVector pert(K);
        for (std::size_t k = N; k < N + high_terms; ++k) pert[k] = u(rng);
        GridField shape = basis.inverse(pert);
        double sup = 0.0;
        for (double x : shape.values) sup = std::max(sup, std::fabs(x));
        if (sup == 0.0) {
            rec.status = "skipped";
            return;
        }
        const double eps = cfg.perturbation_fraction * floor_value / sup;
        HistorySegment phi2 = phi1;
        for (std::size_t j = 0; j < phi2.nodes(); ++j) {
            auto s = phi2.snapshot(j);
            for (std::size_t i = 0; i < s.size(); ++i) s[i] += eps * shape[i];
        }

        Integrator a(pp, phi1);
        Integrator b(pp, std::move(phi2));
        std::vector<double> ts, logq;
        bool window_open = true;
        bool entered = false;
        bool remained = true;
        double q0 = 0.0;
        auto observe = [&] {
            const auto& ma = a.modes();
            const auto& mb = b.modes();
            double low = 0.0, high = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                const double d = ma[k] - mb[k];
                (k < N ? low : high) += d * d;
            }
            const double q = std::sqrt(high);
            const double pn = std::sqrt(low);
            const double t_now = a.time();
            if (a.steps_taken() == 0) q0 = q;
            const bool in_cone = q <= pn;
            if (in_cone) entered = true;
            else if (entered) remained = false;
            if (t_now + 1e-12 < problem.delay.r) return;
            if (window_open && q >= cfg.noise_floor && !in_cone) {
                ts.push_back(t_now);
                logq.push_back(std::log(q));
            } else {
                window_open = false;
            }
        };
        observe();
        for (std::size_t n = 1; n <= steps; ++n) {
            a.step();
            b.step();
            if (n % cfg.stride == 0 || n == steps) observe();
        }
        rec.metrics.emplace_back("q0", q0);
        rec.metrics.emplace_back("window_samples", static_cast<double>(ts.size()));
        rec.metrics.emplace_back("entered_cone", entered ? 1.0 : 0.0);
        rec.metrics.emplace_back("remained_in_cone", entered && remained ? 1.0 : 0.0);
        if (ts.size() >= cfg.min_window_samples) {
            const auto fit = fit_line(ts, logq);
            rec.metrics.emplace_back("alpha_hat", -fit.slope);
            rec.metrics.emplace_back("r2", fit.r2);
            rec.metrics.emplace_back("window_start", ts.front());
            rec.metrics.emplace_back("window_end", ts.back());
            rec.status = "fitted";
        } else if (entered && remained) {
            rec.status = "slaved";
        } else {
            rec.status = "inconclusive";
        }
    });

    std::vector<double> alphas, r2s;
    std::size_t slaved = 0, usable = 0;
    for (const auto& rec : res.trials) {
        if (rec.status == "skipped") continue;
        ++usable;
        if (rec.status == "slaved") ++slaved;
        if (rec.status != "fitted") continue;
        for (const auto& [k, v] : rec.metrics) {
            if (k == "alpha_hat") alphas.push_back(v);
            if (k == "r2") r2s.push_back(v);
        }
    }
    const double med_alpha = alphas.empty() ? std::numeric_limits<double>::quiet_NaN() : median(alphas);
    const double med_r2 = r2s.empty() ? std::numeric_limits<double>::quiet_NaN() : median(r2s);
    const double min_r2 = r2s.empty() ? std::numeric_limits<double>::quiet_NaN() : *std::min_element(r2s.begin(), r2s.end());
    const bool fit_pass = !alphas.empty() && med_alpha >= alpha_min && med_r2 >= cfg.r2_min;
    const bool slaving_pass = usable > 0 && slaved == usable;
    res.passed = fit_pass || slaving_pass;
    if (res.passed) res.status = "pass";
    else if (alphas.empty() && !slaving_pass) res.status = "inconclusive";
    else res.status = "fail";

    add_common(res, problem, cfg);
    res.notes[0].second = "p";
    res.summary.emplace_back("N", static_cast<double>(N));
    res.summary.emplace_back("mu", report.mu);
    res.summary.emplace_back("alpha_min", alpha_min);
    res.summary.emplace_back("r2_min", cfg.r2_min);
    res.summary.emplace_back("noise_floor", cfg.noise_floor);
    res.summary.emplace_back("window_start_after", problem.delay.r);
    res.summary.emplace_back("min_window_samples", static_cast<double>(cfg.min_window_samples));
    res.summary.emplace_back("stride", static_cast<double>(cfg.stride));
    res.summary.emplace_back("fitted_trials", static_cast<double>(alphas.size()));
    res.summary.emplace_back("slaved_trials", static_cast<double>(slaved));
    res.summary.emplace_back("median_alpha_hat", med_alpha);
    res.summary.emplace_back("median_r2", med_r2);
    res.summary.emplace_back("min_r2", min_r2);
    res.summary.emplace_back("lambda_N1_discrete",
                             discrete_eigenvalue(problem.op.domain_length, problem.op.grid_points, N + 1));
    return res;
}

OutputFormat output_format_from_string(std::string_view s) {
    if (s == "json") return OutputFormat::json;
    if (s == "csv") return OutputFormat::csv;
    throw ContractViolation("unknown output format '" + std::string(s) + "' (expected json or csv)");
}

namespace {
ordered_json number_or_null(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }
}  // namespace

std::string to_json(const std::vector<ExperimentResult>& results, int indent) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : results) {
        ordered_json j;
        j["name"] = r.name;
        j["status"] = r.status;
        j["passed"] = r.passed;
        j["informational"] = r.informational;
        j["trial_count"] = r.trials.size();
        ordered_json summary = ordered_json::object();
        for (const auto& [k, v] : r.summary) summary[k] = number_or_null(v);
        j["summary"] = summary;
        ordered_json notes = ordered_json::object();
        for (const auto& [k, v] : r.notes) notes[k] = v;
        j["notes"] = notes;
        arr.push_back(j);
    }
    return arr.dump(indent);
}

std::string to_csv(const std::vector<ExperimentResult>& results) {
    std::ostringstream out;
    out.precision(17);
    out << "experiment,trial,status,metric,value\n";
    for (const auto& r : results) {
        for (const auto& t : r.trials) {
            if (t.metrics.empty()) out << r.name << ',' << t.trial << ',' << t.status << ",,\n";
            for (const auto& [k, v] : t.metrics) {
                out << r.name << ',' << t.trial << ',' << t.status << ',' << k << ',' << v << '\n';
            }
        }
    }
    return out.str();
}

void emit(const std::vector<ExperimentResult>& results, const std::string& path, OutputFormat format) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("emit: cannot open '" + path + "' for writing");
    out << (format == OutputFormat::json ? to_json(results) + "\n" : to_csv(results));
    if (!out) throw std::runtime_error("emit: write to '" + path + "' failed");
}

}  // namespace pimlab
