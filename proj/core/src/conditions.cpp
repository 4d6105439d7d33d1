#include "pimlab/conditions.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "pimlab/error.hpp"
#include "pimlab/parallel.hpp"

namespace pimlab {

using detail::require;
using nlohmann::ordered_json;

double LipschitzInputs::l11(KernelVariant variant) const {
    switch (variant) {
        case KernelVariant::p: return plus_integral;
        case KernelVariant::n: return minus_integral;
        case KernelVariant::full: return std::max(plus_integral, minus_integral);
    }
    return 0.0;
}

LipschitzInputs lipschitz_inputs(const ProblemSpec& problem) {
    const auto& nl = problem.nonlinearity;
    if (!nl.constants_certified) throw CertificationError("lipschitz_M1: nonlinearity constants are not certified");
    LipschitzInputs in;
    in.domain_length = problem.op.domain_length;
    in.r = problem.delay.r;
    in.M_xi = problem.kernel.cap();
    in.plus_integral = problem.kernel.plus_integral();
    in.minus_integral = problem.kernel.minus_integral();
    in.M_b = nl.M_b;
    in.L_b = nl.L_b;
    return in;
}

double lipschitz_M1(const LipschitzInputs& in, KernelVariant variant) {
    const double l11 = in.l11(variant);
    const double a = in.L_b * in.M_xi;
    const double b = in.M_b * l11;
    return in.r * std::sqrt(2.0 * (a * a + b * b * in.domain_length));
}

double lipschitz_M1(const ProblemSpec& problem, KernelVariant variant) {
    return lipschitz_M1(lipschitz_inputs(problem), variant);
}

double lipschitz_M1_strict(const LipschitzInputs& in, KernelVariant variant) {
    const double l11 = in.l11(variant);
    const double a = in.L_b * in.M_xi;
    const double b = in.M_b * l11 * in.domain_length;
    return in.r * std::sqrt(2.0 * (a * a + b * b));
}

GapCheck gap_check(double lambda_n, double lambda_n1, double mu, double m1, double r) {
    require(mu > 0.0, "gap_check: mu must be positive");
    GapCheck g;
    g.a4_pass = lambda_n1 - lambda_n >= 2.0 * mu;
    g.mu_exceeds = mu > 4.0 * m1;
    g.delta = (2.0 / mu) * m1 * std::exp((lambda_n + mu) * r);
    g.delta_pass = g.delta <= 0.5;
    return g;
}

Bound3 bound3_check(double lambda_n, double lambda_n1, double r, double m1) {
    Bound3 b;
    b.bound = (lambda_n1 - lambda_n) / 8.0 * std::exp(-(lambda_n1 + lambda_n) / 2.0 * r);
    b.pass = m1 <= b.bound;
    return b;
}

RemarkBounds remark_bounds(double lambda_n, double lambda_n1, double r, double M_xi, double M_b, double L_b,
                           double domain_length) {
    const double gap_factor = (lambda_n1 - lambda_n) * std::exp(-(lambda_n1 + lambda_n) / 2.0 * r);
    const double root = std::sqrt(domain_length);
    RemarkBounds rb;
    rb.r_bound = gap_factor / (16.0 * L_b * M_xi);
    rb.plus_bound = gap_factor / (16.0 * r * M_b * root);
    rb.minus_lower = gap_factor / (8.0 * r * M_b * root);
    return rb;
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::IM_exists: return "IM_exists";
        case Verdict::PIM_only: return "PIM_only";
        case Verdict::neither_certified: return "neither_certified";
    }
    return "unknown";
}

ConditionReport condition_report(const LipschitzInputs& inputs, std::size_t N, std::optional<double> mu) {
    require(N >= 1, "condition_report: N must be >= 1");
    ConditionReport rep;
    rep.N = N;
    rep.inputs = inputs;
    rep.lambda_N = analytic_eigenvalue(inputs.domain_length, N);
    rep.lambda_N1 = analytic_eigenvalue(inputs.domain_length, N + 1);
    rep.mu = mu.value_or((rep.lambda_N1 - rep.lambda_N) / 2.0);
    require(rep.mu > 0.0, "condition_report: mu must be positive");

    rep.M1_full = lipschitz_M1(inputs, KernelVariant::full);
    rep.M1_p = lipschitz_M1(inputs, KernelVariant::p);
    rep.M1_n = lipschitz_M1(inputs, KernelVariant::n);
    rep.M1_strict_full = lipschitz_M1_strict(inputs, KernelVariant::full);
    rep.M1_strict_p = lipschitz_M1_strict(inputs, KernelVariant::p);
    rep.M1_strict_n = lipschitz_M1_strict(inputs, KernelVariant::n);

    const auto gf = gap_check(rep.lambda_N, rep.lambda_N1, rep.mu, rep.M1_full, inputs.r);
    const auto gp = gap_check(rep.lambda_N, rep.lambda_N1, rep.mu, rep.M1_p, inputs.r);
    const auto gn = gap_check(rep.lambda_N, rep.lambda_N1, rep.mu, rep.M1_n, inputs.r);
    rep.A4_pass = gp.a4_pass;
    rep.A5_pass_full = gf.a5_pass();
    rep.A5_pass_p = gp.a5_pass();
    rep.A5_pass_n = gn.a5_pass();
    rep.delta_full = gf.delta;
    rep.delta_p = gp.delta;
    rep.delta_n = gn.delta;

    const auto bf = bound3_check(rep.lambda_N, rep.lambda_N1, inputs.r, rep.M1_full);
    rep.bound3 = bf.bound;
    rep.bound3_pass_full = bf.pass;
    rep.bound3_pass_p = bound3_check(rep.lambda_N, rep.lambda_N1, inputs.r, rep.M1_p).pass;
    rep.bound3_pass_n = bound3_check(rep.lambda_N, rep.lambda_N1, inputs.r, rep.M1_n).pass;

    if (inputs.M_xi > 0.0 && inputs.M_b > 0.0 && inputs.L_b > 0.0) {
        rep.remark = remark_bounds(rep.lambda_N, rep.lambda_N1, inputs.r, inputs.M_xi, inputs.M_b, inputs.L_b,
                                   inputs.domain_length);
        rep.remark17_pass = inputs.r <= rep.remark.r_bound;
        rep.remark18_pass = inputs.plus_integral <= rep.remark.plus_bound;
        rep.remark19_pass = inputs.minus_integral > rep.remark.minus_lower;
    } else {
        // Degenerate kernel or nonlinearity: the r and xi+ inequalities hold
        // vacuously and the xi- lower bound cannot be exceeded.
        const double inf = std::numeric_limits<double>::infinity();
        rep.remark = {inf, inf, inf};
        rep.remark17_pass = true;
        rep.remark18_pass = true;
        rep.remark19_pass = false;
    }

    if (rep.bound3_pass_full) {
        rep.verdict = Verdict::IM_exists;
    } else if (rep.bound3_pass_p) {
        rep.verdict = Verdict::PIM_only;
    } else {
        rep.verdict = Verdict::neither_certified;
    }
    return rep;
}

ConditionReport condition_report(const ProblemSpec& problem, std::size_t N, std::optional<double> mu) {
    require(N < problem.op.modes, "condition_report: N must be smaller than the mode count K");
    return condition_report(lipschitz_inputs(problem), N, mu);
}

namespace {

ordered_json number_or_null(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

}  // namespace

std::string to_json(const ConditionReport& rep, int indent) {
    ordered_json j;
    j["N"] = rep.N;
    j["lambda_N"] = rep.lambda_N;
    j["lambda_N1"] = rep.lambda_N1;
    j["mu"] = rep.mu;
    j["domain_length"] = rep.inputs.domain_length;
    j["r"] = rep.inputs.r;
    j["M_xi"] = rep.inputs.M_xi;
    j["plus_integral"] = rep.inputs.plus_integral;
    j["minus_integral"] = rep.inputs.minus_integral;
    j["M_b"] = rep.inputs.M_b;
    j["L_b"] = rep.inputs.L_b;
    j["M1_full"] = rep.M1_full;
    j["M1_p"] = rep.M1_p;
    j["M1_n"] = rep.M1_n;
    j["M1_strict_full"] = rep.M1_strict_full;
    j["M1_strict_p"] = rep.M1_strict_p;
    j["M1_strict_n"] = rep.M1_strict_n;
    j["delta_full"] = rep.delta_full;
    j["delta_p"] = rep.delta_p;
    j["delta_n"] = rep.delta_n;
    j["bound3"] = rep.bound3;
    j["remark17_r_bound"] = number_or_null(rep.remark.r_bound);
    j["remark18_plus_bound"] = number_or_null(rep.remark.plus_bound);
    j["remark19_minus_lower"] = number_or_null(rep.remark.minus_lower);
    j["A4_pass"] = rep.A4_pass;
    j["A5_pass_full"] = rep.A5_pass_full;
    j["A5_pass_p"] = rep.A5_pass_p;
    j["A5_pass_n"] = rep.A5_pass_n;
    j["bound3_pass_full"] = rep.bound3_pass_full;
    j["bound3_pass_p"] = rep.bound3_pass_p;
    j["bound3_pass_n"] = rep.bound3_pass_n;
    j["remark17_pass"] = rep.remark17_pass;
    j["remark18_pass"] = rep.remark18_pass;
    j["remark19_pass"] = rep.remark19_pass;
    j["verdict"] = std::string(to_string(rep.verdict));
    j["verdict_note"] = std::string(ConditionReport::verdict_note);
    return j.dump(indent);
}

std::string to_csv(const ConditionReport& rep) {
    std::ostringstream out;
    out.precision(17);
    out << "variant,check,value,threshold,pass\n";
    auto row = [&](std::string_view variant, std::string_view check, double value, double threshold, bool pass) {
        out << variant << ',' << check << ',' << value << ',' << threshold << ',' << (pass ? "true" : "false") << '\n';
    };
    const double gap = rep.lambda_N1 - rep.lambda_N;
    row("all", "A4", gap, 2.0 * rep.mu, rep.A4_pass);
    row("full", "A5", rep.delta_full, 0.5, rep.A5_pass_full);
    row("p", "A5", rep.delta_p, 0.5, rep.A5_pass_p);
    row("n", "A5", rep.delta_n, 0.5, rep.A5_pass_n);
    row("full", "bound3", rep.M1_full, rep.bound3, rep.bound3_pass_full);
    row("p", "bound3", rep.M1_p, rep.bound3, rep.bound3_pass_p);
    row("n", "bound3", rep.M1_n, rep.bound3, rep.bound3_pass_n);
    row("all", "remark17", rep.inputs.r, rep.remark.r_bound, rep.remark17_pass);
    row("p", "remark18", rep.inputs.plus_integral, rep.remark.plus_bound, rep.remark18_pass);
    row("n", "remark19", rep.inputs.minus_integral, rep.remark.minus_lower, rep.remark19_pass);
    out << "verdict," << to_string(rep.verdict) << ",,,\n";
    return out.str();
}

std::vector<double> LogGrid::values() const {
    require(min > 0.0 && max >= min && points >= 1, "LogGrid: need 0 < min <= max and points >= 1");
    std::vector<double> out(points);
    if (points == 1) {
        out[0] = min;
        return out;
    }
    const double lo = std::log10(min);
    const double hi = std::log10(max);
    for (std::size_t i = 0; i < points; ++i) {
        out[i] = std::pow(10.0, lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
    }
    return out;
}

namespace {

enum class Stage { r_inequality, window, plus_cap, certificate, feasible };

struct Candidate {
    Stage stage = Stage::r_inequality;
    FeasibleParameters params;
};

Candidate evaluate(double lambda_n, double lambda_n1, double r, double M_xi, double M_b, double L_b, double L,
                   const SynthesisOptions& opt) {
    Candidate c;
    auto& p = c.params;
    p.r = r;
    p.M_xi = M_xi;
    p.remark = remark_bounds(lambda_n, lambda_n1, r, M_xi, M_b, L_b, L);
    if (!(r <= p.remark.r_bound)) return c;

    p.window_lower = p.remark.minus_lower;
    p.window_upper = 0.5 * r * M_xi;
    c.stage = Stage::window;
    if (!(p.window_upper > p.window_lower)) return c;

    p.plus_integral = (1.0 - opt.plus_margin) * p.remark.plus_bound;
    p.minus_integral = p.window_lower + opt.minus_position * (p.window_upper - p.window_lower);
    c.stage = Stage::plus_cap;
    if (!(p.plus_integral <= p.window_upper)) return c;

    c.stage = Stage::certificate;
    const bool remarks = r <= p.remark.r_bound && p.plus_integral <= p.remark.plus_bound &&
                         p.minus_integral > p.remark.minus_lower && p.minus_integral <= p.window_upper;
    if (!remarks) return c;
    LipschitzInputs in{L, r, M_xi, p.plus_integral, p.minus_integral, M_b, L_b};
    p.M1_full = lipschitz_M1(in, KernelVariant::full);
    p.M1_p = lipschitz_M1(in, KernelVariant::p);
    p.M1_n = lipschitz_M1(in, KernelVariant::n);
    const auto b3 = bound3_check(lambda_n, lambda_n1, r, p.M1_p);
    p.bound3 = b3.bound;
    const double mu = (lambda_n1 - lambda_n) / 2.0;
    const auto gp = gap_check(lambda_n, lambda_n1, mu, p.M1_p, r);
    p.delta_p = gp.delta;
    const bool ok = b3.pass && !(p.M1_full <= b3.bound) && !(p.M1_n <= b3.bound) && gp.a4_pass && gp.a5_pass();
    if (ok) c.stage = Stage::feasible;
    return c;
}

}  // namespace

SynthesisResult synthesize_params(std::size_t N, const NonlinearitySpec& nonlinearity, double domain_length,
                                  const SynthesisOptions& options) {
    require(N >= 1, "synthesize_params: N must be >= 1");
    require(domain_length > 0.0, "synthesize_params: domain length must be positive");
    require(options.plus_margin >= 0.0 && options.plus_margin < 1.0, "synthesize_params: plus_margin must lie in [0, 1)");
    require(options.minus_position > 0.0 && options.minus_position <= 1.0,
            "synthesize_params: minus_position must lie in (0, 1]");
    if (!nonlinearity.constants_certified) throw CertificationError("synthesize_params: constants not certified");
    require(nonlinearity.M_b > 0.0 && nonlinearity.L_b > 0.0, "synthesize_params: M_b and L_b must be positive");

    const auto rs = options.r_grid.values();
    const auto xis = options.xi_grid.values();
    require(!rs.empty() && !xis.empty(), "synthesize_params: empty search grid");

    SynthesisResult res;
    res.N = N;
    res.domain_length = domain_length;
    res.lambda_N = analytic_eigenvalue(domain_length, N);
    res.lambda_N1 = analytic_eigenvalue(domain_length, N + 1);
    res.M_b = nonlinearity.M_b;
    res.L_b = nonlinearity.L_b;
    res.options = options;

    // One slot per r row; each row scans M_xi from largest to smallest.
    std::vector<std::vector<Candidate>> rows(rs.size());
    parallel_for(rs.size(), options.jobs, [&](std::size_t ri) {
        auto& row = rows[ri];
        row.reserve(xis.size());
        for (std::size_t k = 0; k < xis.size(); ++k) {
            const std::size_t xi_index = xis.size() - 1 - k;
            auto c = evaluate(res.lambda_N, res.lambda_N1, rs[ri], xis[xi_index], res.M_b, res.L_b, domain_length,
                              options);
            c.params.r_index = ri;
            c.params.xi_index = xi_index;
            row.push_back(c);
        }
    });

    InfeasibilityCertificate cert;
    cert.r_window_threshold = 4.0 * res.L_b / (res.M_b * std::sqrt(domain_length));
    for (const auto& row : rows) {
        for (const auto& c : row) {
            ++cert.candidates;
            if (c.stage == Stage::feasible) {
                res.feasible = c.params;
                return res;
            }
            if (c.stage != Stage::r_inequality) {
                ++cert.admissible;
                if (!cert.largest_admissible_r || c.params.r > *cert.largest_admissible_r) {
                    cert.largest_admissible_r = c.params.r;
                }
                if (c.stage != Stage::window) ++cert.window_nonempty;
            }
        }
    }

    std::ostringstream why;
    why.precision(6);
    if (cert.admissible == 0) {
        cert.binding_constraint = "remark17_r_bound";
        why << "no grid pair (r, M_xi) satisfies r <= gap/(16 L_b M_xi) exp(-(lambda_N+lambda_N1) r/2)";
    } else if (cert.window_nonempty == 0) {
        cert.binding_constraint = "minus_integral_window_empty";
        why << "the xi- window (gap/(8 r M_b sqrt|Omega|) exp(...), r M_xi/2] is empty for every admissible pair: "
               "it needs r > 4 L_b/(M_b sqrt|Omega|) = "
            << cert.r_window_threshold << " but the r inequality admits r <= " << *cert.largest_admissible_r;
    } else {
        cert.binding_constraint = "plus_cap_or_certificate";
        why << "candidates with a nonempty xi- window fail the xi+ cap or the final bound3/A5 certificate";
    }
    cert.explanation = why.str();
    res.infeasible = cert;
    return res;
}

std::string to_json(const SynthesisResult& res, int indent) {
    ordered_json j;
    j["N"] = res.N;
    j["domain_length"] = res.domain_length;
    j["lambda_N"] = res.lambda_N;
    j["lambda_N1"] = res.lambda_N1;
    j["M_b"] = res.M_b;
    j["L_b"] = res.L_b;
    j["plus_margin"] = res.options.plus_margin;
    j["minus_position"] = res.options.minus_position;
    j["r_grid"] = {{"min", res.options.r_grid.min}, {"max", res.options.r_grid.max}, {"points", res.options.r_grid.points}};
    j["xi_grid"] = {{"min", res.options.xi_grid.min}, {"max", res.options.xi_grid.max}, {"points", res.options.xi_grid.points}};
    j["feasible"] = res.feasible.has_value();
    if (res.feasible) {
        const auto& p = *res.feasible;
        j["r"] = p.r;
        j["M_xi"] = p.M_xi;
        j["plus_integral"] = p.plus_integral;
        j["minus_integral"] = p.minus_integral;
        j["minus_window_lower"] = p.window_lower;
        j["minus_window_upper"] = p.window_upper;
        j["remark17_r_bound"] = p.remark.r_bound;
        j["remark18_plus_bound"] = p.remark.plus_bound;
        j["remark19_minus_lower"] = p.remark.minus_lower;
        j["bound3"] = p.bound3;
        j["M1_full"] = p.M1_full;
        j["M1_p"] = p.M1_p;
        j["M1_n"] = p.M1_n;
        j["delta_p"] = p.delta_p;
    }
    if (res.infeasible) {
        const auto& c = *res.infeasible;
        j["binding_constraint"] = c.binding_constraint;
        j["explanation"] = c.explanation;
        j["r_window_threshold"] = c.r_window_threshold;
        j["largest_admissible_r"] = c.largest_admissible_r ? ordered_json(*c.largest_admissible_r) : ordered_json(nullptr);
        j["candidates"] = c.candidates;
        j["admissible"] = c.admissible;
        j["window_nonempty"] = c.window_nonempty;
    }
    return j.dump(indent);
}

}  // namespace pimlab
