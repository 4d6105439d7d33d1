#include "pimlab/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "pimlab/error.hpp"

namespace pimlab {

using detail::require;

std::string_view to_string(NonlinearityKind k) {
    return k == NonlinearityKind::nicholson ? "nicholson" : "bounded_custom";
}

NonlinearitySpec NonlinearitySpec::nicholson(double p) {
    require(std::isfinite(p) && p > 0.0, "nicholson: p must be positive");
    NonlinearitySpec s;
    s.kind = NonlinearityKind::nicholson;
    s.p = p;
    return s;
}

NonlinearitySpec NonlinearitySpec::custom(double M_b, double L_b) {
    require(std::isfinite(M_b) && M_b >= 0.0 && std::isfinite(L_b) && L_b >= 0.0,
            "bounded_custom: M_b and L_b must be finite and nonnegative");
    NonlinearitySpec s;
    s.kind = NonlinearityKind::bounded_custom;
    s.p = 0.0;
    s.M_b = M_b;
    s.L_b = L_b;
    // User-supplied constants are taken as given.
    s.constants_certified = true;
    return s;
}

double b_eval(const NonlinearitySpec& spec, double w) {
    if (!spec.evaluable()) throw ContractViolation("b_eval: bounded_custom nonlinearity has no evaluator");
    // (a e^{-a/2})^2 stays finite for every finite w.
    const double a = std::fabs(w);
    const double g = a * std::exp(-0.5 * a);
    return spec.p * g * g;
}

double b_derivative(const NonlinearitySpec& spec, double w) {
    if (!spec.evaluable()) throw ContractViolation("b_derivative: bounded_custom nonlinearity has no evaluator");
    const double a = std::fabs(w);
    const double d = spec.p * (2.0 * a - a * a) * std::exp(-a);
    return w < 0.0 ? -d : d;
}

namespace {

constexpr double kRefineTolerance = 1e-9;
constexpr std::size_t kScanPoints = 20001;
constexpr int kMaxIterations = 200;

// Golden-section maximization of f on [lo, hi].
double golden_max(const std::function<double(double)>& f, double lo, double hi) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < kMaxIterations; ++it) {
        if (b - a <= kRefineTolerance) return 0.5 * (a + b);
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    throw CertificationError("certify_constants: golden-section refinement did not converge");
}

// Grid scan followed by refinement in the bracketing cell pair.
double scan_and_refine(const std::function<double(double)>& f, double& best_value) {
    const double step = kCertificationInterval / static_cast<double>(kScanPoints - 1);
    std::size_t best = 0;
    double best_f = f(0.0);
    for (std::size_t i = 1; i < kScanPoints; ++i) {
        const double v = f(static_cast<double>(i) * step);
        if (v > best_f) {
            best_f = v;
            best = i;
        }
    }
    if (best == 0 || best == kScanPoints - 1) {
        throw CertificationError("certify_constants: maximum found at the edge of the search interval");
    }
    const double lo = static_cast<double>(best - 1) * step;
    const double hi = static_cast<double>(best + 1) * step;
    const double w = golden_max(f, lo, hi);
    best_value = std::max(f(w), best_f);
    return w;
}

}  // namespace

CertifiedConstants certify_constants(const NonlinearitySpec& spec) {
    if (!spec.evaluable()) {
        throw CertificationError("certify_constants: only the nicholson kind can be certified; "
                                 "bounded_custom must supply M_b and L_b");
    }
    CertifiedConstants c;
    c.argmax_value = scan_and_refine([&](double w) { return b_eval(spec, w); }, c.M_b);
    c.argmax_slope = scan_and_refine([&](double w) { return std::fabs(b_derivative(spec, w)); }, c.L_b);

    // Beyond the interval both b and |b'| are decreasing (w > 2 + sqrt 2), so the
    // end values bound the tail.
    const double end = kCertificationInterval;
    if (!(b_eval(spec, end) < c.M_b) || !(std::fabs(b_derivative(spec, end)) < c.L_b)) {
        throw CertificationError("certify_constants: tail beyond the search interval is not dominated");
    }
    return c;
}

NonlinearitySpec certified(NonlinearitySpec spec) {
    if (spec.kind == NonlinearityKind::bounded_custom) {
        if (!spec.constants_certified) throw CertificationError("bounded_custom requires M_b and L_b");
        return spec;
    }
    const auto c = certify_constants(spec);
    spec.M_b = c.M_b;
    spec.L_b = c.L_b;
    spec.constants_certified = true;
    return spec;
}

void integrate_delay(const HistorySegment& b_history, std::span<const double> xi, std::span<const double> weights,
                     std::span<double> out) {
    const std::size_t nodes = b_history.nodes();
    require(xi.size() == nodes && weights.size() == nodes, "integrate_delay: delay grid size mismatch");
    require(out.size() == b_history.grid_points(), "integrate_delay: output size mismatch");
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t j = 0; j < nodes; ++j) {
        const double c = weights[j] * xi[j];
        if (c == 0.0) continue;
        auto snap = b_history.snapshot(j);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * snap[i];
    }
}

GridField delay_term(const NonlinearitySpec& nl, const KernelSpec& ks, const HistorySegment& v,
                     KernelVariant variant) {
    if (!nl.constants_certified) throw CertificationError("delay_term: nonlinearity constants are not certified");
    const auto xi = eval_xi(ks, v, variant);
    const auto w = trapezoid_weights(v.grid());
    const HistorySegment bv = v.map([&](double x) { return b_eval(nl, x); });
    GridField out(v.grid_points());
    integrate_delay(bv, xi, w, out.values);
    return out;
}

}  // namespace pimlab
