#include "pimlab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "pimlab/error.hpp"

namespace pimlab {

using detail::require;

std::string_view to_string(KernelVariant v) {
    switch (v) {
        case KernelVariant::full: return "full";
        case KernelVariant::p: return "p";
        case KernelVariant::n: return "n";
    }
    return "unknown";
}

KernelVariant kernel_variant_from_string(std::string_view s) {
    if (s == "full") return KernelVariant::full;
    if (s == "p") return KernelVariant::p;
    if (s == "n") return KernelVariant::n;
    throw ContractViolation("unknown kernel variant '" + std::string(s) + "' (expected full, p or n)");
}

KernelSpec::KernelSpec(DelayGrid grid, std::vector<double> xi_plus, std::vector<double> xi_minus, double cap)
    : grid_(grid), xi_plus_(std::move(xi_plus)), xi_minus_(std::move(xi_minus)), cap_(cap) {
    grid_.validate();
    require(std::isfinite(cap_) && cap_ >= 0.0, "KernelSpec: M_xi must be finite and nonnegative");
    require(xi_plus_.size() == grid_.nodes() && xi_minus_.size() == grid_.nodes(),
            "KernelSpec: profiles must have m + 1 = " + std::to_string(grid_.nodes()) + " samples");
    const double half = 0.5 * cap_;
    for (std::size_t j = 0; j < grid_.nodes(); ++j) {
        require(std::isfinite(xi_plus_[j]) && xi_plus_[j] >= 0.0,
                "KernelSpec: xi_plus must be nonnegative (node " + std::to_string(j) + ")");
        require(std::isfinite(xi_minus_[j]) && xi_minus_[j] <= 0.0,
                "KernelSpec: xi_minus must be nonpositive (node " + std::to_string(j) + ")");
        require(xi_plus_[j] <= half, "KernelSpec: |xi_plus| <= M_xi/2 violated at node " + std::to_string(j));
        require(-xi_minus_[j] <= half, "KernelSpec: |xi_minus| <= M_xi/2 violated at node " + std::to_string(j));
    }
}

namespace {
double abs_integral(const DelayGrid& grid, const std::vector<double>& profile) {
    const auto w = trapezoid_weights(grid);
    double acc = 0.0;
    for (std::size_t j = 0; j < profile.size(); ++j) acc += w[j] * std::fabs(profile[j]);
    return acc;
}
}  // namespace

double KernelSpec::plus_integral() const { return abs_integral(grid_, xi_plus_); }

double KernelSpec::minus_integral() const { return abs_integral(grid_, xi_minus_); }

ClipFactors clip_factors(const HistorySegment& v) {
    return {std::min(norm_l1l1_positive(v), 1.0), std::min(norm_l1l1_negative(v), 1.0)};
}

std::vector<double> eval_xi(const KernelSpec& spec, ClipFactors clip, KernelVariant variant) {
    const std::size_t nodes = spec.grid().nodes();
    std::vector<double> out(nodes);
    const auto& plus = spec.xi_plus();
    const auto& minus = spec.xi_minus();
    for (std::size_t j = 0; j < nodes; ++j) {
        const double p_term = plus[j] * clip.plus;
        const double n_term = minus[j] * clip.minus;
        switch (variant) {
            case KernelVariant::full: out[j] = p_term + n_term; break;
            case KernelVariant::p: out[j] = p_term; break;
            case KernelVariant::n: out[j] = n_term; break;
        }
    }
    return out;
}

std::vector<double> eval_xi(const KernelSpec& spec, const HistorySegment& v, KernelVariant variant) {
    require(spec.grid() == v.grid(), "eval_xi: kernel and history delay grids differ");
    return eval_xi(spec, clip_factors(v), variant);
}

double l11_constant(const KernelSpec& spec, KernelVariant variant) {
    switch (variant) {
        case KernelVariant::p: return spec.plus_integral();
        case KernelVariant::n: return spec.minus_integral();
        case KernelVariant::full: return std::max(spec.plus_integral(), spec.minus_integral());
    }
    return 0.0;
}

KernelSpec make_constant_kernel(double r, std::size_t m, double plus_integral, double minus_integral, double cap) {
    const DelayGrid grid{r, m};
    grid.validate();
    require(plus_integral >= 0.0 && minus_integral >= 0.0, "make_constant_kernel: integrals must be nonnegative");
    const double plus = plus_integral / r;
    const double minus = minus_integral / r;
    auto fail = [&](const char* which, double value) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "make_constant_kernel: cap violated: |" << which << "| = " << value << " > M_xi/2 = " << 0.5 * cap;
        throw ContractViolation(msg.str());
    };
    if (plus > 0.5 * cap) fail("xi_plus", plus);
    if (minus > 0.5 * cap) fail("xi_minus", minus);
    return KernelSpec(grid, std::vector<double>(grid.nodes(), plus), std::vector<double>(grid.nodes(), -minus), cap);
}

}  // namespace pimlab
