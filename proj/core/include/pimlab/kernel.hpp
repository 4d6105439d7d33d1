#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "pimlab/history.hpp"

namespace pimlab {

enum class KernelVariant { full, p, n };

std::string_view to_string(KernelVariant v);
KernelVariant kernel_variant_from_string(std::string_view s);

/// Signed kernel components on the delay grid. xi_plus >= 0, xi_minus <= 0,
/// each bounded in magnitude by M_xi / 2.
class KernelSpec {
public:
    KernelSpec(DelayGrid grid, std::vector<double> xi_plus, std::vector<double> xi_minus, double cap);

    const DelayGrid& grid() const { return grid_; }
    const std::vector<double>& xi_plus() const { return xi_plus_; }
    const std::vector<double>& xi_minus() const { return xi_minus_; }
    double cap() const { return cap_; }

    /// Trapezoid integrals of |xi_plus| and |xi_minus|.
    double plus_integral() const;
    double minus_integral() const;

private:
    DelayGrid grid_;
    std::vector<double> xi_plus_;
    std::vector<double> xi_minus_;
    double cap_;
};

/// Clip factors min{||v+||, 1} and min{||v-||, 1}.
struct ClipFactors {
    double plus = 0.0;
    double minus = 0.0;
};

ClipFactors clip_factors(const HistorySegment& v);

/// xi(theta_j, v) at every delay node for the chosen variant.
std::vector<double> eval_xi(const KernelSpec& spec, const HistorySegment& v, KernelVariant variant);
std::vector<double> eval_xi(const KernelSpec& spec, ClipFactors clip, KernelVariant variant);

/// L^{1,1} constant: integral of |xi+| (p), of |xi-| (n), or the larger of the two (full).
double l11_constant(const KernelSpec& spec, KernelVariant variant);

/// Constant-in-theta profiles realizing the requested integrals of |xi+| and |xi-|.
/// Throws ContractViolation naming the violated cap if integral / r > M_xi / 2.
KernelSpec make_constant_kernel(double r, std::size_t m, double plus_integral, double minus_integral,
                                double cap);

}  // namespace pimlab
