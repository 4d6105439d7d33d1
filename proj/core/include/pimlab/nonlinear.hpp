#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "pimlab/history.hpp"
#include "pimlab/kernel.hpp"

namespace pimlab {

enum class NonlinearityKind { nicholson, bounded_custom };

std::string_view to_string(NonlinearityKind k);

/// Scalar map b with its sup bound M_b and Lipschitz constant L_b.
///
/// The Nicholson form b(w) = p w^2 exp(-|w|) is evaluable; bounded_custom only
/// carries user-supplied constants and is usable for condition arithmetic.
struct NonlinearitySpec {
    NonlinearityKind kind = NonlinearityKind::nicholson;
    double p = 1.0;
    double M_b = 0.0;
    double L_b = 0.0;
    bool constants_certified = false;

    static NonlinearitySpec nicholson(double p);
    static NonlinearitySpec custom(double M_b, double L_b);

    bool evaluable() const { return kind == NonlinearityKind::nicholson; }
};

double b_eval(const NonlinearitySpec& spec, double w);

/// b'(w) for the Nicholson form.
double b_derivative(const NonlinearitySpec& spec, double w);

struct CertifiedConstants {
    double M_b = 0.0;
    double L_b = 0.0;
    double argmax_value = 0.0;  // w where b attains M_b
    double argmax_slope = 0.0;  // w where |b'| attains L_b
};

/// Search interval used by certify_constants. b and |b'| are decreasing past
/// 2 + sqrt(2), so their values at the right end bound the tail (about 2e-6 of
/// either maximum at p = 1).
inline constexpr double kCertificationInterval = 20.0;

/// Dense grid scan of b and |b'| on [0, 20] followed by golden-section refinement
/// to 1e-9 in w. Throws CertificationError if the kind is not evaluable or the
/// refinement does not converge.
CertifiedConstants certify_constants(const NonlinearitySpec& spec);

/// Copy of spec with M_b, L_b filled in by certify_constants.
NonlinearitySpec certified(NonlinearitySpec spec);

/// Per-node trapezoid-in-theta of b(v(theta_j, x_i)) xi_j.
GridField delay_term(const NonlinearitySpec& nl, const KernelSpec& ks, const HistorySegment& v,
                     KernelVariant variant);

/// Same quadrature with b already applied to every snapshot of the history.
/// b_history and the segment used for xi must share the delay grid.
void integrate_delay(const HistorySegment& b_history, std::span<const double> xi,
                     std::span<const double> weights, std::span<double> out);

}  // namespace pimlab
