#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pimlab/kernel.hpp"
#include "pimlab/nonlinear.hpp"
#include "pimlab/solver.hpp"

namespace pimlab {

/// The scalar data entering the Lipschitz constant of the delay term.
struct LipschitzInputs {
    double domain_length = 1.0;  // |Omega|
    double r = 1.0;
    double M_xi = 0.0;
    double plus_integral = 0.0;   // integral of |xi+| over [-r, 0]
    double minus_integral = 0.0;  // integral of |xi-| over [-r, 0]
    double M_b = 0.0;
    double L_b = 0.0;

    double l11(KernelVariant variant) const;
};

LipschitzInputs lipschitz_inputs(const ProblemSpec& problem);

/// M_1 = r sqrt(2 (L_b^2 M_xi^2 + M_b^2 (L^{1,1})^2 |Omega|)) with the variant's L^{1,1}.
double lipschitz_M1(const LipschitzInputs& in, KernelVariant variant);
double lipschitz_M1(const ProblemSpec& problem, KernelVariant variant);

/// The same estimate with |Omega|^2 in the second term. Integrating the
/// x-independent kernel contribution M_b L^{1,1} r sqrt|Omega| ||dv||_C over
/// Omega contributes one more factor |Omega|; this constant is a rigorous
/// bound for every |Omega| and coincides with lipschitz_M1 when |Omega| = 1.
double lipschitz_M1_strict(const LipschitzInputs& in, KernelVariant variant);

struct GapCheck {
    bool a4_pass = false;     // lambda_{N+1} - lambda_N >= 2 mu
    bool mu_exceeds = false;  // mu > 4 M_1
    bool delta_pass = false;  // delta <= 1/2
    double delta = 0.0;       // (2 / mu) M_1 exp((lambda_N + mu) r)

    bool a5_pass() const { return mu_exceeds && delta_pass; }
};

/// Requires mu > 0.
GapCheck gap_check(double lambda_n, double lambda_n1, double mu, double m1, double r);

struct Bound3 {
    double bound = 0.0;  // (lambda_{N+1} - lambda_N) / 8 exp(-(lambda_{N+1} + lambda_N) r / 2)
    bool pass = false;   // M_1 <= bound
};

Bound3 bound3_check(double lambda_n, double lambda_n1, double r, double m1);

/// Right-hand sides of the three parameter-selection inequalities for (r, M_xi):
///   r                <= gap / (16 L_b M_xi)          exp(-sum r / 2)
///   int |xi+|        <= gap / (16 r M_b sqrt|Omega|) exp(-sum r / 2)
///   int |xi-|        >  gap / (8 r M_b sqrt|Omega|)  exp(-sum r / 2)
struct RemarkBounds {
    double r_bound = 0.0;
    double plus_bound = 0.0;
    double minus_lower = 0.0;
};

RemarkBounds remark_bounds(double lambda_n, double lambda_n1, double r, double M_xi, double M_b, double L_b,
                           double domain_length);

enum class Verdict { IM_exists, PIM_only, neither_certified };

std::string_view to_string(Verdict v);

struct ConditionReport {
    std::size_t N = 1;
    double lambda_N = 0.0;
    double lambda_N1 = 0.0;
    double mu = 0.0;
    LipschitzInputs inputs;
    double M1_full = 0.0;
    double M1_p = 0.0;
    double M1_n = 0.0;
    double M1_strict_full = 0.0;
    double M1_strict_p = 0.0;
    double M1_strict_n = 0.0;
    double delta_full = 0.0;
    double delta_p = 0.0;
    double delta_n = 0.0;
    double bound3 = 0.0;
    RemarkBounds remark;

    bool A4_pass = false;
    bool A5_pass_full = false;
    bool A5_pass_p = false;
    bool A5_pass_n = false;
    bool bound3_pass_full = false;
    bool bound3_pass_p = false;
    bool bound3_pass_n = false;
    bool remark17_pass = false;
    bool remark18_pass = false;
    bool remark19_pass = false;

    Verdict verdict = Verdict::neither_certified;

    /// Stored with the report: the verdict concerns sufficient conditions only.
    static constexpr std::string_view verdict_note =
        "Verdicts certify sufficient spectral-gap conditions only; 'not certified' is not a proof "
        "that no inertial manifold exists.";
};

/// Assembles every check at (N, mu). mu defaults to (lambda_{N+1} - lambda_N) / 2.
/// Eigenvalues are the analytic ones. Requires N < K.
///
/// A variant certifies when its M_1 satisfies the bound3 inequality, which is
/// A5 at the optimal mu. IM_exists iff full certifies; PIM_only iff p
/// certifies and full does not.
ConditionReport condition_report(const ProblemSpec& problem, std::size_t N, std::optional<double> mu = std::nullopt);
ConditionReport condition_report(const LipschitzInputs& inputs, std::size_t N, std::optional<double> mu = std::nullopt);

/// Flat JSON document of every field plus the verdict note.
std::string to_json(const ConditionReport& report, int indent = 2);

/// One row per (variant, check): variant,check,value,threshold,pass.
std::string to_csv(const ConditionReport& report);

struct LogGrid {
    double min = 1e-3;
    double max = 10.0;
    std::size_t points = 60;

    std::vector<double> values() const;
};

struct SynthesisOptions {
    double plus_margin = 0.1;     // int |xi+| = (1 - margin) * its bound
    double minus_position = 0.5;  // int |xi-| = lower + position * (upper - lower), position in (0, 1]
    LogGrid r_grid{1e-3, 10.0, 60};
    LogGrid xi_grid{1e-6, 10.0, 120};
    std::size_t jobs = 1;
};

struct FeasibleParameters {
    double r = 0.0;
    double M_xi = 0.0;
    double plus_integral = 0.0;
    double minus_integral = 0.0;
    double window_lower = 0.0;  // exclusive
    double window_upper = 0.0;  // inclusive: r M_xi / 2
    RemarkBounds remark;
    double bound3 = 0.0;
    double M1_full = 0.0;
    double M1_p = 0.0;
    double M1_n = 0.0;
    double delta_p = 0.0;
    std::size_t r_index = 0;
    std::size_t xi_index = 0;
};

struct InfeasibilityCertificate {
    std::string binding_constraint;
    std::string explanation;
    double r_window_threshold = 0.0;  // window nonempty requires r > 4 L_b / (M_b sqrt|Omega|)
    std::optional<double> largest_admissible_r;
    std::size_t candidates = 0;
    std::size_t admissible = 0;       // satisfy the r inequality
    std::size_t window_nonempty = 0;  // additionally have a nonempty xi- window
};

struct SynthesisResult {
    std::size_t N = 1;
    double domain_length = 1.0;
    double lambda_N = 0.0;
    double lambda_N1 = 0.0;
    double M_b = 0.0;
    double L_b = 0.0;
    SynthesisOptions options;
    std::optional<FeasibleParameters> feasible;
    std::optional<InfeasibilityCertificate> infeasible;
};

/// Scans (r, M_xi) with r ascending and, for each r, M_xi descending, and returns
/// the first tuple whose integrals satisfy the three parameter inequalities, the
/// M_xi/2 caps, bound3 for p but not for full or n, and A5 for p at mu = gap/2.
/// The scan order fixes the result regardless of options.jobs.
SynthesisResult synthesize_params(std::size_t N, const NonlinearitySpec& nonlinearity, double domain_length,
                                  const SynthesisOptions& options = {});

std::string to_json(const SynthesisResult& result, int indent = 2);

}  // namespace pimlab
