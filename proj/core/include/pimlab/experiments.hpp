#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pimlab/history.hpp"
#include "pimlab/solver.hpp"

namespace pimlab {

enum class InitialFamily { random_positive_fourier, random_signed_fourier, gaussian_bumps, constant };
enum class Cone { positive, negative };

std::string_view to_string(InitialFamily f);
InitialFamily initial_family_from_string(std::string_view s);
std::string_view to_string(Cone c);
Cone cone_from_string(std::string_view s);

/// True for the families whose members lie in the positive cone (amplitude >= 0).
bool family_is_positive(InitialFamily f);

/// Random initial history on the problem grid. Deterministic in seed.
///   random_positive_fourier: amplitude * (max(g, 0) + 0.25) with g a random
///                            8-term sine series whose coefficients vary linearly in theta.
///   random_signed_fourier:   amplitude * g.
///   gaussian_bumps:          amplitude * (three Gaussian bumps + 0.05).
///   constant:                amplitude everywhere.
HistorySegment make_initial(const OperatorSpec& op, DelayGrid grid, InitialFamily family, double amplitude,
                            std::uint64_t seed);

struct ExperimentConfig {
    std::size_t trials = 10;
    std::uint64_t seed = 1;
    double horizon = 1.0;
    InitialFamily family = InitialFamily::random_positive_fourier;
    double amplitude = 1.0;
    Cone cone = Cone::positive;
    std::size_t stride = 1;
    std::size_t jobs = 1;

    double cone_tolerance = 1e-12;
    double lipschitz_tolerance = 1e-8;
    std::optional<double> alpha_min;  // defaults to mu / 2
    double r2_min = 0.9;
    double noise_floor = 1e-13;
    std::size_t min_window_samples = 10;
    double perturbation_fraction = 0.5;  // sup of the high-mode perturbation relative to min(phi)

    void validate() const;
};

using Metrics = std::vector<std::pair<std::string, double>>;

struct TrialRecord {
    std::size_t trial = 0;
    std::string status;
    Metrics metrics;

    bool operator==(const TrialRecord&) const = default;
};

struct ExperimentResult {
    std::string name;
    std::string status;  // pass, fail, inconclusive, informational
    bool passed = false;
    bool informational = false;
    std::vector<TrialRecord> trials;
    Metrics summary;  // always includes the tolerances and windows used
    std::vector<std::pair<std::string, std::string>> notes;

    double summary_value(std::string_view key) const;
};

/// Trajectories from D+ (or D-) stay in the cone: metric is the most negative
/// (resp. most positive) grid value seen over every step; pass iff within tolerance.
ExperimentResult run_cone_invariance(const ProblemSpec& problem, const ExperimentConfig& cfg);

/// On D+ the full and p kernels (on D- the full and n kernels) give identical
/// trajectories. Pass iff the largest snapshot distance is exactly zero.
ExperimentResult run_coincidence(const ProblemSpec& problem, const ExperimentConfig& cfg);

/// Informational: initial data with a single negative node makes the two
/// trajectories diverge.
ExperimentResult run_coincidence_witness(const ProblemSpec& problem, const ExperimentConfig& cfg);

/// Random segment pairs: ||B(v1) - B(v2)|| / (M_1 ||v1 - v2||_C) and the kernel
/// ratio sum_j w_j |xi(v1) - xi(v2)| / (L^{1,1} ||v1 - v2||_{L1L1}) for every variant.
ExperimentResult run_lipschitz_sampling(const ProblemSpec& problem, const ExperimentConfig& cfg);

/// Squeezing of high-mode differences. Each trial evolves phi and phi plus a
/// small high-mode perturbation (both in D+) under variant p and fits the
/// log-linear decay rate of q(t) = ||(1 - P_N)(u1 - u2)|| over the window that
/// starts after one delay span and ends when q reaches the noise floor or the
/// pair enters the slaving cone q <= ||P_N (u1 - u2)||.
ExperimentResult run_attraction_rate(const ProblemSpec& problem, const ExperimentConfig& cfg, std::size_t N);

enum class OutputFormat { json, csv };
OutputFormat output_format_from_string(std::string_view s);

std::string to_json(const std::vector<ExperimentResult>& results, int indent = 2);
std::string to_csv(const std::vector<ExperimentResult>& results);

/// Writes the JSON summary or the per-trial CSV. Throws std::runtime_error on an unwritable path.
void emit(const std::vector<ExperimentResult>& results, const std::string& path, OutputFormat format);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Ordinary least squares y = slope x + intercept. Requires at least two points.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

double median(std::vector<double> values);

}  // namespace pimlab
