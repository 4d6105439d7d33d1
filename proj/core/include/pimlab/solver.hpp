#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "pimlab/history.hpp"
#include "pimlab/kernel.hpp"
#include "pimlab/nonlinear.hpp"
#include "pimlab/spectral.hpp"

namespace pimlab {

/// Everything needed to integrate the delay equation. The time step is locked
/// to the delay grid, h = r / m, so every delayed value is a stored snapshot.
struct ProblemSpec {
    OperatorSpec op;
    DelayGrid delay;
    KernelSpec kernel;
    NonlinearitySpec nonlinearity;
    KernelVariant variant = KernelVariant::full;
    std::size_t steps = 0;
    std::size_t stride = 10;
    std::size_t low_modes = 1;  // N, the number of low-mode coefficients recorded

    double step_size() const { return delay.step(); }
    double horizon() const { return static_cast<double>(steps) * step_size(); }

    /// Number of steps covering horizon T; T must be a multiple of h (to 1e-9 relative).
    std::size_t steps_for(double horizon) const;

    void validate() const;

    ProblemSpec with_variant(KernelVariant v) const {
        ProblemSpec out = *this;
        out.variant = v;
        return out;
    }
};

struct TrajectorySample {
    double t = 0.0;
    std::vector<double> low;  // a_1..a_N
    double high_norm = 0.0;   // ||(1 - P_N) u||
    double full_norm = 0.0;   // discrete L2 norm of the snapshot
    double min_value = 0.0;
    double max_value = 0.0;

    bool operator==(const TrajectorySample&) const = default;
};

struct TrajectoryRecord {
    std::size_t low_modes = 1;
    std::vector<TrajectorySample> samples;
    std::vector<std::pair<double, GridField>> snapshots;

    bool operator==(const TrajectoryRecord&) const = default;
};

/// Columns: t, a_1..a_N, high_norm, full_norm, min_value, max_value.
void write_csv(std::ostream& out, const TrajectoryRecord& record);

/// {"columns": [...], "rows": [[...], ...], "snapshots": [{"t": ..., "values": [...]}, ...]}
std::string to_json(const TrajectoryRecord& record, int indent = 2);

/// Exponential Euler in the discrete-Laplacian eigenbasis with the delay term
/// evaluated explicitly from the history before the step:
///   a_k <- exp(-lh_k h) a_k + (1 - exp(-lh_k h)) / lh_k * F_k.
///
/// Owns its history. b(u) is cached per snapshot so each step evaluates b
/// only on the newly produced field.
class Integrator {
public:
    Integrator(const ProblemSpec& problem, HistorySegment initial);

    void step();
    void advance(std::size_t n);

    const ProblemSpec& problem() const { return problem_; }
    const HistorySegment& history() const { return history_; }
    const ModeVector& modes() const { return modes_; }
    std::span<const double> current() const { return history_.current(); }
    const SineBasis& basis() const { return *basis_; }
    std::size_t steps_taken() const { return steps_; }
    double time() const { return static_cast<double>(steps_) * problem_.step_size(); }

    TrajectorySample sample() const;

    /// The most recent delay-term evaluation (zero before the first step).
    const GridField& last_forcing() const { return forcing_; }

private:
    ProblemSpec problem_;
    std::shared_ptr<const SineBasis> basis_;
    HistorySegment history_;
    HistorySegment b_history_;
    ModeVector modes_;
    std::vector<double> decay_;
    std::vector<double> gain_;
    std::vector<double> weights_;
    GridField forcing_;
    ModeVector forcing_modes_;
    GridField next_;
    std::size_t steps_ = 0;
};

/// One step from the given history; returns the advanced history.
HistorySegment step(const ProblemSpec& problem, const HistorySegment& v);

struct EvolveOptions {
    std::vector<std::size_t> snapshot_steps;  // full snapshots recorded at these step indices
};

/// Repeated steps over problem.steps, sampling every problem.stride steps (and
/// at the final step). Deterministic for fixed inputs.
TrajectoryRecord evolve(const ProblemSpec& problem, const HistorySegment& phi, const EvolveOptions& options = {});

/// max over t in [T/2, T] of ||u(t)||_{L2}.
double dissipativity_probe(const ProblemSpec& problem, const HistorySegment& phi, double horizon);

/// M_b M_xi r sqrt(L) / lambda_hat_1: radius of the absorbing ball in L2.
double absorbing_radius(const ProblemSpec& problem);

}  // namespace pimlab
