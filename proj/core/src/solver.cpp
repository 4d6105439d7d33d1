#include "pimlab/solver.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

#include "json.hpp"

#include "pimlab/error.hpp"

namespace pimlab {

using detail::require;

std::size_t ProblemSpec::steps_for(double horizon) const {
    require(std::isfinite(horizon) && horizon >= 0.0, "horizon must be finite and nonnegative");
    const double h = step_size();
    const double n = std::round(horizon / h);
    require(std::fabs(n * h - horizon) <= 1e-9 * std::max(1.0, horizon),
            "horizon " + std::to_string(horizon) + " is not a multiple of the step h = r/m = " + std::to_string(h));
    return static_cast<std::size_t>(n);
}

void ProblemSpec::validate() const {
    op.validate();
    delay.validate();
    require(kernel.grid() == delay, "ProblemSpec: kernel delay grid differs from the problem delay grid");
    require(stride >= 1, "ProblemSpec: stride must be >= 1");
    require(low_modes >= 1 && low_modes <= op.modes, "ProblemSpec: low_modes must satisfy 1 <= N <= K");
    if (!nonlinearity.constants_certified) throw CertificationError("ProblemSpec: nonlinearity constants are not certified");
}

Integrator::Integrator(const ProblemSpec& problem, HistorySegment initial)
    : problem_(problem),
      basis_(std::make_shared<SineBasis>(problem.op)),
      history_(std::move(initial)),
      b_history_(history_),
      modes_(problem.op.modes),
      decay_(problem.op.modes),
      gain_(problem.op.modes),
      weights_(trapezoid_weights(problem.delay)),
      forcing_(problem.op.grid_points),
      forcing_modes_(problem.op.modes),
      next_(problem.op.grid_points) {
    problem_.validate();
    require(history_.grid() == problem_.delay, "Integrator: history delay grid differs from the problem");
    require(history_.grid_points() == problem_.op.grid_points, "Integrator: history spatial grid differs from the problem");
    if (!problem_.nonlinearity.evaluable()) {
        throw ContractViolation("Integrator: the nonlinearity must be evaluable (kind nicholson) to simulate");
    }
    const double h = problem_.step_size();
    for (std::size_t k = 0; k < problem_.op.modes; ++k) {
        const double lambda = discrete_eigenvalue(problem_.op.domain_length, problem_.op.grid_points, k + 1);
        decay_[k] = std::exp(-lambda * h);
        gain_[k] = -std::expm1(-lambda * h) / lambda;
    }
    const auto& nl = problem_.nonlinearity;
    b_history_ = history_.map([&](double x) { return b_eval(nl, x); });
    basis_->forward(history_.current(), modes_.coeffs);
}

void Integrator::step() {
    const auto xi = eval_xi(problem_.kernel, clip_factors(history_), problem_.variant);
    integrate_delay(b_history_, xi, weights_, forcing_.values);
    basis_->forward(forcing_.values, forcing_modes_.coeffs);
    for (std::size_t k = 0; k < modes_.size(); ++k) {
        modes_[k] = decay_[k] * modes_[k] + gain_[k] * forcing_modes_[k];
    }
    basis_->inverse(modes_.coeffs, next_.values);
    for (double x : next_.values) {
        if (!std::isfinite(x)) {
            throw IntegrationFailure(steps_ + 1, "integration produced a non-finite value at step " +
                                                     std::to_string(steps_ + 1));
        }
    }
    history_.push(next_);
    const auto& nl = problem_.nonlinearity;
    for (double& x : next_.values) x = b_eval(nl, x);
    b_history_.push(next_);
    ++steps_;
}

void Integrator::advance(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) step();
}

TrajectorySample Integrator::sample() const {
    TrajectorySample s;
    s.t = time();
    const std::size_t n = problem_.low_modes;
    s.low.assign(modes_.coeffs.begin(), modes_.coeffs.begin() + static_cast<std::ptrdiff_t>(n));
    double high = 0.0;
    for (std::size_t k = n; k < modes_.size(); ++k) high += modes_[k] * modes_[k];
    s.high_norm = std::sqrt(high);
    const auto u = history_.current();
    s.full_norm = l2_norm(problem_.op, u);
    s.min_value = *std::min_element(u.begin(), u.end());
    s.max_value = *std::max_element(u.begin(), u.end());
    return s;
}

HistorySegment step(const ProblemSpec& problem, const HistorySegment& v) {
    Integrator integ(problem, v);
    integ.step();
    return integ.history();
}

TrajectoryRecord evolve(const ProblemSpec& problem, const HistorySegment& phi, const EvolveOptions& options) {
    Integrator integ(problem, phi);
    TrajectoryRecord rec;
    rec.low_modes = problem.low_modes;
    auto snap_if_requested = [&] {
        const auto n = integ.steps_taken();
        if (std::find(options.snapshot_steps.begin(), options.snapshot_steps.end(), n) != options.snapshot_steps.end()) {
            const auto u = integ.current();
            rec.snapshots.emplace_back(integ.time(), GridField(std::vector<double>(u.begin(), u.end())));
        }
    };
    rec.samples.push_back(integ.sample());
    snap_if_requested();
    for (std::size_t n = 1; n <= problem.steps; ++n) {
        integ.step();
        if (n % problem.stride == 0 || n == problem.steps) rec.samples.push_back(integ.sample());
        snap_if_requested();
    }
    return rec;
}

double dissipativity_probe(const ProblemSpec& problem, const HistorySegment& phi, double horizon) {
    const std::size_t total = problem.steps_for(horizon);
    Integrator integ(problem, phi);
    double best = 0.0;
    auto consider = [&] {
        if (2 * integ.steps_taken() >= total) best = std::max(best, l2_norm(problem.op, integ.current()));
    };
    consider();
    for (std::size_t n = 0; n < total; ++n) {
        integ.step();
        consider();
    }
    return best;
}

double absorbing_radius(const ProblemSpec& problem) {
    const double lambda1 = discrete_eigenvalue(problem.op.domain_length, problem.op.grid_points, 1);
    return problem.nonlinearity.M_b * problem.kernel.cap() * problem.delay.r * std::sqrt(problem.op.domain_length) /
           lambda1;
}

namespace {
void put(std::ostream& out, double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    out.write(buf, res.ptr - buf);
}
}  // namespace

void write_csv(std::ostream& out, const TrajectoryRecord& record) {
    out << 't';
    for (std::size_t k = 1; k <= record.low_modes; ++k) out << ",a_" << k;
    out << ",high_norm,full_norm,min_value,max_value\n";
    for (const auto& s : record.samples) {
        put(out, s.t);
        for (double a : s.low) {
            out << ',';
            put(out, a);
        }
        for (double v : {s.high_norm, s.full_norm, s.min_value, s.max_value}) {
            out << ',';
            put(out, v);
        }
        out << '\n';
    }
}

std::string to_json(const TrajectoryRecord& record, int indent) {
    nlohmann::ordered_json j;
    auto columns = nlohmann::ordered_json::array({"t"});
    for (std::size_t k = 1; k <= record.low_modes; ++k) columns.push_back("a_" + std::to_string(k));
    for (const char* c : {"high_norm", "full_norm", "min_value", "max_value"}) columns.push_back(c);
    j["columns"] = columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& s : record.samples) {
        auto row = nlohmann::ordered_json::array({s.t});
        for (double a : s.low) row.push_back(a);
        for (double v : {s.high_norm, s.full_norm, s.min_value, s.max_value}) row.push_back(v);
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    auto snaps = nlohmann::ordered_json::array();
    for (const auto& [t, field] : record.snapshots) snaps.push_back({{"t", t}, {"values", field.values}});
    j["snapshots"] = std::move(snaps);
    return j.dump(indent);
}

}  // namespace pimlab
