#include "pimlab/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pimlab/error.hpp"
#include "pimlab/history.hpp"

namespace pimlab {

using detail::require;

void OperatorSpec::validate() const {
    require(std::isfinite(domain_length) && domain_length > 0.0, "OperatorSpec: domain_length must be positive");
    require(grid_points >= 1, "OperatorSpec: grid_points must be >= 1");
    require(modes >= 1, "OperatorSpec: modes must be >= 1");
    require(modes <= grid_points, "OperatorSpec: modes (" + std::to_string(modes) +
                                      ") must not exceed grid_points (" + std::to_string(grid_points) + ")");
}

double analytic_eigenvalue(double domain_length, std::size_t k) {
    const double w = static_cast<double>(k) * std::numbers::pi / domain_length;
    return w * w;
}

double discrete_eigenvalue(double domain_length, std::size_t grid_points, std::size_t k) {
    const double h = domain_length / static_cast<double>(grid_points + 1);
    // 1 - cos(a) = 2 sin^2(a/2) avoids cancellation for the low modes.
    const double s = std::sin(static_cast<double>(k) * std::numbers::pi * h / (2.0 * domain_length));
    return 4.0 * s * s / (h * h);
}

std::vector<double> eigenvalues(const OperatorSpec& spec) {
    spec.validate();
    std::vector<double> out(spec.modes);
    for (std::size_t k = 0; k < spec.modes; ++k) {
        out[k] = spec.eigenvalue_mode == EigenvalueMode::analytic
                     ? analytic_eigenvalue(spec.domain_length, k + 1)
                     : discrete_eigenvalue(spec.domain_length, spec.grid_points, k + 1);
    }
    return out;
}

SineBasis::SineBasis(const OperatorSpec& spec) : spec_(spec) {
    spec_.validate();
    const std::size_t n = spec_.grid_points;
    const double norm = std::sqrt(2.0 / spec_.domain_length);
    table_.resize(spec_.modes * n);
    // sin(k pi i / (n+1)) evaluated through the integer phase (k i) mod 2(n+1)
    // keeps the table exactly periodic.
    const std::size_t period = 2 * (n + 1);
    const double base = std::numbers::pi / static_cast<double>(n + 1);
    for (std::size_t k = 0; k < spec_.modes; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t phase = ((k + 1) * (i + 1)) % period;
            table_[k * n + i] = norm * std::sin(base * static_cast<double>(phase));
        }
    }
}

void SineBasis::forward(std::span<const double> field, std::span<double> out) const {
    const std::size_t n = spec_.grid_points;
    require(field.size() == n, "forward: field has " + std::to_string(field.size()) + " samples, expected " +
                                   std::to_string(n));
    require(out.size() == spec_.modes, "forward: output size mismatch");
    const double h = spec_.grid_spacing();
    for (std::size_t k = 0; k < spec_.modes; ++k) {
        const double* row = &table_[k * n];
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += row[i] * field[i];
        out[k] = h * acc;
    }
}

void SineBasis::inverse(std::span<const double> coeffs, std::span<double> out) const {
    const std::size_t n = spec_.grid_points;
    require(coeffs.size() == spec_.modes, "inverse: expected " + std::to_string(spec_.modes) + " coefficients, got " +
                                              std::to_string(coeffs.size()));
    require(out.size() == n, "inverse: output size mismatch");
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t k = 0; k < spec_.modes; ++k) {
        const double a = coeffs[k];
        if (a == 0.0) continue;
        const double* row = &table_[k * n];
        for (std::size_t i = 0; i < n; ++i) out[i] += a * row[i];
    }
}

ModeVector SineBasis::forward(const GridField& field) const {
    ModeVector out(spec_.modes);
    forward(field.values, out.coeffs);
    return out;
}

GridField SineBasis::inverse(const ModeVector& modes) const {
    GridField out(spec_.grid_points);
    inverse(modes.coeffs, out.values);
    return out;
}

GridField SineBasis::mode_field(std::size_t k) const {
    require(k < spec_.modes, "mode_field: mode index out of range");
    const std::size_t n = spec_.grid_points;
    return GridField(std::vector<double>(table_.begin() + static_cast<std::ptrdiff_t>(k * n),
                                         table_.begin() + static_cast<std::ptrdiff_t>((k + 1) * n)));
}

ModeVector forward(const OperatorSpec& spec, const GridField& field) { return SineBasis(spec).forward(field); }

GridField inverse(const OperatorSpec& spec, const ModeVector& modes) { return SineBasis(spec).inverse(modes); }

ModeVector project_low(const ModeVector& modes, std::size_t n) {
    require(n >= 1 && n <= modes.size(), "project_low: N must satisfy 1 <= N <= K (N=" + std::to_string(n) +
                                             ", K=" + std::to_string(modes.size()) + ")");
    ModeVector out = modes;
    for (std::size_t k = n; k < out.size(); ++k) out[k] = 0.0;
    return out;
}

HistorySegment hat_project(const OperatorSpec& spec, const HistorySegment& history, std::size_t n) {
    require(n >= 1 && n <= spec.modes, "hat_project: N must satisfy 1 <= N <= K");
    require(history.spec().grid_points == spec.grid_points, "hat_project: grid mismatch");
    const SineBasis basis(spec);
    const std::vector<double> lambda = eigenvalues(spec);
    ModeVector now(spec.modes);
    basis.forward(history.current(), now.coeffs);

    HistorySegment out(spec, history.grid());
    ModeVector scaled(spec.modes);
    for (std::size_t j = 0; j < history.nodes(); ++j) {
        const double theta = history.grid().theta(j);
        for (std::size_t k = 0; k < spec.modes; ++k) {
            scaled[k] = k < n ? std::exp(-lambda[k] * theta) * now[k] : 0.0;
        }
        basis.inverse(scaled.coeffs, out.snapshot(j));
    }
    return out;
}

double l2_norm(const OperatorSpec& spec, std::span<const double> field) {
    double acc = 0.0;
    for (double v : field) acc += v * v;
    return std::sqrt(spec.grid_spacing() * acc);
}

double l2_norm(const OperatorSpec& spec, const GridField& field) {
    return l2_norm(spec, std::span<const double>(field.values));
}

}  // namespace pimlab
