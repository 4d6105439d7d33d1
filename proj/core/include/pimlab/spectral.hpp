#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pimlab {

class HistorySegment;

enum class EigenvalueMode { analytic, discrete };

/// Dirichlet Laplacian on (0, L) sampled at n_x interior nodes of a uniform grid,
/// truncated to K sine modes.
struct OperatorSpec {
    double domain_length = 1.0;
    std::size_t modes = 1;
    std::size_t grid_points = 1;
    EigenvalueMode eigenvalue_mode = EigenvalueMode::analytic;

    double grid_spacing() const { return domain_length / static_cast<double>(grid_points + 1); }
    double node(std::size_t i) const { return static_cast<double>(i + 1) * grid_spacing(); }

    /// Throws ContractViolation unless L > 0 and 1 <= K <= n_x.
    void validate() const;

    OperatorSpec with_mode(EigenvalueMode mode) const {
        OperatorSpec s = *this;
        s.eigenvalue_mode = mode;
        return s;
    }
};

/// Samples of a field at the interior grid nodes.
struct GridField {
    std::vector<double> values;

    GridField() = default;
    explicit GridField(std::size_t n, double fill = 0.0) : values(n, fill) {}
    explicit GridField(std::vector<double> v) : values(std::move(v)) {}

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    bool operator==(const GridField&) const = default;
};

/// Coefficients a_k = <u, e_k> in the orthonormal basis e_k(x) = sqrt(2/L) sin(k pi x / L).
struct ModeVector {
    std::vector<double> coeffs;

    ModeVector() = default;
    explicit ModeVector(std::size_t k, double fill = 0.0) : coeffs(k, fill) {}
    explicit ModeVector(std::vector<double> c) : coeffs(std::move(c)) {}

    std::size_t size() const { return coeffs.size(); }
    double& operator[](std::size_t i) { return coeffs[i]; }
    double operator[](std::size_t i) const { return coeffs[i]; }
    bool operator==(const ModeVector&) const = default;
};

/// lambda_k = (k pi / L)^2.
double analytic_eigenvalue(double domain_length, std::size_t k);

/// lambda_hat_k = (2 / h^2)(1 - cos(k pi h / L)), the eigenvalues of the
/// second-difference matrix on the interior grid.
double discrete_eigenvalue(double domain_length, std::size_t grid_points, std::size_t k);

/// lambda_1..lambda_K according to spec.eigenvalue_mode.
std::vector<double> eigenvalues(const OperatorSpec& spec);

/// Precomputed sine table for the discrete transform pair. The trapezoid rule
/// with zero boundary values makes the sampled basis exactly orthonormal, so
/// inverse(forward(u)) = u whenever u lies in the span of the first K modes.
class SineBasis {
public:
    explicit SineBasis(const OperatorSpec& spec);

    const OperatorSpec& spec() const { return spec_; }
    std::size_t modes() const { return spec_.modes; }
    std::size_t grid_points() const { return spec_.grid_points; }

    /// e_k at node i (k is 1-based in the math, 0-based here).
    double basis(std::size_t k, std::size_t i) const { return table_[k * spec_.grid_points + i]; }

    ModeVector forward(const GridField& field) const;
    GridField inverse(const ModeVector& modes) const;

    void forward(std::span<const double> field, std::span<double> out) const;
    void inverse(std::span<const double> coeffs, std::span<double> out) const;

    /// The k-th basis function sampled on the grid.
    GridField mode_field(std::size_t k) const;

private:
    OperatorSpec spec_;
    std::vector<double> table_;
};

ModeVector forward(const OperatorSpec& spec, const GridField& field);
GridField inverse(const OperatorSpec& spec, const ModeVector& modes);

/// Orthogonal projector onto the first N modes. Requires 1 <= N <= K.
ModeVector project_low(const ModeVector& modes, std::size_t n);

/// Delay-space projector: at each theta node, sum_{k<=N} exp(-lambda_k theta) <phi(0), e_k> e_k.
HistorySegment hat_project(const OperatorSpec& spec, const HistorySegment& history, std::size_t n);

/// Discrete L2(0, L) norm with trapezoid weights and zero boundary values.
double l2_norm(const OperatorSpec& spec, std::span<const double> field);
double l2_norm(const OperatorSpec& spec, const GridField& field);

}  // namespace pimlab
