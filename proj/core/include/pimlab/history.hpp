#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "pimlab/spectral.hpp"

namespace pimlab {

/// Uniform delay grid theta_j = -r + j h, j = 0..m, h = r / m.
struct DelayGrid {
    double r = 1.0;
    std::size_t m = 1;

    double step() const { return r / static_cast<double>(m); }
    double theta(std::size_t j) const { return -r + static_cast<double>(j) * step(); }
    std::size_t nodes() const { return m + 1; }
    void validate() const;

    bool operator==(const DelayGrid&) const = default;
};

/// Composite trapezoid weights on the delay grid (sum to r).
std::vector<double> trapezoid_weights(const DelayGrid& grid);

/// The delayed state u_t on [-r, 0] x (0, L): m + 1 snapshots on a shared
/// spatial grid. Snapshot 0 is the oldest (theta = -r), snapshot m the current time.
///
/// Storage is a ring buffer so push() is O(n_x).
class HistorySegment {
public:
    HistorySegment(const OperatorSpec& spec, DelayGrid grid);

    /// Segment with every snapshot produced by f(theta, x).
    static HistorySegment from_function(const OperatorSpec& spec, DelayGrid grid,
                                        const std::function<double(double, double)>& f);
    static HistorySegment constant(const OperatorSpec& spec, DelayGrid grid, double value);
    /// Constant-in-theta history equal to the given field.
    static HistorySegment constant_in_time(const OperatorSpec& spec, DelayGrid grid, const GridField& field);

    const OperatorSpec& spec() const { return spec_; }
    const DelayGrid& grid() const { return grid_; }
    std::size_t nodes() const { return grid_.nodes(); }
    std::size_t grid_points() const { return spec_.grid_points; }

    std::span<const double> snapshot(std::size_t j) const;
    std::span<double> snapshot(std::size_t j);
    std::span<const double> current() const { return snapshot(grid_.m); }

    GridField snapshot_field(std::size_t j) const;

    /// Drops the oldest snapshot and appends the new one.
    void push(std::span<const double> field);
    void push(const GridField& field) { push(std::span<const double>(field.values)); }
    HistorySegment pushed(const GridField& field) const;

    double min_value() const;
    double max_value() const;

    /// Applies f to every node value.
    HistorySegment map(const std::function<double(double)>& f) const;

    bool same_grid(const HistorySegment& other) const;

    /// Bitwise equality of all snapshots in theta order.
    bool operator==(const HistorySegment& other) const;

private:
    std::size_t slot(std::size_t j) const { return (head_ + j) % grid_.nodes(); }

    OperatorSpec spec_;
    DelayGrid grid_;
    std::size_t head_ = 0;
    std::vector<double> data_;
};

HistorySegment positive_part(const HistorySegment& v);
HistorySegment negative_part(const HistorySegment& v);

/// Pointwise difference a - b. Grids must agree.
HistorySegment difference(const HistorySegment& a, const HistorySegment& b);

/// ||v||_{L1(-r,0; L1(Omega))}: trapezoid in theta of the trapezoid-in-x integral of |v|.
double norm_l1l1(const HistorySegment& v);

/// The same integral restricted to max(v, 0) or min(v, 0) without materializing the parts.
double norm_l1l1_positive(const HistorySegment& v);
double norm_l1l1_negative(const HistorySegment& v);

/// ||v||_C = max over theta nodes of the discrete L2(Omega) norm.
double norm_c(const HistorySegment& v);

/// CSV block: a header of "theta" followed by the node coordinates x_i, then one row per theta node.
void write_csv(std::ostream& out, const HistorySegment& v);

}  // namespace pimlab
