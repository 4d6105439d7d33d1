#include "pimlab/history.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "pimlab/error.hpp"

namespace pimlab {

using detail::require;

void DelayGrid::validate() const {
    require(std::isfinite(r) && r > 0.0, "DelayGrid: r must be positive");
    require(m >= 1, "DelayGrid: m must be >= 1");
}

std::vector<double> trapezoid_weights(const DelayGrid& grid) {
    grid.validate();
    std::vector<double> w(grid.nodes(), grid.step());
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

HistorySegment::HistorySegment(const OperatorSpec& spec, DelayGrid grid)
    : spec_(spec), grid_(grid), data_(grid.nodes() * spec.grid_points, 0.0) {
    spec_.validate();
    grid_.validate();
}

HistorySegment HistorySegment::from_function(const OperatorSpec& spec, DelayGrid grid,
                                             const std::function<double(double, double)>& f) {
    HistorySegment h(spec, grid);
    for (std::size_t j = 0; j < h.nodes(); ++j) {
        auto snap = h.snapshot(j);
        const double theta = grid.theta(j);
        for (std::size_t i = 0; i < spec.grid_points; ++i) snap[i] = f(theta, spec.node(i));
    }
    return h;
}

HistorySegment HistorySegment::constant(const OperatorSpec& spec, DelayGrid grid, double value) {
    HistorySegment h(spec, grid);
    std::fill(h.data_.begin(), h.data_.end(), value);
    return h;
}

HistorySegment HistorySegment::constant_in_time(const OperatorSpec& spec, DelayGrid grid, const GridField& field) {
    require(field.size() == spec.grid_points, "constant_in_time: field size mismatch");
    HistorySegment h(spec, grid);
    for (std::size_t j = 0; j < h.nodes(); ++j) std::copy(field.values.begin(), field.values.end(), h.snapshot(j).begin());
    return h;
}

std::span<const double> HistorySegment::snapshot(std::size_t j) const {
    require(j < nodes(), "snapshot index out of range");
    return {data_.data() + slot(j) * spec_.grid_points, spec_.grid_points};
}

std::span<double> HistorySegment::snapshot(std::size_t j) {
    require(j < nodes(), "snapshot index out of range");
    return {data_.data() + slot(j) * spec_.grid_points, spec_.grid_points};
}

GridField HistorySegment::snapshot_field(std::size_t j) const {
    auto s = snapshot(j);
    return GridField(std::vector<double>(s.begin(), s.end()));
}

void HistorySegment::push(std::span<const double> field) {
    require(field.size() == spec_.grid_points, "push: snapshot has " + std::to_string(field.size()) +
                                                   " samples, expected " + std::to_string(spec_.grid_points));
    // The oldest slot becomes the newest.
    std::copy(field.begin(), field.end(), data_.begin() + static_cast<std::ptrdiff_t>(head_ * spec_.grid_points));
    head_ = (head_ + 1) % nodes();
}

HistorySegment HistorySegment::pushed(const GridField& field) const {
    HistorySegment out = *this;
    out.push(field);
    return out;
}

double HistorySegment::min_value() const { return *std::min_element(data_.begin(), data_.end()); }

double HistorySegment::max_value() const { return *std::max_element(data_.begin(), data_.end()); }

HistorySegment HistorySegment::map(const std::function<double(double)>& f) const {
    HistorySegment out = *this;
    for (double& v : out.data_) v = f(v);
    return out;
}

bool HistorySegment::same_grid(const HistorySegment& other) const {
    return grid_ == other.grid_ && spec_.grid_points == other.spec_.grid_points &&
           spec_.domain_length == other.spec_.domain_length;
}

bool HistorySegment::operator==(const HistorySegment& other) const {
    if (!same_grid(other)) return false;
    for (std::size_t j = 0; j < nodes(); ++j) {
        auto a = snapshot(j);
        auto b = other.snapshot(j);
        if (!std::equal(a.begin(), a.end(), b.begin())) return false;
    }
    return true;
}

HistorySegment positive_part(const HistorySegment& v) {
    return v.map([](double x) { return x > 0.0 ? x : 0.0; });
}

HistorySegment negative_part(const HistorySegment& v) {
    return v.map([](double x) { return x < 0.0 ? x : 0.0; });
}

HistorySegment difference(const HistorySegment& a, const HistorySegment& b) {
    require(a.same_grid(b), "difference: grid mismatch");
    HistorySegment out(a.spec(), a.grid());
    for (std::size_t j = 0; j < a.nodes(); ++j) {
        auto sa = a.snapshot(j);
        auto sb = b.snapshot(j);
        auto so = out.snapshot(j);
        for (std::size_t i = 0; i < sa.size(); ++i) so[i] = sa[i] - sb[i];
    }
    return out;
}

namespace {

template <class Abs>
double l1l1(const HistorySegment& v, Abs abs_part) {
    const auto w = trapezoid_weights(v.grid());
    const double hx = v.spec().grid_spacing();
    double total = 0.0;
    for (std::size_t j = 0; j < v.nodes(); ++j) {
        double row = 0.0;
        for (double x : v.snapshot(j)) row += abs_part(x);
        total += w[j] * hx * row;
    }
    return total;
}

}  // namespace

double norm_l1l1(const HistorySegment& v) {
    return l1l1(v, [](double x) { return std::fabs(x); });
}

double norm_l1l1_positive(const HistorySegment& v) {
    return l1l1(v, [](double x) { return x > 0.0 ? x : 0.0; });
}

double norm_l1l1_negative(const HistorySegment& v) {
    return l1l1(v, [](double x) { return x < 0.0 ? -x : 0.0; });
}

double norm_c(const HistorySegment& v) {
    double best = 0.0;
    for (std::size_t j = 0; j < v.nodes(); ++j) best = std::max(best, l2_norm(v.spec(), v.snapshot(j)));
    return best;
}

namespace {
void put(std::ostream& out, double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    out.write(buf, res.ptr - buf);
}
}  // namespace

void write_csv(std::ostream& out, const HistorySegment& v) {
    out << "theta";
    for (std::size_t i = 0; i < v.grid_points(); ++i) {
        out << ',';
        put(out, v.spec().node(i));
    }
    out << '\n';
    for (std::size_t j = 0; j < v.nodes(); ++j) {
        put(out, v.grid().theta(j));
        for (double x : v.snapshot(j)) {
            out << ',';
            put(out, x);
        }
        out << '\n';
    }
}

}  // namespace pimlab
