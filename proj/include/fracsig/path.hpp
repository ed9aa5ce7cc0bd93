#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fracsig {

/// Piecewise-linear path X: [0, n−1] → R^d with knot i at integer time i.
/// Knots are stored row-major (n rows of d values).
class PiecewiseLinearPath {
public:
    PiecewiseLinearPath(std::size_t knots, std::size_t dim, std::vector<double> values);

    /// Convenience for tests and fixtures: one inner vector per knot.
    static PiecewiseLinearPath from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t knot_count() const { return knots_; }
    std::size_t segment_count() const { return knots_ - 1; }
    std::size_t dim() const { return dim_; }
    double end_time() const { return static_cast<double>(knots_ - 1); }

    std::span<const double> knot(std::size_t i) const;
    double at(std::size_t i, std::size_t channel) const { return values_[i * dim_ + channel]; }
    std::span<const double> values() const { return values_; }

    /// X_t by linear interpolation on segment ⌊t⌋.
    std::vector<double> evaluate(double t) const;

    /// A_{i+1} − A_i.
    std::vector<double> segment_slope(std::size_t i) const;

    /// Knots [a, b] re-based to start at time 0.
    PiecewiseLinearPath restrict(std::size_t a, std::size_t b) const;

private:
    std::size_t knots_;
    std::size_t dim_;
    std::vector<double> values_;
};

PiecewiseLinearPath translate(const PiecewiseLinearPath& path, std::span<const double> shift);

/// Inserts factor−1 interpolated knots into every segment, so the dilated
/// path traverses the same image over [0, factor·(n−1)].
PiecewiseLinearPath time_dilate(const PiecewiseLinearPath& path, std::size_t factor);

/// Path that follows `first` and then the increments of `second`.
PiecewiseLinearPath concatenate(const PiecewiseLinearPath& first, const PiecewiseLinearPath& second);

}  // namespace fracsig
