#include "fracsig/path.hpp"

#include <cmath>
#include <sstream>

#include "fracsig/errors.hpp"

namespace fracsig {

PiecewiseLinearPath::PiecewiseLinearPath(std::size_t knots, std::size_t dim, std::vector<double> values)
    : knots_(knots), dim_(dim), values_(std::move(values))
{
    if (knots < 2) throw DomainError("a piecewise-linear path needs at least two knots");
    if (dim == 0) throw DomainError("path dimension must be positive");
    if (values_.size() != knots * dim) {
        std::ostringstream os;
        os << "knot matrix has " << values_.size() << " values, expected " << knots << "x" << dim;
        throw DomainError(os.str());
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw DomainError("path knots must be finite");
    }
}

PiecewiseLinearPath PiecewiseLinearPath::from_rows(const std::vector<std::vector<double>>& rows)
{
    if (rows.empty()) throw DomainError("a piecewise-linear path needs at least two knots");
    const std::size_t dim = rows.front().size();
    std::vector<double> values;
    values.reserve(rows.size() * dim);
    for (const auto& r : rows) {
        if (r.size() != dim) throw DomainError("ragged knot rows");
        values.insert(values.end(), r.begin(), r.end());
    }
    return PiecewiseLinearPath(rows.size(), dim, std::move(values));
}

std::span<const double> PiecewiseLinearPath::knot(std::size_t i) const
{
    if (i >= knots_) throw DomainError("knot index out of range");
    return std::span<const double>(values_).subspan(i * dim_, dim_);
}

std::vector<double> PiecewiseLinearPath::evaluate(double t) const
{
    if (!(t >= 0.0 && t <= end_time())) {
        std::ostringstream os;
        os << "time " << t << " outside path domain [0, " << end_time() << "]";
        throw DomainError(os.str());
    }
    auto i = static_cast<std::size_t>(std::floor(t));
    if (i == knots_ - 1) {
        const auto k = knot(i);
        return {k.begin(), k.end()};
    }
    const double w = t - static_cast<double>(i);
    std::vector<double> out(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
        out[j] = w == 0.0 ? at(i, j) : at(i, j) * (1.0 - w) + at(i + 1, j) * w;
    }
    return out;
}

std::vector<double> PiecewiseLinearPath::segment_slope(std::size_t i) const
{
    if (i + 1 >= knots_) throw DomainError("segment index out of range");
    std::vector<double> out(dim_);
    for (std::size_t j = 0; j < dim_; ++j) out[j] = at(i + 1, j) - at(i, j);
    return out;
}

PiecewiseLinearPath PiecewiseLinearPath::restrict(std::size_t a, std::size_t b) const
{
    if (!(a < b && b < knots_)) throw DomainError("restrict requires 0 <= a < b <= n-1");
    std::vector<double> v(values_.begin() + static_cast<std::ptrdiff_t>(a * dim_),
                          values_.begin() + static_cast<std::ptrdiff_t>((b + 1) * dim_));
    return PiecewiseLinearPath(b - a + 1, dim_, std::move(v));
}

PiecewiseLinearPath translate(const PiecewiseLinearPath& path, std::span<const double> shift)
{
    if (shift.size() != path.dim()) throw DomainError("translation vector dimension mismatch");
    std::vector<double> v(path.values().begin(), path.values().end());
    for (std::size_t i = 0; i < path.knot_count(); ++i) {
        for (std::size_t j = 0; j < path.dim(); ++j) v[i * path.dim() + j] += shift[j];
    }
    return PiecewiseLinearPath(path.knot_count(), path.dim(), std::move(v));
}

PiecewiseLinearPath time_dilate(const PiecewiseLinearPath& path, std::size_t factor)
{
    if (factor == 0) throw DomainError("dilation factor must be at least 1");
    const std::size_t d = path.dim();
    const std::size_t n_out = factor * path.segment_count() + 1;
    std::vector<double> v;
    v.reserve(n_out * d);
    for (std::size_t i = 0; i < path.segment_count(); ++i) {
        for (std::size_t s = 0; s < factor; ++s) {
            const double w = static_cast<double>(s) / static_cast<double>(factor);
            for (std::size_t j = 0; j < d; ++j) {
                v.push_back(s == 0 ? path.at(i, j) : path.at(i, j) * (1.0 - w) + path.at(i + 1, j) * w);
            }
        }
    }
    const auto last = path.knot(path.knot_count() - 1);
    v.insert(v.end(), last.begin(), last.end());
    return PiecewiseLinearPath(n_out, d, std::move(v));
}

PiecewiseLinearPath concatenate(const PiecewiseLinearPath& first, const PiecewiseLinearPath& second)
{
    if (first.dim() != second.dim()) throw DomainError("concatenate: dimension mismatch");
    const std::size_t d = first.dim();
    std::vector<double> v(first.values().begin(), first.values().end());
    const auto end = first.knot(first.knot_count() - 1);
    const auto start = second.knot(0);
    for (std::size_t i = 1; i < second.knot_count(); ++i) {
        for (std::size_t j = 0; j < d; ++j) v.push_back(end[j] + (second.at(i, j) - start[j]));
    }
    return PiecewiseLinearPath(first.knot_count() + second.knot_count() - 1, d, std::move(v));
}

}  // namespace fracsig
