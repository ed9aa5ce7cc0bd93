#pragma once

// Hand-rolled generators for the property tests. Every test seeds its own
// engine so failures replay exactly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fracsig/path.hpp"
#include "fracsig/words.hpp"

namespace testing {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::size_t pick(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }

    std::vector<double> vec(std::size_t n, double lo = -1.0, double hi = 1.0)
    {
        std::vector<double> out(n);
        for (double& x : out) x = uniform(lo, hi);
        return out;
    }

    fracsig::PiecewiseLinearPath path(std::size_t knots, std::size_t dim, double spread = 1.0)
    {
        return fracsig::PiecewiseLinearPath(knots, dim, vec(knots * dim, -spread, spread));
    }

    fracsig::Word word(std::size_t d, std::size_t k)
    {
        fracsig::Word w;
        for (std::size_t j = 0; j < k; ++j) w.channels.push_back(static_cast<int>(pick(1, d)));
        return w;
    }

    // Random group-like element: signature of a random short path would tie
    // the test to sig_classical, so arbitrary coefficients are used instead.
    fracsig::TruncatedSignature tensor(std::size_t d, std::size_t L)
    {
        fracsig::TruncatedSignature out(d, L);
        for (std::size_t k = 1; k <= L; ++k) {
            for (double& x : out.level_values(k)) x = uniform(-1.0, 1.0);
        }
        return out;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

inline bool close(double got, double want, double tol)
{
    return std::fabs(got - want) <= tol * std::max(1.0, std::fabs(want));
}

inline double rel_err(double got, double want)
{
    return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

// Largest entry difference at each level, scaled by that level's largest
// magnitude. Long paths with large increments produce level values whose
// entries cancel heavily, so per-entry relative error is meaningless there.
inline double level_scaled_diff(const fracsig::TruncatedSignature& a, const fracsig::TruncatedSignature& b)
{
    double worst = 0.0;
    for (std::size_t k = 1; k <= a.level(); ++k) {
        const auto x = a.level_values(k), y = b.level_values(k);
        double scale = 0.0, diff = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            scale = std::max(scale, std::fabs(y[j]));
            diff = std::max(diff, std::fabs(x[j] - y[j]));
        }
        worst = std::max(worst, diff / std::max(1.0, scale));
    }
    return worst;
}

}  // namespace testing
