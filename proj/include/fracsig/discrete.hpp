#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "fracsig/alpha.hpp"
#include "fracsig/path.hpp"
#include "fracsig/words.hpp"

namespace fracsig::discrete {

/// Exact dyadic rational m·2^{−e}, used to key horizons in the memo table.
/// Every double is such a number, and split horizons (b+h)/2 stay dyadic.
class Horizon {
public:
    static Horizon from_double(double value);
    static Horizon half_sum(std::int64_t b, std::int64_t h);  // (b + h) / 2

    double value() const;
    bool operator==(const Horizon&) const = default;
    std::size_t hash() const;

private:
    Horizon(std::int64_t mantissa, int exponent);
    std::int64_t mantissa_ = 0;  // odd unless zero
    int exponent_ = 0;           // value = mantissa · 2^{−exponent}
};

/// Level-k coefficient of the base case on [a, a+1] at horizon d:
///   ((d−a)^α)^k β_{1/(d−a)}((k−1)α+1, α) / (Γ(α) Γ(1+(k−1)α)).
/// Multiplying by ΠΔ_{i_j} gives the word value.
double base_case_scale(std::size_t a, double horizon, Alpha alpha, std::size_t k);

/// Base case for one word on segment [a, a+1].
double base_case(const PiecewiseLinearPath& path, std::size_t a, double horizon, const Word& word, Alpha alpha);

struct DiscreteOptions {
    bool memoize = true;
};

/// Counters from one recursion, for tests and diagnostics.
struct DiscreteStats {
    std::size_t calls = 0;        // recursion entries, memo hits included
    std::size_t evaluations = 0;  // subproblems actually computed
};

/// Horizon-decorated signature over [a, b] (integers, horizon ≥ b). Splits at
/// h = ⌈(a+b)/2⌉ and combines, per word, the full left term at the outer
/// horizon, the mixed left factors at horizon u = (b+h)/2, and the right
/// factors at the outer horizon.
TruncatedSignature discrete_signature_interval(const PiecewiseLinearPath& path, std::size_t a, std::size_t b,
                                               double horizon, Alpha alpha, std::size_t L,
                                               const DiscreteOptions& options = {}, DiscreteStats* stats = nullptr);

/// Whole path: interval [0, n−1] at horizon n−1.
TruncatedSignature discrete_signature(const PiecewiseLinearPath& path, Alpha alpha, std::size_t L,
                                      const DiscreteOptions& options = {}, DiscreteStats* stats = nullptr);

inline constexpr std::size_t simplex_oracle_budget = 400'000'000;

/// Independent check of base_case: the weighted simplex integral
///   ΠΔ / Γ(α)^k ∫_{a<t₁<…<t_k<a+1} (d−t_k)^{α−1} Π_j (t_{j+1}−t_j)^{α−1} dt
/// by nested Riemann–Stieltjes sums on grid_N uniform cells (left-point
/// integrand values, exact kernel mass per cell). First-order accurate; words up to length 3.
double base_case_simplex_oracle(const PiecewiseLinearPath& path, std::size_t a, double horizon, const Word& word,
                                Alpha alpha, std::size_t grid_N);

}  // namespace fracsig::discrete

template <>
struct std::hash<fracsig::discrete::Horizon> {
    std::size_t operator()(const fracsig::discrete::Horizon& h) const noexcept { return h.hash(); }
};
