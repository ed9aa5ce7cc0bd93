#include "fracsig/discrete.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "fracsig/errors.hpp"
#include "fracsig/specfun.hpp"

namespace fracsig::discrete {

Horizon::Horizon(std::int64_t mantissa, int exponent) : mantissa_(mantissa), exponent_(exponent)
{
    if (mantissa_ == 0) {
        exponent_ = 0;
        return;
    }
    while ((mantissa_ & 1) == 0) {
        mantissa_ /= 2;
        --exponent_;
    }
}

Horizon Horizon::from_double(double value)
{
    if (!std::isfinite(value)) throw DomainError("horizon must be finite");
    int exp2 = 0;
    const double frac = std::frexp(value, &exp2);  // value = frac · 2^exp2, |frac| in [0.5, 1)
    const auto mantissa = static_cast<std::int64_t>(std::ldexp(frac, 53));
    return Horizon(mantissa, 53 - exp2);
}

Horizon Horizon::half_sum(std::int64_t b, std::int64_t h) { return Horizon(b + h, 1); }

double Horizon::value() const { return std::ldexp(static_cast<double>(mantissa_), -exponent_); }

std::size_t Horizon::hash() const
{
    return std::hash<std::int64_t>{}(mantissa_) ^ (std::hash<int>{}(exponent_) * 0x9e3779b97f4a7c15ULL);
}

double base_case_scale(std::size_t a, double horizon, Alpha alpha, std::size_t k)
{
    const double lead = horizon - static_cast<double>(a);
    if (!(lead >= 1.0)) {
        std::ostringstream os;
        os << "horizon " << horizon << " is below the segment end " << a + 1;
        throw DomainError(os.str());
    }
    if (k == 0) return 1.0;
    const double kk = static_cast<double>(k);
    const double lower = (kk - 1.0) * alpha;
    // (b − a) = 1 in both the power and the incomplete-beta limit.
    return std::pow(lead, alpha * kk) * specfun::incomplete_beta(1.0 / lead, lower + 1.0, alpha) /
           (specfun::gamma(alpha) * specfun::gamma(1.0 + lower));
}

double base_case(const PiecewiseLinearPath& path, std::size_t a, double horizon, const Word& word, Alpha alpha)
{
    if (a + 1 >= path.knot_count()) throw DomainError("base case segment outside the path");
    word_index(word, path.dim());
    double prod = 1.0;
    for (int c : word.channels) {
        const auto j = static_cast<std::size_t>(c - 1);
        prod *= path.at(a + 1, j) - path.at(a, j);
    }
    return prod * base_case_scale(a, horizon, alpha, word.length());
}

namespace {

struct Key {
    std::size_t a;
    std::size_t b;
    Horizon horizon;
    bool operator==(const Key&) const = default;
};

struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept
    {
        std::size_t h = k.horizon.hash();
        h ^= std::hash<std::size_t>{}(k.a) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= std::hash<std::size_t>{}(k.b) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

class Solver {
public:
    Solver(const PiecewiseLinearPath& path, Alpha alpha, std::size_t L, bool memoize, DiscreteStats* stats)
        : path_(path), alpha_(alpha), level_(L), memoize_(memoize), stats_(stats)
    {
        // δ^{⊗k} per segment, shared by every horizon.
        powers_.reserve(path.segment_count());
        for (std::size_t s = 0; s < path.segment_count(); ++s) {
            const auto delta = path.segment_slope(s);
            TruncatedSignature p(path.dim(), L);
            for (std::size_t k = 1; k <= L; ++k) {
                const auto prev = p.level_values(k - 1);
                auto cur = p.level_values(k);
                for (std::size_t q = 0; q < prev.size(); ++q) {
                    for (std::size_t i = 0; i < delta.size(); ++i) cur[q * delta.size() + i] = prev[q] * delta[i];
                }
            }
            powers_.push_back(std::move(p));
        }
    }

    TruncatedSignature solve(std::size_t a, std::size_t b, const Horizon& horizon)
    {
        if (memoize_ && pending_.empty()) plan(Key{a, b, horizon});
        return fetch(a, b, horizon);
    }

private:
    // Counts how many distinct parents will ask for each subproblem, so an
    // entry can leave the memo after its last use. At L = 7 each entry holds
    // 3280 coefficients and a digit spawns thousands of them.
    void plan(const Key& root)
    {
        std::vector<Key> stack{root};
        ++pending_[root];
        while (!stack.empty()) {
            const Key k = stack.back();
            stack.pop_back();
            if (k.b == k.a + 1) continue;
            const std::size_t h = (k.a + k.b + 1) / 2;
            const Horizon mixed = Horizon::half_sum(static_cast<std::int64_t>(k.b), static_cast<std::int64_t>(h));
            for (const Key& child : {Key{k.a, h, k.horizon}, Key{k.a, h, mixed}, Key{h, k.b, k.horizon}}) {
                if (pending_[child]++ == 0) stack.push_back(child);
            }
        }
    }

    TruncatedSignature fetch(std::size_t a, std::size_t b, const Horizon& horizon)
    {
        if (stats_) ++stats_->calls;
        if (!memoize_) {
            if (stats_) ++stats_->evaluations;
            return compute(a, b, horizon);
        }
        const Key key{a, b, horizon};
        const auto uses = pending_.find(key);
        const bool last_use = --uses->second == 0;
        if (auto it = memo_.find(key); it != memo_.end()) {
            if (!last_use) return it->second;
            TruncatedSignature value = std::move(it->second);
            memo_.erase(it);
            return value;
        }
        TruncatedSignature value = compute(a, b, horizon);
        if (stats_) ++stats_->evaluations;
        if (!last_use) memo_.emplace(key, value);
        return value;
    }

    TruncatedSignature compute(std::size_t a, std::size_t b, const Horizon& horizon)
    {
        if (b == a + 1) return base(a, horizon.value());

        const std::size_t h = (a + b + 1) / 2;
        const Horizon mixed = Horizon::half_sum(static_cast<std::int64_t>(b), static_cast<std::int64_t>(h));
        const TruncatedSignature left_d = fetch(a, h, horizon);
        const TruncatedSignature left_u = fetch(a, h, mixed);
        const TruncatedSignature right_d = fetch(h, b, horizon);
        return merge(left_d, left_u, right_d);
    }

    TruncatedSignature base(std::size_t a, double horizon) const
    {
        TruncatedSignature out(path_.dim(), level_);
        const auto& p = powers_[a];
        for (std::size_t k = 1; k <= level_; ++k) {
            const double scale = base_case_scale(a, horizon, alpha_, k);
            const auto src = p.level_values(k);
            auto dst = out.level_values(k);
            for (std::size_t j = 0; j < src.size(); ++j) dst[j] = scale * src[j];
        }
        return out;
    }

    // value^I = left_d^I + Σ_{r=1}^{k−1} left_u^{(i₁..i_r)} right_d^{(i_{r+1}..i_k)} + right_d^I
    TruncatedSignature merge(const TruncatedSignature& left_d, const TruncatedSignature& left_u,
                             const TruncatedSignature& right_d) const
    {
        TruncatedSignature out(path_.dim(), level_);
        for (std::size_t k = 1; k <= level_; ++k) {
            auto dst = out.level_values(k);
            const auto ld = left_d.level_values(k);
            const auto rd = right_d.level_values(k);
            for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = ld[j];
            for (std::size_t r = 1; r < k; ++r) {
                const auto lhs = left_u.level_values(r);
                const auto rhs = right_d.level_values(k - r);
                const std::size_t stride = rhs.size();
                for (std::size_t p = 0; p < lhs.size(); ++p) {
                    double* row = dst.data() + p * stride;
                    for (std::size_t q = 0; q < stride; ++q) row[q] += lhs[p] * rhs[q];
                }
            }
            for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += rd[j];
        }
        return out;
    }

    const PiecewiseLinearPath& path_;
    Alpha alpha_;
    std::size_t level_;
    bool memoize_;
    DiscreteStats* stats_;
    std::vector<TruncatedSignature> powers_;
    std::unordered_map<Key, TruncatedSignature, KeyHash> memo_;
    std::unordered_map<Key, std::size_t, KeyHash> pending_;
};

}  // namespace

TruncatedSignature discrete_signature_interval(const PiecewiseLinearPath& path, std::size_t a, std::size_t b,
                                               double horizon, Alpha alpha, std::size_t L,
                                               const DiscreteOptions& options, DiscreteStats* stats)
{
    if (L == 0) throw DomainError("truncation level must be at least 1");
    if (!(a < b && b < path.knot_count())) {
        std::ostringstream os;
        os << "interval [" << a << ", " << b << "] invalid for a path with " << path.knot_count() << " knots";
        throw DomainError(os.str());
    }
    if (!(horizon >= static_cast<double>(b))) {
        std::ostringstream os;
        os << "horizon " << horizon << " is below the interval end " << b;
        throw DomainError(os.str());
    }
    Solver solver(path, alpha, L, options.memoize, stats);
    return solver.solve(a, b, Horizon::from_double(horizon));
}

TruncatedSignature discrete_signature(const PiecewiseLinearPath& path, Alpha alpha, std::size_t L,
                                      const DiscreteOptions& options, DiscreteStats* stats)
{
    const std::size_t last = path.knot_count() - 1;
    return discrete_signature_interval(path, 0, last, static_cast<double>(last), alpha, L, options, stats);
}

double base_case_simplex_oracle(const PiecewiseLinearPath& path, std::size_t a, double horizon, const Word& word,
                                Alpha alpha, std::size_t grid_N)
{
    if (a + 1 >= path.knot_count()) throw DomainError("base case segment outside the path");
    if (!(horizon >= static_cast<double>(a + 1))) throw DomainError("horizon below the segment end");
    if (grid_N < 2) throw DomainError("oracle grid needs at least two cells");
    word_index(word, path.dim());
    const std::size_t k = word.length();
    if (k == 0) return 1.0;
    if (k > 3) throw DomainError("simplex oracle is limited to words of length 3");
    if (k * grid_N * grid_N > simplex_oracle_budget) throw BudgetError("simplex oracle budget exceeded");

    const double h = 1.0 / static_cast<double>(grid_N);
    const double lead = horizon - static_cast<double>(a);  // horizon measured from a

    // Kernel mass of (t − s)^{α−1} over a cell whose right edge lies p cells
    // before t: h^α ((p+1)^α − p^α) / α.
    std::vector<double> mass(grid_N);
    const double h_alpha = std::pow(h, alpha);
    for (std::size_t p = 0; p < grid_N; ++p) {
        const double pp = static_cast<double>(p);
        mass[p] = h_alpha * (std::pow(pp + 1.0, alpha) - std::pow(pp, alpha)) / alpha;
    }

    // phi[m] = inner integral evaluated at the left edge of cell m.
    std::vector<double> phi(grid_N, 1.0);
    std::vector<double> next(grid_N);
    for (std::size_t j = 1; j < k; ++j) {
        for (std::size_t m = 0; m < grid_N; ++m) {
            double acc = 0.0;
            for (std::size_t q = 0; q < m; ++q) acc += phi[q] * mass[m - 1 - q];
            next[m] = acc;
        }
        std::swap(phi, next);
    }
    double total = 0.0;
    for (std::size_t q = 0; q < grid_N; ++q) {
        const double x0 = static_cast<double>(q) * h;
        const double x1 = q + 1 == grid_N ? 1.0 : static_cast<double>(q + 1) * h;
        total += phi[q] * (std::pow(lead - x0, alpha) - std::pow(lead - x1, alpha)) / alpha;
    }

    double prod = 1.0;
    for (int c : word.channels) {
        const auto i = static_cast<std::size_t>(c - 1);
        prod *= path.at(a + 1, i) - path.at(a, i);
    }
    return prod * total / std::pow(specfun::gamma(alpha), static_cast<double>(k));
}

}  // namespace fracsig::discrete
