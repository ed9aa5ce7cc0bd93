#include "fracsig/classical.hpp"

#include <vector>

#include "fracsig/errors.hpp"

namespace fracsig::classical {

TruncatedSignature segment_signature(std::span<const double> delta, std::size_t L)
{
    const std::size_t d = delta.size();
    TruncatedSignature out(d, L);
    for (std::size_t k = 1; k <= L; ++k) {
        const auto prev = out.level_values(k - 1);
        auto cur = out.level_values(k);
        const double inv_k = 1.0 / static_cast<double>(k);
        for (std::size_t p = 0; p < prev.size(); ++p) {
            for (std::size_t i = 0; i < d; ++i) cur[p * d + i] = prev[p] * delta[i] * inv_k;
        }
    }
    return out;
}

TruncatedSignature signature(const PiecewiseLinearPath& path, std::size_t L)
{
    if (L == 0) throw DomainError("truncation level must be at least 1");
    TruncatedSignature acc(path.dim(), L);
    for (std::size_t s = 0; s < path.segment_count(); ++s) {
        const auto delta = path.segment_slope(s);
        acc = chen_product(acc, segment_signature(delta, L));
    }
    return acc;
}

double brute_force_iterated_integral(const PiecewiseLinearPath& path, const Word& word, std::size_t grid_N)
{
    if (grid_N < 2) throw DomainError("oracle grid needs at least two cells");
    word_index(word, path.dim());  // validates channels
    const std::size_t k = word.length();
    if (k == 0) return 1.0;
    if (k * grid_N > oracle_budget) throw BudgetError("iterated-integral oracle budget exceeded");

    // Increments of X over each grid cell.
    const double T = path.end_time();
    std::vector<std::vector<double>> increments(path.dim(), std::vector<double>(grid_N));
    auto prev = path.evaluate(0.0);
    for (std::size_t m = 0; m < grid_N; ++m) {
        const double t = (m + 1 == grid_N) ? T : T * static_cast<double>(m + 1) / static_cast<double>(grid_N);
        auto cur = path.evaluate(t);
        for (std::size_t j = 0; j < path.dim(); ++j) increments[j][m] = cur[j] - prev[j];
        prev = std::move(cur);
    }

    // inner[m] = value of the prefix integral over cells strictly before m.
    std::vector<double> inner(grid_N, 1.0);
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        const auto& dx = increments[static_cast<std::size_t>(word.channels[j] - 1)];
        double running = 0.0;
        for (std::size_t m = 0; m < grid_N; ++m) {
            const double before = running;
            running += inner[m] * dx[m];
            inner[m] = before;
        }
        total = running;
    }
    return total;
}

}  // namespace fracsig::classical
