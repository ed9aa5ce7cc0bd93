#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fracsig/classical.hpp"
#include "fracsig/errors.hpp"
#include "fracsig/fractional.hpp"
#include "support.hpp"

using namespace fracsig;
using namespace fracsig::fractional;

namespace {

// Simplified single-segment form ΠΔ (b−a)^{(α−1)k} / Γ(1+kα), independent of the beta evaluation.
double simplified(std::span<const double> delta, double alpha, double len, const Word& word)
{
    double prod = 1.0;
    for (int c : word.channels) prod *= delta[static_cast<std::size_t>(c - 1)];
    const double k = static_cast<double>(word.length());
    return prod * std::pow(len, (alpha - 1.0) * k) / std::tgamma(1.0 + k * alpha);
}

}  // namespace

TEST_CASE("closed form examples")
{
    const std::vector<double> one{1.0};
    const Word w1{{1}}, w11{{1, 1}}, w111{{1, 1, 1}};
    CHECK(linear_closed_form(one, Alpha(0.5), 0.0, 1.0, w1) == doctest::Approx(2.0 / std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(linear_closed_form(one, Alpha(0.5), 0.0, 1.0, w11) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(linear_closed_form(one, Alpha(1.0), 0.0, 1.0, w111) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(linear_closed_form(one, Alpha(0.7), 0.0, 1.0, Word{}) == 1.0);
    CHECK_THROWS_AS(linear_closed_form(one, Alpha(0.5), 1.0, 1.0, w1), DomainError);
    CHECK_THROWS_AS(linear_closed_form(one, Alpha(0.5), 2.0, 1.0, w1), DomainError);
    CHECK_THROWS_AS(Alpha(0.0), DomainError);
    CHECK_THROWS_AS(Alpha(-0.5), DomainError);
}

TEST_CASE("property: closed form equals the simplified form")
{
    testing::Gen g(21);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = g.pick(1, 3), k = g.pick(1, 6);
        const double alpha = g.uniform(0.05, 3.0);
        const double a = g.uniform(-2.0, 2.0), len = g.uniform(0.1, 5.0);
        const auto delta = g.vec(d, -2.0, 2.0);
        const auto word = g.word(d, k);
        CHECK(testing::close(linear_closed_form(delta, Alpha(alpha), a, a + len, word),
                             simplified(delta, alpha, len, word), 1e-12));
    }
}

TEST_CASE("property: alpha = 1 closed form is the classical segment value")
{
    testing::Gen g(22);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t d = g.pick(1, 3), L = g.pick(1, 5);
        const auto delta = g.vec(d);
        const auto s = classical::segment_signature(delta, L);
        for (const auto& word : enumerate_words(d, L)) {
            CHECK(testing::close(linear_closed_form(delta, Alpha(1.0), 0.0, g.uniform(0.5, 3.0), word), s[word], 1e-13));
        }
    }
}

TEST_CASE("reparametrization counterexample")
{
    for (double alpha : {0.5, 1.0, 1.15, 2.0}) {
        const auto pair = reparametrization_counterexample(Alpha(alpha));
        const double g1 = std::tgamma(1.0 + alpha);
        CHECK(testing::close(pair.original, 1.0 / g1, 1e-12));
        CHECK(testing::close(pair.dilated, std::pow(2.0, alpha - 1.0) / g1, 1e-12));
        CHECK(testing::close(pair.dilated / pair.original, std::pow(2.0, alpha - 1.0), 1e-12));
        if (alpha != 1.0) CHECK(pair.original != pair.dilated);
    }
    const auto two = reparametrization_counterexample(Alpha(2.0));
    CHECK(two.original == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(two.dilated == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("aligned grid")
{
    CHECK(aligned_grid(1, 1024) == 1024);
    CHECK(aligned_grid(3, 1024) == 1026);
    CHECK(aligned_grid(15, 1024) == 1035);
    CHECK(aligned_grid(600, 1024) == 1200);
}

TEST_CASE("grid must be aligned with the knots")
{
    const auto p = PiecewiseLinearPath::from_rows({{0.0}, {1.0}, {0.5}});
    CHECK_THROWS_AS(fractional_signature(p, Alpha(0.5), 2, 101), DomainError);
    CHECK_THROWS_AS(fractional_signature(p, Alpha(0.5), 2, 2), DomainError);
    CHECK_NOTHROW(fractional_signature(p, Alpha(0.5), 2, 4));
}

TEST_CASE("unit-speed line gives t^{kα}/Γ(1+kα)")
{
    const auto p = PiecewiseLinearPath::from_rows({{0.0}, {1.0}});
    for (double alpha : {0.3, 0.5, 0.8, 1.5}) {
        const auto grid = fractional_signature_grid(p, Alpha(alpha), 4, 1024);
        for (std::size_t node = 0; node < grid.times().size(); node += 97) {
            const double t = grid.times()[node];
            for (std::size_t k = 0; k <= 4; ++k) {
                const double want = std::pow(t, k * alpha) / std::tgamma(1.0 + k * alpha);
                CHECK(testing::close(grid.level_values(k)(static_cast<Eigen::Index>(node), 0), want, 1e-8));
            }
        }
    }
}

TEST_CASE("property: single segment matches the closed form at grid 1024")
{
    testing::Gen g(23);
    for (double alpha : {0.3, 0.5, 1.0, 1.5}) {
        for (int trial = 0; trial < 4; ++trial) {
            const std::size_t d = g.pick(1, 3);
            const auto p = g.path(2, d);
            const auto delta = p.segment_slope(0);
            const auto sig = fractional_signature(p, Alpha(alpha), 4, 1024);
            for (const auto& word : enumerate_words(d, 4)) {
                const double want = simplified(delta, alpha, 1.0, word);
                CHECK(std::fabs(sig[word] - want) <= 1e-6 * std::fabs(want) + 1e-15);
            }
        }
    }
}

TEST_CASE("property: quadrature error decreases as the grid doubles")
{
    // Level-1 words are integrated exactly, so once an error reaches the
    // roundoff floor the next one only has to stay there.
    const double floor = 1e-13;
    testing::Gen g(24);
    for (double alpha : {0.3, 0.5, 1.5}) {
        const auto p = g.path(2, 2);
        const auto delta = p.segment_slope(0);
        std::vector<double> prev;
        for (std::size_t N = 64; N <= 1024; N *= 2) {
            const auto sig = fractional_signature(p, Alpha(alpha), 4, N);
            std::vector<double> errs;
            for (const auto& word : enumerate_words(2, 4)) {
                errs.push_back(testing::rel_err(sig[word], simplified(delta, alpha, 1.0, word)));
            }
            if (!prev.empty()) {
                for (std::size_t j = 0; j < errs.size(); ++j) {
                    CHECK((errs[j] < prev[j] || (errs[j] < floor && prev[j] < floor)));
                }
            }
            prev = errs;
        }
    }
}

TEST_CASE("property: alpha = 1 agrees with the classical signature")
{
    testing::Gen g(25);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = g.pick(2, 16), d = g.pick(1, 3), L = g.pick(1, 5);
        const auto p = g.path(n, d);
        const auto frac = fractional_signature(p, Alpha(1.0), L, aligned_grid(n - 1, 1024));
        CHECK(max_abs_diff(frac, classical::signature(p, L)) < 1e-8);
    }
}

TEST_CASE("property: continuity around alpha = 1")
{
    testing::Gen g(26);
    for (int trial = 0; trial < 6; ++trial) {
        const std::size_t n = g.pick(2, 6), d = g.pick(1, 3);
        const auto p = g.path(n, d);
        const auto classical = classical::signature(p, 3);
        for (double alpha : {1.0 - 1e-6, 1.0 + 1e-6}) {
            CHECK(max_abs_diff(fractional_signature(p, Alpha(alpha), 3, aligned_grid(n - 1, 256)), classical) < 1e-4);
        }
    }
}

TEST_CASE("property: translation invariance")
{
    testing::Gen g(27);
    for (int trial = 0; trial < 6; ++trial) {
        const std::size_t n = g.pick(2, 6), d = g.pick(1, 3);
        const auto p = g.path(n, d);
        const double alpha = g.uniform(0.3, 2.0);
        const auto grid = aligned_grid(n - 1, 256);
        const auto base = fractional_signature(p, Alpha(alpha), 3, grid);
        const auto moved = fractional_signature(translate(p, g.vec(d, -10.0, 10.0)), Alpha(alpha), 3, grid);
        CHECK(max_abs_diff(base, moved) < 1e-12);
    }
}

TEST_CASE("time dilation changes the fractional signature by 2^{α−1} at level 1")
{
    const auto x = PiecewiseLinearPath::from_rows({{0.0}, {1.0}});
    const auto y = time_dilate(x, 2);
    for (double alpha : {0.5, 1.15, 2.0}) {
        const double sx = fractional_signature(x, Alpha(alpha), 1, 512).level_values(1)[0];
        const double sy = fractional_signature(y, Alpha(alpha), 1, 512).level_values(1)[0];
        CHECK(testing::close(sy / sx, std::pow(2.0, alpha - 1.0), 1e-10));
    }
}

TEST_CASE("prefix grid structure")
{
    testing::Gen g(28);
    const auto p = g.path(4, 2);
    const auto grid = fractional_signature_grid(p, Alpha(1.0), 3, 96);
    CHECK(grid.level() == 3);
    CHECK(grid.level_values(0).isOnes());
    for (std::size_t j = 1; j < grid.times().size(); ++j) CHECK(grid.times()[j] > grid.times()[j - 1]);
    // At α = 1 every prefix value at a knot is the classical signature up to that knot.
    for (std::size_t k = 1; k < 4; ++k) {
        const auto at = grid.at_node(grid.knot_nodes()[k]);
        CHECK(max_abs_diff(at, classical::signature(p.restrict(0, k), 3)) < 1e-10);
    }
    CHECK(max_abs_diff(grid.at_end(), fractional_signature(p, Alpha(1.0), 3, 96)) < 1e-14);
}
