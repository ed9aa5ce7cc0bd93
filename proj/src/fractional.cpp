#include "fracsig/fractional.hpp"

#include <cmath>
#include <sstream>

#include "fracsig/errors.hpp"
#include "fracsig/specfun.hpp"

namespace fracsig::fractional {

double linear_closed_form(std::span<const double> delta, Alpha alpha, double a, double b, const Word& word)
{
    if (!(b > a)) throw DomainError("linear_closed_form requires b > a");
    word_index(word, delta.size());
    const std::size_t k = word.length();
    if (k == 0) return 1.0;
    double prod = 1.0;
    for (int c : word.channels) prod *= delta[static_cast<std::size_t>(c - 1)];
    const double kk = static_cast<double>(k);
    const double lower = (kk - 1.0) * alpha;
    return prod / (specfun::gamma(alpha) * specfun::gamma(1.0 + lower)) *
           std::pow(b - a, (alpha - 1.0) * kk) * specfun::beta(lower + 1.0, alpha);
}

ReparametrizationPair reparametrization_counterexample(Alpha alpha)
{
    const std::vector<double> unit{1.0};
    const Word first{{1}};
    return {linear_closed_form(unit, alpha, 0.0, 1.0, first), linear_closed_form(unit, alpha, 0.0, 2.0, first)};
}

std::size_t aligned_grid(std::size_t segments, std::size_t target)
{
    if (segments == 0) throw DomainError("aligned_grid needs at least one segment");
    const std::size_t per = std::max<std::size_t>(2, (target + segments - 1) / segments);
    return per * segments;
}

PrefixFunctionGrid::PrefixFunctionGrid(std::vector<double> times, std::vector<std::size_t> knot_nodes,
                                       std::size_t dim, std::vector<Eigen::MatrixXd> levels)
    : times_(std::move(times)), knot_nodes_(std::move(knot_nodes)), dim_(dim), levels_(std::move(levels))
{
    if (levels_.empty()) throw DomainError("prefix grid needs level 0");
}

TruncatedSignature PrefixFunctionGrid::at_node(std::size_t node, std::size_t level) const
{
    if (node >= times_.size()) throw DomainError("node index out of range");
    if (level == 0 || level > this->level()) throw DomainError("requested level outside the stored range");
    TruncatedSignature sig(dim_, level);
    for (std::size_t k = 1; k <= level; ++k) {
        const auto& m = levels_[k];
        Eigen::Index row = static_cast<Eigen::Index>(node);
        if (static_cast<std::size_t>(m.rows()) != times_.size()) {
            if (node + 1 != times_.size()) throw DomainError("top level holds the endpoint only");
            row = m.rows() - 1;
        }
        auto dst = sig.level_values(k);
        for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = m(row, static_cast<Eigen::Index>(j));
    }
    return sig;
}

TruncatedSignature PrefixFunctionGrid::at_end() const { return at_node(times_.size() - 1); }

quadrature::ProductIntegrator make_integrator(const PiecewiseLinearPath& path, Alpha alpha, std::size_t grid_N)
{
    if (grid_N < 2 * path.segment_count()) {
        std::ostringstream os;
        os << "grid_N = " << grid_N << " is below 2(n-1) = " << 2 * path.segment_count();
        throw DomainError(os.str());
    }
    quadrature::GradedMesh mesh(path.segment_count(), grid_N, quadrature::default_grading(alpha));
    return quadrature::ProductIntegrator(std::move(mesh), alpha);
}

namespace {

// Level-by-level sweep F_{J·i}(t) = I^α[F_J · Ẋ^i](t). When `endpoint_only`
// is set the top level is evaluated at the final node alone.
PrefixFunctionGrid sweep(const PiecewiseLinearPath& path, const quadrature::ProductIntegrator& integrator,
                         std::size_t L, bool endpoint_only)
{
    if (L == 0) throw DomainError("truncation level must be at least 1");
    const auto& mesh = integrator.mesh();
    if (mesh.segments() != path.segment_count()) {
        throw DomainError("quadrature mesh does not match the path's segments");
    }
    const std::size_t d = path.dim();
    const std::size_t nodes = mesh.node_count();
    const std::size_t per = mesh.spacings_per_segment();

    std::vector<std::vector<double>> slopes(path.segment_count());
    for (std::size_t s = 0; s < path.segment_count(); ++s) slopes[s] = path.segment_slope(s);

    std::vector<Eigen::MatrixXd> levels;
    levels.reserve(L + 1);
    levels.push_back(Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(nodes), 1));

    const std::vector<std::size_t> last_row{nodes - 1};
    for (std::size_t k = 1; k <= L; ++k) {
        const Eigen::MatrixXd& prev = levels.back();
        const bool top_only = endpoint_only && k == L;
        const auto rows_out = static_cast<Eigen::Index>(top_only ? 1 : nodes);
        const auto words_prev = prev.cols();
        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(rows_out, words_prev * static_cast<Eigen::Index>(d));
        Eigen::MatrixXd source(static_cast<Eigen::Index>(mesh.source_count()), words_prev);

        for (std::size_t i = 0; i < d; ++i) {
            bool any = false;
            for (std::size_t s = 0; s < slopes.size(); ++s) {
                const double c = slopes[s][i];
                any = any || c != 0.0;
                for (std::size_t l = 0; l <= per; ++l) {
                    const std::size_t node = s * per + l;
                    source.row(static_cast<Eigen::Index>(mesh.source_column(s, node))) =
                        c * prev.row(static_cast<Eigen::Index>(node));
                }
            }
            if (!any) continue;
            const Eigen::MatrixXd integrated = top_only ? integrator.apply(last_row, source) : integrator.apply(source);
            for (Eigen::Index j = 0; j < words_prev; ++j) {
                next.col(j * static_cast<Eigen::Index>(d) + static_cast<Eigen::Index>(i)) = integrated.col(j);
            }
        }
        levels.push_back(std::move(next));
    }
    std::vector<double> times(mesh.times().begin(), mesh.times().end());
    return PrefixFunctionGrid(std::move(times), mesh.knot_nodes(), d, std::move(levels));
}

}  // namespace

PrefixFunctionGrid fractional_signature_grid(const PiecewiseLinearPath& path,
                                             const quadrature::ProductIntegrator& integrator, std::size_t L)
{
    return sweep(path, integrator, L, false);
}

PrefixFunctionGrid fractional_signature_grid(const PiecewiseLinearPath& path, Alpha alpha, std::size_t L,
                                             std::size_t grid_N)
{
    return sweep(path, make_integrator(path, alpha, grid_N), L, false);
}

TruncatedSignature fractional_signature(const PiecewiseLinearPath& path,
                                        const quadrature::ProductIntegrator& integrator, std::size_t L)
{
    return sweep(path, integrator, L, true).at_end();
}

TruncatedSignature fractional_signature(const PiecewiseLinearPath& path, Alpha alpha, std::size_t L,
                                        std::size_t grid_N)
{
    return fractional_signature(path, make_integrator(path, alpha, grid_N), L);
}

}  // namespace fracsig::fractional
