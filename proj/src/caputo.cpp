#include "fracsig/caputo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fracsig/errors.hpp"
#include "fracsig/fractional.hpp"

namespace fracsig::caputo {

LinearVectorField::LinearVectorField(std::size_t e, std::size_t d, std::vector<double> entries)
    : e_(e), d_(d), v_(std::move(entries))
{
    if (e == 0 || d == 0) throw DomainError("vector field dimensions must be positive");
    if (v_.size() != e * d * e) throw DomainError("vector field tensor must hold e*d*e entries");
    for (double x : v_) {
        if (!std::isfinite(x)) throw DomainError("vector field entries must be finite");
    }
}

Eigen::MatrixXd LinearVectorField::operator()(std::span<const double> y) const
{
    if (y.size() != e_) throw DomainError("state vector dimension mismatch");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(e_), static_cast<Eigen::Index>(d_));
    for (std::size_t q = 0; q < e_; ++q) {
        for (std::size_t i = 0; i < d_; ++i) {
            double acc = 0.0;
            for (std::size_t p = 0; p < e_; ++p) acc += entry(q, i, p) * y[p];
            out(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(i)) = acc;
        }
    }
    return out;
}

PicardIterates picard_iterates(const LinearVectorField& field, const PiecewiseLinearPath& path,
                               std::span<const double> y0, const quadrature::ProductIntegrator& integrator,
                               std::size_t n_iter)
{
    const double alpha = integrator.alpha();
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("Caputo problems need 0 < alpha <= 1");
    if (field.driver_dim() != path.dim()) throw DomainError("vector field and path dimensions differ");
    if (y0.size() != field.state_dim()) throw DomainError("initial condition dimension mismatch");
    const auto& mesh = integrator.mesh();
    if (mesh.segments() != path.segment_count()) throw DomainError("quadrature mesh does not match the path");

    const std::size_t e = field.state_dim();
    const std::size_t d = path.dim();
    const auto nodes = static_cast<Eigen::Index>(mesh.node_count());
    const std::size_t per = mesh.spacings_per_segment();

    Eigen::RowVectorXd start(static_cast<Eigen::Index>(e));
    for (std::size_t q = 0; q < e; ++q) start[static_cast<Eigen::Index>(q)] = y0[q];

    // Drift matrices A_s = Σ_i c_s^i V[·][i][·]: on segment s, V(y)·Ẋ = A_s y.
    std::vector<Eigen::MatrixXd> drift(path.segment_count(),
                                       Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(e)));
    for (std::size_t s = 0; s < path.segment_count(); ++s) {
        const auto c = path.segment_slope(s);
        for (std::size_t q = 0; q < e; ++q) {
            for (std::size_t p = 0; p < e; ++p) {
                double acc = 0.0;
                for (std::size_t i = 0; i < d; ++i) acc += field.entry(q, i, p) * c[i];
                drift[s](static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(p)) = acc;
            }
        }
    }

    PicardIterates out;
    out.times.assign(mesh.times().begin(), mesh.times().end());
    out.knot_nodes = mesh.knot_nodes();
    out.iterates.push_back(start.replicate(nodes, 1));

    Eigen::MatrixXd source(static_cast<Eigen::Index>(mesh.source_count()), static_cast<Eigen::Index>(e));
    for (std::size_t n = 1; n <= n_iter; ++n) {
        const Eigen::MatrixXd& prev = out.iterates.back();
        for (std::size_t s = 0; s < path.segment_count(); ++s) {
            for (std::size_t l = 0; l <= per; ++l) {
                const std::size_t node = s * per + l;
                source.row(static_cast<Eigen::Index>(mesh.source_column(s, node))) =
                    (drift[s] * prev.row(static_cast<Eigen::Index>(node)).transpose()).transpose();
            }
        }
        Eigen::MatrixXd next = integrator.apply(source);
        next.rowwise() += start;
        const double change = (next - prev).cwiseAbs().maxCoeff();
        const double scale = std::max(1.0, next.cwiseAbs().maxCoeff());
        out.iterates.push_back(std::move(next));
        if (change < 1e-14 * scale) {
            out.stagnated = true;
            break;
        }
    }
    return out;
}

PicardIterates picard_iterates(const LinearVectorField& field, const PiecewiseLinearPath& path,
                               std::span<const double> y0, Alpha alpha, std::size_t n_iter, std::size_t grid_N)
{
    if (!(alpha.value() <= 1.0)) throw DomainError("Caputo problems need 0 < alpha <= 1");
    return picard_iterates(field, path, y0, fractional::make_integrator(path, alpha, grid_N), n_iter);
}

ExpansionCoefficients::ExpansionCoefficients(std::size_t e, std::size_t d, std::size_t level)
    : e_(e), d_(d), level_(level)
{
    if (e == 0 || d == 0) throw DomainError("expansion dimensions must be positive");
    std::size_t words = 0;
    for (std::size_t k = 0; k <= level; ++k) {
        level_start_.push_back(words);
        words += ipow(d, k);
    }
    values_.assign(words * e, 0.0);
}

std::size_t ExpansionCoefficients::slot(std::size_t level, std::size_t offset) const
{
    if (level > level_) throw DomainError("word longer than the expansion level");
    return (level_start_[level] + offset) * e_;
}

std::span<const double> ExpansionCoefficients::coefficient(std::size_t level, std::size_t offset) const
{
    return std::span<const double>(values_).subspan(slot(level, offset), e_);
}

std::span<const double> ExpansionCoefficients::coefficient(const Word& word) const
{
    const auto idx = word_index(word, d_);
    return coefficient(idx.level, idx.offset);
}

std::span<double> ExpansionCoefficients::coefficient(const Word& word)
{
    const auto idx = word_index(word, d_);
    return std::span<double>(values_).subspan(slot(idx.level, idx.offset), e_);
}

ExpansionCoefficients expansion_coefficients(const LinearVectorField& field, std::span<const double> y0,
                                             std::size_t level, std::size_t d)
{
    if (field.driver_dim() != d) throw DomainError("vector field and driver dimensions differ");
    if (y0.size() != field.state_dim()) throw DomainError("initial condition dimension mismatch");
    const std::size_t e = field.state_dim();
    ExpansionCoefficients out(e, d, level);
    std::copy(y0.begin(), y0.end(), out.coefficient(Word{}).begin());
    for (std::size_t k = 1; k <= level; ++k) {
        const std::size_t parents = ipow(d, k - 1);
        for (std::size_t off = 0; off < parents; ++off) {
            const Word parent = word_at(d, k - 1, off);
            const auto c = out.coefficient(k - 1, off);
            const Eigen::MatrixXd image = field(c);
            for (std::size_t i = 0; i < d; ++i) {
                Word child = parent;
                child.channels.push_back(static_cast<int>(i + 1));
                auto dst = out.coefficient(child);
                for (std::size_t q = 0; q < e; ++q) {
                    dst[q] = image(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(i));
                }
            }
        }
    }
    return out;
}

std::vector<double> evaluate_expansion(const ExpansionCoefficients& coeffs, const TruncatedSignature& signature)
{
    if (signature.dim() != coeffs.driver_dim() || signature.level() < coeffs.level()) {
        std::ostringstream os;
        os << "signature (d=" << signature.dim() << ", L=" << signature.level()
           << ") does not cover expansion (d=" << coeffs.driver_dim() << ", L=" << coeffs.level() << ")";
        throw DomainError(os.str());
    }
    std::vector<double> out(coeffs.state_dim(), 0.0);
    for (std::size_t k = 0; k <= coeffs.level(); ++k) {
        const auto values = signature.level_values(k);
        for (std::size_t off = 0; off < values.size(); ++off) {
            const auto c = coeffs.coefficient(k, off);
            for (std::size_t q = 0; q < out.size(); ++q) out[q] += c[q] * values[off];
        }
    }
    return out;
}

std::vector<BatteryRow> expansion_battery(const BatteryOptions& options)
{
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_int_distribution<std::size_t> dim_pick(1, 3);
    std::uniform_int_distribution<std::size_t> knot_pick(2, 4);

    std::vector<BatteryRow> rows;
    std::size_t case_id = 0;
    for (double alpha : options.alphas) {
        for (std::size_t c = 0; c < options.cases_per_alpha; ++c, ++case_id) {
            const std::size_t e = dim_pick(rng);
            const std::size_t d = dim_pick(rng);
            const std::size_t n = knot_pick(rng);

            std::vector<double> entries(e * d * e);
            for (double& x : entries) x = unit(rng);
            std::vector<double> knots(n * d);
            for (double& x : knots) x = unit(rng);
            std::vector<double> y0(e);
            for (double& x : y0) x = unit(rng);

            const LinearVectorField field(e, d, std::move(entries));
            const PiecewiseLinearPath path(n, d, std::move(knots));
            const auto integrator =
                fractional::make_integrator(path, Alpha(alpha), fractional::aligned_grid(n - 1, options.grid_N));

            const auto picard = picard_iterates(field, path, y0, integrator, options.max_iterate);
            const auto grid = fractional::fractional_signature_grid(path, integrator, std::max<std::size_t>(1, options.max_iterate));

            for (std::size_t it = 0; it < picard.iterates.size(); ++it) {
                const auto coeffs = expansion_coefficients(field, y0, it, d);
                double worst = 0.0;
                for (std::size_t node : picard.knot_nodes) {
                    std::vector<double> expected;
                    if (it == 0) {
                        expected = y0;
                    } else {
                        expected = evaluate_expansion(coeffs, grid.at_node(node, it));
                    }
                    double diff = 0.0;
                    double mag = 0.0;
                    for (std::size_t q = 0; q < e; ++q) {
                        const double got = picard.iterates[it](static_cast<Eigen::Index>(node), static_cast<Eigen::Index>(q));
                        diff = std::max(diff, std::fabs(got - expected[q]));
                        mag = std::max(mag, std::fabs(expected[q]));
                    }
                    worst = std::max(worst, diff / std::max(mag, 1e-12));
                }
                rows.push_back(BatteryRow{case_id, alpha, e, d, n, it, worst});
            }
        }
    }
    return rows;
}

double scalar_exponential_error(std::size_t n_iter, std::size_t grid_N)
{
    const LinearVectorField field(1, 1, {1.0});
    const PiecewiseLinearPath path(2, 1, {0.0, 1.0});
    const std::vector<double> y0{1.0};
    const auto picard = picard_iterates(field, path, y0, Alpha(1.0), n_iter, grid_N);
    const auto& last = picard.iterates.back();
    return std::fabs(last(last.rows() - 1, 0) - std::exp(1.0));
}

}  // namespace fracsig::caputo
