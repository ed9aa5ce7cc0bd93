#include "fracsig/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fracsig/errors.hpp"
#include "fracsig/specfun.hpp"

namespace fracsig::quadrature {
namespace {

constexpr std::size_t max_degree = 7;
constexpr std::size_t jacobi_points = 8;     // exact for degree <= 15
constexpr std::size_t legendre_points = 14;

// Chebyshev–Lobatto nodes on [0, 1] with barycentric weights for each degree.
struct LagrangeTable {
    std::vector<double> nodes;
    std::vector<double> scale;  // 1 / Π_{r≠q} (v_q − v_r)

    void evaluate(double v, double* out) const
    {
        const std::size_t n = nodes.size();
        for (std::size_t q = 0; q < n; ++q) {
            double prod = scale[q];
            for (std::size_t r = 0; r < n; ++r) {
                if (r != q) prod *= v - nodes[r];
            }
            out[q] = prod;
        }
    }
};

LagrangeTable make_table(std::size_t degree)
{
    LagrangeTable t;
    t.nodes.resize(degree + 1);
    for (std::size_t q = 0; q <= degree; ++q) {
        t.nodes[q] = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(q) / static_cast<double>(degree)));
    }
    t.nodes.front() = 0.0;
    t.nodes.back() = 1.0;
    t.scale.resize(degree + 1);
    for (std::size_t q = 0; q <= degree; ++q) {
        double prod = 1.0;
        for (std::size_t r = 0; r <= degree; ++r) {
            if (r != q) prod *= t.nodes[q] - t.nodes[r];
        }
        t.scale[q] = 1.0 / prod;
    }
    return t;
}

const std::array<LagrangeTable, max_degree + 1>& lagrange_tables()
{
    static const auto tables = [] {
        std::array<LagrangeTable, max_degree + 1> t;
        for (std::size_t p = 1; p <= max_degree; ++p) t[p] = make_table(p);
        return t;
    }();
    return tables;
}

std::vector<std::size_t> partition_cells(std::size_t spacings)
{
    if (spacings < 4) return {spacings};
    const std::size_t count = spacings / 4;
    const std::size_t base = spacings / count;
    const std::size_t extra = spacings % count;
    std::vector<std::size_t> sizes(count, base);
    for (std::size_t c = 0; c < extra; ++c) sizes[c] += 1;
    return sizes;
}

}  // namespace

GaussRule gauss_jacobi(std::size_t points, double a, double b)
{
    if (points == 0) throw DomainError("Gauss rule needs at least one point");
    if (!(a > -1.0 && b > -1.0)) throw DomainError("Jacobi exponents must exceed -1");

    const double ab = a + b;
    Eigen::VectorXd diag(static_cast<Eigen::Index>(points));
    Eigen::VectorXd off(static_cast<Eigen::Index>(points > 1 ? points - 1 : 0));
    for (std::size_t n = 0; n < points; ++n) {
        const double nn = static_cast<double>(n);
        const double s = 2.0 * nn + ab;
        diag[static_cast<Eigen::Index>(n)] =
            n == 0 ? (b - a) / (ab + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    }
    for (std::size_t n = 1; n < points; ++n) {
        const double nn = static_cast<double>(n);
        const double s = 2.0 * nn + ab;
        double sq;
        if (n == 1) {
            // (n + a + b) / (s − 1) cancels to 1; the general form is 0/0 when a + b = −1.
            sq = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        } else {
            sq = 4.0 * nn * (nn + a) * (nn + b) * (nn + ab) / (s * s * (s + 1.0) * (s - 1.0));
        }
        off[static_cast<Eigen::Index>(n - 1)] = std::sqrt(sq);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw NumericError("Golub–Welsch eigensolve failed");

    const double mu0 = std::exp((ab + 1.0) * std::numbers::ln2 + specfun::ln_gamma(a + 1.0) +
                                specfun::ln_gamma(b + 1.0) - specfun::ln_gamma(ab + 2.0));
    GaussRule rule;
    rule.nodes.resize(points);
    rule.weights.resize(points);
    for (std::size_t j = 0; j < points; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        rule.nodes[j] = solver.eigenvalues()[jj];
        const double v0 = solver.eigenvectors()(0, jj);
        rule.weights[j] = mu0 * v0 * v0;
    }
    return rule;
}

double default_grading(double alpha)
{
    if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
    // Degree-4 interpolation on cells graded as (j/M)^r resolves a
    // (t − knot)^α component at full order once r(1 + α) > 5.
    return std::max(1.0, 5.5 / (1.0 + alpha));
}

GradedMesh::GradedMesh(std::size_t segments, std::size_t grid_N, double grading)
    : segments_(segments), per_segment_(0), grading_(grading)
{
    if (segments == 0) throw DomainError("mesh needs at least one segment");
    if (grid_N % segments != 0) {
        std::ostringstream os;
        os << "grid of " << grid_N << " spacings does not align with " << segments << " unit segments";
        throw DomainError(os.str());
    }
    per_segment_ = grid_N / segments;
    if (per_segment_ < 2) throw DomainError("grid needs at least two spacings per segment");
    if (!(grading >= 1.0) || !std::isfinite(grading)) throw DomainError("grading exponent must be >= 1");

    const auto sizes = partition_cells(per_segment_);
    const auto& tables = lagrange_tables();
    const double M = static_cast<double>(per_segment_);

    times_.reserve(grid_N + 1);
    for (std::size_t s = 0; s < segments; ++s) {
        const double origin = static_cast<double>(s);
        std::size_t consumed = 0;
        double left = origin;
        for (std::size_t size : sizes) {
            consumed += size;
            const double right = consumed == per_segment_
                                     ? origin + 1.0
                                     : origin + std::pow(static_cast<double>(consumed) / M, grading);
            const std::size_t first = s * per_segment_ + (consumed - size);
            cells_.push_back(Cell{s, first, size, left, right});
            const auto& tab = tables[size];
            times_.push_back(left);
            for (std::size_t q = 1; q < size; ++q) times_.push_back(left + (right - left) * tab.nodes[q]);
            left = right;
        }
    }
    times_.push_back(static_cast<double>(segments));
}

std::vector<std::size_t> GradedMesh::knot_nodes() const
{
    std::vector<std::size_t> out(segments_ + 1);
    for (std::size_t k = 0; k <= segments_; ++k) out[k] = knot_node(k);
    return out;
}

ProductIntegrator::ProductIntegrator(GradedMesh mesh, double alpha) : mesh_(std::move(mesh)), alpha_(alpha)
{
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be positive");

    const auto& tables = lagrange_tables();
    const GaussRule jacobi = gauss_jacobi(jacobi_points, alpha - 1.0, 0.0);
    const GaussRule legendre = gauss_legendre(legendre_points);
    const double inv_gamma = 1.0 / specfun::gamma(alpha);
    const double expo = alpha - 1.0;
    const auto& cells = mesh_.cells();
    const std::size_t n_nodes = mesh_.node_count();

    // Basis values at the whole-cell Legendre points, reused for far targets.
    std::vector<std::vector<double>> far_basis(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto& tab = tables[cells[c].degree];
        far_basis[c].resize(legendre_points * (cells[c].degree + 1));
        for (std::size_t j = 0; j < legendre_points; ++j) {
            tab.evaluate(0.5 * (1.0 + legendre.nodes[j]), &far_basis[c][j * (cells[c].degree + 1)]);
        }
    }

    weights_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_nodes),
                                     static_cast<Eigen::Index>(mesh_.source_count()));
    std::array<double, max_degree + 1> basis{};
    std::array<double, max_degree + 1> acc{};

    for (std::size_t m = 1; m < n_nodes; ++m) {
        const double t = mesh_.time(m);
        const auto row = static_cast<Eigen::Index>(m);
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const Cell& cell = cells[c];
            if (cell.left >= t) break;
            const auto& tab = tables[cell.degree];
            const std::size_t nb = cell.degree + 1;
            const double width = cell.right - cell.left;
            acc.fill(0.0);

            if (t <= cell.right) {
                // Kernel singular at the upper limit: Gauss–Jacobi is exact
                // for the polynomial interpolant.
                const double span = t - cell.left;
                const double scale = std::pow(0.5 * span, alpha);
                for (std::size_t j = 0; j < jacobi_points; ++j) {
                    const double v = 0.5 * span * (1.0 + jacobi.nodes[j]) / width;
                    tab.evaluate(v, basis.data());
                    for (std::size_t q = 0; q < nb; ++q) acc[q] += scale * jacobi.weights[j] * basis[q];
                }
            } else if (t - cell.right >= width) {
                const double half = 0.5 * width;
                const double mid = cell.left + half;
                const double* fb = far_basis[c].data();
                for (std::size_t j = 0; j < legendre_points; ++j) {
                    const double u = mid + half * legendre.nodes[j];
                    const double k = half * legendre.weights[j] * std::pow(t - u, expo);
                    for (std::size_t q = 0; q < nb; ++q) acc[q] += k * fb[j * nb + q];
                }
            } else {
                // Singularity just past the cell: panels doubling in length
                // away from the right edge keep every panel well separated.
                double hi = cell.right;
                bool last = false;
                while (!last) {
                    const double gap = t - hi;
                    double lo;
                    if (hi - cell.left <= gap) {
                        lo = cell.left;
                        last = true;
                    } else {
                        lo = hi - gap;
                    }
                    const double half = 0.5 * (hi - lo);
                    const double mid = lo + half;
                    for (std::size_t j = 0; j < legendre_points; ++j) {
                        const double u = mid + half * legendre.nodes[j];
                        const double k = half * legendre.weights[j] * std::pow(t - u, expo);
                        tab.evaluate((u - cell.left) / width, basis.data());
                        for (std::size_t q = 0; q < nb; ++q) acc[q] += k * basis[q];
                    }
                    hi = lo;
                }
            }

            for (std::size_t q = 0; q < nb; ++q) {
                const auto col = static_cast<Eigen::Index>(mesh_.source_column(cell.segment, cell.first + q));
                weights_(row, col) += acc[q] * inv_gamma;
            }
        }
    }
}

Eigen::MatrixXd ProductIntegrator::apply(const Eigen::MatrixXd& source) const
{
    if (static_cast<std::size_t>(source.rows()) != mesh_.source_count()) {
        throw DomainError("source samples do not match the mesh layout");
    }
    return weights_ * source;
}

Eigen::MatrixXd ProductIntegrator::apply(std::span<const std::size_t> rows, const Eigen::MatrixXd& source) const
{
    if (static_cast<std::size_t>(source.rows()) != mesh_.source_count()) {
        throw DomainError("source samples do not match the mesh layout");
    }
    Eigen::MatrixXd picked(static_cast<Eigen::Index>(rows.size()), weights_.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r] >= mesh_.node_count()) throw DomainError("target node out of range");
        picked.row(static_cast<Eigen::Index>(r)) = weights_.row(static_cast<Eigen::Index>(rows[r]));
    }
    return picked * source;
}

}  // namespace fracsig::quadrature
