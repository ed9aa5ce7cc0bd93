#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace fracsig::quadrature {

/// Gauss rule on [−1, 1] for the weight (1 − x)^a (1 + x)^b, a, b > −1.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussRule gauss_jacobi(std::size_t points, double a, double b);
inline GaussRule gauss_legendre(std::size_t points) { return gauss_jacobi(points, 0.0, 0.0); }

/// One interpolation cell: `degree` + 1 nodes (Chebyshev–Lobatto placement)
/// starting at global node `first`, spanning [left, right] inside `segment`.
struct Cell {
    std::size_t segment;
    std::size_t first;
    std::size_t degree;
    double left;
    double right;
};

/// Grading exponent used when none is supplied: cells shrink toward each
/// knot as (j/M)^r so that the (t − knot)^α behaviour of prefix functions is
/// resolved at the interpolation order.
double default_grading(double alpha);

/// Nodes over [0, segments] with grid_N node spacings, knots at every
/// integer time. Each segment gets M = grid_N / segments spacings, split into
/// cells of degree 4..7 (or a single cell of degree M when M < 4).
class GradedMesh {
public:
    GradedMesh(std::size_t segments, std::size_t grid_N, double grading);

    std::size_t segments() const { return segments_; }
    std::size_t spacings_per_segment() const { return per_segment_; }
    std::size_t node_count() const { return times_.size(); }
    double grading() const { return grading_; }

    std::span<const double> times() const { return times_; }
    double time(std::size_t node) const { return times_[node]; }
    const std::vector<Cell>& cells() const { return cells_; }

    std::size_t knot_node(std::size_t knot) const { return knot * per_segment_; }
    std::vector<std::size_t> knot_nodes() const;

    /// Source layout: every segment owns a private copy of its M+1 nodes, so
    /// knot nodes appear twice (once per adjacent segment).
    std::size_t source_count() const { return segments_ * (per_segment_ + 1); }
    std::size_t source_column(std::size_t segment, std::size_t node) const
    {
        return segment * (per_segment_ + 1) + (node - segment * per_segment_);
    }

private:
    std::size_t segments_;
    std::size_t per_segment_;
    double grading_;
    std::vector<double> times_;
    std::vector<Cell> cells_;
};

/// Discretization of g ↦ (1/Γ(α)) ∫₀^t (t − s)^{α−1} g(s) ds at every mesh
/// node, where g is known at the nodes of each segment (one-sided at knots)
/// and replaced by its piecewise-polynomial interpolant on each cell.
///
/// Moments of the kernel against the interpolant are computed with
/// Gauss–Jacobi rules when the singularity sits at the end of the integration
/// range and with geometrically refined Gauss–Legendre panels otherwise, so
/// the only discretization error is the interpolation error.
class ProductIntegrator {
public:
    ProductIntegrator(GradedMesh mesh, double alpha);

    const GradedMesh& mesh() const { return mesh_; }
    double alpha() const { return alpha_; }

    /// Rows: target nodes. Columns: source columns of the mesh layout.
    const Eigen::MatrixXd& weights() const { return weights_; }

    /// Integrals at every node of each column of `source`
    /// (source_count() rows).
    Eigen::MatrixXd apply(const Eigen::MatrixXd& source) const;

    /// Integrals at the listed nodes only.
    Eigen::MatrixXd apply(std::span<const std::size_t> rows, const Eigen::MatrixXd& source) const;

private:
    GradedMesh mesh_;
    double alpha_;
    Eigen::MatrixXd weights_;
};

}  // namespace fracsig::quadrature
