#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fracsig/alpha.hpp"
#include "fracsig/path.hpp"
#include "fracsig/quadrature.hpp"
#include "fracsig/words.hpp"

namespace fracsig::fractional {

/// Fractional signature of the linear path from A to B = A + Δ over [a, b]:
///   ΠΔ_{i_j} (b−a)^{(α−1)k} β((k−1)α+1, α) / (Γ(α) Γ(1+(k−1)α)).
/// Returns 1 for the empty word.
double linear_closed_form(std::span<const double> delta, Alpha alpha, double a, double b, const Word& word);

struct ReparametrizationPair {
    double original;  // X_t = t on [0, 1]
    double dilated;   // Y_t = t/2 on [0, 2]
};

/// First-level fractional signature of the same straight line traversed at
/// unit speed and at half speed. Equal only when α = 1.
ReparametrizationPair reparametrization_counterexample(Alpha alpha);

/// Smallest multiple of `segments` that is at least `target`
/// (and at least 2·segments).
std::size_t aligned_grid(std::size_t segments, std::size_t target);

/// Values S^α(X)^J_{0,t} for every word up to the truncation level, sampled
/// at every node of the quadrature mesh. Level k is a (nodes × d^k) matrix
/// with words in lexicographic column order; level 0 is a column of ones.
/// When built for an endpoint-only query the top level holds only the final
/// node.
class PrefixFunctionGrid {
public:
    PrefixFunctionGrid(std::vector<double> times, std::vector<std::size_t> knot_nodes, std::size_t dim,
                       std::vector<Eigen::MatrixXd> levels);

    std::size_t dim() const { return dim_; }
    std::size_t level() const { return levels_.size() - 1; }
    std::span<const double> times() const { return times_; }
    std::span<const std::size_t> knot_nodes() const { return knot_nodes_; }
    const Eigen::MatrixXd& level_values(std::size_t k) const { return levels_.at(k); }

    /// Signature S^α(X)_{0, t_node} truncated at `level` (default: all).
    TruncatedSignature at_node(std::size_t node, std::size_t level) const;
    TruncatedSignature at_node(std::size_t node) const { return at_node(node, this->level()); }

    /// Signature at the end of the path.
    TruncatedSignature at_end() const;

private:
    std::vector<double> times_;
    std::vector<std::size_t> knot_nodes_;
    std::size_t dim_;
    std::vector<Eigen::MatrixXd> levels_;
};

/// Product integrator with the default grading for α over the path's segments.
quadrature::ProductIntegrator make_integrator(const PiecewiseLinearPath& path, Alpha alpha, std::size_t grid_N);

/// All levels at all nodes. `integrator` must be built over the path's segment count.
PrefixFunctionGrid fractional_signature_grid(const PiecewiseLinearPath& path,
                                             const quadrature::ProductIntegrator& integrator, std::size_t L);
PrefixFunctionGrid fractional_signature_grid(const PiecewiseLinearPath& path, Alpha alpha, std::size_t L,
                                             std::size_t grid_N);

/// S^α(X)_{0,n−1}. Prefix levels are swept over the whole mesh; the top level
/// is evaluated at the endpoint only.
TruncatedSignature fractional_signature(const PiecewiseLinearPath& path,
                                        const quadrature::ProductIntegrator& integrator, std::size_t L);
TruncatedSignature fractional_signature(const PiecewiseLinearPath& path, Alpha alpha, std::size_t L,
                                        std::size_t grid_N);

}  // namespace fracsig::fractional
