#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fracsig/alpha.hpp"
#include "fracsig/path.hpp"
#include "fracsig/quadrature.hpp"
#include "fracsig/words.hpp"

namespace fracsig::caputo {

/// Linear map y ↦ V(y) ∈ L(R^d, R^e) stored as an e × d × e tensor:
/// (V(y))_{q,i} = Σ_p V[q][i][p] · y_p.
class LinearVectorField {
public:
    LinearVectorField(std::size_t e, std::size_t d, std::vector<double> entries);

    std::size_t state_dim() const { return e_; }
    std::size_t driver_dim() const { return d_; }
    double entry(std::size_t q, std::size_t i, std::size_t p) const { return v_[(q * d_ + i) * e_ + p]; }

    /// The e × d matrix V(y).
    Eigen::MatrixXd operator()(std::span<const double> y) const;

private:
    std::size_t e_;
    std::size_t d_;
    std::vector<double> v_;
};

/// Picard iterates Y^0..Y^n of Y_t = y + I^α[V(Y)·Ẋ](t) on the quadrature mesh.
struct PicardIterates {
    std::vector<double> times;
    std::vector<std::size_t> knot_nodes;
    std::vector<Eigen::MatrixXd> iterates;  // each nodes × e
    bool stagnated = false;                 // stopped early on relative change < 1e-14
};

PicardIterates picard_iterates(const LinearVectorField& field, const PiecewiseLinearPath& path,
                               std::span<const double> y0, const quadrature::ProductIntegrator& integrator,
                               std::size_t n_iter);
PicardIterates picard_iterates(const LinearVectorField& field, const PiecewiseLinearPath& path,
                               std::span<const double> y0, Alpha alpha, std::size_t n_iter, std::size_t grid_N);

/// Coefficient vectors c_J ∈ R^e for every word of length ≤ level, in the
/// TruncatedSignature word order: c_∅ = y, c_{J·i} = column i of V(c_J).
class ExpansionCoefficients {
public:
    ExpansionCoefficients(std::size_t e, std::size_t d, std::size_t level);

    std::size_t state_dim() const { return e_; }
    std::size_t driver_dim() const { return d_; }
    std::size_t level() const { return level_; }

    std::span<const double> coefficient(const Word& word) const;
    std::span<double> coefficient(const Word& word);
    std::span<const double> coefficient(std::size_t level, std::size_t offset) const;

private:
    std::size_t slot(std::size_t level, std::size_t offset) const;

    std::size_t e_;
    std::size_t d_;
    std::size_t level_;
    std::vector<std::size_t> level_start_;
    std::vector<double> values_;
};

ExpansionCoefficients expansion_coefficients(const LinearVectorField& field, std::span<const double> y0,
                                             std::size_t level, std::size_t d);

/// Σ_J c_J · S^J over words of length ≤ coeffs.level().
std::vector<double> evaluate_expansion(const ExpansionCoefficients& coeffs, const TruncatedSignature& signature);

/// One row of the expansion-versus-Picard comparison.
struct BatteryRow {
    std::size_t case_id;
    double alpha;
    std::size_t state_dim;
    std::size_t driver_dim;
    std::size_t knots;
    std::size_t iterate;
    double max_rel_error;  // over every knot time
};

struct BatteryOptions {
    std::vector<double> alphas{0.5, 0.8, 1.0};
    std::size_t cases_per_alpha = 4;
    std::size_t max_iterate = 4;
    std::size_t grid_N = 2048;
    std::uint64_t seed = 20240724;
};

/// Random linear fields (entries in [−1, 1], e, d ≤ 3) driven by random
/// piecewise-linear paths (2..4 knots): Picard iterates compared with the
/// signature expansion at every knot, for every iterate up to max_iterate.
std::vector<BatteryRow> expansion_battery(const BatteryOptions& options);

/// Tolerance the battery is judged against.
inline constexpr double battery_tolerance = 1e-4;

/// |Y^n(1) − e| for the scalar problem V = 1, X_t = t on [0, 1], y = 1, α = 1.
double scalar_exponential_error(std::size_t n_iter = 20, std::size_t grid_N = 1024);
inline constexpr double exponential_tolerance = 1e-6;

}  // namespace fracsig::caputo
