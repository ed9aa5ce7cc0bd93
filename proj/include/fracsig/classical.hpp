#pragma once

#include <cstddef>
#include <span>

#include "fracsig/path.hpp"
#include "fracsig/words.hpp"

namespace fracsig::classical {

/// Signature of a single linear segment with increment δ:
/// level k holds δ^{⊗k} / k!.
TruncatedSignature segment_signature(std::span<const double> delta, std::size_t L);

/// Signature over [0, n−1], folded segment by segment with chen_product.
TruncatedSignature signature(const PiecewiseLinearPath& path, std::size_t L);

/// Largest k·grid_N the oracle accepts.
inline constexpr std::size_t oracle_budget = 200'000'000;

/// Nested left-Riemann approximation of ∫_{0<t₁<…<t_k<n−1} dX^{i₁}…dX^{i_k}
/// on a uniform grid of grid_N cells. First-order accurate; exact for
/// length-1 words. Independent of chen_product, so usable as an oracle.
double brute_force_iterated_integral(const PiecewiseLinearPath& path, const Word& word, std::size_t grid_N);

}  // namespace fracsig::classical
