#pragma once

namespace fracsig::specfun {

struct Tolerance {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
};

/// ln Γ(x) for x > 0.
double ln_gamma(double x);

/// Γ(x) for x > 0. Overflows to +inf past x ≈ 171.6.
double gamma(double x);

/// Complete beta function Γ(x)Γ(y)/Γ(x+y).
double beta(double x, double y);

/// Unregularized lower incomplete beta ∫₀^z t^{x-1}(1-t)^{y-1} dt for
/// z in (0, 1]. At z = 1 this is beta(x, y).
///
/// Small z uses the hypergeometric power series; otherwise a Lentz continued
/// fraction on whichever side of the symmetry point (x+1)/(x+y+2) converges.
double incomplete_beta(double z, double x, double y);

/// Mittag-Leffler function E_α(z) = Σ z^k / Γ(1 + kα), summed directly.
/// Summation stops once terms fall below both tol.abs_tol and tol.rel_tol
/// times the partial sum; NumericError if that never happens within the cap.
double mittag_leffler(double alpha, double z, const Tolerance& tol = {});

}  // namespace fracsig::specfun
