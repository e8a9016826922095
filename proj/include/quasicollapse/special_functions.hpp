#ifndef QUASICOLLAPSE_SPECIAL_FUNCTIONS_HPP
#define QUASICOLLAPSE_SPECIAL_FUNCTIONS_HPP

// Oscillator eigenfunctions and parabolic cylinder functions D_a(xi).

#include <complex>

namespace quasicollapse {

using cplx = std::complex<double>;

/// Largest oscillator level accepted by hermite_psi.
inline constexpr int kMaxHermiteLevel = 5000;
/// hermite_psi requires |x| below this.
inline constexpr double kHermiteRange = 40.0;

/// Unit-norm oscillator eigenfunction psi_n(x) = (2^n n! sqrt(pi))^{-1/2} H_n(x) e^{-x^2/2},
/// by the recurrence on normalized functions. Throws std::out_of_range for n < 0,
/// n > 5000 or |x| >= 40.
double hermite_psi(int n, double x);

/// 1/Gamma(z) for complex z; exactly zero at the poles of Gamma.
cplx rgamma(cplx z);
/// Gamma(z); throws std::domain_error at non-positive integers.
cplx gamma(cplx z);

/// Envelope of the Kummer-series evaluation.
inline constexpr double kPcfMaxArgument = 30.0;
inline constexpr double kPcfMaxOrder = 50.0;

/// Parabolic cylinder function D_a(xi) via Kummer functions M(-a/2, 1/2, xi^2/2) and
/// M((1-a)/2, 3/2, xi^2/2). Throws std::out_of_range outside |xi| <= 30, |a| <= 50,
/// and std::range_error when cancellation in the series would cost more than
/// about ten significant digits.
cplx pcf_d(cplx a, cplx xi);

/// D_a(sqrt(2) e^{i pi/4} s). Gamma prefactors are cached per order; the cache is
/// safe under concurrent use. Any complex order is accepted.
cplx pcf_d_on_ray(cplx a, double s);

}  // namespace quasicollapse

#endif  // QUASICOLLAPSE_SPECIAL_FUNCTIONS_HPP
