#pragma once

namespace temcodec {

/// sinc_omega(t) = sin(omega*t) / (pi*t), continued with its limit omega/pi
/// at t = 0. Even in t. Requires omega > 0.
double sinc_eval(double omega, double t);

/// Sine integral Si(x) = int_0^x sin(u)/u du.
///
/// Exactly odd (computed from |x| and negated), absolute error below 1e-12
/// over |x| <= 1e6. Evaluation is branch-wise: a Maclaurin series for
/// |x| <= 4 and Si(x) = pi/2 - f(x)cos(x) - g(x)sin(x) beyond, with the
/// auxiliary functions f, g evaluated from Chebyshev fits in 1/x^2 up to
/// x = 40 and from their truncated asymptotic series afterwards.
double sine_integral(double x);

/// int_a^b sinc_omega(u - center) du in closed form via the sine integral.
double sinc_atom_integral(double omega, double center, double a, double b);

}  // namespace temcodec
