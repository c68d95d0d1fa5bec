#pragma once

namespace svip {

/// Regularized incomplete beta function I_x(a, b), continued-fraction
/// evaluation (modified Lentz), accurate to ~1e-14 relative.
double regularized_incomplete_beta(double a, double b, double x);

/// P(T > t) for Student's t with df degrees of freedom.
double student_t_sf(double t, double df);

/// Two-sided p-value: 2 * P(T > |t|).
double student_t_two_sided_p(double t, double df);

/// P(F > f) for the F distribution with (d1, d2) degrees of freedom.
double f_sf(double f, double d1, double d2);

/// The critical value c with P(|T| > c) = alpha.
double student_t_critical(double df, double alpha = 0.05);

}  // namespace svip
