#pragma once

namespace rivalnet {

/* Regularized lower incomplete gamma function P(a, x) for a > 0, x >= 0.
 * Series expansion for x < a + 1, continued fraction otherwise; both
 * converge to near machine precision. */
double gamma_p(double a, double x);

/* Complement Q(a, x) = 1 - P(a, x). */
double gamma_q(double a, double x);

/* Inverse of P in x: returns x with gamma_p(a, x) == p, for p in (0, 1). */
double gamma_p_inv(double a, double p);

} // namespace rivalnet
