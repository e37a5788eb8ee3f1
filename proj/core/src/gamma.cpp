#include "rivalnet/gamma.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rivalnet {

namespace {

constexpr int kMaxIterations = 500;
constexpr double kEps = 1e-15;
constexpr double kTiny = 1e-300;

/* Lower series: P(a,x) = x^a e^{-x} / Gamma(a) * sum_k x^k / (a(a+1)...(a+k)). */
double lower_series(double a, double x) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int i = 0; i < kMaxIterations; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps) {
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw std::runtime_error("gamma_p: series did not converge for a=" + std::to_string(a));
}

/* Upper continued fraction (modified Lentz): Q(a,x) = x^a e^{-x} / Gamma(a) * CF. */
double upper_continued_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIterations; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) {
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw std::runtime_error("gamma_q: continued fraction did not converge for a=" +
                             std::to_string(a));
}

} // namespace

double gamma_p(double a, double x) {
    if (!(a > 0.0)) throw std::domain_error("gamma_p: shape must be positive");
    if (x < 0.0) throw std::domain_error("gamma_p: argument must be non-negative");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return lower_series(a, x);
    return 1.0 - upper_continued_fraction(a, x);
}

double gamma_q(double a, double x) {
    if (!(a > 0.0)) throw std::domain_error("gamma_q: shape must be positive");
    if (x < 0.0) throw std::domain_error("gamma_q: argument must be non-negative");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - lower_series(a, x);
    return upper_continued_fraction(a, x);
}

double gamma_p_inv(double a, double p) {
    if (!(a > 0.0)) throw std::domain_error("gamma_p_inv: shape must be positive");
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("gamma_p_inv: p must lie in (0,1)");

    double hi = a + 10.0 * std::sqrt(a) + 10.0;
    while (gamma_p(a, hi) < p) hi *= 2.0;
    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (gamma_p(a, mid) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= kEps * hi) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace rivalnet
