#include "rivalnet/analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rivalnet {

namespace {

constexpr double kBisectTol = 1e-6;   // relative bracket width before Newton
constexpr double kNewtonTol = 1e-10;  // relative step size at convergence
constexpr double kConservationTol = 1e-6;

/* Root of f(x) = exp(log_k + gamma log x) + x - t on (0, t). f is strictly
 * increasing with f(0+) = -t < 0 and f(t) > 0, so the bracket is always
 * valid. The power term is evaluated in logs; it may overflow to +inf at
 * the upper bracket end, which only affects the sign, never the root. */
double solve_power_equation(double log_k, double gamma, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("solve_power_equation: t must be positive");

    auto f = [&](double x) {
        if (x <= 0.0) return -t;
        return std::exp(log_k + gamma * std::log(x)) + x - t;
    };

    double lo = 0.0, hi = t;
    while (hi - lo > kBisectTol * t) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 100; ++i) {
        double power = std::exp(log_k + gamma * std::log(x));
        double fx = power + x - t;
        double dfx = gamma * power / x + 1.0;
        double step = fx / dfx;
        double next = x - step;
        if (next <= lo || next >= hi) {
            next = 0.5 * (lo + hi); // Newton left the bracket; fall back
        }
        if (f(next) < 0.0) {
            lo = next;
        } else {
            hi = next;
        }
        double moved = std::fabs(next - x);
        x = next;
        if (moved <= kNewtonTol * std::max(x, 1e-300)) return x;
    }
    throw std::runtime_error("solve_power_equation: no convergence at t=" + std::to_string(t));
}

void check_conservation(double x1, double x2, double t) {
    if (std::fabs(x1 + x2 - t) > kConservationTol * t) {
        throw std::runtime_error("trajectory solve: x1 + x2 drifted from t at t=" +
                                 std::to_string(t) + " (x1=" + std::to_string(x1) +
                                 ", x2=" + std::to_string(x2) + ")");
    }
}

} // namespace

void PowerPair::validate() const {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw std::invalid_argument("PowerPair: powers must be positive and finite");
    }
}

void InitialState::validate() const {
    if (!(t0 > 0.0) || !(x1 > 0.0) || !(x2 > 0.0)) {
        throw std::invalid_argument("InitialState: t0, x1, x2 must all be positive");
    }
    if (std::fabs(x1 + x2 - t0) > 1e-9 * t0) {
        throw std::invalid_argument("InitialState: x1 + x2 must equal t0 (" +
                                    std::to_string(x1) + " + " + std::to_string(x2) +
                                    " != " + std::to_string(t0) + ")");
    }
}

Trajectory pre_overload(const PowerPair& powers, const InitialState& init,
                        std::span<const double> t_grid) {
    powers.validate();
    init.validate();

    double g1 = powers.b / powers.a;
    double g2 = powers.a / powers.b;
    double log_k1 = std::log(init.x2) - g1 * std::log(init.x1);
    double log_k2 = std::log(init.x1) - g2 * std::log(init.x2);

    Trajectory traj;
    traj.points.reserve(t_grid.size());
    for (double t : t_grid) {
        if (t < init.t0 * (1.0 - 1e-12)) {
            throw std::invalid_argument("pre_overload: grid point " + std::to_string(t) +
                                        " precedes t0=" + std::to_string(init.t0));
        }
        double x1 = solve_power_equation(log_k1, g1, t);
        double x2 = solve_power_equation(log_k2, g2, t);
        check_conservation(x1, x2, t);
        traj.points.push_back({t, x1, x2});
    }
    return traj;
}

TrajectoryPoint corollary_closed_form(ClosedFormRatio ratio, const InitialState& init, double t) {
    init.validate();
    if (t < init.t0 * (1.0 - 1e-12)) {
        throw std::invalid_argument("corollary_closed_form: t precedes t0");
    }

    switch (ratio) {
    case ClosedFormRatio::Half: {
        /* a/b = 1/2: x1 solves a quadratic, x2 a quadratic in sqrt(x2). */
        double k1 = init.x2 / (init.x1 * init.x1);
        double x1 = (std::sqrt(4.0 * k1 * t + 1.0) - 1.0) / (2.0 * k1);
        double k2 = init.x1 / std::sqrt(init.x2);
        double x2 = t - 0.5 * (k2 * std::sqrt(4.0 * t + k2 * k2) - k2 * k2);
        return {t, x1, x2};
    }
    case ClosedFormRatio::One: {
        /* Equal powers preserve shares. */
        double scale = t / init.t0;
        return {t, init.x1 * scale, init.x2 * scale};
    }
    case ClosedFormRatio::Two: {
        /* a/b = 2 mirrors the Half case with the roles swapped. */
        double k1 = init.x2 / std::sqrt(init.x1);
        double x1 = t - 0.5 * (k1 * std::sqrt(4.0 * t + k1 * k1) - k1 * k1);
        double k2 = init.x1 / (init.x2 * init.x2);
        double x2 = (std::sqrt(4.0 * k2 * t + 1.0) - 1.0) / (2.0 * k2);
        return {t, x1, x2};
    }
    }
    throw std::invalid_argument("corollary_closed_form: unknown ratio");
}

double discrimination_prob(double t, double mu, double t_c, bool linearized) {
    if (!(mu > 0.0)) throw std::domain_error("discrimination_prob: mu must be positive");
    if (t < t_c) {
        throw std::domain_error("discrimination_prob: t=" + std::to_string(t) +
                                " precedes overload at t_c=" + std::to_string(t_c));
    }
    double elapsed = t - t_c;
    if (linearized) return std::max(0.0, 1.0 - mu * elapsed);
    return std::exp(-mu * elapsed);
}

OverloadRegime OverloadRegime::anchor(const PowerPair& powers, double mu,
                                      const InitialState& state_at_tc) {
    powers.validate();
    state_at_tc.validate();
    if (!(mu > 0.0)) throw std::invalid_argument("OverloadRegime: mu must be positive");

    double a = powers.a, b = powers.b;
    double t_c = state_at_tc.t0;
    double e1 = (b - a) / a * mu * t_c;
    double e2 = (a - b) / a * mu;
    double f1 = (a - b) / b * mu * t_c;
    double f2 = (b - a) / b * mu;

    OverloadRegime regime;
    regime.mu = mu;
    regime.t_c = t_c;
    regime.log_c3 = std::log(state_at_tc.x2) - (b / a) * std::log(state_at_tc.x1) -
                    e1 * std::log(t_c) - e2 * t_c;
    regime.log_c4 = std::log(state_at_tc.x1) - (a / b) * std::log(state_at_tc.x2) -
                    f1 * std::log(t_c) - f2 * t_c;
    return regime;
}

Trajectory post_overload(const PowerPair& powers, double mu, const InitialState& state_at_tc,
                         std::span<const double> t_grid) {
    OverloadRegime regime = OverloadRegime::anchor(powers, mu, state_at_tc);

    double a = powers.a, b = powers.b;
    double t_c = state_at_tc.t0;
    double e1 = (b - a) / a * mu * t_c;
    double e2 = (a - b) / a * mu;
    double f1 = (a - b) / b * mu * t_c;
    double f2 = (b - a) / b * mu;
    double t_freeze = t_c + 1.0 / mu;

    auto window_solve = [&](double t) -> TrajectoryPoint {
        double log_k1 = regime.log_c3 + e1 * std::log(t) + e2 * t;
        double log_k2 = regime.log_c4 + f1 * std::log(t) + f2 * t;
        double x1 = solve_power_equation(log_k1, b / a, t);
        double x2 = solve_power_equation(log_k2, a / b, t);
        check_conservation(x1, x2, t);
        return {t, x1, x2};
    };

    TrajectoryPoint at_freeze = window_solve(t_freeze);

    Trajectory traj;
    traj.points.reserve(t_grid.size());
    for (double t : t_grid) {
        if (t < t_c * (1.0 - 1e-12)) {
            throw std::invalid_argument("post_overload: grid point " + std::to_string(t) +
                                        " precedes t_c=" + std::to_string(t_c));
        }
        if (t <= t_c * (1.0 + 1e-12)) {
            traj.points.push_back({t, state_at_tc.x1, state_at_tc.x2});
        } else if (t < t_freeze) {
            traj.points.push_back(window_solve(t));
        } else {
            double scale = t / t_freeze;
            traj.points.push_back({t, at_freeze.x1 * scale, at_freeze.x2 * scale});
        }
    }
    return traj;
}

double rho(double delta, double t0, double mu, const PowerPair& powers) {
    powers.validate();
    if (!(mu > 0.0)) throw std::domain_error("rho: mu must be positive");
    if (!(t0 > 0.0)) throw std::domain_error("rho: t0 must be positive");
    if (delta < 0.0 || delta > (1.0 / mu) * (1.0 + 1e-12)) {
        throw std::domain_error("rho: elapsed time must lie in [0, 1/mu]");
    }
    if (delta == 0.0) return 1.0;
    /* log rho = (a-b)/a * mu * delta * [1 - (t0/delta) log(1 + delta/t0)] */
    double inner = 1.0 - (t0 / delta) * std::log1p(delta / t0);
    return std::exp((powers.a - powers.b) / powers.a * mu * delta * inner);
}

OrderingReport theorem4_check(const PowerPair& powers, double mu, const InitialState& shared_init,
                              std::span<const double> t_grid, double tolerance) {
    Trajectory pre = pre_overload(powers, shared_init, t_grid);
    Trajectory post = post_overload(powers, mu, shared_init, t_grid);

    OrderingReport report;
    report.tolerance = tolerance;
    report.rows.reserve(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const auto& p = pre.points[i];
        const auto& q = post.points[i];
        OrderingReport::Row row{p.t, p.x1, p.x2, q.x1, q.x2};

        /* Signed relative excess on the forbidden side; positive means the
         * ordering is violated at this t. */
        double v1, v2;
        if (powers.a > powers.b) {
            v1 = (q.x1 - p.x1) / std::max(p.x1, 1e-300);
            v2 = (p.x2 - q.x2) / std::max(p.x2, 1e-300);
        } else if (powers.a < powers.b) {
            v1 = (p.x1 - q.x1) / std::max(p.x1, 1e-300);
            v2 = (q.x2 - p.x2) / std::max(p.x2, 1e-300);
        } else {
            v1 = std::fabs(q.x1 - p.x1) / std::max(p.x1, 1e-300);
            v2 = std::fabs(q.x2 - p.x2) / std::max(p.x2, 1e-300);
        }
        double worst = std::max(v1, v2);
        if (worst > report.max_violation) report.max_violation = worst;
        if (worst > tolerance) ++report.violations;
        report.rows.push_back(row);
    }
    return report;
}

} // namespace rivalnet
