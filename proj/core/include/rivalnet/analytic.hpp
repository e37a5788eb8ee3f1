#pragma once

#include "rivalnet/trajectory.hpp"

#include <span>
#include <vector>

namespace rivalnet {

/* Adoption weights of the two influences. */
struct PowerPair {
    double a = 1.0;
    double b = 1.0;

    void validate() const;
};

/* Follower counts at the reference time; x1 + x2 must equal t0 because the
 * clock counts adoptions. */
struct InitialState {
    double t0 = 0.0;
    double x1 = 0.0;
    double x2 = 0.0;

    void validate() const;
};

/* Mean growth before anyone is overloaded. Each count solves its own
 * implicit equation
 *   K1 * x1^{b/a} + x1 = t,   K1 = x2(t0) / x1(t0)^{b/a}
 *   K2 * x2^{a/b} + x2 = t,   K2 = x1(t0) / x2(t0)^{a/b}
 * by bracketed bisection refined with Newton steps (1e-10 relative). The
 * two roots are cross-checked against x1 + x2 = t to 1e-6 relative. The
 * grid must start at or after t0. */
Trajectory pre_overload(const PowerPair& powers, const InitialState& init,
                        std::span<const double> t_grid);

/* Closed forms available at power ratios a/b in {1/2, 1, 2}. */
enum class ClosedFormRatio { Half, One, Two };

TrajectoryPoint corollary_closed_form(ClosedFormRatio ratio, const InitialState& init, double t);

/* Probability that a member overloaded since t_c still discriminates
 * between influences at time t >= t_c. Exact form exp(-mu (t - t_c));
 * linearized form max(0, 1 - mu (t - t_c)), which hits zero at
 * t_c + 1/mu exactly. */
double discrimination_prob(double t, double mu, double t_c, bool linearized);

/* Constants of the transition-window implicit equations, anchored at the
 * state reached when overload sets in:
 *   C3 * t^{e1} e^{e2 t} x1^{b/a} + x1 = t,  e1 = (b-a)/a * mu * t_c,
 *                                            e2 = (a-b)/a * mu
 * and symmetrically for x2 with a and b swapped. C3 and C4 are held in log
 * scale: with mu * t_c in the hundreds, t^{e1} alone overflows a double,
 * while log C3 + e1 log t + e2 t stays small over the window. */
struct OverloadRegime {
    double mu = 0.0;
    double t_c = 0.0;
    double log_c3 = 0.0;
    double log_c4 = 0.0;

    static OverloadRegime anchor(const PowerPair& powers, double mu,
                                 const InitialState& state_at_tc);
};

/* Mean growth from the overload time onward. Inside the transition window
 * (t_c, t_c + 1/mu) the counts solve the implicit equations above; from
 * t_c + 1/mu on they grow linearly, x(t) = x(t_c + 1/mu) * t / (t_c + 1/mu),
 * so shares are frozen. Grid values at t_c itself return the anchor state. */
Trajectory post_overload(const PowerPair& powers, double mu, const InitialState& state_at_tc,
                         std::span<const double> t_grid);

/* Advantage factor an early overload (onset t0, elapsed delta <= 1/mu)
 * hands the weaker influence:
 *   rho = [e / (1 + delta/t0)^{t0/delta}]^{ (a-b)/a * mu * delta }.
 * Equals 1 at delta = 0 and grows with delta when a > b. */
double rho(double delta, double t0, double mu, const PowerPair& powers);

/* Side-by-side solve of both regimes from one shared initial state, with
 * overload starting immediately (t_c = t0). For a > b the overloaded
 * trajectory must satisfy x1' <= x1 and x2' >= x2 pointwise (the regime
 * change can only hurt the stronger influence); mirrored for a < b. */
struct OrderingReport {
    struct Row {
        double t = 0.0;
        double x1_pre = 0.0, x2_pre = 0.0;
        double x1_post = 0.0, x2_post = 0.0;
    };
    std::vector<Row> rows;
    double max_violation = 0.0; // largest relative excess over the expected side
    int violations = 0;         // rows beyond tolerance
    double tolerance = 0.0;
};

OrderingReport theorem4_check(const PowerPair& powers, double mu, const InitialState& shared_init,
                              std::span<const double> t_grid, double tolerance = 1e-8);

} // namespace rivalnet
