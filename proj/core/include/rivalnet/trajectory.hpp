#pragma once

#include <string>
#include <utility>
#include <vector>

namespace rivalnet {

struct TrajectoryPoint {
    double t = 0.0;
    double x1 = 0.0;
    double x2 = 0.0;

    double share1() const { return x1 / t; }
    double share2() const { return x2 / t; }
};

struct Trajectory {
    std::vector<TrajectoryPoint> points;
};

/* CSV layout: optional "# key=value" comment lines, a "t,x1,x2,share1,share2"
 * header, then one row per point. Values are written with enough digits to
 * round-trip exactly. */
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const std::vector<std::pair<std::string, std::string>>& metadata = {});

/* Reads the layout above; comment lines are collected back into metadata
 * if requested. The share columns are recomputed, not trusted. */
Trajectory read_trajectory_csv(const std::string& path,
                               std::vector<std::pair<std::string, std::string>>* metadata = nullptr);

/* Logarithmically spaced grid of `points` values covering [t_begin, t_end],
 * endpoints included. Requires 0 < t_begin <= t_end and points >= 2. */
std::vector<double> log_spaced_grid(double t_begin, double t_end, int points);

} // namespace rivalnet
