#include "rivalnet/trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rivalnet {

namespace {

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const std::vector<std::pair<std::string, std::string>>& metadata) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_trajectory_csv: cannot open " + path);
    for (const auto& [key, value] : metadata) {
        out << "# " << key << '=' << value << '\n';
    }
    out << "t,x1,x2,share1,share2\n";
    for (const auto& p : traj.points) {
        out << format_double(p.t) << ',' << format_double(p.x1) << ',' << format_double(p.x2)
            << ',' << format_double(p.share1()) << ',' << format_double(p.share2()) << '\n';
    }
    if (!out) throw std::runtime_error("write_trajectory_csv: write failed for " + path);
}

Trajectory read_trajectory_csv(const std::string& path,
                               std::vector<std::pair<std::string, std::string>>* metadata) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_trajectory_csv: cannot open " + path);

    Trajectory traj;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (metadata) {
                std::string body = line.substr(1);
                if (!body.empty() && body[0] == ' ') body.erase(0, 1);
                auto eq = body.find('=');
                if (eq != std::string::npos) {
                    metadata->emplace_back(body.substr(0, eq), body.substr(eq + 1));
                }
            }
            continue;
        }
        if (!header_seen) {
            if (line != "t,x1,x2,share1,share2") {
                throw std::runtime_error("read_trajectory_csv: " + path + " line " +
                                         std::to_string(line_no) + ": unexpected header '" +
                                         line + "'");
            }
            header_seen = true;
            continue;
        }
        std::istringstream ls(line);
        TrajectoryPoint p;
        char c1, c2;
        if (!(ls >> p.t >> c1 >> p.x1 >> c2 >> p.x2) || c1 != ',' || c2 != ',') {
            throw std::runtime_error("read_trajectory_csv: " + path + " line " +
                                     std::to_string(line_no) + ": malformed row");
        }
        traj.points.push_back(p);
    }
    if (!header_seen) {
        throw std::runtime_error("read_trajectory_csv: " + path + " has no header row");
    }
    return traj;
}

std::vector<double> log_spaced_grid(double t_begin, double t_end, int points) {
    if (!(t_begin > 0.0)) throw std::invalid_argument("log_spaced_grid: t_begin must be positive");
    if (t_end < t_begin) throw std::invalid_argument("log_spaced_grid: t_end before t_begin");
    if (points < 2) throw std::invalid_argument("log_spaced_grid: need at least two points");
    std::vector<double> grid(static_cast<std::size_t>(points));
    double lo = std::log(t_begin), hi = std::log(t_end);
    for (int i = 0; i < points; ++i) {
        double f = static_cast<double>(i) / (points - 1);
        grid[static_cast<std::size_t>(i)] = std::exp(lo + f * (hi - lo));
    }
    grid.front() = t_begin;
    grid.back() = t_end;
    return grid;
}

} // namespace rivalnet
