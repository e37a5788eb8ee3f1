#include "rivalnet/harness.hpp"

#include "rivalnet/gamma.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace rivalnet {

namespace {

std::string fmt(const char* spec, double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

RangeSpec RangeSpec::parse(const std::string& text) {
    RangeSpec spec;
    auto parse_value = [&](const std::string& s, const char* what, double lo, double hi) {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size() || !(v > lo) || !(v < hi)) {
            throw std::invalid_argument(std::string("range: ") + what + " out of range: " + s);
        }
        return v;
    };
    if (text.rfind("auto:", 0) == 0) {
        spec.kind = Kind::TargetProb;
        spec.value = parse_value(text.substr(5), "target probability", 0.0, 1.0);
    } else if (text.rfind("quantile:", 0) == 0) {
        spec.kind = Kind::Quantile;
        spec.value = parse_value(text.substr(9), "quantile", 0.0, 1.0);
    } else {
        spec.kind = Kind::Fixed;
        spec.value = parse_value(text, "fixed range",
                                 0.0, std::numeric_limits<double>::infinity());
    }
    return spec;
}

std::string RangeSpec::to_string() const {
    switch (kind) {
    case Kind::Fixed: return fmt("%g", value);
    case Kind::TargetProb: return "auto:" + fmt("%g", value);
    case Kind::Quantile: return "quantile:" + fmt("%g", value);
    }
    throw std::logic_error("RangeSpec: bad kind");
}

ExperimentSpec ExperimentSpec::parse(std::istream& in, const std::string& origin) {
    ExperimentSpec spec;
    std::string line;
    std::size_t line_no = 0;

    auto fail = [&](const std::string& msg) -> void {
        throw std::runtime_error("experiment spec " + origin + " line " + std::to_string(line_no) +
                                 ": " + msg);
    };
    auto to_int = [&](const std::string& key, const std::string& v) {
        try {
            std::size_t used = 0;
            int r = std::stoi(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return r;
        } catch (const std::exception&) {
            fail(key + ": expected integer, got '" + v + "'");
            return 0;
        }
    };
    auto to_u64 = [&](const std::string& key, const std::string& v) {
        try {
            std::size_t used = 0;
            unsigned long long r = std::stoull(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return static_cast<std::uint64_t>(r);
        } catch (const std::exception&) {
            fail(key + ": expected unsigned integer, got '" + v + "'");
            return std::uint64_t{0};
        }
    };
    auto to_double = [&](const std::string& key, const std::string& v) {
        try {
            std::size_t used = 0;
            double r = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return r;
        } catch (const std::exception&) {
            fail(key + ": expected number, got '" + v + "'");
            return 0.0;
        }
    };
    auto to_bool = [&](const std::string& key, const std::string& v) {
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        fail(key + ": expected true/false, got '" + v + "'");
        return false;
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::string body = trim(line);
        if (body.empty()) continue;
        auto eq = body.find('=');
        if (eq == std::string::npos) fail("expected 'key = value', got '" + body + "'");
        std::string key = trim(body.substr(0, eq));
        std::string value = trim(body.substr(eq + 1));
        if (key.empty() || value.empty()) fail("empty key or value");

        if (key == "graph") {
            if (value == "synthetic") {
                spec.graph_source.kind = GraphSource::Kind::Synthetic;
            } else {
                spec.graph_source.kind = GraphSource::Kind::File;
                spec.graph_source.path = value;
            }
        } else if (key == "nodes") {
            spec.graph_source.nodes = to_int(key, value);
        } else if (key == "exponent") {
            spec.graph_source.exponent = to_double(key, value);
        } else if (key == "walk_length") {
            spec.embedding.walk.walk_length = to_int(key, value);
        } else if (key == "walks_per_node") {
            spec.embedding.walk.walks_per_node = to_int(key, value);
        } else if (key == "window") {
            spec.embedding.walk.window = to_int(key, value);
        } else if (key == "return_bias") {
            spec.embedding.walk.return_bias = to_double(key, value);
        } else if (key == "inout_bias") {
            spec.embedding.walk.inout_bias = to_double(key, value);
        } else if (key == "dim") {
            spec.embedding.options.dim = to_int(key, value);
        } else if (key == "epochs") {
            spec.embedding.options.epochs = to_int(key, value);
        } else if (key == "learning_rate") {
            spec.embedding.options.learning_rate = to_double(key, value);
        } else if (key == "range") {
            try {
                spec.range = RangeSpec::parse(value);
            } catch (const std::exception& e) {
                fail(e.what());
            }
        } else if (key == "a") {
            spec.competition.powers.a = to_double(key, value);
        } else if (key == "b") {
            spec.competition.powers.b = to_double(key, value);
        } else if (key == "capacity") {
            if (value == "n") {
                spec.capacity_is_n = true;
            } else {
                spec.capacity_is_n = false;
                spec.competition.capacity = to_double(key, value);
            }
        } else if (key == "mu") {
            spec.competition.decay = to_double(key, value);
        } else if (key == "strategy") {
            try {
                spec.competition.strategy = parse_strategy(value);
            } catch (const std::exception& e) {
                fail(e.what());
            }
        } else if (key == "arrival") {
            try {
                spec.competition.arrival = ArrivalDistribution::parse(value);
            } catch (const std::exception& e) {
                fail(e.what());
            }
        } else if (key == "seeds1") {
            spec.competition.seeds1 = to_int(key, value);
        } else if (key == "seeds2") {
            spec.competition.seeds2 = to_int(key, value);
        } else if (key == "horizon") {
            spec.competition.horizon = to_int(key, value);
        } else if (key == "replications") {
            spec.replications = to_int(key, value);
        } else if (key == "threads") {
            spec.threads = to_int(key, value);
        } else if (key == "seed") {
            spec.master_seed = to_u64(key, value);
        } else if (key == "analytic") {
            spec.analytic_compare = to_bool(key, value);
        } else if (key == "out") {
            spec.out_dir = value;
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    if (spec.replications < 1) {
        throw std::runtime_error("experiment spec " + origin + ": replications must be >= 1");
    }
    return spec;
}

ExperimentSpec ExperimentSpec::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("experiment spec: cannot open " + path);
    return parse(in, path);
}

double resolve_range(const RangeSpec& spec, const EmbeddingSet& emb, const LatentModel& model,
                     std::uint64_t seed) {
    if (spec.kind == RangeSpec::Kind::Fixed) return spec.value;
    if (spec.kind == RangeSpec::Kind::TargetProb) {
        return 4.0 * model.variance * gamma_p_inv(emb.dim / 2.0, spec.value);
    }
    const NodeId n = emb.nodes;
    const std::size_t want = 200000;
    std::vector<double> dists;
    std::uint64_t all_pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    if (all_pairs <= want) {
        for (NodeId i = 0; i < n; ++i) {
            for (NodeId j = i + 1; j < n; ++j) {
                dists.push_back(squared_distance(emb.vec(i), emb.vec(j)));
            }
        }
    } else {
        Rng rng = derive_rng(seed, 0x7a11);
        std::uniform_int_distribution<NodeId> pick(0, n - 1);
        dists.reserve(want);
        while (dists.size() < want) {
            NodeId i = pick(rng), j = pick(rng);
            if (i == j) continue;
            dists.push_back(squared_distance(emb.vec(i), emb.vec(j)));
        }
    }
    std::size_t idx = static_cast<std::size_t>(spec.value * static_cast<double>(dists.size() - 1));
    std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(idx), dists.end());
    double range = dists[idx];
    if (!(range > 0.0)) {
        throw std::runtime_error("quantile range degenerate: embedding points coincide");
    }
    return range;
}

MeanTrajectory read_mean_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_mean_csv: cannot open " + path);
    MeanTrajectory mean;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (line.rfind("t,t_frac,share1_mean", 0) != 0) {
                throw std::runtime_error("read_mean_csv: " + path + " line " +
                                         std::to_string(line_no) + ": unexpected header");
            }
            saw_header = true;
            continue;
        }
        MeanTrajectory::Row row;
        double t_frac = 0.0, share2 = 0.0;
        std::istringstream fields(line);
        std::string cell;
        double* slots[7] = {&row.t,       &t_frac,      &row.share1_mean, &row.share1_ci95,
                            &share2,      &row.x1_mean, &row.x2_mean};
        for (double* slot : slots) {
            if (!std::getline(fields, cell, ',')) {
                throw std::runtime_error("read_mean_csv: " + path + " line " +
                                         std::to_string(line_no) + ": too few fields");
            }
            *slot = std::stod(cell);
        }
        if (!std::getline(fields, cell, ',')) {
            throw std::runtime_error("read_mean_csv: " + path + " line " +
                                     std::to_string(line_no) + ": missing runs field");
        }
        row.runs = std::stoi(cell);
        (void)t_frac;
        (void)share2; // derived columns, recomputed on write
        mean.rows.push_back(row);
    }
    if (mean.rows.empty()) throw std::runtime_error("read_mean_csv: " + path + " holds no rows");
    return mean;
}

namespace {

MeanTrajectory aggregate_runs(const std::vector<const Trajectory*>& trajs) {
    MeanTrajectory mean;
    if (trajs.empty()) return mean;
    double t0 = trajs.front()->points.front().t;
    std::size_t longest = 0;
    for (const Trajectory* traj : trajs) {
        if (traj->points.empty() || traj->points.front().t != t0) {
            throw std::invalid_argument("aggregate: runs disagree on the starting clock");
        }
        longest = std::max(longest, traj->points.size());
    }
    mean.rows.reserve(longest);
    for (std::size_t i = 0; i < longest; ++i) {
        double sum = 0.0, sum_sq = 0.0, x1 = 0.0, x2 = 0.0;
        int count = 0;
        for (const Trajectory* traj : trajs) {
            if (i >= traj->points.size()) continue;
            const TrajectoryPoint& p = traj->points[i];
            double share = p.share1();
            sum += share;
            sum_sq += share * share;
            x1 += p.x1;
            x2 += p.x2;
            ++count;
        }
        MeanTrajectory::Row row;
        row.t = t0 + static_cast<double>(i);
        row.runs = count;
        row.share1_mean = sum / count;
        row.x1_mean = x1 / count;
        row.x2_mean = x2 / count;
        if (count > 1) {
            double var = (sum_sq - sum * sum / count) / (count - 1);
            row.share1_ci95 = 1.96 * std::sqrt(std::max(var, 0.0) / count);
        }
        mean.rows.push_back(row);
    }
    return mean;
}

} // namespace

MonteCarloResult monte_carlo(const Graph& g, const CompetitionConfig& config, int replications,
                             std::uint64_t master_seed, const EmbeddingSet* emb, int threads) {
    if (replications < 1) throw std::invalid_argument("monte_carlo: replications must be >= 1");
    config.validate(g.node_count(), emb != nullptr);

    MonteCarloResult result;
    result.runs.resize(static_cast<std::size_t>(replications));

    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, replications);

    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_lock;
    auto work = [&] {
        for (int i = next.fetch_add(1); i < replications; i = next.fetch_add(1)) {
            try {
                CompetitionConfig local = config;
                local.rng_seed = splitmix64(master_seed +
                                            (static_cast<std::uint64_t>(i) + 1) *
                                                0x9e3779b97f4a7c15ULL);
                result.runs[static_cast<std::size_t>(i)] = run(g, local, emb);
            } catch (...) {
                std::lock_guard<std::mutex> hold(error_lock);
                if (!first_error) first_error = std::current_exception();
                next.store(replications);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);

    std::vector<const Trajectory*> trajs;
    trajs.reserve(result.runs.size());
    for (const RunResult& r : result.runs) trajs.push_back(&r.trajectory);
    result.mean = aggregate_runs(trajs);

    double final_sum = 0.0, trigger_sum = 0.0;
    for (const RunResult& r : result.runs) {
        final_sum += r.trajectory.points.back().share1();
        if (r.overloaded) {
            ++result.overloaded_runs;
            trigger_sum += static_cast<double>(r.trigger_clock);
        }
    }
    result.final_share1_mean = final_sum / replications;
    if (result.overloaded_runs > 0) result.trigger_mean = trigger_sum / result.overloaded_runs;
    return result;
}

ComparisonReport compare(const MeanTrajectory& empirical, const Trajectory& analytic, double t_c,
                         double mu) {
    if (analytic.points.empty()) throw std::invalid_argument("compare: empty analytic trajectory");
    if (!(mu > 0.0)) throw std::invalid_argument("compare: mu must be positive");

    double lo = analytic.points.front().t;
    double hi = analytic.points.back().t;
    double err_total = 0.0, err_pre = 0.0, err_window = 0.0, err_stable = 0.0;
    int n_total = 0, n_pre = 0, n_window = 0, n_stable = 0;

    std::size_t cursor = 0;
    for (const auto& row : empirical.rows) {
        double t = row.t;
        if (t < lo || t > hi) continue;
        while (cursor + 1 < analytic.points.size() && analytic.points[cursor + 1].t < t) ++cursor;
        const TrajectoryPoint& p0 = analytic.points[cursor];
        double share;
        if (cursor + 1 == analytic.points.size() || p0.t >= t) {
            share = p0.share1();
        } else {
            const TrajectoryPoint& p1 = analytic.points[cursor + 1];
            double f = (t - p0.t) / (p1.t - p0.t);
            double x1 = p0.x1 + f * (p1.x1 - p0.x1);
            double x2 = p0.x2 + f * (p1.x2 - p0.x2);
            share = x1 / (x1 + x2);
        }
        double err = std::fabs(row.share1_mean - share);
        err_total += err;
        ++n_total;
        if (t < t_c) {
            err_pre += err;
            ++n_pre;
        } else if (t < t_c + 1.0 / mu) {
            err_window += err;
            ++n_window;
        } else {
            err_stable += err;
            ++n_stable;
        }
    }
    if (n_total == 0) throw std::invalid_argument("compare: trajectories do not overlap in t");

    ComparisonReport report;
    report.mae = err_total / n_total;
    report.overlap_points = n_total;
    if (n_pre > 0) report.mae_pre = err_pre / n_pre;
    if (n_window > 0) report.mae_window = err_window / n_window;
    if (n_stable > 0) report.mae_stable = err_stable / n_stable;
    return report;
}

Trajectory analytic_trajectory(const PowerPair& powers, const InitialState& init, double t_c,
                               double mu, std::span<const double> t_grid) {
    powers.validate();
    init.validate();

    std::vector<double> pre_part, post_part;
    for (double t : t_grid) {
        if (t <= t_c || t <= init.t0) {
            pre_part.push_back(t);
        } else {
            post_part.push_back(t);
        }
    }

    Trajectory out;
    if (post_part.empty()) {
        return pre_overload(powers, init, t_grid);
    }

    InitialState anchor = init;
    if (t_c > init.t0) {
        double grid_tc[1] = {t_c};
        Trajectory at_tc = pre_overload(powers, init, grid_tc);
        anchor = InitialState{t_c, at_tc.points[0].x1, at_tc.points[0].x2};
    }

    Trajectory pre;
    if (!pre_part.empty()) pre = pre_overload(powers, init, pre_part);
    Trajectory post = post_overload(powers, mu, anchor, post_part);

    out.points.reserve(t_grid.size());
    std::size_t i_pre = 0, i_post = 0;
    for (double t : t_grid) {
        if (t <= t_c || t <= init.t0) {
            out.points.push_back(pre.points[i_pre++]);
        } else {
            out.points.push_back(post.points[i_post++]);
        }
    }
    return out;
}

namespace {

struct ParsedRun {
    Trajectory trajectory;
    bool overloaded = false;
    double trigger = 0.0;
};

ParsedRun parse_run_file(const std::string& path) {
    ParsedRun run;
    std::vector<std::pair<std::string, std::string>> metadata;
    run.trajectory = read_trajectory_csv(path, &metadata);
    for (const auto& [key, value] : metadata) {
        if (key == "overloaded") run.overloaded = (value == "1" || value == "true");
        if (key == "trigger" && value != "none") run.trigger = std::stod(value);
    }
    if (run.trajectory.points.empty()) {
        throw std::runtime_error("run file " + path + " holds no points");
    }
    return run;
}

double context_number(const std::vector<std::pair<std::string, std::string>>& context,
                      const std::string& key, double fallback) {
    for (const auto& [k, v] : context) {
        if (k == key) {
            try {
                return std::stod(v);
            } catch (const std::exception&) {
                return fallback;
            }
        }
    }
    return fallback;
}

std::optional<ComparisonReport>
build_reports(const std::string& out_dir, const std::vector<std::string>& run_files,
              const std::vector<std::pair<std::string, std::string>>& context) {
    namespace fs = std::filesystem;
    if (run_files.empty()) throw std::invalid_argument("write_reports: no run files");

    std::vector<ParsedRun> runs;
    runs.reserve(run_files.size());
    for (const std::string& path : run_files) runs.push_back(parse_run_file(path));

    std::vector<const Trajectory*> trajs;
    for (const ParsedRun& r : runs) trajs.push_back(&r.trajectory);
    MeanTrajectory mean = aggregate_runs(trajs);

    std::string mean_path = (fs::path(out_dir) / "mean.csv").string();
    {
        std::ofstream out(mean_path);
        if (!out) throw std::runtime_error("write_reports: cannot open " + mean_path);
        /* t_frac normalizes by the longest observed clock so curves from
         * different horizons can sit on one axis. */
        double t_max = mean.rows.back().t;
        out << "t,t_frac,share1_mean,share1_ci95,share2_mean,x1_mean,x2_mean,runs\n";
        for (const auto& row : mean.rows) {
            out << fmt("%.17g", row.t) << ',' << fmt("%.17g", row.t / t_max) << ','
                << fmt("%.17g", row.share1_mean) << ',' << fmt("%.17g", row.share1_ci95) << ','
                << fmt("%.17g", 1.0 - row.share1_mean) << ',' << fmt("%.17g", row.x1_mean) << ','
                << fmt("%.17g", row.x2_mean) << ',' << row.runs << '\n';
        }
    }

    std::optional<ComparisonReport> comparison;
    std::string analytic_path = (fs::path(out_dir) / "analytic.csv").string();
    if (fs::exists(analytic_path)) {
        Trajectory analytic = read_trajectory_csv(analytic_path);
        double t_c = context_number(context, "predicted_trigger",
                                    std::numeric_limits<double>::infinity());
        double mu = context_number(context, "mu", 1.0);
        comparison = compare(mean, analytic, t_c, mu);
    }

    int overloaded_runs = 0;
    double trigger_sum = 0.0, final_sum = 0.0;
    for (const ParsedRun& r : runs) {
        if (r.overloaded) {
            ++overloaded_runs;
            trigger_sum += r.trigger;
        }
        final_sum += r.trajectory.points.back().share1();
    }
    double final_share1 = final_sum / static_cast<double>(runs.size());

    std::string summary_path = (fs::path(out_dir) / "summary.txt").string();
    std::ofstream out(summary_path);
    if (!out) throw std::runtime_error("write_reports: cannot open " + summary_path);
    for (const auto& [key, value] : context) out << key << " = " << value << '\n';
    out << "runs_retained = " << runs.size() << '\n';
    out << "overloaded_runs = " << overloaded_runs << '\n';
    if (overloaded_runs > 0) {
        out << "observed_trigger_mean = " << fmt("%.6f", trigger_sum / overloaded_runs) << '\n';
    } else {
        out << "observed_trigger_mean = none\n";
    }
    out << "final_share1_mean = " << fmt("%.6f", final_share1) << '\n';
    out << "final_share2_mean = " << fmt("%.6f", 1.0 - final_share1) << '\n';
    out << "winner = " << (final_share1 > 0.5 ? "I1" : (final_share1 < 0.5 ? "I2" : "tie"))
        << '\n';
    if (comparison) {
        out << "mae = " << fmt("%.6f", comparison->mae) << '\n';
        out << "mae_pre = " << fmt("%.6f", comparison->mae_pre) << '\n';
        out << "mae_window = " << fmt("%.6f", comparison->mae_window) << '\n';
        out << "mae_stable = " << fmt("%.6f", comparison->mae_stable) << '\n';
        out << "overlap_points = " << comparison->overlap_points << '\n';
    }
    if (!out) throw std::runtime_error("write_reports: write failed for " + summary_path);
    return comparison;
}

} // namespace

void write_reports(const std::string& out_dir, const std::vector<std::string>& run_files,
                   const std::vector<std::pair<std::string, std::string>>& context) {
    build_reports(out_dir, run_files, context);
}

ExperimentResult run_experiment_file(const std::string& spec_path) {
    return run_experiment(ExperimentSpec::parse_file(spec_path));
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    namespace fs = std::filesystem;

    ExperimentResult result;
    result.out_dir = spec.out_dir;
    std::vector<std::string> created;
    std::string stage = "setup";

    auto fail = [&](const std::exception& e) -> void {
        for (const std::string& path : created) {
            std::error_code ec;
            fs::remove(path, ec); // cleanup is best-effort
        }
        throw std::runtime_error("experiment stage '" + stage + "': " + e.what());
    };

    try {
        fs::create_directories(spec.out_dir);

        stage = "graph";
        Graph base;
        if (spec.graph_source.kind == GraphSource::Kind::File) {
            base = load_edge_list(spec.graph_source.path).graph;
        } else {
            base = generate_power_law(spec.graph_source.nodes, spec.graph_source.exponent,
                                      spec.master_seed);
            std::string path = (fs::path(spec.out_dir) / "graph.edges").string();
            write_edge_list(path, base);
            created.push_back(path);
            result.files.push_back(path);
        }
        const NodeId n = base.node_count();

        stage = "embed";
        EmbeddingSet emb = optimize(base, spec.embedding.walk, spec.embedding.options,
                                    spec.master_seed);
        LatentModel model = fit_gaussian(emb);
        result.fitted_variance = model.variance;
        {
            std::string path = (fs::path(spec.out_dir) / "embeddings.txt").string();
            write_embeddings(path, emb);
            created.push_back(path);
            result.files.push_back(path);
        }

        stage = "recover";
        double range = resolve_range(spec.range, emb, model, spec.master_seed);
        result.range = range;
        result.connect_prob = connect_probability(range, model.variance, emb.dim);

        Graph recovered = recover_links(base, emb, range);
        {
            std::string path = (fs::path(spec.out_dir) / "recovered.edges").string();
            write_recovered_edge_list(path, recovered, base);
            created.push_back(path);
            result.files.push_back(path);
        }

        stage = "simulate";
        CompetitionConfig config = spec.competition;
        if (spec.capacity_is_n) config.capacity = static_cast<double>(n);
        result.predicted_trigger = overload_time(config.capacity, result.connect_prob);
        result.sims = monte_carlo(recovered, config, spec.replications, spec.master_seed, &emb,
                                  spec.threads);

        stage = "analytic";
        if (spec.analytic_compare) {
            InitialState init{static_cast<double>(config.seeds1 + config.seeds2),
                              static_cast<double>(config.seeds1),
                              static_cast<double>(config.seeds2)};
            std::vector<double> grid;
            grid.reserve(result.sims.mean.rows.size());
            for (const auto& row : result.sims.mean.rows) grid.push_back(row.t);
            Trajectory analytic = analytic_trajectory(config.powers, init,
                                                      result.predicted_trigger, config.decay,
                                                      grid);
            std::string path = (fs::path(spec.out_dir) / "analytic.csv").string();
            write_trajectory_csv(path, analytic,
                                 {{"kind", "analytic"},
                                  {"t_c", fmt("%.17g", result.predicted_trigger)},
                                  {"mu", fmt("%.17g", config.decay)}});
            created.push_back(path);
            result.files.push_back(path);
        }

        stage = "report";
        std::vector<std::string> run_files;
        for (std::size_t i = 0; i < result.sims.runs.size(); ++i) {
            const RunResult& r = result.sims.runs[i];
            char name[32];
            std::snprintf(name, sizeof name, "run_%03zu.csv", i);
            std::string path = (fs::path(spec.out_dir) / name).string();
            write_trajectory_csv(
                path, r.trajectory,
                {{"replication", std::to_string(i)},
                 {"a", fmt("%.17g", config.powers.a)},
                 {"b", fmt("%.17g", config.powers.b)},
                 {"capacity", fmt("%.17g", config.capacity)},
                 {"mu", fmt("%.17g", config.decay)},
                 {"strategy", strategy_name(config.strategy)},
                 {"arrival", config.arrival.to_string()},
                 {"overloaded", r.overloaded ? "1" : "0"},
                 {"trigger", r.overloaded ? std::to_string(r.trigger_clock) : "none"}});
            created.push_back(path);
            result.files.push_back(path);
            run_files.push_back(path);
        }

        std::vector<std::pair<std::string, std::string>> context{
            {"graph_nodes", std::to_string(n)},
            {"graph_edges", std::to_string(base.edge_count())},
            {"recovered_edges", std::to_string(recovered.edge_count())},
            {"variance", fmt("%.17g", model.variance)},
            {"range", fmt("%.17g", range)},
            {"connect_probability", fmt("%.17g", result.connect_prob)},
            {"a", fmt("%.17g", config.powers.a)},
            {"b", fmt("%.17g", config.powers.b)},
            {"capacity", fmt("%.17g", config.capacity)},
            {"mu", fmt("%.17g", config.decay)},
            {"strategy", strategy_name(config.strategy)},
            {"arrival", config.arrival.to_string()},
            {"seeds1", std::to_string(config.seeds1)},
            {"seeds2", std::to_string(config.seeds2)},
            {"horizon", std::to_string(config.resolved_horizon(n))},
            {"replications", std::to_string(spec.replications)},
            {"seed", std::to_string(spec.master_seed)},
            {"predicted_trigger", fmt("%.6f", result.predicted_trigger)},
        };
        result.comparison = build_reports(spec.out_dir, run_files, context);
        result.files.push_back((fs::path(spec.out_dir) / "mean.csv").string());
        result.files.push_back((fs::path(spec.out_dir) / "summary.txt").string());
    } catch (const std::exception& e) {
        fail(e);
    }
    return result;
}

} // namespace rivalnet
