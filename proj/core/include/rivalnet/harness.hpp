#pragma once

#include "rivalnet/analytic.hpp"
#include "rivalnet/embedding.hpp"
#include "rivalnet/graph.hpp"
#include "rivalnet/latent.hpp"
#include "rivalnet/sim.hpp"
#include "rivalnet/trajectory.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rivalnet {

struct GraphSource {
    enum class Kind { File, Synthetic };
    Kind kind = Kind::Synthetic;
    std::string path;      // File
    NodeId nodes = 2000;   // Synthetic
    double exponent = 2.5; // Synthetic
};

/* How the influence range r is fixed for link recovery:
 *   Fixed       use `value` as r directly
 *   TargetProb  choose r so the fitted model connects a pair with
 *               probability `value`
 *   Quantile    choose r as the `value`-quantile of sampled pairwise
 *               squared embedding distances. */
struct RangeSpec {
    enum class Kind { Fixed, TargetProb, Quantile };
    Kind kind = Kind::Fixed;
    double value = 4.0;

    /* "4.0", "auto:0.2", "quantile:0.2". */
    static RangeSpec parse(const std::string& text);
    std::string to_string() const;
};

/* Concrete influence range r for a fitted embedding. TargetProb inverts the
 * fitted distance law; Quantile takes the empirical quantile of sampled
 * pairwise squared distances (all pairs when few, 200k samples otherwise,
 * drawn from a stream of `seed`). */
double resolve_range(const RangeSpec& spec, const EmbeddingSet& emb, const LatentModel& model,
                     std::uint64_t seed);

struct EmbeddingParams {
    WalkParams walk;
    OptimizeOptions options;
};

struct ExperimentSpec {
    GraphSource graph_source;
    EmbeddingParams embedding;
    RangeSpec range;
    CompetitionConfig competition; // capacity may be overridden by capacity_is_n
    bool capacity_is_n = false;
    int replications = 1;
    bool analytic_compare = true;
    std::string out_dir = "experiment_out";
    std::uint64_t master_seed = 0;
    int threads = 0; // 0 picks the hardware count

    /* Flat "key = value" text, '#' comments. Unknown keys are an error. */
    static ExperimentSpec parse(std::istream& in, const std::string& origin);
    static ExperimentSpec parse_file(const std::string& path);
};

struct MeanTrajectory {
    struct Row {
        double t = 0.0;
        double share1_mean = 0.0;
        double share1_ci95 = 0.0; // 95% normal half width; 0 for a single run
        double x1_mean = 0.0;
        double x2_mean = 0.0;
        int runs = 0; // replications that reached this clock value
    };
    std::vector<Row> rows;
};

/* Reads a mean.csv produced by this module. */
MeanTrajectory read_mean_csv(const std::string& path);

struct MonteCarloResult {
    MeanTrajectory mean;
    std::vector<RunResult> runs;
    double final_share1_mean = 0.0; // mean over each run's last point
    int overloaded_runs = 0;
    double trigger_mean = 0.0; // over overloaded runs; 0 when none
};

/* `replications` independent runs on a bounded worker pool. Run k draws
 * its seed from (master_seed, k) only, so results are independent of the
 * thread count and schedule. Rows aggregate runs that reached each clock
 * value. */
MonteCarloResult monte_carlo(const Graph& g, const CompetitionConfig& config, int replications,
                             std::uint64_t master_seed, const EmbeddingSet* emb = nullptr,
                             int threads = 0);

/* Mean absolute error of the I1 share between an empirical mean trajectory
 * and an analytic one evaluated on the same clock values, split by regime:
 * before t_c, inside the transition window, and after t_c + 1/mu. A branch
 * with no overlap reports -1. */
struct ComparisonReport {
    double mae = 0.0;
    double mae_pre = -1.0;
    double mae_window = -1.0;
    double mae_stable = -1.0;
    int overlap_points = 0;
};

ComparisonReport compare(const MeanTrajectory& empirical, const Trajectory& analytic, double t_c,
                         double mu);

/* Mean growth trajectory on an arbitrary grid: the pre-overload law up to
 * t_c, then the overloaded law anchored at the pre-overload state reached
 * at t_c. Pass an infinite t_c for a run that never overloads. */
Trajectory analytic_trajectory(const PowerPair& powers, const InitialState& init, double t_c,
                               double mu, std::span<const double> t_grid);

struct ExperimentResult {
    std::string out_dir;
    std::vector<std::string> files; // paths written, in creation order
    MonteCarloResult sims;
    std::optional<ComparisonReport> comparison;
    double fitted_variance = 0.0;
    double range = 0.0;
    double connect_prob = 0.0;
    double predicted_trigger = 0.0; // capacity / connect_prob
};

/* Full pipeline: graph -> embed -> fit -> recover -> replicated runs ->
 * optional analytic comparison -> reports. Writes, under spec.out_dir:
 * embeddings.txt, recovered.edges, run_###.csv, mean.csv, analytic.csv
 * (when enabled), summary.txt, and graph.edges for synthetic graphs.
 * mean.csv and summary.txt are recomputed from the run_###.csv files on
 * disk, so regenerating them from retained runs is byte-identical. On any
 * failure the files created so far are removed and the error is rethrown
 * tagged with the pipeline stage. */
ExperimentResult run_experiment(const ExperimentSpec& spec);
ExperimentResult run_experiment_file(const std::string& spec_path);

/* Rebuilds mean.csv and summary.txt in out_dir from the run_###.csv files
 * found there plus the context echoed in summary metadata. Used by
 * run_experiment itself; exposed for regeneration. */
void write_reports(const std::string& out_dir, const std::vector<std::string>& run_files,
                   const std::vector<std::pair<std::string, std::string>>& context);

} // namespace rivalnet
