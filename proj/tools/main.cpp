// Command line front end. Verbs cover the single pipeline stages (embed,
// recover, simulate, solve, compare) plus the composite `experiment`, which
// chains them all from one key=value spec file.

#include "rivalnet/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

namespace fs = std::filesystem;
using namespace rivalnet;

namespace {

struct SimulateArgs {
    std::string graph_path;
    std::string embeddings_path;
    std::string out;
    std::string capacity = "n";
    std::string strategy = "first";
    std::string arrival = "exponential(1.0)";
    double a = 1.0, b = 1.0, mu = 10.0;
    int seeds1 = 1, seeds2 = 1, horizon = 0;
    int replications = 1, threads = 0;
    std::uint64_t seed = 0;
};

CompetitionConfig build_config(const SimulateArgs& args, NodeId n) {
    CompetitionConfig config;
    config.powers = PowerPair{args.a, args.b};
    config.capacity = args.capacity == "n" ? static_cast<double>(n) : std::stod(args.capacity);
    config.decay = args.mu;
    config.strategy = parse_strategy(args.strategy);
    config.arrival = ArrivalDistribution::parse(args.arrival);
    config.seeds1 = args.seeds1;
    config.seeds2 = args.seeds2;
    config.horizon = args.horizon;
    config.rng_seed = args.seed;
    return config;
}

int cmd_embed(const std::string& graph_path, const std::string& out, const EmbeddingParams& params,
              std::uint64_t seed) {
    Graph g = load_edge_list(graph_path).graph;
    EmbeddingSet emb = optimize(g, params.walk, params.options, seed);
    LatentModel model = fit_gaussian(emb);
    write_embeddings(out, emb);
    std::cout << "embedded " << emb.nodes << " nodes in " << emb.dim << " dimensions -> " << out
              << "\nfitted variance " << model.variance << "\n";
    return 0;
}

int cmd_recover(const std::string& graph_path, const std::string& emb_path,
                const std::string& range_text, const std::string& out, std::uint64_t seed) {
    Graph g = load_edge_list(graph_path).graph;
    EmbeddingSet emb = read_embeddings(emb_path);
    LatentModel model = fit_gaussian(emb);
    double range = resolve_range(RangeSpec::parse(range_text), emb, model, seed);
    double p = connect_probability(range, model.variance, emb.dim);
    Graph recovered = recover_links(g, emb, range);
    write_recovered_edge_list(out, recovered, g);
    std::cout << "range " << range << ", connect probability " << p << "\n"
              << "edges " << g.edge_count() << " -> " << recovered.edge_count() << " -> " << out
              << "\n";
    return 0;
}

int cmd_simulate(const SimulateArgs& args) {
    Graph g = load_edge_list(args.graph_path).graph;
    EmbeddingSet emb;
    const EmbeddingSet* emb_ptr = nullptr;
    if (!args.embeddings_path.empty()) {
        emb = read_embeddings(args.embeddings_path);
        emb_ptr = &emb;
    }
    CompetitionConfig config = build_config(args, g.node_count());

    if (args.replications == 1) {
        config.rng_seed = splitmix64(args.seed + 0x9e3779b97f4a7c15ULL);
        RunResult result = run(g, config, emb_ptr);
        write_trajectory_csv(args.out, result.trajectory,
                             {{"overloaded", result.overloaded ? "1" : "0"},
                              {"trigger", result.overloaded
                                              ? std::to_string(result.trigger_clock)
                                              : "none"}});
        std::cout << "final share1 " << result.trajectory.points.back().share1();
        if (result.overloaded) std::cout << ", overloaded at step " << result.trigger_clock;
        std::cout << " -> " << args.out << "\n";
        return 0;
    }

    MonteCarloResult mc = monte_carlo(g, config, args.replications, args.seed, emb_ptr,
                                      args.threads);
    fs::create_directories(args.out);
    std::vector<std::string> run_files;
    for (std::size_t i = 0; i < mc.runs.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "run_%03zu.csv", i);
        std::string path = (fs::path(args.out) / name).string();
        const RunResult& r = mc.runs[i];
        write_trajectory_csv(path, r.trajectory,
                             {{"replication", std::to_string(i)},
                              {"overloaded", r.overloaded ? "1" : "0"},
                              {"trigger", r.overloaded ? std::to_string(r.trigger_clock)
                                                       : "none"}});
        run_files.push_back(path);
    }
    write_reports(args.out, run_files,
                  {{"graph", args.graph_path},
                   {"replications", std::to_string(args.replications)},
                   {"seed", std::to_string(args.seed)},
                   {"mu", std::to_string(args.mu)}});
    std::cout << "mean final share1 " << mc.final_share1_mean << " over " << args.replications
              << " runs, " << mc.overloaded_runs << " overloaded -> " << args.out << "\n";
    return 0;
}

int cmd_solve(double a, double b, double x1, double x2, double t_c, double mu, double t_end,
              double t_begin, int points, bool linear, const std::string& out) {
    PowerPair powers{a, b};
    InitialState init{x1 + x2, x1, x2};
    if (t_begin <= 0.0) t_begin = init.t0;
    std::vector<double> grid;
    if (linear) {
        grid.reserve(static_cast<std::size_t>(points));
        for (int i = 0; i < points; ++i) {
            grid.push_back(t_begin + (t_end - t_begin) * i / (points - 1));
        }
    } else {
        grid = log_spaced_grid(t_begin, t_end, points);
    }
    Trajectory traj = analytic_trajectory(powers, init, t_c, mu, grid);
    char tc_text[48];
    std::snprintf(tc_text, sizeof tc_text, "%.17g", t_c);
    write_trajectory_csv(out, traj,
                         {{"kind", "analytic"},
                          {"a", std::to_string(a)},
                          {"b", std::to_string(b)},
                          {"t_c", tc_text},
                          {"mu", std::to_string(mu)}});
    std::cout << points << " points on [" << t_begin << ", " << t_end << "], final share1 "
              << traj.points.back().share1() << " -> " << out << "\n";
    return 0;
}

int cmd_compare(const std::string& empirical_path, const std::string& analytic_path, double t_c,
                double mu) {
    MeanTrajectory empirical = read_mean_csv(empirical_path);
    Trajectory analytic = read_trajectory_csv(analytic_path);
    ComparisonReport report = compare(empirical, analytic, t_c, mu);
    std::cout << "overlap_points " << report.overlap_points << "\nmae " << report.mae
              << "\nmae_pre " << report.mae_pre << "\nmae_window " << report.mae_window
              << "\nmae_stable " << report.mae_stable << "\n";
    return 0;
}

int cmd_experiment(const std::string& spec_path, const std::string& out_override,
                   std::int64_t seed_override, int repl_override, int threads_override) {
    ExperimentSpec spec = ExperimentSpec::parse_file(spec_path);
    if (!out_override.empty()) spec.out_dir = out_override;
    if (seed_override >= 0) spec.master_seed = static_cast<std::uint64_t>(seed_override);
    if (repl_override > 0) spec.replications = repl_override;
    if (threads_override > 0) spec.threads = threads_override;

    ExperimentResult result = run_experiment(spec);
    std::ifstream summary(fs::path(result.out_dir) / "summary.txt");
    std::cout << summary.rdbuf();
    std::cout << "wrote " << result.files.size() << " files under " << result.out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Competing-influence spread on latent-space-augmented graphs"};
    app.require_subcommand(1);

    // embed
    auto* embed = app.add_subcommand("embed", "Train node embeddings from random walks");
    std::string embed_graph, embed_out = "embeddings.txt";
    EmbeddingParams embed_params;
    std::uint64_t embed_seed = 0;
    embed->add_option("--graph", embed_graph, "Edge-list file")->required();
    embed->add_option("--out", embed_out, "Output embeddings file");
    embed->add_option("--dim", embed_params.options.dim, "Embedding dimension");
    embed->add_option("--epochs", embed_params.options.epochs, "Training epochs");
    embed->add_option("--learning-rate", embed_params.options.learning_rate, "Ascent step size");
    embed->add_option("--walk-length", embed_params.walk.walk_length, "Steps per walk");
    embed->add_option("--walks-per-node", embed_params.walk.walks_per_node, "Walks per node");
    embed->add_option("--window", embed_params.walk.window, "Context window");
    embed->add_option("--return-bias", embed_params.walk.return_bias,
                      "Backtracking penalty (p)");
    embed->add_option("--inout-bias", embed_params.walk.inout_bias, "Exploration penalty (q)");
    embed->add_option("--seed", embed_seed, "Master RNG seed");

    // recover
    auto* recover = app.add_subcommand("recover", "Add latent links below an influence range");
    std::string rec_graph, rec_emb, rec_range = "4.0", rec_out = "recovered.edges";
    std::uint64_t rec_seed = 0;
    recover->add_option("--graph", rec_graph, "Edge-list file")->required();
    recover->add_option("--embeddings", rec_emb, "Embeddings file")->required();
    recover->add_option("--range", rec_range,
                        "Influence range: number, auto:<prob>, or quantile:<q>");
    recover->add_option("--out", rec_out, "Output edge-list file");
    recover->add_option("--seed", rec_seed, "Seed for quantile sampling");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run the competing-influence process");
    SimulateArgs sim_args;
    simulate->add_option("--graph", sim_args.graph_path, "Edge-list file (usually recovered)")
        ->required();
    simulate->add_option("--embeddings", sim_args.embeddings_path,
                         "Embeddings file (required for most_similar)");
    simulate->add_option("--a", sim_args.a, "Influence power of I1");
    simulate->add_option("--b", sim_args.b, "Influence power of I2");
    simulate->add_option("--capacity", sim_args.capacity, "Attention capacity, or 'n'");
    simulate->add_option("--mu", sim_args.mu, "Discrimination decay rate");
    simulate->add_option("--strategy", sim_args.strategy,
                         "first | latest | most_similar | highest_degree");
    simulate->add_option("--arrival", sim_args.arrival,
                         "exponential(r) | uniform(a,b) | lognormal(m,s)");
    simulate->add_option("--seeds1", sim_args.seeds1, "Initial adopters of I1");
    simulate->add_option("--seeds2", sim_args.seeds2, "Initial adopters of I2");
    simulate->add_option("--horizon", sim_args.horizon, "Total adoptions (0 = every node)");
    simulate->add_option("--replications", sim_args.replications, "Independent runs");
    simulate->add_option("--threads", sim_args.threads, "Worker threads (0 = hardware)");
    simulate->add_option("--seed", sim_args.seed, "Master RNG seed");
    simulate->add_option("--out", sim_args.out, "Output CSV (or directory when replicating)")
        ->required();

    // solve
    auto* solve = app.add_subcommand("solve", "Evaluate the mean growth trajectories");
    double so_a = 1.0, so_b = 1.0, so_x1 = 1.0, so_x2 = 1.0;
    double so_tc = std::numeric_limits<double>::infinity(), so_mu = 10.0;
    double so_tend = 0.0, so_tbegin = 0.0;
    int so_points = 200;
    bool so_linear = false;
    std::string so_out;
    solve->add_option("--a", so_a, "Influence power of I1");
    solve->add_option("--b", so_b, "Influence power of I2");
    solve->add_option("--x1", so_x1, "Initial I1 count")->required();
    solve->add_option("--x2", so_x2, "Initial I2 count")->required();
    solve->add_option("--tc", so_tc, "Overload onset step (omit for none)");
    solve->add_option("--mu", so_mu, "Discrimination decay rate");
    solve->add_option("--t-end", so_tend, "Last clock value")->required();
    solve->add_option("--t-begin", so_tbegin, "First clock value (default x1+x2)");
    solve->add_option("--points", so_points, "Grid size");
    solve->add_flag("--linear", so_linear, "Linear grid instead of logarithmic");
    solve->add_option("--out", so_out, "Output CSV")->required();

    // compare
    auto* cmp = app.add_subcommand("compare", "Mean absolute share error, empirical vs analytic");
    std::string cmp_emp, cmp_ana;
    double cmp_tc = std::numeric_limits<double>::infinity(), cmp_mu = 10.0;
    cmp->add_option("--empirical", cmp_emp, "mean.csv from simulate/experiment")->required();
    cmp->add_option("--analytic", cmp_ana, "Trajectory CSV from solve")->required();
    cmp->add_option("--tc", cmp_tc, "Overload onset used for the branch split");
    cmp->add_option("--mu", cmp_mu, "Decay rate used for the branch split");

    // experiment
    auto* exp = app.add_subcommand("experiment", "Full pipeline from a key=value spec file");
    std::string exp_spec, exp_out;
    std::int64_t exp_seed = -1;
    int exp_repl = 0, exp_threads = 0;
    exp->add_option("spec", exp_spec, "Spec file")->required();
    exp->add_option("--out", exp_out, "Override the output directory");
    exp->add_option("--seed", exp_seed, "Override the master seed");
    exp->add_option("--replications", exp_repl, "Override the replication count");
    exp->add_option("--threads", exp_threads, "Override the worker count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (embed->parsed()) return cmd_embed(embed_graph, embed_out, embed_params, embed_seed);
        if (recover->parsed()) return cmd_recover(rec_graph, rec_emb, rec_range, rec_out, rec_seed);
        if (simulate->parsed()) return cmd_simulate(sim_args);
        if (solve->parsed()) {
            return cmd_solve(so_a, so_b, so_x1, so_x2, so_tc, so_mu, so_tend, so_tbegin, so_points,
                             so_linear, so_out);
        }
        if (cmp->parsed()) return cmd_compare(cmp_emp, cmp_ana, cmp_tc, cmp_mu);
        if (exp->parsed()) return cmd_experiment(exp_spec, exp_out, exp_seed, exp_repl,
                                                 exp_threads);
    } catch (const std::exception& e) {
        std::cerr << "rivalnet: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
