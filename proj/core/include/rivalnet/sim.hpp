#pragma once

#include "rivalnet/analytic.hpp"
#include "rivalnet/embedding.hpp"
#include "rivalnet/graph.hpp"
#include "rivalnet/rng.hpp"
#include "rivalnet/trajectory.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rivalnet {

enum class Label : std::uint8_t { Uninfected = 0, I1 = 1, I2 = 2 };

/* Tie-break rule applied by members who no longer discriminate between
 * influences. */
enum class Strategy { First, Latest, MostSimilar, HighestDegree };

Strategy parse_strategy(const std::string& name);
std::string strategy_name(Strategy s);

/* Arrival-time law used by the First/Latest strategies. */
struct ArrivalDistribution {
    enum class Kind { Exponential, Uniform, LogNormal };

    Kind kind = Kind::Exponential;
    double p0 = 1.0; // rate | lower | log-mean
    double p1 = 0.0; // unused | upper | log-sd

    double sample(Rng& rng) const;

    static ArrivalDistribution exponential(double rate);
    static ArrivalDistribution uniform(double lo, double hi);
    static ArrivalDistribution lognormal(double log_mean, double log_sd);

    /* "exponential(1.0)", "uniform(0,1)", "lognormal(0,1)". */
    static ArrivalDistribution parse(const std::string& text);
    std::string to_string() const;
};

struct CompetitionConfig {
    PowerPair powers{1.0, 1.0};
    double capacity = 0.0; // attention limit delta_c; counts above it overload
    double decay = 10.0;   // mu
    Strategy strategy = Strategy::First;
    ArrivalDistribution arrival = ArrivalDistribution::exponential(1.0);
    int seeds1 = 1;
    int seeds2 = 1;
    int horizon = 0; // total adoptions to simulate; 0 means every node
    std::uint64_t rng_seed = 0;

    int resolved_horizon(NodeId n) const { return horizon == 0 ? static_cast<int>(n) : horizon; }
    void validate(NodeId n, bool have_embeddings) const;
};

/* Mutable run state. Labels are write-once: a member never changes sides.
 * clock equals x1 + x2 at all times (the clock counts adoptions). */
struct SimState {
    std::vector<Label> labels;
    std::int64_t x1 = 0;
    std::int64_t x2 = 0;
    std::int64_t clock = 0;
    bool overloaded = false;
    std::int64_t overload_clock = 0; // clock value when the regime flipped
};

/* Seeds seeds1 + seeds2 distinct members uniformly at random and labels
 * them; the clock starts at the seed total. */
SimState init_state(const Graph& g, const CompetitionConfig& config, Rng& rng);

/* Uniform draw over uninfected members with at least one influenced
 * neighbor; empty when no such member remains. Linear scan; the run loop
 * keeps an incremental index instead. */
std::optional<NodeId> pick_riser(const SimState& state, const Graph& g, Rng& rng);

struct ExposureCounts {
    int k1 = 0;
    int k2 = 0;
};

ExposureCounts count_exposures(const SimState& state, const Graph& g, NodeId riser);

/* Adopts I1 with probability a*k1 / (a*k1 + b*k2) over the riser's
 * influenced neighbors. The riser must have at least one. */
Label decide_pre_overload(NodeId riser, const SimState& state, const Graph& g,
                          const PowerPair& powers, Rng& rng);

/* Overloaded decision: with probability exp(-mu (t - t_c)) the member still
 * weighs powers as above, otherwise the configured strategy picks. */
Label decide_post_overload(NodeId riser, const SimState& state, const Graph& g,
                           const CompetitionConfig& config, const EmbeddingSet* emb, Rng& rng);

struct InfluencedNeighbor {
    NodeId node = 0;
    Label label = Label::Uninfected;
};

/* One independent arrival time per influenced neighbor; the earliest (resp.
 * latest) wins. For a continuous law each side wins in proportion to its
 * neighbor count. */
Label strategy_first(std::span<const InfluencedNeighbor> neighbors,
                     const ArrivalDistribution& arrival, Rng& rng);
Label strategy_latest(std::span<const InfluencedNeighbor> neighbors,
                      const ArrivalDistribution& arrival, Rng& rng);

/* Smallest squared embedding distance to the riser wins; ties uniform. */
Label strategy_most_similar(NodeId riser, std::span<const InfluencedNeighbor> neighbors,
                            const EmbeddingSet& emb, Rng& rng);

/* Largest degree wins; ties uniform. */
Label strategy_highest_degree(std::span<const InfluencedNeighbor> neighbors, const Graph& g,
                              Rng& rng);

struct RunResult {
    Trajectory trajectory; // one point per clock value, seed state included
    bool overloaded = false;
    std::int64_t trigger_clock = 0; // 0 when the run never overloaded
    std::int64_t final_clock = 0;
};

/* Full run on the (typically recovered) graph: repeatedly draw a riser and
 * let it decide, until the horizon or until no eligible member remains.
 * The regime flips permanently the first time a riser has strictly more
 * than `capacity` influenced neighbors. Identical config and seed give an
 * identical trajectory. */
RunResult run(const Graph& g, const CompetitionConfig& config, const EmbeddingSet* emb = nullptr);

} // namespace rivalnet
