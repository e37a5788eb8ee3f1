#include "rivalnet/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rivalnet {

Strategy parse_strategy(const std::string& name) {
    if (name == "first") return Strategy::First;
    if (name == "latest") return Strategy::Latest;
    if (name == "most_similar") return Strategy::MostSimilar;
    if (name == "highest_degree") return Strategy::HighestDegree;
    throw std::invalid_argument("parse_strategy: unknown strategy '" + name + "'");
}

std::string strategy_name(Strategy s) {
    switch (s) {
    case Strategy::First: return "first";
    case Strategy::Latest: return "latest";
    case Strategy::MostSimilar: return "most_similar";
    case Strategy::HighestDegree: return "highest_degree";
    }
    throw std::invalid_argument("strategy_name: unknown strategy");
}

double ArrivalDistribution::sample(Rng& rng) const {
    switch (kind) {
    case Kind::Exponential: return std::exponential_distribution<double>(p0)(rng);
    case Kind::Uniform: return std::uniform_real_distribution<double>(p0, p1)(rng);
    case Kind::LogNormal: return std::lognormal_distribution<double>(p0, p1)(rng);
    }
    throw std::logic_error("ArrivalDistribution: bad kind");
}

ArrivalDistribution ArrivalDistribution::exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("arrival exponential: rate must be positive");
    return {Kind::Exponential, rate, 0.0};
}

ArrivalDistribution ArrivalDistribution::uniform(double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("arrival uniform: need lo < hi");
    return {Kind::Uniform, lo, hi};
}

ArrivalDistribution ArrivalDistribution::lognormal(double log_mean, double log_sd) {
    if (!(log_sd > 0.0)) throw std::invalid_argument("arrival lognormal: log-sd must be positive");
    return {Kind::LogNormal, log_mean, log_sd};
}

ArrivalDistribution ArrivalDistribution::parse(const std::string& text) {
    auto open = text.find('(');
    auto close = text.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open) {
        throw std::invalid_argument("arrival: expected name(args), got '" + text + "'");
    }
    std::string name = text.substr(0, open);
    std::string args = text.substr(open + 1, close - open - 1);
    auto comma = args.find(',');

    auto parse_num = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("arrival: bad number '" + s + "' in '" + text + "'");
        }
        while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
        if (used != s.size()) {
            throw std::invalid_argument("arrival: bad number '" + s + "' in '" + text + "'");
        }
        return v;
    };

    if (name == "exponential") {
        if (comma != std::string::npos) {
            throw std::invalid_argument("arrival exponential: expects one parameter");
        }
        return exponential(parse_num(args));
    }
    if (comma == std::string::npos) {
        throw std::invalid_argument("arrival " + name + ": expects two parameters");
    }
    double first = parse_num(args.substr(0, comma));
    double second = parse_num(args.substr(comma + 1));
    if (name == "uniform") return uniform(first, second);
    if (name == "lognormal") return lognormal(first, second);
    throw std::invalid_argument("arrival: unknown distribution '" + name + "'");
}

std::string ArrivalDistribution::to_string() const {
    auto num = [](double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", x);
        return std::string(buf);
    };
    switch (kind) {
    case Kind::Exponential: return "exponential(" + num(p0) + ")";
    case Kind::Uniform: return "uniform(" + num(p0) + "," + num(p1) + ")";
    case Kind::LogNormal: return "lognormal(" + num(p0) + "," + num(p1) + ")";
    }
    throw std::logic_error("ArrivalDistribution: bad kind");
}

void CompetitionConfig::validate(NodeId n, bool have_embeddings) const {
    powers.validate();
    if (!(capacity > 0.0)) throw std::invalid_argument("CompetitionConfig: capacity must be positive");
    if (!(decay > 0.0)) throw std::invalid_argument("CompetitionConfig: decay must be positive");
    if (seeds1 < 1 || seeds2 < 1) {
        throw std::invalid_argument("CompetitionConfig: both influences need at least one seed");
    }
    if (seeds1 + seeds2 > n) {
        throw std::invalid_argument("CompetitionConfig: " + std::to_string(seeds1 + seeds2) +
                                    " seeds exceed " + std::to_string(n) + " members");
    }
    int t = resolved_horizon(n);
    if (t < seeds1 + seeds2 || t > n) {
        throw std::invalid_argument("CompetitionConfig: horizon must lie in [seed total, n]");
    }
    if (strategy == Strategy::MostSimilar && !have_embeddings) {
        throw std::invalid_argument("CompetitionConfig: most_similar strategy needs embeddings");
    }
}

SimState init_state(const Graph& g, const CompetitionConfig& config, Rng& rng) {
    const NodeId n = g.node_count();
    const int total = config.seeds1 + config.seeds2;
    if (total > n) throw std::invalid_argument("init_state: more seeds than members");

    /* Partial Fisher-Yates over the id range: the first `total` entries are
     * a uniform sample without replacement, in random order. */
    std::vector<NodeId> ids(static_cast<std::size_t>(n));
    std::iota(ids.begin(), ids.end(), 0);
    for (int i = 0; i < total; ++i) {
        std::uniform_int_distribution<NodeId> pick(static_cast<NodeId>(i), n - 1);
        std::swap(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(pick(rng))]);
    }

    SimState state;
    state.labels.assign(static_cast<std::size_t>(n), Label::Uninfected);
    for (int i = 0; i < config.seeds1; ++i) {
        state.labels[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])] = Label::I1;
    }
    for (int i = config.seeds1; i < total; ++i) {
        state.labels[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])] = Label::I2;
    }
    state.x1 = config.seeds1;
    state.x2 = config.seeds2;
    state.clock = total;
    return state;
}

std::optional<NodeId> pick_riser(const SimState& state, const Graph& g, Rng& rng) {
    std::vector<NodeId> eligible;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (state.labels[static_cast<std::size_t>(v)] != Label::Uninfected) continue;
        for (NodeId u : g.neighbors(v)) {
            if (state.labels[static_cast<std::size_t>(u)] != Label::Uninfected) {
                eligible.push_back(v);
                break;
            }
        }
    }
    if (eligible.empty()) return std::nullopt;
    std::uniform_int_distribution<std::size_t> pick(0, eligible.size() - 1);
    return eligible[pick(rng)];
}

ExposureCounts count_exposures(const SimState& state, const Graph& g, NodeId riser) {
    ExposureCounts counts;
    for (NodeId u : g.neighbors(riser)) {
        Label l = state.labels[static_cast<std::size_t>(u)];
        if (l == Label::I1) ++counts.k1;
        else if (l == Label::I2) ++counts.k2;
    }
    return counts;
}

namespace {

std::vector<InfluencedNeighbor> influenced_neighbors(const SimState& state, const Graph& g,
                                                     NodeId riser) {
    std::vector<InfluencedNeighbor> out;
    for (NodeId u : g.neighbors(riser)) {
        Label l = state.labels[static_cast<std::size_t>(u)];
        if (l != Label::Uninfected) out.push_back({u, l});
    }
    return out;
}

Label weighted_choice(int k1, int k2, const PowerPair& powers, Rng& rng) {
    double w1 = powers.a * k1;
    double w2 = powers.b * k2;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    return unit(rng) * (w1 + w2) < w1 ? Label::I1 : Label::I2;
}

template <typename Score>
Label best_by(std::span<const InfluencedNeighbor> neighbors, Score&& score, bool maximize,
              Rng& rng) {
    double best = 0.0;
    std::vector<std::size_t> winners;
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
        double s = score(neighbors[i]);
        if (maximize) s = -s;
        if (winners.empty() || s < best) {
            best = s;
            winners.assign(1, i);
        } else if (s == best) {
            winners.push_back(i);
        }
    }
    std::size_t chosen = winners.front();
    if (winners.size() > 1) {
        std::uniform_int_distribution<std::size_t> pick(0, winners.size() - 1);
        chosen = winners[pick(rng)];
    }
    return neighbors[chosen].label;
}

} // namespace

Label decide_pre_overload(NodeId riser, const SimState& state, const Graph& g,
                          const PowerPair& powers, Rng& rng) {
    ExposureCounts counts = count_exposures(state, g, riser);
    if (counts.k1 + counts.k2 == 0) {
        throw std::invalid_argument("decide_pre_overload: riser " + std::to_string(riser) +
                                    " has no influenced neighbor");
    }
    return weighted_choice(counts.k1, counts.k2, powers, rng);
}

Label strategy_first(std::span<const InfluencedNeighbor> neighbors,
                     const ArrivalDistribution& arrival, Rng& rng) {
    if (neighbors.empty()) throw std::invalid_argument("strategy_first: no influenced neighbor");
    return best_by(neighbors, [&](const InfluencedNeighbor&) { return arrival.sample(rng); },
                   false, rng);
}

Label strategy_latest(std::span<const InfluencedNeighbor> neighbors,
                      const ArrivalDistribution& arrival, Rng& rng) {
    if (neighbors.empty()) throw std::invalid_argument("strategy_latest: no influenced neighbor");
    return best_by(neighbors, [&](const InfluencedNeighbor&) { return arrival.sample(rng); },
                   true, rng);
}

Label strategy_most_similar(NodeId riser, std::span<const InfluencedNeighbor> neighbors,
                            const EmbeddingSet& emb, Rng& rng) {
    if (neighbors.empty()) {
        throw std::invalid_argument("strategy_most_similar: no influenced neighbor");
    }
    auto v = emb.vec(riser);
    return best_by(neighbors,
                   [&](const InfluencedNeighbor& n) { return squared_distance(v, emb.vec(n.node)); },
                   false, rng);
}

Label strategy_highest_degree(std::span<const InfluencedNeighbor> neighbors, const Graph& g,
                              Rng& rng) {
    if (neighbors.empty()) {
        throw std::invalid_argument("strategy_highest_degree: no influenced neighbor");
    }
    return best_by(neighbors,
                   [&](const InfluencedNeighbor& n) { return static_cast<double>(g.degree(n.node)); },
                   true, rng);
}

namespace {

Label apply_strategy(NodeId riser, std::span<const InfluencedNeighbor> neighbors,
                     const CompetitionConfig& config, const Graph& g, const EmbeddingSet* emb,
                     Rng& rng) {
    switch (config.strategy) {
    case Strategy::First: return strategy_first(neighbors, config.arrival, rng);
    case Strategy::Latest: return strategy_latest(neighbors, config.arrival, rng);
    case Strategy::MostSimilar: return strategy_most_similar(riser, neighbors, *emb, rng);
    case Strategy::HighestDegree: return strategy_highest_degree(neighbors, g, rng);
    }
    throw std::logic_error("apply_strategy: bad strategy");
}

} // namespace

Label decide_post_overload(NodeId riser, const SimState& state, const Graph& g,
                           const CompetitionConfig& config, const EmbeddingSet* emb, Rng& rng) {
    if (!state.overloaded) {
        throw std::logic_error("decide_post_overload: state is not overloaded");
    }
    double p = discrimination_prob(static_cast<double>(state.clock), config.decay,
                                   static_cast<double>(state.overload_clock), false);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng) < p) {
        return decide_pre_overload(riser, state, g, config.powers, rng);
    }
    std::vector<InfluencedNeighbor> neighbors = influenced_neighbors(state, g, riser);
    if (neighbors.empty()) {
        throw std::invalid_argument("decide_post_overload: riser has no influenced neighbor");
    }
    return apply_strategy(riser, neighbors, config, g, emb, rng);
}

RunResult run(const Graph& g, const CompetitionConfig& config, const EmbeddingSet* emb) {
    const NodeId n = g.node_count();
    config.validate(n, emb != nullptr);
    if (emb && emb->nodes != n) {
        throw std::invalid_argument("run: embedding covers a different node set");
    }

    Rng rng = derive_rng(config.rng_seed, 0);
    SimState state = init_state(g, config, rng);
    const int horizon = config.resolved_horizon(n);

    /* Uniform sampling over eligible members in O(1): a dense list plus a
     * position index, updated as labels land. */
    std::vector<NodeId> eligible;
    std::vector<std::int32_t> position(static_cast<std::size_t>(n), -1);
    auto add_eligible = [&](NodeId v) {
        if (position[static_cast<std::size_t>(v)] >= 0) return;
        if (state.labels[static_cast<std::size_t>(v)] != Label::Uninfected) return;
        position[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(eligible.size());
        eligible.push_back(v);
    };
    auto remove_eligible = [&](NodeId v) {
        std::int32_t pos = position[static_cast<std::size_t>(v)];
        if (pos < 0) return;
        NodeId moved = eligible.back();
        eligible[static_cast<std::size_t>(pos)] = moved;
        position[static_cast<std::size_t>(moved)] = pos;
        eligible.pop_back();
        position[static_cast<std::size_t>(v)] = -1;
    };

    for (NodeId v = 0; v < n; ++v) {
        if (state.labels[static_cast<std::size_t>(v)] == Label::Uninfected) continue;
        for (NodeId u : g.neighbors(v)) add_eligible(u);
    }

    RunResult result;
    result.trajectory.points.push_back({static_cast<double>(state.clock),
                                        static_cast<double>(state.x1),
                                        static_cast<double>(state.x2)});

    std::vector<InfluencedNeighbor> neighbors;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    while (state.clock < horizon && !eligible.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, eligible.size() - 1);
        NodeId riser = eligible[pick(rng)];

        neighbors.clear();
        int k1 = 0, k2 = 0;
        for (NodeId u : g.neighbors(riser)) {
            Label l = state.labels[static_cast<std::size_t>(u)];
            if (l == Label::Uninfected) continue;
            neighbors.push_back({u, l});
            if (l == Label::I1) ++k1;
            else ++k2;
        }

        if (!state.overloaded && static_cast<double>(k1 + k2) > config.capacity) {
            state.overloaded = true;
            state.overload_clock = state.clock;
            result.overloaded = true;
            result.trigger_clock = state.clock;
        }

        Label adopted;
        if (!state.overloaded) {
            adopted = weighted_choice(k1, k2, config.powers, rng);
        } else {
            double p = discrimination_prob(static_cast<double>(state.clock), config.decay,
                                           static_cast<double>(state.overload_clock), false);
            if (unit(rng) < p) {
                adopted = weighted_choice(k1, k2, config.powers, rng);
            } else {
                adopted = apply_strategy(riser, neighbors, config, g, emb, rng);
            }
        }

        state.labels[static_cast<std::size_t>(riser)] = adopted;
        if (adopted == Label::I1) ++state.x1;
        else ++state.x2;
        ++state.clock;

        remove_eligible(riser);
        for (NodeId u : g.neighbors(riser)) add_eligible(u);

        result.trajectory.points.push_back({static_cast<double>(state.clock),
                                            static_cast<double>(state.x1),
                                            static_cast<double>(state.x2)});
    }
    result.final_clock = state.clock;
    return result;
}

} // namespace rivalnet
