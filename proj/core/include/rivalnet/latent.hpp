#pragma once

#include "rivalnet/embedding.hpp"
#include "rivalnet/graph.hpp"

#include <string>

namespace rivalnet {

/* Law of the squared distance between two independent draws from an
 * isotropic Gaussian with per-coordinate variance `variance` in `dim`
 * dimensions: Gamma with shape dim/2 and rate 1/(4*variance). */
struct DistanceLaw {
    double shape = 0.0;
    double rate = 0.0;

    static DistanceLaw for_model(int dim, double variance);

    double pdf(double z) const;
    double cdf(double z) const;
};

double distance_pdf(double z, int dim, double variance);

/* Probability that a pair distance falls below `range`:
 * the regularized lower incomplete gamma at (dim/2, range/(4*variance)).
 * Strictly inside (0,1); rounding that lands on a boundary is pulled back
 * by one ulp. */
double connect_probability(double range, double variance, int dim);

/* Asymptotic tail expansion of the same quantity, kept for comparison
 * only: with a = dim/2 - 1 and x = range/(4*variance) it evaluates
 * Gamma(dim/2) - e^{-x} x^{a+1} / (x-a) * (1 - a/(x-a)^2 + 2a/(x-a)^3),
 * which is an unnormalized quantity and is accurate only for x >> a.
 * Requires |x - a| > 1. Prefer connect_probability for real use. */
double connect_probability_approx(double range, double variance, int dim);

struct ApproxComparison {
    double approx = 0.0;
    double exact = 0.0;
    double relative_error = 0.0;
};

ApproxComparison compare_connect_probability(double range, double variance, int dim);

/* Steps until an average member has seen more than `capacity` influenced
 * contacts: capacity / connect_prob. capacity must be positive,
 * connect_prob in (0, 1]. */
double overload_time(double capacity, double connect_prob);

struct OverloadParams {
    double capacity = 0.0;
    double connect_prob = 0.0;
    double time = 0.0; // capacity / connect_prob

    static OverloadParams from(double capacity, double connect_prob);
};

/* Union of g's edges with every pair whose squared embedding distance is
 * strictly below `range`. O(n^2 dim). */
Graph recover_links(const Graph& g, const EmbeddingSet& emb, double range);

/* Edge-list writer for a recovery result: lines are "u v" as usual, with
 * "# latent" appended to edges of `recovered` that `original` lacks. The
 * marker sits in a comment, so load_edge_list reads the file back as-is. */
void write_recovered_edge_list(const std::string& path, const Graph& recovered,
                               const Graph& original);

} // namespace rivalnet
