#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rivalnet/gamma.hpp"
#include "rivalnet/latent.hpp"
#include "rivalnet/rng.hpp"
#include "oracles.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

using namespace rivalnet;
namespace fs = std::filesystem;

namespace {

EmbeddingSet points(NodeId nodes, int dim, std::vector<double> data) {
    EmbeddingSet emb;
    emb.dim = dim;
    emb.nodes = nodes;
    emb.data = std::move(data);
    return emb;
}

} // namespace

TEST_CASE("regularized incomplete gamma against an independent reference") {
    // Frozen from scipy.special.gammainc / gammaincc at double precision.
    struct Case {
        double a, x, p;
    };
    const Case cases[] = {
        {0.3, 0.2, 0.65750672426972168},
        {0.5, 0.5, 0.68268949213708585},
        {1.0, 1.0, 0.63212055882855767},
        {2.5, 0.5, 0.037434226752703609},
        {2.5, 6.0, 0.96521221949375813},
        {4.0, 10.0, 0.98966394932407431},
        {10.0, 3.0, 0.0011024881301154815},
        {64.0, 68.0272108843537, 0.70356516170494288},
        {100.0, 80.0, 0.017108313035133101},
        {100.0, 120.0, 0.97213626010947929},
    };
    for (const Case& c : cases) {
        CAPTURE(c.a);
        CAPTURE(c.x);
        CHECK(gamma_p(c.a, c.x) == doctest::Approx(c.p).epsilon(1e-13));
        CHECK(gamma_q(c.a, c.x) == doctest::Approx(1.0 - c.p).epsilon(1e-10));
    }
    CHECK(gamma_q(0.5, 4.0) == doctest::Approx(0.0046777349810472758).epsilon(1e-13));

    SUBCASE("complementarity and boundaries") {
        for (double a : {0.7, 3.0, 42.0}) {
            for (double x : {0.1, 1.0, 7.5, 60.0}) {
                CHECK(gamma_p(a, x) + gamma_q(a, x) == doctest::Approx(1.0).epsilon(1e-14));
            }
        }
        CHECK(gamma_p(2.0, 0.0) == 0.0);
        CHECK(gamma_q(2.0, 0.0) == 1.0);
    }
    SUBCASE("monotone in the argument") {
        double prev = -1.0;
        for (double x = 0.0; x <= 20.0; x += 0.25) {
            double value = gamma_p(3.5, x);
            CHECK(value >= prev);
            prev = value;
        }
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(gamma_p(0.0, 1.0), std::domain_error);
        CHECK_THROWS_AS(gamma_p(-2.0, 1.0), std::domain_error);
        CHECK_THROWS_AS(gamma_p(1.0, -0.5), std::domain_error);
        CHECK_THROWS_AS(gamma_q(0.0, 1.0), std::domain_error);
        CHECK_THROWS_AS(gamma_q(1.0, -0.5), std::domain_error);
    }
}

TEST_CASE("inverse of the regularized gamma") {
    CHECK(gamma_p_inv(4.0, 0.5) == doctest::Approx(3.6720607488508969).epsilon(1e-12));
    CHECK(gamma_p_inv(0.5, 0.99) == doctest::Approx(3.3174483005106072).epsilon(1e-12));
    CHECK(gamma_p_inv(64.0, 0.2) == doctest::Approx(57.188386856178873).epsilon(1e-12));
    for (double a : {0.4, 1.0, 5.0, 80.0}) {
        for (double p : {0.01, 0.2, 0.5, 0.9, 0.999}) {
            double x = gamma_p_inv(a, p);
            CHECK(gamma_p(a, x) == doctest::Approx(p).epsilon(1e-10));
        }
    }
    CHECK_THROWS_AS(gamma_p_inv(0.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(gamma_p_inv(2.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_p_inv(2.0, 1.0), std::domain_error);
}

TEST_CASE("squared-distance law") {
    SUBCASE("shape and rate") {
        DistanceLaw law = DistanceLaw::for_model(2, 0.25);
        CHECK(law.shape == doctest::Approx(1.0));
        CHECK(law.rate == doctest::Approx(1.0)); // 1 / (4 * 0.25)
        CHECK_THROWS_AS(DistanceLaw::for_model(0, 0.25), std::invalid_argument);
        CHECK_THROWS_AS(DistanceLaw::for_model(2, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(DistanceLaw::for_model(2, -1.0), std::invalid_argument);
    }
    SUBCASE("dim 2 with variance 1/4 is the unit exponential") {
        for (double z : {0.1, 1.0, 3.0}) {
            CHECK(distance_pdf(z, 2, 0.25) == doctest::Approx(std::exp(-z)).epsilon(1e-12));
        }
        CHECK(distance_pdf(-0.5, 2, 0.25) == 0.0);
    }
    SUBCASE("pdf integrates to one and cdf matches its own quadrature") {
        struct Case {
            int dim;
            double variance, r;
        };
        for (const Case& c : {Case{2, 0.25, 1.0}, Case{8, 0.1, 2.0}, Case{128, 0.0147, 4.0}}) {
            DistanceLaw law = DistanceLaw::for_model(c.dim, c.variance);
            auto pdf = [&](double z) { return law.pdf(z); };
            // mass beyond mean + 60 sd is far below the tolerance
            double mean = law.shape / law.rate;
            double far = mean + 60.0 * std::sqrt(law.shape) / law.rate;
            CHECK(oracle::integrate(pdf, 0.0, far) == doctest::Approx(1.0).epsilon(1e-8));
            CHECK(law.cdf(c.r) ==
                  doctest::Approx(oracle::integrate(pdf, 0.0, c.r)).epsilon(1e-8));
            CHECK(law.cdf(c.r) == doctest::Approx(gamma_p(c.dim / 2.0,
                                                          law.rate * c.r)).epsilon(1e-14));
        }
    }
}

TEST_CASE("connect probability") {
    SUBCASE("closed forms and frozen references") {
        CHECK(connect_probability(1.0, 0.25, 2) ==
              doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
        CHECK(connect_probability(4.0, 0.0147, 128) ==
              doctest::Approx(0.70356516170494476).epsilon(1e-12));
        CHECK(connect_probability(4.0, 0.1, 8) ==
              doctest::Approx(0.98966394932407431).epsilon(1e-12));
    }
    SUBCASE("limits stay strictly inside (0,1)") {
        double tiny = connect_probability(1e-12, 0.25, 2);
        CHECK(tiny > 0.0);
        CHECK(tiny < 1e-11);
        double huge = connect_probability(1e9, 0.25, 2);
        CHECK(huge < 1.0);
        CHECK(huge > 1.0 - 1e-12);
    }
    SUBCASE("strictly monotone on a grid") {
        for (int dim : {2, 8, 128}) {
            double prev = 0.0;
            for (double r = 0.5; r <= 6.01; r += 0.25) {
                double value = connect_probability(r, 0.05, dim);
                CHECK(value > prev);
                prev = value;
            }
            prev = 1.0;
            for (double variance = 0.01; variance <= 0.2; variance += 0.01) {
                double value = connect_probability(2.0, variance, dim);
                CHECK(value < prev);
                prev = value;
            }
        }
    }
    SUBCASE("parameter errors") {
        CHECK_THROWS_AS(connect_probability(0.0, 0.25, 2), std::domain_error);
        CHECK_THROWS_AS(connect_probability(-1.0, 0.25, 2), std::domain_error);
        CHECK_THROWS_AS(connect_probability(1.0, 0.0, 2), std::invalid_argument);
        CHECK_THROWS_AS(connect_probability(1.0, 0.25, 0), std::invalid_argument);
    }
}

TEST_CASE("tail expansion of the connect probability") {
    SUBCASE("dim 2 collapses to the exponential complement") {
        // a = 0 kills every correction term, so approx and exact coincide.
        ApproxComparison cmp = compare_connect_probability(4.0, 0.25, 2); // x = 4
        CHECK(cmp.exact == doctest::Approx(1.0 - std::exp(-4.0)).epsilon(1e-12));
        CHECK(cmp.relative_error < 1e-12);
    }
    SUBCASE("far tail agrees within a percent") {
        // dim 4 -> a = 1; r = 50 at variance 0.25 -> x = 50
        ApproxComparison cmp = compare_connect_probability(50.0, 0.25, 4);
        CHECK(std::fabs(cmp.relative_error) < 0.01);
        CHECK(cmp.approx == doctest::Approx(connect_probability_approx(50.0, 0.25, 4)));
    }
    SUBCASE("refuses the divergent region around x = a") {
        // dim 4 -> a = 1; variance 0.25 makes x = r
        CHECK_THROWS_AS(connect_probability_approx(1.0, 0.25, 4), std::domain_error); // x == a
        CHECK_THROWS_AS(connect_probability_approx(2.0, 0.25, 4), std::domain_error); // |x-a| == 1
        CHECK_THROWS_AS(connect_probability_approx(0.5, 0.25, 4), std::domain_error);
        CHECK_NOTHROW(connect_probability_approx(2.1, 0.25, 4));
    }
}

TEST_CASE("overload time") {
    CHECK(overload_time(30.0, 0.06) == doctest::Approx(500.0).epsilon(1e-14));
    CHECK(overload_time(2000.0, 1.0) == doctest::Approx(2000.0));
    SUBCASE("linearity") {
        double base = overload_time(12.0, 0.3);
        CHECK(overload_time(24.0, 0.3) == doctest::Approx(2.0 * base));
        CHECK(overload_time(12.0, 0.6) == doctest::Approx(0.5 * base));
    }
    SUBCASE("bundled parameters") {
        OverloadParams params = OverloadParams::from(30.0, 0.06);
        CHECK(params.capacity == 30.0);
        CHECK(params.connect_prob == 0.06);
        CHECK(params.time == doctest::Approx(500.0));
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(overload_time(0.0, 0.5), std::domain_error);
        CHECK_THROWS_AS(overload_time(-3.0, 0.5), std::domain_error);
        CHECK_THROWS_AS(overload_time(10.0, 0.0), std::domain_error);
        CHECK_THROWS_AS(overload_time(10.0, -0.1), std::domain_error);
        CHECK_THROWS_AS(overload_time(10.0, 1.5), std::domain_error);
    }
}

TEST_CASE("link recovery") {
    SUBCASE("three points on a line") {
        Graph empty(3);
        EmbeddingSet emb = points(3, 2, {0.0, 0.0, 1.0, 0.0, 3.0, 0.0});
        // squared distances: (0,1)=1, (1,2)=4, (0,2)=9
        Graph rec = recover_links(empty, emb, 2.0);
        CHECK(rec.edge_count() == 1);
        CHECK(rec.has_edge(0, 1));
        CHECK_FALSE(rec.has_edge(1, 2));
        CHECK_FALSE(rec.has_edge(0, 2));
    }
    SUBCASE("zero range adds nothing") {
        Graph g = Graph::from_edges(3, {{0, 2}});
        EmbeddingSet emb = points(3, 2, {0.0, 0.0, 1.0, 0.0, 3.0, 0.0});
        Graph rec = recover_links(g, emb, 0.0);
        CHECK(rec.edge_count() == g.edge_count());
        CHECK(rec.has_edge(0, 2));
    }
    SUBCASE("threshold is strict") {
        EmbeddingSet emb = points(2, 2, {0.0, 0.0, 2.0, 0.0}); // squared distance 4
        Graph rec = recover_links(Graph(2), emb, 4.0);
        CHECK(rec.edge_count() == 0);
        rec = recover_links(Graph(2), emb, 4.0000001);
        CHECK(rec.edge_count() == 1);
    }
    SUBCASE("huge range completes the graph") {
        EmbeddingSet emb = points(4, 2, {0.0, 0.0, 1.0, 0.0, 3.0, 0.0, 0.0, 2.0});
        Graph rec = recover_links(Graph(4), emb, 100.0);
        CHECK(rec.edge_count() == 6);
    }
    SUBCASE("observed edges always survive") {
        Graph g = generate_power_law(150, 2.5, 9);
        Rng rng = derive_rng(4, 0);
        std::normal_distribution<double> gauss(0.0, 0.3);
        std::vector<double> data(150 * 4);
        for (double& x : data) x = gauss(rng);
        EmbeddingSet emb = points(150, 4, std::move(data));
        Graph rec = recover_links(g, emb, 0.2);
        CHECK(rec.edge_count() >= g.edge_count());
        for (NodeId i = 0; i < 150; ++i) {
            for (NodeId j : g.neighbors(i)) CHECK(rec.has_edge(i, j));
        }
    }
    SUBCASE("node count mismatch") {
        EmbeddingSet emb = points(3, 2, std::vector<double>(6, 0.0));
        CHECK_THROWS_AS(recover_links(Graph(4), emb, 1.0), std::invalid_argument);
    }
}

TEST_CASE("recovered edge list writer") {
    Graph original = Graph::from_edges(3, {{0, 2}});
    EmbeddingSet emb = points(3, 2, {0.0, 0.0, 1.0, 0.0, 3.0, 0.0});
    Graph rec = recover_links(original, emb, 2.0); // adds (0,1)
    REQUIRE(rec.edge_count() == 2);

    fs::path p = fs::temp_directory_path() / "rivalnet_recovered.edges";
    write_recovered_edge_list(p.string(), rec, original);

    // the latent marker hides in a comment, so a plain reload sees E'
    LoadedGraph lg = load_edge_list(p.string());
    CHECK(lg.graph.edge_count() == rec.edge_count());
    CHECK(lg.graph.has_edge(0, 1));
    CHECK(lg.graph.has_edge(0, 2));

    std::ifstream in(p);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.find("# latent") != std::string::npos);
    fs::remove(p);

    CHECK_THROWS_AS(write_recovered_edge_list(p.string(), rec, Graph(5)),
                    std::invalid_argument);
}

TEST_CASE("sampled pair distances follow the fitted law") {
    // 1e5 squared distances between fresh Gaussian pairs, tested against
    // the Gamma law at the 1% level with Stephens' small-sample factor.
    struct Case {
        int dim;
        double variance;
    };
    for (const Case& c : {Case{2, 0.25}, Case{8, 0.1}, Case{128, 0.0147}}) {
        CAPTURE(c.dim);
        Rng rng = derive_rng(2024, static_cast<std::uint64_t>(c.dim));
        std::normal_distribution<double> gauss(0.7, std::sqrt(c.variance));
        const std::size_t trials = 100000;
        std::vector<double> samples;
        samples.reserve(trials);
        for (std::size_t k = 0; k < trials; ++k) {
            double dist = 0.0;
            for (int j = 0; j < c.dim; ++j) {
                double diff = gauss(rng) - gauss(rng);
                dist += diff * diff;
            }
            samples.push_back(dist);
        }
        DistanceLaw law = DistanceLaw::for_model(c.dim, c.variance);
        double d = oracle::ks_statistic(samples, [&](double z) { return law.cdf(z); });
        CHECK(oracle::ks_pass_1pct(d, trials));
    }
}
