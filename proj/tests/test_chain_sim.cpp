#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <sstream>

#include "sostree/chain_sim.hpp"
#include "sostree/extremality.hpp"
#include "sostree/gibbs.hpp"
#include "sostree/ti_solver.hpp"

using namespace sostree;

TEST_CASE("counter-based generator reproduces the reference vectors") {
    const auto zero = philox4x32(0, {0, 0, 0, 0});
    CHECK(zero[0] == 0x6627e8d5u);
    CHECK(zero[1] == 0xe169c58du);
    CHECK(zero[2] == 0xbc57ac4cu);
    CHECK(zero[3] == 0x9b00dbd8u);

    const auto ones = philox4x32(0xffffffffffffffffull, {0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu});
    CHECK(ones[0] == 0x408f276du);
    CHECK(ones[1] == 0x41c83b0eu);
    CHECK(ones[2] == 0xa20bc7c6u);
    CHECK(ones[3] == 0x6d5451fdu);

    const auto pi = philox4x32(0x299f31d0a4093822ull, {0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u});
    CHECK(pi[0] == 0xd16cfe09u);
    CHECK(pi[1] == 0x94fdccebu);
    CHECK(pi[2] == 0x5001e420u);
    CHECK(pi[3] == 0x24126ea1u);
}

TEST_CASE("substream doubles are deterministic and in [0, 1)") {
    CHECK(substream_uniform(0, 0, 0) == 0.8805201978886142);
    CHECK(substream_uniform(42, 0, 0) == 0.4685865183391049);
    CHECK(substream_uniform(42, 1, 0) == 0.49120127602043595);
    CHECK(substream_uniform(42, 0, 1) == 0.32706338120338474);
    CHECK(substream_uniform(0xDEADBEEFCAFEF00Dull, 123456789, 17) == 0.16571572073732843);
    for (uint64_t s = 0; s < 1000; ++s) {
        const double u = substream_uniform(7, s, 3);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("sampling is reproducible by seed") {
    const CayleyBall ball = build_ball(2, 2);
    const ModelSpec model = make_model(2, ModelVariant::inf_sos, 0.3);
    const TIBoundaryLaw law = TIBoundaryLaw::from_z({0.7, 1.9, 1.0});
    const SampleBatch a = sample(ball, model, law, 200, 99);
    const SampleBatch b = sample(ball, model, law, 200, 99);
    CHECK(a.configs == b.configs);
    const SampleBatch c = sample(ball, model, law, 200, 100);
    CHECK(a.configs != c.configs);
}

TEST_CASE("every sampled configuration is admissible") {
    const CayleyBall ball = build_ball(2, 2);
    const ModelSpec model = make_model(2, ModelVariant::inf_sos, 0.3);
    const TIBoundaryLaw law = TIBoundaryLaw::from_z({0.7, 1.9, 1.0});
    const SampleBatch batch = sample(ball, model, law, 500, 5);
    for (const Configuration& cfg : batch.configs) CHECK(is_admissible(model.graph, ball, cfg));
}

TEST_CASE("at theta = 0 the sampler draws constant colourings") {
    const CayleyBall ball = build_ball(2, 2);
    const ModelSpec model = make_model(2, ModelVariant::inf_sos, 0.0);
    const TIBoundaryLaw law = TIBoundaryLaw::from_z({1.0, 1.0, 1.0});
    const SampleBatch batch = sample(ball, model, law, 300, 11);
    std::set<uint8_t> seen;
    for (const Configuration& cfg : batch.configs) {
        for (uint8_t spin : cfg) CHECK(spin == cfg[0]);
        seen.insert(cfg[0]);
    }
    CHECK(seen.size() == 3);  // all three colours show up in 300 draws
}

TEST_CASE("conditional rows equal the chain transition matrix at a fixed point") {
    const double theta = 0.3;
    const int k = 2;
    const PhaseRecord rec = classify(theta, k);
    const ModelSpec model = make_model(2, ModelVariant::inf_sos, theta);
    const CayleyBall ball = build_ball(k, 3);
    for (const TISolution& s : rec.solutions) {
        const TIBoundaryLaw law = TIBoundaryLaw::from_xy(s.x, s.y, k);
        const TransitionMatrix tm = transition_matrix(s.x, s.y, theta, k);
        for (int d = 0; d < ball.n; ++d) {
            const auto table = conditional_table(ball, model, law, d);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    CHECK(std::abs(table[static_cast<size_t>(i)][static_cast<size_t>(j)] - tm(i, j)) <= 1e-12);
        }
    }
}

TEST_CASE("product law equals the exhaustive radius-1 measure") {
    const CayleyBall ball = build_ball(2, 1);
    const ModelSpec model = make_model(2, ModelVariant::inf_sos, 0.35);
    const TIBoundaryLaw law = TIBoundaryLaw::from_z({0.8, 1.3, 1.0});
    const BoundaryLawField field = BoundaryLawField::constant(ball, law);
    const FiniteMeasure fm = finite_measure(ball, model, field);

    const std::vector<double> root = sampler_root_law(ball, model, law);
    const auto table = conditional_table(ball, model, law, 0);
    for (const auto& [code, prob] : fm.atoms) {
        const Configuration cfg = decode_config(code, 2, ball.num_vertices());
        double product = root[cfg[0]];
        for (int v = 1; v < ball.num_vertices(); ++v)
            product *= table[cfg[0]][cfg[static_cast<size_t>(v)]];
        CHECK(std::abs(product - prob) <= 1e-12);
    }

    // the sampler's root law is the exact root marginal
    const std::vector<double> marginal = site_marginal(ball, model, field, 0);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(root[static_cast<size_t>(i)] - marginal[static_cast<size_t>(i)]) <= 1e-14);
}

TEST_CASE("empirical frequencies approach the exact marginals") {
    const double theta = 0.3;
    const PhaseRecord rec = classify(theta, 2);
    REQUIRE(rec.count() == 5);
    const TISolution s = rec.solutions[0];
    const CayleyBall ball = build_ball(2, 2);
    const ModelSpec model = make_model(2, ModelVariant::inf_sos, theta);
    const TIBoundaryLaw law = TIBoundaryLaw::from_xy(s.x, s.y, 2);
    const SampleBatch batch = sample(ball, model, law, 20000, 12345);
    const EmpiricalStats stats = empirical_stats(batch);
    CHECK(stats.num_configs == 20000);

    const BoundaryLawField field = BoundaryLawField::constant(ball, law);
    for (int d = 0; d <= 2; ++d) {
        const int v = ball.sphere(d)[0];
        const std::vector<double> exact = site_marginal(ball, model, field, v);
        for (int i = 0; i < 3; ++i)
            CHECK(std::abs(stats.site_freq[static_cast<size_t>(d)][static_cast<size_t>(i)] -
                           exact[static_cast<size_t>(i)]) <= 0.02);
    }
    const std::vector<double> pair = pair_marginal(ball, model, field, 1);
    for (int i = 0; i < 9; ++i)
        CHECK(std::abs(stats.pair_freq[static_cast<size_t>(i)] - pair[static_cast<size_t>(i)]) <= 0.02);

    const std::vector<double> root = site_marginal(ball, model, field, 0);
    const ChiSquareResult chi = root_chi_square(batch, root);
    CHECK(chi.dof == 2);
    CHECK(chi.pvalue > 0.001);
}

TEST_CASE("chi-square tail probabilities") {
    CHECK(chi_square_pvalue(0.0, 3) == 1.0);
    // dof = 2: the tail is exactly exp(-x/2)
    CHECK(chi_square_pvalue(2.0, 2) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(chi_square_pvalue(10.0, 2) == doctest::Approx(std::exp(-5.0)).epsilon(1e-12));
    // dof = 1: the tail is erfc(sqrt(x/2))
    CHECK(chi_square_pvalue(1.0, 1) == doctest::Approx(std::erfc(std::sqrt(0.5))).epsilon(1e-10));
    CHECK(chi_square_pvalue(9.0, 1) == doctest::Approx(std::erfc(std::sqrt(4.5))).epsilon(1e-10));
    CHECK(chi_square_pvalue(200.0, 5) < 1e-30);
}

TEST_CASE("zero-probability categories poison the fit when hit") {
    SampleBatch batch;
    batch.k = 2;
    batch.n = 0;
    batch.m = 2;
    batch.configs = {{0}, {1}, {2}};
    const ChiSquareResult chi = root_chi_square(batch, {0.5, 0.5, 0.0});
    CHECK(chi.pvalue == 0.0);
}

TEST_CASE("line export") {
    SampleBatch batch;
    batch.k = 2;
    batch.n = 1;
    batch.m = 2;
    batch.configs = {{0, 1, 2, 1}, {2, 2, 1, 0}};
    CHECK(batch_to_lines(batch) == "0121\n2210\n");
}
