#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "sostree/gibbs.hpp"
#include "sostree/ti_solver.hpp"

using namespace sostree;

namespace {

BoundaryLawField ones_field(const CayleyBall& ball) {
    return BoundaryLawField::constant(ball, TIBoundaryLaw::from_z({1.0, 1.0, 1.0}));
}

/// Marginal of vertex v by direct summation over the exhaustive measure.
std::vector<double> marginal_by_enumeration(const FiniteMeasure& fm, const CayleyBall& ball, int v) {
    std::vector<double> out(static_cast<size_t>(fm.m) + 1, 0.0);
    for (const auto& [code, prob] : fm.atoms) {
        const Configuration cfg = decode_config(code, fm.m, ball.num_vertices());
        out[cfg[static_cast<size_t>(v)]] += prob;
    }
    return out;
}

std::vector<double> pair_by_enumeration(const FiniteMeasure& fm, const CayleyBall& ball, int v) {
    const int s = fm.m + 1;
    std::vector<double> out(static_cast<size_t>(s) * static_cast<size_t>(s), 0.0);
    const int p = ball.parent[static_cast<size_t>(v)];
    for (const auto& [code, prob] : fm.atoms) {
        const Configuration cfg = decode_config(code, fm.m, ball.num_vertices());
        out[static_cast<size_t>(cfg[static_cast<size_t>(p)]) * static_cast<size_t>(s) +
            cfg[static_cast<size_t>(v)]] += prob;
    }
    return out;
}

}  // namespace

TEST_CASE("code round trip") {
    std::mt19937 rng(4242);
    std::uniform_int_distribution<int> spin(0, 2);
    for (int trial = 0; trial < 100; ++trial) {
        Configuration cfg(13);
        for (auto& c : cfg) c = static_cast<uint8_t>(spin(rng));
        CHECK(decode_config(encode_config(cfg, 2), 2, 13) == cfg);
    }
}

TEST_CASE("partition function of the radius-1 ball at theta = 1/2") {
    const CayleyBall ball = build_ball(2, 1);
    const ModelSpec model = make_model(2, ModelVariant::inf_sos, 0.5);
    const FiniteMeasure fm = finite_measure(ball, model, ones_field(ball));
    CHECK(fm.z == 14.75);  // dyadic weights sum exactly
    CHECK(static_cast<int>(fm.atoms.size()) == 43);
    double total = 0.0;
    for (const auto& [code, prob] : fm.atoms) total += prob;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    // inadmissible code: root 0 with a spin-2 child
    const uint64_t bad = encode_config(Configuration{0, 2, 0, 0}, 2);
    CHECK(fm.prob(bad) == 0.0);
}

TEST_CASE("config weights multiply activities and boundary factors") {
    const CayleyBall ball = build_ball(2, 1);
    const ModelSpec model = make_model(2, ModelVariant::inf_sos, 0.5);
    const BoundaryLawField field =
        BoundaryLawField::constant(ball, TIBoundaryLaw::from_z({2.0, 3.0, 1.0}));
    // root 1, children 0,1,2: edge weights theta,1,theta; leaf factors z0*z1*z2
    CHECK(config_weight(ball, model, field, Configuration{1, 0, 1, 2}) ==
          doctest::Approx(0.25 * 6.0).epsilon(1e-15));
    CHECK(config_weight(ball, model, field, Configuration{0, 2, 0, 0}) == 0.0);
}

TEST_CASE("at theta = 0 only constant configurations survive") {
    const CayleyBall ball = build_ball(2, 2);
    const ModelSpec model = make_model(2, ModelVariant::inf_sos, 0.0);
    const FiniteMeasure fm = finite_measure(ball, model, ones_field(ball));
    REQUIRE(static_cast<int>(fm.atoms.size()) == 3);
    for (const auto& [code, prob] : fm.atoms) {
        const Configuration cfg = decode_config(code, 2, ball.num_vertices());
        for (uint8_t spin : cfg) CHECK(spin == cfg[0]);
        CHECK(prob == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    }
}

TEST_CASE("admissible-configuration counts") {
    CHECK(count_admissible(build_ball(2, 1), hinge_graph(2)) == 43.0);
    CHECK(count_admissible(build_ball(3, 2), hinge_graph(2)) == 6420051.0);
    CHECK(count_admissible(build_ball(3, 2), complete_graph(2)) == 129140163.0);  // 3^17
}

TEST_CASE("enumeration guard") {
    // the smooth family has no hard exclusion, so the radius-2 ball at k = 3
    // has 3^17 > 10^7 admissible configurations
    const CayleyBall ball = build_ball(3, 2);
    const ModelSpec model = make_model(2, ModelVariant::p_sos, 0.5, 2.0);
    CHECK_THROWS_AS(finite_measure(ball, model, ones_field(ball)), guard_error);
    // the hardcore count 6420051 stays under the guard
    const ModelSpec hard = make_model(2, ModelVariant::inf_sos, 0.5);
    CHECK_NOTHROW(finite_measure(ball, hard, ones_field(ball)));
}

TEST_CASE("message-passing marginals match enumeration") {
    const CayleyBall ball = build_ball(2, 2);
    const ModelSpec model = make_model(2, ModelVariant::inf_sos, 0.3);
    const BoundaryLawField field =
        BoundaryLawField::constant(ball, TIBoundaryLaw::from_z({0.4, 1.7, 1.0}));
    const FiniteMeasure fm = finite_measure(ball, model, field);
    for (int v : {0, 1, 4, 9}) {
        const std::vector<double> bp = site_marginal(ball, model, field, v);
        const std::vector<double> direct = marginal_by_enumeration(fm, ball, v);
        double sum = 0.0;
        for (size_t i = 0; i < bp.size(); ++i) {
            CHECK(std::abs(bp[i] - direct[i]) <= 1e-12);
            sum += bp[i];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    }
    for (int v : {1, 5, 8}) {
        const std::vector<double> bp = pair_marginal(ball, model, field, v);
        const std::vector<double> direct = pair_by_enumeration(fm, ball, v);
        for (size_t i = 0; i < bp.size(); ++i) CHECK(std::abs(bp[i] - direct[i]) <= 1e-12);
    }
}

TEST_CASE("marginals with a depth-alternating field match enumeration") {
    const CayleyBall ball = build_ball(2, 2);
    const ModelSpec model = make_model(2, ModelVariant::p_sos, 0.45, 2.0);
    std::vector<std::vector<double>> raw;
    raw.reserve(static_cast<size_t>(ball.num_vertices()));
    for (int v = 0; v < ball.num_vertices(); ++v) {
        if (ball.depth[static_cast<size_t>(v)] % 2 == 0)
            raw.push_back({1.0, 0.25, 1.0});
        else
            raw.push_back({2.5, 1.0, 1.0});
    }
    const BoundaryLawField field = BoundaryLawField::site_dependent(ball, raw);
    const FiniteMeasure fm = finite_measure(ball, model, field);
    for (int v : {0, 2, 6}) {
        const std::vector<double> bp = site_marginal(ball, model, field, v);
        const std::vector<double> direct = marginal_by_enumeration(fm, ball, v);
        for (size_t i = 0; i < bp.size(); ++i) CHECK(std::abs(bp[i] - direct[i]) <= 1e-12);
    }
}

TEST_CASE("root law of the radius-0 ball is the boundary law itself") {
    const CayleyBall ball = build_ball(3, 0);
    const ModelSpec model = make_model(2, ModelVariant::inf_sos, 0.7);
    const BoundaryLawField field =
        BoundaryLawField::constant(ball, TIBoundaryLaw::from_z({0.5, 2.0, 1.0}));
    const std::vector<double> marg = site_marginal(ball, model, field, 0);
    CHECK(marg[0] == doctest::Approx(0.5 / 3.5).epsilon(1e-14));
    CHECK(marg[1] == doctest::Approx(2.0 / 3.5).epsilon(1e-14));
    CHECK(marg[2] == doctest::Approx(1.0 / 3.5).epsilon(1e-14));
}

TEST_CASE("compatibility residual: fixed points pass, the flat law fails") {
    const double theta = 0.2;
    const ModelSpec model = make_model(2, ModelVariant::inf_sos, theta);
    const CayleyBall ball = build_ball(2, 2);
    const PhaseRecord rec = classify(theta, 2);
    REQUIRE(rec.count() == 5);
    for (const TISolution& s : rec.solutions) {
        const BoundaryLawField field =
            BoundaryLawField::constant(ball, TIBoundaryLaw::from_xy(s.x, s.y, 2));
        CHECK(compatibility_residual(ball, model, field) <= 1e-10);
    }

    const ModelSpec half = make_model(2, ModelVariant::inf_sos, 0.5);
    const double off = compatibility_residual(ball, half, ones_field(ball));
    CHECK(off > 0.01);  // the all-ones law is far from the fixed-point manifold

    const CayleyBall small = build_ball(2, 1);
    CHECK_THROWS_AS(compatibility_residual(small, half, ones_field(small)), std::invalid_argument);
}
