#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "sostree/gibbs.hpp"
#include "sostree/psos.hpp"

using namespace sostree;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double hausdorff_rel(const std::vector<TISolution>& a, const std::vector<TISolution>& b) {
    auto one_sided = [](const std::vector<TISolution>& from, const std::vector<TISolution>& to) {
        double worst = 0.0;
        for (const TISolution& s : from) {
            double best = kInf;
            for (const TISolution& t : to) {
                const double dx = std::abs(s.x - t.x) / std::max(1.0, std::abs(s.x));
                const double dy = std::abs(s.y - t.y) / std::max(1.0, std::abs(s.y));
                best = std::min(best, std::max(dx, dy));
            }
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

}  // namespace

TEST_CASE("distance-2 activity conventions") {
    CHECK(make_psos(0.5, kInf).bigq() == 0.0);
    CHECK(make_psos(1.0, kInf).bigq() == 1.0);
    CHECK(make_psos(1.0, 7.0).bigq() == 1.0);
    CHECK(make_psos(0.5, 2.0).bigq() == doctest::Approx(0.0625).epsilon(1e-15));
    CHECK(make_psos(0.5, 60.0).bigq() == 0.0);   // underflow clamps to zero
    CHECK(make_psos(2.0, 60.0).bigq() == 1e12);  // overflow clamps to the cap
    CHECK(make_psos(0.3, 5.0).q() == doctest::Approx(1.0 - std::pow(0.3, 32.0)).epsilon(1e-14));
}

TEST_CASE("the p = infinity classification equals the hardcore one at k = 2") {
    for (const double theta : {0.1, 0.25, 0.4, 0.7}) {
        const PhaseRecord smooth = classify_psos(make_psos(theta, kInf));
        const PhaseRecord hard = classify(theta, 2);
        REQUIRE(smooth.count() == hard.count());
        CHECK(hausdorff_rel(smooth.solutions, hard.solutions) <= 1e-12);
    }
}

TEST_CASE("large p converges to the limit") {
    for (const double theta : {0.1, 0.25}) {
        const PhaseRecord lim = classify_psos(make_psos(theta, kInf));
        for (const double p : {16.0, 32.0}) {
            const PhaseRecord fin = classify_psos(make_psos(theta, p));
            REQUIRE(fin.count() == lim.count());
            CHECK(hausdorff_rel(fin.solutions, lim.solutions) <= 1e-8);
        }
        // moderate p: solutions still satisfy their own fixed-point equations
        for (const double p : {1.0, 2.0, 4.0, 8.0}) {
            const PSOSParams params = make_psos(theta, p);
            for (const TISolution& s : classify_psos(params).solutions) {
                if (s.tangential) continue;
                const auto [d1, d2] = residual_psos(s.x, s.y, params);
                const double scale = std::max({1.0, std::abs(s.x), std::abs(s.y)});
                CHECK(std::max(std::abs(d1), std::abs(d2)) <= 1e-9 * scale);
            }
        }
    }
}

TEST_CASE("diagonal discriminant and its zero") {
    CHECK(delta0(0.05) > 0.0);
    CHECK(delta0(0.2) < 0.0);
    CHECK(theta0() == doctest::Approx(0.13506815821142253).epsilon(1e-12));
    CHECK(delta0(theta0()) == doctest::Approx(0.0).epsilon(1e-12));

    const auto tang = solve_psos_x1(make_psos(theta0(), kInf));
    REQUIRE(tang.size() == 2);
    const TISolution& dbl = tang[0].tangential ? tang[0] : tang[1];
    const TISolution& simple = tang[0].tangential ? tang[1] : tang[0];
    CHECK(dbl.tangential);
    CHECK(dbl.y == doctest::Approx(0.56457945531766095).epsilon(1e-7));
    CHECK(simple.y == doctest::Approx(6.2745105644062898).epsilon(1e-10));
}

TEST_CASE("xi pair: quadratic route equals the published quotient formula") {
    for (const double p : {4.0, kInf}) {
        for (int i = 1; i <= 30; ++i) {
            const double theta = 0.01 * i;
            const PSOSParams params = make_psos(theta, p);
            if (xi12_radicand(params) <= 1e-8) continue;
            const auto quad = xi12(params);
            const auto lit = xi12_literal(params);
            REQUIRE(quad.has_value());
            REQUIRE(lit.has_value());
            CHECK(std::abs(quad->first - lit->first) <= 1e-10 * std::max(1.0, std::abs(quad->first)));
            CHECK(std::abs(quad->second - lit->second) <= 1e-10 * std::max(1.0, std::abs(quad->second)));
        }
    }
}

TEST_CASE("xi pair collapses at the off-diagonal tangency") {
    const double theta0p = (std::sqrt(5.0) - 1.0) / 4.0;
    const auto pair = xi12(make_psos(theta0p, kInf));
    REQUIRE(pair.has_value());
    CHECK(pair->first == doctest::Approx(6.4721359549995794).epsilon(1e-6));
    CHECK(pair->first == doctest::Approx(pair->second).epsilon(1e-6));
    CHECK(std::abs(xi12_radicand(make_psos(theta0p, kInf))) <= 1e-14);
    // just above, no real pair in the admissible region
    const auto above = xi12(make_psos(0.32, kInf));
    if (above.has_value()) CHECK(above->second <= 2.0);
}

TEST_CASE("phase table of the limiting model, k = 2") {
    CHECK(classify_psos(make_psos(0.10, kInf)).count() == 7);
    CHECK(classify_psos(make_psos(theta0(), kInf)).count() == 6);
    CHECK(classify_psos(make_psos(0.20, kInf)).count() == 5);
    CHECK(classify_psos(make_psos((std::sqrt(5.0) - 1.0) / 4.0, kInf)).count() == 3);
    CHECK(classify_psos(make_psos(0.40, kInf)).count() == 1);
}

TEST_CASE("no off-diagonal solutions at or above theta = 1") {
    CHECK(classify_psos(make_psos(1.0, 3.0)).count() == 1);
    CHECK(classify_psos(make_psos(1.5, 3.0)).count() == 1);
    CHECK(classify_psos(make_psos(1.0, kInf)).count() == 1);
    CHECK(classify_psos(make_psos(2.0, kInf)).count() == 1);
}

TEST_CASE("finite-p solutions pass the enumeration compatibility check") {
    const double theta = 0.2, p = 4.0;
    const PSOSParams params = make_psos(theta, p);
    const ModelSpec model = make_model(2, ModelVariant::p_sos, theta, p);
    const CayleyBall ball = build_ball(2, 2);
    const PhaseRecord rec = classify_psos(params);
    REQUIRE(rec.count() >= 1);
    for (const TISolution& s : rec.solutions) {
        if (s.tangential) continue;
        const BoundaryLawField field =
            BoundaryLawField::constant(ball, TIBoundaryLaw::from_xy(s.x, s.y, 2));
        CHECK(compatibility_residual(ball, model, field) <= 1e-9);
    }
}
