#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bellmax/extremizer.hpp"

using namespace bellmax;
using Catch::Approx;

TEST_CASE("profile for p=2, f=1, F=2, k=1/2 matches the closed-form chain") {
    ExtremizerProfile prof = build_extremizer({2.0, 1.0, 2.0, 0.5});
    double r3 = std::sqrt(3.0);
    CHECK(prof.a == Approx(r3).margin(1e-12));
    CHECK(prof.B0 == Approx(0.5 * (3.0 - r3)).margin(1e-12));
    CHECK(prof.c == Approx(r3 - 1.0).margin(1e-12));
    CHECK(prof.A1 == Approx(prof.B0 * std::pow(0.5, -1.0 / r3) / r3).margin(1e-12));
    // continuity at t = k
    CHECK(prof.A1 * std::pow(0.5, -1.0 + 1.0 / prof.a) == Approx(prof.c).margin(1e-10));
    CHECK(eval_extremizer(prof, 0.5) == Approx(prof.c).margin(1e-10));
    CHECK(eval_extremizer(prof, 0.9) == Approx(prof.c).margin(1e-15));
}

TEST_CASE("degenerate profile is the constant f") {
    ExtremizerProfile prof = build_extremizer({2.0, 1.0, 1.0, 0.5});
    CHECK(prof.a == 1.0);
    CHECK(prof.A1 == 1.0);
    CHECK(prof.c == 1.0);
    CHECK(eval_extremizer(prof, 0.3) == 1.0);
    ExtremizerMoments m = extremizer_moments(prof);
    CHECK(m.mass == Approx(1.0).margin(1e-14));
    CHECK(m.p_moment == Approx(1.0).margin(1e-14));
    CHECK(m.hardy_lp_on_0k == Approx(0.5).margin(1e-14));
}

TEST_CASE("whole-space profile for p=2, f=1, F=2") {
    ExtremizerProfile prof = build_extremizer({2.0, 1.0, 2.0, 1.0});
    CHECK(prof.a == Approx(1.0 + 1.0 / std::sqrt(2.0)).margin(1e-12));
    CHECK(prof.A1 == Approx(2.0 - std::sqrt(2.0)).margin(1e-12));
    ExtremizerMoments m = extremizer_moments(prof);
    CHECK(m.mass == Approx(1.0).margin(1e-12));
    CHECK(m.p_moment == Approx(2.0).margin(1e-9));
    CHECK(m.hardy_lp_on_0k == Approx(3.0 + 2.0 * std::sqrt(2.0)).margin(1e-9));
}

TEST_CASE("moments meet the problem data and Bellman value") {
    for (ProblemParams pr : {ProblemParams{2.0, 1.0, 2.0, 0.5}, ProblemParams{3.0, 0.8, 2.0, 0.6},
                             ProblemParams{1.5, 1.2, 2.8, 0.35}}) {
        ExtremizerProfile prof = build_extremizer(pr);
        ExtremizerMoments m = extremizer_moments(prof);
        CHECK(m.mass == Approx(pr.f).margin(1e-9));
        CHECK(m.p_moment == Approx(pr.F).margin(1e-9));
        CHECK(m.hardy_lp_on_0k == Approx(bellman_value(pr)).margin(1e-9));
        CHECK(prof.a >= 1.0);
        CHECK(prof.a < pr.p / (pr.p - 1.0));
    }
}

TEST_CASE("running average is proportional to the profile on the power piece") {
    ExtremizerProfile prof = build_extremizer({2.0, 1.0, 2.0, 0.5});
    for (int i = 0; i <= 1000; ++i) {
        double t = std::pow(10.0, -8.0 + 8.0 * i / 1000.0) * prof.params.k;
        double avg = extremizer_hardy_average(prof, t);
        double target = prof.a * eval_extremizer(prof, t);
        CHECK(std::fabs(avg - target) <= 1e-10 * std::max(1.0, target));
    }
}

TEST_CASE("prefix mass at k equals B0 and the exponent identity holds") {
    for (ProblemParams pr : {ProblemParams{2.0, 1.0, 2.0, 0.5}, ProblemParams{3.0, 0.8, 2.0, 0.6},
                             ProblemParams{2.0, 1.0, 2.0, 1.0}}) {
        ExtremizerProfile prof = build_extremizer(pr);
        CHECK(extremizer_prefix_mass(prof, pr.k) == Approx(prof.B0).margin(1e-12));
        CHECK(std::fabs(h_p_eval(pr.p, prof.a) - prof.Z0) <= 1e-10);
    }
}

TEST_CASE("profile is non-increasing across the junction") {
    ExtremizerProfile prof = build_extremizer({2.5, 1.0, 3.0, 0.4});
    double prev = eval_extremizer(prof, 1e-9);
    for (int i = 1; i <= 500; ++i) {
        double t = static_cast<double>(i) / 500.0;
        double cur = eval_extremizer(prof, t);
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
}

TEST_CASE("eval_extremizer rejects out-of-domain arguments") {
    ExtremizerProfile prof = build_extremizer({2.0, 1.0, 2.0, 0.5});
    CHECK_THROWS_AS(eval_extremizer(prof, 0.0), std::domain_error);
    CHECK_THROWS_AS(eval_extremizer(prof, 1.1), std::domain_error);
    CHECK_THROWS_AS(eval_extremizer(prof, -0.2), std::domain_error);
}
