#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "bellmax/bellman.hpp"
#include "bellmax/carleson.hpp"
#include "bellmax/rng.hpp"

using namespace bellmax;
using Catch::Approx;

namespace {

// independent packing check: subtree sums recomputed node by node
double brute_min_slack(const CarlesonWeights& w) {
    double slack = 1.0;
    for (int j = 0; j <= w.max_level(); ++j) {
        for (std::size_t i = 0; i < (std::size_t{1} << j); ++i) {
            double sum = 0.0;
            for (int jj = j; jj <= w.max_level(); ++jj) {
                std::size_t lo = i << (jj - j);
                std::size_t hi = (i + 1) << (jj - j);
                for (std::size_t ii = lo; ii < hi; ++ii) sum += w.at(jj, ii);
            }
            slack = std::min(slack, std::ldexp(1.0, -j) - sum);
        }
    }
    return slack;
}

}  // namespace

TEST_CASE("carleson_sum on explicit families") {
    DyadicStepFunction two(1, {2.0, 0.0});
    CarlesonWeights root_only(1);
    root_only.at(0, 0) = 0.5;
    CHECK(carleson_sum(two, root_only, 2.0) == Approx(0.5).margin(1e-14));  // k f^p

    CarlesonWeights left_cell(1);
    left_cell.at(1, 0) = 0.5;
    CHECK(carleson_sum(two, left_cell, 2.0) == Approx(2.0).margin(1e-14));

    // constant function: any admissible family gives f^p times the total
    DyadicStepFunction flat = DyadicStepFunction::constant(4, 1.3);
    TrialRng rng(4ull);
    for (int trial = 0; trial < 10; ++trial) {
        double k = rng.uniform(0.1, 1.0);
        CarlesonWeights w = random_admissible_weights(4, k, rng);
        CHECK(carleson_sum(flat, w, 2.0) == Approx(1.69 * w.total()).margin(1e-12));
    }
}

TEST_CASE("carleson_sum rejects inadmissible weights") {
    DyadicStepFunction two(1, {2.0, 0.0});
    CarlesonWeights heavy(1);
    heavy.at(0, 0) = 1.5;
    CHECK_THROWS_AS(carleson_sum(two, heavy, 2.0), std::invalid_argument);

    CarlesonWeights overflow(1);
    overflow.at(0, 0) = 0.1;
    overflow.at(1, 0) = 0.5;
    overflow.at(1, 1) = 0.5;  // root subtree holds 1.1 > 1
    CHECK_THROWS_AS(carleson_sum(two, overflow, 2.0), std::invalid_argument);

    CarlesonWeights deep_overflow(2);
    deep_overflow.at(2, 0) = 0.3;  // cell measure is 0.25
    CHECK_THROWS_AS(carleson_sum(two, deep_overflow, 2.0), std::invalid_argument);
}

TEST_CASE("weights deeper than the function refine correctly") {
    DyadicStepFunction two(1, {2.0, 0.0});
    CarlesonWeights deep(3);
    deep.at(3, 0) = 0.125;  // node [0, 1/8): the function is 2 there
    CHECK(carleson_sum(two, deep, 2.0) == Approx(0.125 * 4.0).margin(1e-14));
}

TEST_CASE("random_admissible_weights is admissible with total k") {
    TrialRng rng42(detail::splitmix64(42ull));
    CarlesonWeights w = random_admissible_weights(8, 0.5, rng42);
    CHECK(std::fabs(w.total() - 0.5) <= 1e-12);
    CHECK(brute_min_slack(w) >= -1e-12);
    CHECK(w.min_packing_slack() == Approx(brute_min_slack(w)).margin(1e-12));

    TrialRng rng(1234ull);
    for (int trial = 0; trial < 50; ++trial) {
        int level = 1 + static_cast<int>(rng.below(6));
        double k = rng.uniform(0.05, 1.0);
        CarlesonWeights ww = random_admissible_weights(level, k, rng);
        CHECK(std::fabs(ww.total() - k) <= 1e-12);
        CHECK(ww.min_packing_slack() >= -1e-12);
    }

    // single-node tree: the draw always lands on k itself
    TrialRng rng0(5ull);
    CarlesonWeights root = random_admissible_weights(0, 0.3, rng0);
    CHECK(root.at(0, 0) == Approx(0.3).margin(1e-15));

    // k = 1 saturates the root constraint but stays admissible
    TrialRng rng1(6ull);
    CarlesonWeights full = random_admissible_weights(5, 1.0, rng1);
    CHECK(std::fabs(full.total() - 1.0) <= 1e-12);
    CHECK(full.min_packing_slack() >= -1e-12);
}

TEST_CASE("carleson sums stay below the Bellman value") {
    TrialRng rng(2024ull);
    for (int trial = 0; trial < 100; ++trial) {
        int level = 1 + static_cast<int>(rng.below(6));
        std::vector<double> vals(std::size_t{1} << level);
        for (auto& v : vals) v = rng.exponential(1.0);
        vals[0] += 0.05;
        DyadicStepFunction phi(level, vals);
        double k = rng.uniform(0.05, 1.0);
        CarlesonWeights w = random_admissible_weights(level, k, rng);
        double sum = carleson_sum(phi, w, 2.0);
        double f = phi.mass();
        double F = std::max(phi.p_moment(2.0), f * f);
        double bound = bellman_value({2.0, f, F, std::min(w.total(), 1.0)});
        CHECK(sum <= bound + 1e-9);
    }
}
