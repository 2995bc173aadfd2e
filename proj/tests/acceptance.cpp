// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with the measured quantity.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "bellmax/harness.hpp"

using namespace bellmax;

namespace {

void report(int idx, const char* name, bool pass, const std::string& extra) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", idx, name, extra.c_str());
    std::fflush(stdout);
}

}  // namespace

TEST_CASE("criterion 1: special-function round-trip") {
    double worst = 0.0;
    for (double p : {1.5, 2.0, 3.0, 7.0}) {
        for (int i = 1; i <= 400; ++i) {
            double x = -5.0 + 6.0 * i / 400.0;
            worst = std::max(worst, std::fabs(h_p_eval(p, omega_p(p, x)) - x));
        }
    }
    double worst2 = 0.0;
    for (int i = 1; i <= 400; ++i) {
        double x = -5.0 + 6.0 * i / 400.0;
        worst2 = std::max(worst2, std::fabs(omega_p(2.0, x) - (1.0 + std::sqrt(1.0 - x))));
    }
    bool pass = worst <= 1e-10 && worst2 <= 1e-12;
    report(1, "special-function round-trip", pass,
           "max |H_p(w_p(x))-x| = " + fmt17(worst) + ", p=2 closed-form gap = " + fmt17(worst2));
    REQUIRE(worst <= 1e-10);
    REQUIRE(worst2 <= 1e-12);
}

TEST_CASE("criterion 2: Bellman closed forms") {
    double b_full = bellman_value({2.0, 1.0, 2.0, 1.0});
    double b_half = bellman_value({2.0, 1.0, 2.0, 0.5});
    double gap_full = std::fabs(b_full - (3.0 + 2.0 * std::sqrt(2.0)));
    double gap_half = std::fabs(b_half - 3.0 * std::sqrt(3.0));
    double worst_degen = 0.0;
    for (double p : {1.5, 2.0, 3.0})
        for (double f : {0.5, 1.0, 2.0})
            for (double k : {0.25, 0.5, 1.0}) {
                double v = bellman_value({p, f, std::pow(f, p), k});
                worst_degen = std::max(worst_degen, std::fabs(v - k * std::pow(f, p)));
            }
    bool pass = gap_full <= 1e-9 && gap_half <= 1e-9 && worst_degen <= 1e-12;
    report(2, "Bellman closed forms", pass,
           "|B-3-2sqrt2| = " + fmt17(gap_full) + ", |B-3sqrt3| = " + fmt17(gap_half) +
               ", degenerate grid worst = " + fmt17(worst_degen));
    REQUIRE(gap_full <= 1e-9);
    REQUIRE(gap_half <= 1e-9);
    REQUIRE(worst_degen <= 1e-12);
}

TEST_CASE("criterion 3: optimizer validation on random parameters") {
    TrialRng rng(424242ull);
    double worst_excess = -1e300, worst_dist = 0.0, worst_resid = 0.0;
    bool pass = true;
    for (int trial = 0; trial < 50; ++trial) {
        double p = rng.uniform(1.2, 5.0);
        double f = rng.uniform(0.3, 3.0);
        double F = std::pow(f, p) * (1.0 + rng.uniform(0.05, 10.0));
        double k = rng.uniform(0.05, 0.95);
        ProblemParams pr{p, f, F, k};
        OptimizerResult opt = solve_b0(pr);
        FeasibleDomain dom = feasible_domain(pr);
        const int n = 10000;
        double step = (dom.p1 - dom.p0) / n;
        double best = -1.0, best_b = dom.p0;
        for (int i = 0; i <= n; ++i) {
            double b = (i == n) ? dom.p1 : dom.p0 + step * i;
            double v = r_k_eval(pr, b);
            if (v > best) {
                best = v;
                best_b = b;
            }
        }
        worst_excess = std::max(worst_excess, best - opt.value);
        worst_dist = std::max(worst_dist, std::fabs(best_b - opt.B0) / step);
        double arg = std::max((opt.B0 / k) * (1.0 - k) / (f - opt.B0), 1.0);
        worst_resid = std::max(worst_resid, std::fabs(h_p_eval(p, arg) - opt.Z0));
        pass = pass && best <= opt.value + 1e-8 && std::fabs(best_b - opt.B0) <= step + 1e-12;
    }
    pass = pass && worst_resid <= 1e-9;
    report(3, "optimizer validation (50 random parameter sets)", pass,
           "max grid excess = " + fmt17(worst_excess) + ", max argmax offset (spacings) = " +
               fmt17(worst_dist) + ", max identity residual = " + fmt17(worst_resid));
    REQUIRE(worst_excess <= 1e-8);
    REQUIRE(worst_dist <= 1.0 + 1e-9);
    REQUIRE(worst_resid <= 1e-9);
}

TEST_CASE("criterion 4: extremizer identities") {
    bool pass = true;
    double worst_moment = 0.0, worst_cont = 0.0, worst_prop = 0.0, worst_val = 0.0,
           worst_quad = 0.0;
    std::vector<ProblemParams> cases = {{2.0, 1.0, 2.0, 0.5},
                                        {2.0, 1.0, 2.0, 1.0},
                                        {3.0, 0.8, 2.0, 0.6},
                                        {1.5, 1.2, 2.8, 0.35}};
    for (const ProblemParams& pr : cases) {
        ExtremizerProfile prof = build_extremizer(pr);
        ExtremizerMoments m = extremizer_moments(prof);
        worst_moment = std::max({worst_moment, std::fabs(m.mass - pr.f),
                                 std::fabs(m.p_moment - pr.F)});
        if (pr.k < 1.0)
            worst_cont = std::max(worst_cont, std::fabs(eval_extremizer(prof, pr.k) - prof.c));
        for (int i = 1; i <= 1000; ++i) {
            double t = pr.k * std::pow(10.0, -7.0 * (1.0 - i / 1000.0));
            double avg = extremizer_hardy_average(prof, t);
            double target = prof.a * eval_extremizer(prof, t);
            worst_prop =
                std::max(worst_prop, std::fabs(avg - target) / std::max(1.0, target));
        }
        worst_val = std::max(worst_val, std::fabs(m.hardy_lp_on_0k - bellman_value(pr)));
        double quad = extremizer_hardy_lp_quad(prof, 0.0, pr.k);
        worst_quad = std::max(worst_quad, std::fabs(quad - m.hardy_lp_on_0k));
    }
    pass = worst_moment <= 1e-9 && worst_cont <= 1e-10 && worst_prop <= 1e-10 &&
           worst_val <= 1e-9 && worst_quad <= 1e-7;
    report(4, "extremizer identities", pass,
           "moments " + fmt17(worst_moment) + ", continuity " + fmt17(worst_cont) +
               ", proportionality " + fmt17(worst_prop) + ", value " + fmt17(worst_val) +
               ", quadrature " + fmt17(worst_quad));
    REQUIRE(worst_moment <= 1e-9);
    REQUIRE(worst_cont <= 1e-10);
    REQUIRE(worst_prop <= 1e-10);
    REQUIRE(worst_val <= 1e-9);
    REQUIRE(worst_quad <= 1e-7);
}

TEST_CASE("criterion 5: rearranged maximal function vs Hardy average") {
    TrialConfig cfg;
    cfg.seed = 1;
    cfg.trials = 1000;
    cfg.level = 10;
    cfg.slack = 1e-12;
    InequalityReport rep = run_suite("lemma31", cfg);
    report(5, "rearrangement bound suite (1000 trials)", rep.passed,
           "min margin = " + fmt17(rep.min_margin));
    REQUIRE(rep.passed);
    REQUIRE(rep.min_margin >= -1e-12);
}

TEST_CASE("criterion 6: three-parameter inequality suite") {
    TrialConfig cfg;
    cfg.seed = 1;
    cfg.trials = 1000;
    cfg.level = 10;
    cfg.slack = 1e-9;
    InequalityReport rep = run_suite("ineq_1_11", cfg);
    report(6, "three-parameter inequality suite (1000 trials)", rep.passed,
           "min margin = " + fmt17(rep.min_margin) + "; gamma=0 margins match bit-for-bit");
    REQUIRE(rep.passed);
    REQUIRE(rep.min_margin >= -1e-9);
}

TEST_CASE("criterion 7: Carleson weight suite") {
    TrialConfig cfg;
    cfg.seed = 1;
    cfg.trials = 500;
    cfg.level = 8;
    cfg.slack = 1e-9;
    InequalityReport rep = run_suite("carleson", cfg);
    report(7, "Carleson packing suite (500 trials)", rep.passed,
           "min margin = " + fmt17(rep.min_margin));
    REQUIRE(rep.passed);
    REQUIRE(rep.min_margin >= -1e-9);
}

TEST_CASE("criterion 8: tail inequality suites and the analytic equality case") {
    TrialConfig cfg;
    cfg.seed = 1;
    cfg.trials = 1000;
    cfg.level = 10;
    cfg.slack = 1e-9;
    InequalityReport r10 = run_suite("ineq_6_10", cfg);
    InequalityReport r12 = run_suite("ineq_6_12", cfg);

    double worst_eq = 0.0;
    ExtremizerProfile g1 = build_extremizer({2.0, 1.0, 2.0, 1.0});
    for (double k : {0.25, 0.5, 0.75}) {
        worst_eq = std::max(worst_eq, std::fabs(analytic_margin_6_10(g1, k)));
        worst_eq = std::max(worst_eq, std::fabs(analytic_margin_6_12(g1, k)));
    }
    bool pass = r10.passed && r12.passed && worst_eq <= 1e-6;
    report(8, "tail inequality suites", pass,
           "margins >= " + fmt17(std::min(r10.min_margin, r12.min_margin)) + ", skips " +
               std::to_string(r10.precondition_skips) + "/" +
               std::to_string(r12.precondition_skips) + ", analytic equality gap = " +
               fmt17(worst_eq));
    REQUIRE(r10.passed);
    REQUIRE(r12.passed);
    REQUIRE(worst_eq <= 1e-6);
}

TEST_CASE("criterion 9: constructive attainment ratios") {
    bool monotone = true;
    double final_half = 0.0, final_full = 0.0;
    std::string shown;
    for (double k : {0.5, 1.0}) {
        ProblemParams pr{2.0, 1.0, 2.0, k};
        double prev = 0.0;
        shown += (k == 0.5 ? "k=1/2:" : " k=1:");
        for (int level : {8, 10, 12, 14}) {
            double ratio = sharpness_ratio(pr, level).ratio;
            monotone = monotone && ratio >= prev - 1e-9;
            prev = ratio;
            shown += " " + std::to_string(ratio).substr(0, 6);
        }
        (k == 0.5 ? final_half : final_full) = prev;
    }
    bool threshold = final_half >= 0.97 && final_full >= 0.97;
    report(9, "constructive attainment (levels 8-14)", monotone && threshold,
           shown + (threshold ? "" : " -- level-14 ratios fall short of 0.97; see ledger"));
    REQUIRE(monotone);
    // The 0.97 level-14 target is unreachable on the binary tree: the
    // rearrangement bound caps any level-14 function at about 0.9667 of the
    // Bellman value, and binary branching halves measures at each step, which
    // costs another factor.  The construction converges to 1 in the limit as
    // the level grows, which is what the mathematics guarantees.
    REQUIRE(final_half >= 0.97);
    REQUIRE(final_full >= 0.97);
}

TEST_CASE("criterion 10: determinism of seeded suites") {
    bool pass = true;
    std::string detail;
    TrialConfig cfg;
    cfg.seed = 99;
    cfg.trials = 300;
    cfg.level = 8;
    for (const char* name : {"lemma31", "weak_type", "ineq_1_10", "ineq_1_11", "carleson"}) {
        InequalityReport a = run_suite(name, cfg);
        InequalityReport b = run_suite(name, cfg);
        bool same = a.to_json() == b.to_json();
        pass = pass && same;
        if (!same) detail += std::string(name) + " differs; ";
    }
    TrialConfig six = cfg;
    six.trials = 150;
    for (const char* name : {"ineq_6_10", "ineq_6_12"}) {
        InequalityReport a = run_suite(name, six);
        InequalityReport b = run_suite(name, six);
        bool same = a.to_json() == b.to_json();
        pass = pass && same;
        if (!same) detail += std::string(name) + " differs; ";
    }
    TrialConfig sharp = cfg;
    sharp.level = 10;
    pass = pass && run_suite("sharpness", sharp).to_json() == run_suite("sharpness", sharp).to_json();
    report(10, "byte-identical reruns under a fixed seed", pass,
           pass ? "all suites byte-identical" : detail);
    REQUIRE(pass);
}
