#pragma once

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "bellman.hpp"
#include "carleson.hpp"
#include "dyadic.hpp"
#include "extremizer.hpp"
#include "json_writer.hpp"
#include "rng.hpp"
#include "step_function.hpp"

namespace bellmax {

/// Raised when a check's hypothesis fails on the given data; suites count
/// these as skips, never as failures.
struct PreconditionViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TrialConfig {
    std::uint64_t seed = 1;
    int trials = 1000;
    int level = 10;
    std::vector<double> p_grid = {1.5, 2.0, 3.0};
    std::vector<double> beta_grid = {0.125, 0.5, 1.0, 2.0, 4.0};
    std::vector<double> gamma_grid = {0.0, 0.125, 0.5, 1.0, 2.0, 4.0};
    double slack = 1e-9;

    void validate() const {
        if (trials < 1) throw std::invalid_argument("TrialConfig: trials must be >= 1");
        if (level < 1 || level > kMaxDyadicLevel)
            throw std::invalid_argument("TrialConfig: level must lie in [1, 24]");
        if (p_grid.empty() || beta_grid.empty() || gamma_grid.empty())
            throw std::invalid_argument("TrialConfig: parameter grids must be nonempty");
        if (!(slack >= 0.0)) throw std::invalid_argument("TrialConfig: slack must be >= 0");
    }
};

struct InequalityReport {
    std::string name;
    int trials_run = 0;
    int precondition_skips = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    std::string worst_case = "null";
    bool passed = false;

    std::string to_json() const {
        JsonObject o;
        o.field_str("name", name);
        o.field("trials", trials_run);
        o.field_raw("min_margin", std::isfinite(min_margin) ? fmt17(min_margin) : "null");
        o.field_raw("worst_case", worst_case);
        o.field("passed", passed);
        o.field("precondition_skips", precondition_skips);
        return o.str();
    }
};

// ---------------------------------------------------------------------------
// pointwise inequality margins
// ---------------------------------------------------------------------------

/// Margin of the one-parameter moment bound:
/// F - [ f^p/(beta+1)^{p-1} + (p-1) beta/(beta+1)^p int (M phi)^p ].
inline double check_ineq_1_10(const DyadicStepFunction& phi, const DyadicStepFunction& maxfn,
                              double p, double beta) {
    require_exponent(p);
    if (!(beta > 0.0)) throw std::domain_error("check_ineq_1_10: beta must be > 0");
    double f = phi.mass();
    double F = phi.p_moment(p);
    double t2 = (p - 1.0) * beta / std::pow(beta + 1.0, p) * maxfn.p_moment(p);
    double t4 = std::pow(f, p) / std::pow(beta + 1.0, p - 1.0);
    return F - (t2 + t4);
}

inline double check_ineq_1_10(const DyadicStepFunction& phi, double p, double beta) {
    return check_ineq_1_10(phi, maximal_operator(phi), p, beta);
}

/// Margin of the three-parameter bound restricted to the set K.  At gamma = 0
/// the K-terms vanish exactly and the margin coincides bit-for-bit with
/// check_ineq_1_10.
inline double check_ineq_1_11(const DyadicStepFunction& phi, const DyadicStepFunction& maxfn,
                              const DyadicSet& K, double p, double beta, double gamma) {
    require_exponent(p);
    if (!(gamma >= 0.0) || gamma > beta)
        throw std::domain_error("check_ineq_1_11: need beta >= gamma >= 0");
    double f = phi.mass();
    double F = phi.p_moment(p);
    double t1 = (1.0 - std::pow(1.0 + gamma, 1.0 - p)) * integral_over(phi, K, p);
    double t2 = (p - 1.0) * beta / std::pow(beta + 1.0, p) * maxfn.p_moment(p);
    double t3 = (p - 1.0) * gamma / std::pow(beta + 1.0, p) * integral_over(maxfn, K, p);
    double t4 = std::pow(f, p) / std::pow(beta + 1.0, p - 1.0);
    return F - (((t1 + t2) - t3) + t4);
}

inline double check_ineq_1_11(const DyadicStepFunction& phi, const DyadicSet& K, double p,
                              double beta, double gamma) {
    return check_ineq_1_11(phi, maximal_operator(phi), K, p, beta, gamma);
}

// ---------------------------------------------------------------------------
// tail inequalities for non-increasing profiles
// ---------------------------------------------------------------------------

namespace detail {

struct SixContext {
    double f = 0.0, F = 0.0;
    double head = 0.0, tail = 0.0;  // p-integrals over (0, k] and (k, 1]
    double delta_k = 1.0, delta_prime_k = 1.0;
    double omega_ref = 1.0;  // omega_p(f^p / F)
};

inline SixContext six_context(const StepFunction& h, double p, double k,
                              const QuadratureConfig& q, const RootFindConfig& rf) {
    SixContext c;
    c.f = h.mass();
    c.F = lp_integral(h, p, 0.0, 1.0);
    c.head = lp_integral(h, p, 0.0, k);
    c.tail = lp_integral(h, p, k, 1.0);
    if (!(c.head > 0.0) || !(c.tail > 0.0))
        throw PreconditionViolated("a one-sided p-integral vanishes");
    DeltaStats d = delta_stat(h, p, k, q);
    c.delta_k = std::max(d.delta_k, 1.0);
    c.delta_prime_k = std::max(d.delta_prime_k, 1.0);
    c.omega_ref = omega_p(p, std::min(std::pow(c.f, p) / c.F, 1.0), rf);
    if (c.delta_k > c.omega_ref + 1e-12)
        throw PreconditionViolated("delta_k exceeds omega_p(f^p/F)");
    return c;
}

}  // namespace detail

/// Margin (right minus left) of the tail Hardy-average bound
/// int_k^1 (avg)^p <= int_k^1 h^p omega_p((f^p - H_p(delta_k) int_0^k h^p)/int_k^1 h^p)^p.
/// Requires delta_k <= omega_p(f^p/F); otherwise PreconditionViolated.
inline double check_ineq_6_10(const StepFunction& h, double p, double k,
                              const QuadratureConfig& q = {}, const RootFindConfig& rf = {}) {
    auto c = detail::six_context(h, p, k, q, rf);
    double lhs = hardy_lp_integral(h, p, k, 1.0, q);
    double arg = (std::pow(c.f, p) - h_p_eval(p, c.delta_k) * c.head) / c.tail;
    double rhs = c.tail * std::pow(omega_p(p, std::min(arg, 1.0), rf), p);
    return rhs - lhs;
}

/// Margin (left minus f^p) of
/// H_p(delta_k) int_0^k h^p + H_p(delta'_k) int_k^1 h^p >= f^p.
inline double check_ineq_6_12(const StepFunction& h, double p, double k,
                              const QuadratureConfig& q = {}, const RootFindConfig& rf = {}) {
    auto c = detail::six_context(h, p, k, q, rf);
    return h_p_eval(p, c.delta_k) * c.head + h_p_eval(p, c.delta_prime_k) * c.tail -
           std::pow(c.f, p);
}

struct OptimalParams {
    double beta0 = 0.0;
    double gamma0 = 0.0;
};

/// Margin-minimizing parameter pair: beta0 + 1 inverts H_p (extended branch)
/// at the stationarity value, gamma0 = (beta0+1)/delta_k - 1.  Always
/// beta0 >= gamma0 >= 0 under the precondition.
inline OptimalParams optimal_parameters(const StepFunction& h, double p, double k,
                                        const QuadratureConfig& q = {},
                                        const RootFindConfig& rf = {}) {
    auto c = detail::six_context(h, p, k, q, rf);
    double arg = (std::pow(c.f, p) - h_p_eval(p, c.delta_k) * c.head) / c.tail;
    OptimalParams r;
    r.beta0 = omega_p(p, std::min(arg, 1.0), rf) - 1.0;
    r.gamma0 = std::max((r.beta0 + 1.0) / c.delta_k - 1.0, 0.0);
    if (r.gamma0 > r.beta0) r.gamma0 = r.beta0;  // rounding guard; delta_k >= 1
    return r;
}

// ---------------------------------------------------------------------------
// analytic-profile quadrature (independent of the closed-form moments)
// ---------------------------------------------------------------------------

/// Adaptive quadrature of the profile's Hardy-average L^p integral over
/// (lo, hi].  A lo = 0 endpoint on a genuine power piece is an integrable
/// singularity and is integrated in u = log t, where the integrand is a pure
/// exponential.
inline double extremizer_hardy_lp_quad(const ExtremizerProfile& prof, double lo, double hi,
                                       const QuadratureConfig& q = {}) {
    if (!(lo >= 0.0 && hi <= 1.0 && lo < hi))
        throw std::domain_error("extremizer_hardy_lp_quad: need 0 <= lo < hi <= 1");
    q.validate();
    const double p = prof.params.p;
    const double k = prof.params.k;
    auto hardy_p = [&prof, p](double t) {
        return std::pow(extremizer_prefix_mass(prof, t) / t, p);
    };
    double total = 0.0;
    double cut = std::min(hi, k);
    if (lo < cut) {
        if (lo > 0.0 || extremizer_is_flat(prof)) {
            total += detail::adaptive_gauss(hardy_p, std::max(lo, 1e-300), cut, q.abs_tol, q);
        } else {
            const double e = 1.0 - p + p / prof.a;
            const double log_lead = p * std::log(prof.a * prof.A1);
            double u_hi = std::log(cut);
            double u_lo = (std::log(q.abs_tol * 0.01 * e) - log_lead) / e;
            u_lo = std::min(u_lo, u_hi - 1.0);
            auto g = [log_lead, e](double u) { return std::exp(log_lead + e * u); };
            total += detail::adaptive_gauss(g, u_lo, u_hi, q.abs_tol, q);
        }
    }
    if (hi > k) total += detail::adaptive_gauss(hardy_p, std::max(lo, k), hi, q.abs_tol, q);
    return total;
}

/// check_ineq_6_10 evaluated on the exact whole-space profile (k = 1
/// construction), with the averaging statistics recomputed by quadrature so
/// the equality case exercises the entire chain.
inline double analytic_margin_6_10(const ExtremizerProfile& g1, double k,
                                   const QuadratureConfig& q = {}, const RootFindConfig& rf = {}) {
    const double p = g1.params.p;
    if (!(k > 0.0 && k < 1.0)) throw std::domain_error("analytic_margin_6_10: k must lie in (0,1)");
    ExtremizerMoments m = extremizer_moments(g1);
    double head = extremizer_prefix_p_moment(g1, k);
    double tail = m.p_moment - head;
    if (!(head > 0.0) || !(tail > 0.0)) throw PreconditionViolated("one-sided p-integral vanishes");
    double delta = std::max(std::pow(extremizer_hardy_lp_quad(g1, 0.0, k, q) / head, 1.0 / p), 1.0);
    double omega_ref = omega_p(p, std::min(std::pow(m.mass, p) / m.p_moment, 1.0), rf);
    if (delta > omega_ref + 1e-7) throw PreconditionViolated("delta_k exceeds omega_p(f^p/F)");
    double lhs = extremizer_hardy_lp_quad(g1, k, 1.0, q);
    double arg = (std::pow(m.mass, p) - h_p_eval(p, delta) * head) / tail;
    double rhs = tail * std::pow(omega_p(p, std::min(arg, 1.0), rf), p);
    return rhs - lhs;
}

inline double analytic_margin_6_12(const ExtremizerProfile& g1, double k,
                                   const QuadratureConfig& q = {}, const RootFindConfig& rf = {}) {
    const double p = g1.params.p;
    if (!(k > 0.0 && k < 1.0)) throw std::domain_error("analytic_margin_6_12: k must lie in (0,1)");
    ExtremizerMoments m = extremizer_moments(g1);
    double head = extremizer_prefix_p_moment(g1, k);
    double tail = m.p_moment - head;
    if (!(head > 0.0) || !(tail > 0.0)) throw PreconditionViolated("one-sided p-integral vanishes");
    double delta = std::max(std::pow(extremizer_hardy_lp_quad(g1, 0.0, k, q) / head, 1.0 / p), 1.0);
    double delta_prime =
        std::max(std::pow(extremizer_hardy_lp_quad(g1, k, 1.0, q) / tail, 1.0 / p), 1.0);
    double omega_ref = omega_p(p, std::min(std::pow(m.mass, p) / m.p_moment, 1.0), rf);
    if (delta > omega_ref + 1e-7) throw PreconditionViolated("delta_k exceeds omega_p(f^p/F)");
    return h_p_eval(p, delta) * head + h_p_eval(p, delta_prime) * tail - std::pow(m.mass, p);
}

// ---------------------------------------------------------------------------
// near-extremal construction on the dyadic tree
// ---------------------------------------------------------------------------

/// Near-extremal profile for the whole-space problem on a dyadic block: a
/// chain of nested prefix intervals where the off-chain half at depth d
/// carries the geometric value base * lambda^{d-1} and the last chain cell a
/// closing constant.  The multiplier solves the p-th moment exactly; the mass
/// closes by construction.  The maximal function is explicit on this shape:
/// the chain average f lambda^{d-1} on the depth-d off-chain half.
struct TowerProfile {
    int levels = 0;
    double p = 2.0, f = 1.0, F = 1.0;
    double lambda = 1.0;
    double base = 1.0;
    double maximal_lp = 0.0;  ///< closed-form int (M phi)^p over the block
};

inline double tower_p_moment(double p, double f, int levels, double lambda) {
    double base = f * (2.0 - lambda);
    double sum = 0.0, w = 0.5, v = base;
    for (int d = 1; d <= levels; ++d) {
        sum += w * std::pow(v, p);
        w *= 0.5;
        v *= lambda;
    }
    return sum + (2.0 * w) * std::pow(f * std::pow(lambda, levels), p);
}

inline TowerProfile solve_tower(double p, double f, double F, int levels) {
    require_exponent(p);
    if (!(f > 0.0) || !(F > 0.0)) throw std::domain_error("solve_tower: need f > 0 and F > 0");
    if (levels < 1 || levels > kMaxDyadicLevel)
        throw std::invalid_argument("solve_tower: levels must lie in [1, 24]");
    TowerProfile tp;
    tp.levels = levels;
    tp.p = p;
    tp.f = f;
    tp.F = F;
    double fp = std::pow(f, p);
    if (F <= fp * (1.0 + 1e-12)) {
        tp.lambda = 1.0;
        tp.base = f;
        tp.maximal_lp = fp;
        return tp;
    }
    if (F >= fp * std::pow(2.0, levels * (p - 1.0)))
        throw std::domain_error("solve_tower: moment out of reach at this depth");
    double lo = 1.0, hi = 2.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (tower_p_moment(p, f, levels, mid) < F ? lo : hi) = mid;
    }
    tp.lambda = 0.5 * (lo + hi);
    tp.base = f * (2.0 - tp.lambda);
    double sum = 0.0, w = 0.5, av = f;
    for (int d = 1; d <= levels; ++d) {
        sum += w * std::pow(av, p);
        w *= 0.5;
        av *= tp.lambda;
    }
    tp.maximal_lp = sum + (2.0 * w) * std::pow(av, p);
    return tp;
}

/// Writes the 2^levels cell values of the tower into vals[pos ...].
inline void write_tower_values(const TowerProfile& tp, std::vector<double>& vals,
                               std::size_t pos) {
    std::size_t n = std::size_t{1} << tp.levels;
    double v = tp.base;
    for (int d = 1; d <= tp.levels; ++d) {
        std::size_t lo = n >> d;
        for (std::size_t i = lo; i < 2 * lo; ++i) vals[pos + i] = v;
        v *= tp.lambda;
    }
    vals[pos] = tp.f * std::pow(tp.lambda, tp.levels);
}

inline DyadicStepFunction tower_function(const TowerProfile& tp) {
    std::vector<double> vals(std::size_t{1} << tp.levels);
    write_tower_values(tp, vals, 0);
    return DyadicStepFunction(tp.levels, std::move(vals));
}

struct SharpnessPoint {
    int level = 0;
    double k_rounded = 0.0;
    double ratio = 0.0;
    double mass = 0.0;      ///< achieved moments of the constructed function
    double p_moment = 0.0;
};

/// Constructive attainment experiment: K = [0, k) as dyadic cells, each
/// maximal dyadic block of K carrying the whole-space near-extremizer scaled
/// to the per-cell densities B0/k and A/k, the complement the constant
/// (f-B0)/(1-k).  Returns int_K (M phi)^p over the Bellman value at the
/// rounded k.
inline SharpnessPoint sharpness_ratio(const ProblemParams& pr, int level,
                                      const RootFindConfig& rf = {}) {
    pr.validate();
    if (level < 1 || level > kMaxDyadicLevel)
        throw std::invalid_argument("sharpness_ratio: level must lie in [1, 24]");
    const std::size_t n = std::size_t{1} << level;
    std::size_t cells_k =
        static_cast<std::size_t>(std::llround(pr.k * static_cast<double>(n)));
    cells_k = std::max<std::size_t>(1, std::min(cells_k, n));
    const double k_rounded = static_cast<double>(cells_k) * std::ldexp(1.0, -level);

    ProblemParams rounded = pr;
    rounded.k = k_rounded;

    SharpnessPoint out;
    out.level = level;
    out.k_rounded = k_rounded;

    std::vector<double> vals(n, 0.0);
    if (pr.degenerate()) {
        std::fill(vals.begin(), vals.end(), pr.f);
    } else if (cells_k == n) {
        write_tower_values(solve_tower(pr.p, pr.f, pr.F, level), vals, 0);
    } else {
        OptimizerResult opt = solve_b0(rounded, rf);
        double A = pr.F - std::pow(pr.f - opt.B0, pr.p) / std::pow(1.0 - k_rounded, pr.p - 1.0);
        double f_local = opt.B0 / k_rounded;
        double F_local = A / k_rounded;
        double tail_value = (pr.f - opt.B0) / (1.0 - k_rounded);
        for (std::size_t i = cells_k; i < n; ++i) vals[i] = tail_value;
        std::size_t pos = 0;
        while (pos < cells_k) {
            int b = 0;
            while ((std::size_t{1} << (b + 1)) <= cells_k - pos &&
                   pos % (std::size_t{1} << (b + 1)) == 0)
                ++b;
            bool flat = b == 0 || F_local <= std::pow(f_local, pr.p) * (1.0 + 1e-12);
            if (!flat) {
                try {
                    write_tower_values(solve_tower(pr.p, f_local, F_local, b), vals, pos);
                } catch (const std::domain_error&) {
                    flat = true;  // block too shallow to hold the moment
                }
            }
            if (flat)
                for (std::size_t i = pos; i < pos + (std::size_t{1} << b); ++i) vals[i] = f_local;
            pos += std::size_t{1} << b;
        }
    }

    DyadicStepFunction phi(level, std::move(vals));
    DyadicStepFunction maxfn = maximal_operator(phi);
    DyadicSet K = DyadicSet::prefix_cells(level, cells_k);
    out.mass = phi.mass();
    out.p_moment = phi.p_moment(pr.p);
    out.ratio = integral_over(maxfn, K, pr.p) / bellman_value(rounded, rf);
    return out;
}

// ---------------------------------------------------------------------------
// randomized suites
// ---------------------------------------------------------------------------

namespace detail {

inline int harness_threads() {
    if (const char* env = std::getenv("BELLMAN_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<int>(std::min<long>(v, 64));
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

struct TrialOutcome {
    double margin = std::numeric_limits<double>::infinity();
    bool skipped = false;
    std::string detail = "null";
};

template <class Body>
std::vector<TrialOutcome> run_trials(int trials, Body&& body) {
    auto guarded = [&body](int i) -> TrialOutcome {
        try {
            return body(i);
        } catch (const std::exception& e) {
            TrialOutcome t;
            t.margin = -std::numeric_limits<double>::infinity();
            t.detail = JsonObject().field("trial", i).field_str("error", e.what()).str();
            return t;
        }
    };
    std::vector<TrialOutcome> out(trials);
    int nt = std::min(harness_threads(), trials);
    if (nt <= 1) {
        for (int i = 0; i < trials; ++i) out[i] = guarded(i);
        return out;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < trials; i = next.fetch_add(1)) out[i] = guarded(i);
        });
    for (auto& th : pool) th.join();
    return out;
}

// min by (margin, trial index); the reduction order never matters
inline InequalityReport aggregate_report(const std::string& name, const TrialConfig& cfg,
                                         const std::vector<TrialOutcome>& outcomes) {
    InequalityReport rep;
    rep.name = name;
    rep.trials_run = static_cast<int>(outcomes.size());
    double best = std::numeric_limits<double>::infinity();
    int worst = -1;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (outcomes[i].skipped) {
            ++rep.precondition_skips;
            continue;
        }
        if (outcomes[i].margin < best) {
            best = outcomes[i].margin;
            worst = static_cast<int>(i);
        }
    }
    rep.min_margin = best;
    if (worst >= 0) rep.worst_case = outcomes[worst].detail;
    rep.passed = !(best < -cfg.slack);
    return rep;
}

// mixture of flat, exponential-tail and sparse-spike value draws
inline std::vector<double> random_values(TrialRng& rng, std::size_t n) {
    int kind = static_cast<int>(rng.below(3));
    std::vector<double> v(n);
    if (kind == 0) {
        for (auto& x : v) x = rng.uniform(0.0, 3.0);
    } else if (kind == 1) {
        for (auto& x : v) x = rng.exponential(1.0);
    } else {
        for (auto& x : v) x = rng.uniform(0.0, 0.2);
        v[rng.below(n)] = rng.uniform(5.0, 50.0);
    }
    double s = 0.0;
    for (double x : v) s += x;
    if (!(s > 0.0)) v[0] = 1.0;
    return v;
}

inline DyadicStepFunction random_dyadic(TrialRng& rng, int max_level) {
    int lvl = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, max_level))));
    return DyadicStepFunction(lvl, random_values(rng, std::size_t{1} << lvl));
}

inline StepFunction random_step(TrialRng& rng) {
    std::size_t n = 4 + static_cast<std::size_t>(rng.below(37));
    std::vector<double> gaps(n);
    double tot = 0.0;
    for (auto& g : gaps) {
        g = rng.uniform(0.2, 1.8);
        tot += g;
    }
    std::vector<double> breaks(n + 1, 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += gaps[i] / tot;
        breaks[i + 1] = acc;
    }
    breaks[n] = 1.0;
    return StepFunction(std::move(breaks), random_values(rng, n));
}

// power-singular head glued to its continuity constant: with a mild exponent
// the head averaging ratio can exceed what the global moments allow, which is
// exactly the regime the tail-bound precondition excludes
inline StepFunction random_power_head_step(TrialRng& rng, double p) {
    double b = 1.0 + rng.uniform(0.05, 0.95) * (p / (p - 1.0) - 1.0);
    double k0 = rng.uniform(0.2, 0.8);
    double scale = rng.uniform(0.5, 2.0);
    const int head_cells = 24;
    std::vector<double> breaks{0.0};
    std::vector<double> values;
    double prev_t = 0.0, prev_mass = 0.0;
    for (int i = 1; i <= head_cells; ++i) {
        double t = k0 * std::pow(10.0, -5.0 * (1.0 - static_cast<double>(i) / head_cells));
        double mass = scale * b * std::pow(t, 1.0 / b);
        values.push_back((mass - prev_mass) / (t - prev_t));
        breaks.push_back(t);
        prev_t = t;
        prev_mass = mass;
    }
    values.push_back(scale * std::pow(k0, -1.0 + 1.0 / b));
    breaks.push_back(1.0);
    return StepFunction(std::move(breaks), std::move(values));
}

// uniform cell masks, prefix masks, and superlevel sets of the maximal function
inline DyadicSet random_mask(TrialRng& rng, const DyadicStepFunction& maxfn) {
    DyadicSet s;
    s.level = maxfn.level();
    s.mask.assign(maxfn.cells(), 0);
    int kind = static_cast<int>(rng.below(3));
    if (kind == 0) {
        double q = rng.uniform(0.2, 0.8);
        for (auto& b : s.mask) b = rng.chance(q) ? 1 : 0;
    } else if (kind == 1) {
        std::size_t cnt = 1 + static_cast<std::size_t>(rng.below(maxfn.cells()));
        std::fill_n(s.mask.begin(), cnt, std::uint8_t{1});
    } else {
        double mx = *std::max_element(maxfn.values().begin(), maxfn.values().end());
        double lam = rng.uniform(0.3, 0.95) * mx;
        for (std::size_t i = 0; i < s.mask.size(); ++i)
            s.mask[i] = maxfn.values()[i] > lam ? 1 : 0;
    }
    if (s.count() == 0) s.mask[0] = 1;
    return s;
}

inline InequalityReport suite_lemma31(const TrialConfig& cfg) {
    auto body = [&cfg](int trial) {
        TrialRng rng = TrialRng::stream(cfg.seed, trial);
        DyadicStepFunction phi = random_dyadic(rng, std::min(cfg.level, 10));
        StepFunction phi_star = rearrangement(phi);
        StepFunction max_star = rearrangement(maximal_operator(phi));
        double margin = std::numeric_limits<double>::infinity();
        double at = 1.0;
        for (std::size_t i = 0; i < max_star.cells(); ++i) {
            double t = max_star.breakpoints()[i + 1];
            double gap = hardy_average(phi_star, t) - max_star.values()[i];
            if (gap < margin) {
                margin = gap;
                at = t;
            }
        }
        TrialOutcome out;
        out.margin = margin;
        out.detail = JsonObject()
                         .field("trial", trial)
                         .field("level", phi.level())
                         .field("t", at)
                         .field("margin", margin)
                         .str();
        return out;
    };
    return aggregate_report("lemma31", cfg, run_trials(cfg.trials, body));
}

inline InequalityReport suite_weak_type(const TrialConfig& cfg) {
    auto body = [&cfg](int trial) {
        TrialRng rng = TrialRng::stream(cfg.seed, trial);
        DyadicStepFunction phi = random_dyadic(rng, cfg.level);
        DyadicStepFunction maxfn = maximal_operator(phi);
        double mx = *std::max_element(maxfn.values().begin(), maxfn.values().end());
        double lambda = rng.uniform(0.05, 1.2) * mx;
        TrialOutcome out;
        out.margin = weak_type_margin(phi, maxfn, lambda);
        out.detail = JsonObject()
                         .field("trial", trial)
                         .field("level", phi.level())
                         .field("lambda", lambda)
                         .field("margin", out.margin)
                         .str();
        return out;
    };
    return aggregate_report("weak_type", cfg, run_trials(cfg.trials, body));
}

inline InequalityReport suite_ineq_1_10(const TrialConfig& cfg) {
    auto body = [&cfg](int trial) {
        TrialRng rng = TrialRng::stream(cfg.seed, trial);
        double p = cfg.p_grid[trial % cfg.p_grid.size()];
        DyadicStepFunction phi = random_dyadic(rng, cfg.level);
        DyadicStepFunction maxfn = maximal_operator(phi);
        double beta = (trial % 2 == 0) ? cfg.beta_grid[rng.below(cfg.beta_grid.size())]
                                       : rng.exponential(1.0) + 0.01;
        TrialOutcome out;
        out.margin = check_ineq_1_10(phi, maxfn, p, beta);
        out.detail = JsonObject()
                         .field("trial", trial)
                         .field("level", phi.level())
                         .field("p", p)
                         .field("beta", beta)
                         .field("margin", out.margin)
                         .str();
        return out;
    };
    return aggregate_report("ineq_1_10", cfg, run_trials(cfg.trials, body));
}

inline InequalityReport suite_ineq_1_11(const TrialConfig& cfg) {
    auto body = [&cfg](int trial) {
        TrialRng rng = TrialRng::stream(cfg.seed, trial);
        double p = cfg.p_grid[trial % cfg.p_grid.size()];
        DyadicStepFunction phi = random_dyadic(rng, cfg.level);
        DyadicStepFunction maxfn = maximal_operator(phi);
        DyadicSet K = random_mask(rng, maxfn);
        double beta = rng.chance(0.5) ? cfg.beta_grid[rng.below(cfg.beta_grid.size())]
                                      : rng.exponential(1.0) + 0.05;
        double gamma;
        switch (trial % 3) {
            case 0: gamma = 0.0; break;
            case 1: gamma = beta; break;
            default: {
                double g = cfg.gamma_grid[rng.below(cfg.gamma_grid.size())];
                gamma = std::min(g, beta * rng.uniform01());
            }
        }
        TrialOutcome out;
        out.margin = check_ineq_1_11(phi, maxfn, K, p, beta, gamma);
        bool mismatch = false;
        if (gamma == 0.0) {
            double m10 = check_ineq_1_10(phi, maxfn, p, beta);
            mismatch = std::memcmp(&out.margin, &m10, sizeof(double)) != 0;
        }
        out.detail = JsonObject()
                         .field("trial", trial)
                         .field("level", phi.level())
                         .field("p", p)
                         .field("beta", beta)
                         .field("gamma", gamma)
                         .field("k", K.measure())
                         .field("margin", out.margin)
                         .field("gamma0_matches_1_10", !mismatch)
                         .str();
        if (mismatch) out.margin = -std::numeric_limits<double>::infinity();
        return out;
    };
    return aggregate_report("ineq_1_11", cfg, run_trials(cfg.trials, body));
}

inline InequalityReport suite_carleson(const TrialConfig& cfg) {
    auto body = [&cfg](int trial) {
        TrialRng rng = TrialRng::stream(cfg.seed, trial);
        double p = cfg.p_grid[trial % cfg.p_grid.size()];
        int max_lvl = std::min(cfg.level, 8);
        DyadicStepFunction phi = random_dyadic(rng, max_lvl);
        int weight_level = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_lvl)));
        double k_target = rng.uniform(0.05, 1.0);
        CarlesonWeights w = random_admissible_weights(weight_level, k_target, rng);
        double k_exact = std::min(w.total(), 1.0);
        double sum = carleson_sum(phi, w, p);
        ProblemParams pr{p, phi.mass(), std::max(phi.p_moment(p), std::pow(phi.mass(), p)),
                         k_exact};
        TrialOutcome out;
        out.margin = bellman_value(pr) - sum;
        out.detail = JsonObject()
                         .field("trial", trial)
                         .field("p", p)
                         .field("phi_level", phi.level())
                         .field("weight_level", weight_level)
                         .field("k", k_exact)
                         .field("carleson_sum", sum)
                         .field("margin", out.margin)
                         .str();
        return out;
    };
    return aggregate_report("carleson", cfg, run_trials(cfg.trials, body));
}

template <class Margin>
InequalityReport suite_six(const std::string& name, const TrialConfig& cfg, Margin&& margin_fn) {
    auto body = [&cfg, &margin_fn](int trial) {
        TrialRng rng = TrialRng::stream(cfg.seed, trial);
        double p = cfg.p_grid[trial % cfg.p_grid.size()];
        StepFunction h = (trial % 3 == 2) ? random_power_head_step(rng, p)
                                          : rearrange_decreasing(random_step(rng));
        double k = rng.uniform(0.1, 0.9);
        QuadratureConfig q;
        TrialOutcome out;
        // the admissible set of k is nonempty for every profile; scan from the
        // right, where admissibility is easiest
        bool found = false;
        for (double kk : {0.99, 0.95, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1, 0.05}) {
            try {
                six_context(h, p, kk, q, RootFindConfig{});
                found = true;
                break;
            } catch (const PreconditionViolated&) {
            } catch (const std::domain_error&) {
            }
        }
        double margin = 0.0;
        bool skipped = false;
        try {
            margin = margin_fn(h, p, k, q);
        } catch (const PreconditionViolated&) {
            skipped = true;
        }
        out.skipped = skipped;
        out.margin = skipped ? std::numeric_limits<double>::infinity() : margin;
        if (!found) out.margin = -std::numeric_limits<double>::infinity();
        out.detail = JsonObject()
                         .field("trial", trial)
                         .field("p", p)
                         .field("k", k)
                         .field("cells", h.cells())
                         .field("skipped", skipped)
                         .field("admissible_k_found", found)
                         .field("margin", margin)
                         .str();
        return out;
    };
    return aggregate_report(name, cfg, run_trials(cfg.trials, body));
}

inline InequalityReport suite_sharpness(const TrialConfig& cfg) {
    std::vector<int> levels;
    if (cfg.level < 8) {
        levels = {cfg.level};
    } else {
        for (int l = 8; l <= std::min(cfg.level, 14); l += 2) levels.push_back(l);
    }
    const ProblemParams sets[] = {{2.0, 1.0, 2.0, 0.5}, {2.0, 1.0, 2.0, 1.0}};
    InequalityReport rep;
    rep.name = "sharpness";
    double min_step = std::numeric_limits<double>::infinity();
    JsonObject detail;
    int idx = 0;
    for (const ProblemParams& pr : sets) {
        std::vector<double> ratios;
        for (int l : levels) ratios.push_back(sharpness_ratio(pr, l).ratio);
        for (std::size_t i = 0; i + 1 < ratios.size(); ++i)
            min_step = std::min(min_step, ratios[i + 1] - ratios[i]);
        if (ratios.size() == 1) min_step = std::min(min_step, 0.0);
        detail.field_raw(idx == 0 ? "ratios_half" : "ratios_full", json_array(ratios));
        ++idx;
        rep.trials_run += static_cast<int>(ratios.size());
    }
    detail.field_raw("levels", json_array(levels));
    rep.min_margin = min_step;
    rep.worst_case = detail.str();
    rep.passed = !(min_step < -cfg.slack);
    return rep;
}

}  // namespace detail

/// Runs one named deterministic suite.  Known names: lemma31, weak_type,
/// ineq_1_10, ineq_1_11, carleson, ineq_6_10, ineq_6_12, sharpness.
inline InequalityReport run_suite(const std::string& name, const TrialConfig& cfg) {
    cfg.validate();
    if (name == "lemma31") return detail::suite_lemma31(cfg);
    if (name == "weak_type") return detail::suite_weak_type(cfg);
    if (name == "ineq_1_10") return detail::suite_ineq_1_10(cfg);
    if (name == "ineq_1_11") return detail::suite_ineq_1_11(cfg);
    if (name == "carleson") return detail::suite_carleson(cfg);
    if (name == "ineq_6_10")
        return detail::suite_six("ineq_6_10", cfg,
                                 [](const StepFunction& h, double p, double k,
                                    const QuadratureConfig& q) {
                                     return check_ineq_6_10(h, p, k, q);
                                 });
    if (name == "ineq_6_12")
        return detail::suite_six("ineq_6_12", cfg,
                                 [](const StepFunction& h, double p, double k,
                                    const QuadratureConfig& q) {
                                     return check_ineq_6_12(h, p, k, q);
                                 });
    if (name == "sharpness") return detail::suite_sharpness(cfg);
    throw std::invalid_argument("run_suite: unknown suite '" + name + "'");
}

}  // namespace bellmax
