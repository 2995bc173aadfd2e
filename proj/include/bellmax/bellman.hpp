#pragma once

#include <cmath>
#include <stdexcept>

#include "special_functions.hpp"

namespace bellmax {

/// Problem data (p, f, F, k): mean f, p-th moment F of the test function, and
/// the measure k of the set the maximal function is integrated over.
struct ProblemParams {
    double p = 2.0;  ///< integrability exponent, > 1
    double f = 1.0;  ///< mean, > 0
    double F = 1.0;  ///< p-th moment, >= f^p
    double k = 1.0;  ///< target-set measure, in (0, 1]

    void validate() const {
        require_exponent(p);
        if (!(f > 0.0)) throw std::domain_error("ProblemParams: f must be > 0");
        if (!(F > 0.0)) throw std::domain_error("ProblemParams: F must be > 0");
        double fp = std::pow(f, p);
        if (fp > F * (1.0 + 1e-12)) throw std::domain_error("ProblemParams: need f^p <= F");
        if (!(k > 0.0 && k <= 1.0)) throw std::domain_error("ProblemParams: k must lie in (0, 1]");
    }

    /// F == f^p up to relative tolerance 1e-12; the feasible domain collapses
    /// to the single point k f and the test function is forced constant.
    bool degenerate() const {
        double fp = std::pow(f, p);
        return F - fp <= 1e-12 * std::max(F, fp);
    }
};

struct FeasibleDomain {
    double p0 = 0.0;
    double p1 = 0.0;
};

struct OptimizerResult {
    double B0 = 0.0;     ///< optimal mass carried by the target set
    double Z0 = 0.0;     ///< argument handed to omega_p at the optimum
    double value = 0.0;  ///< candidate functional evaluated at B0
};

namespace detail {

inline double h_k_raw(const ProblemParams& pr, double B) {
    return std::pow(pr.f - B, pr.p) / std::pow(1.0 - pr.k, pr.p - 1.0) +
           std::pow(B, pr.p) / std::pow(pr.k, pr.p - 1.0);
}

inline double h_k_deriv_raw(const ProblemParams& pr, double B) {
    return pr.p * (std::pow(B, pr.p - 1.0) / std::pow(pr.k, pr.p - 1.0) -
                   std::pow(pr.f - B, pr.p - 1.0) / std::pow(1.0 - pr.k, pr.p - 1.0));
}

}  // namespace detail

/// h_k(B) = (f-B)^p/(1-k)^{p-1} + B^p/k^{p-1}: the smallest p-th moment a
/// function with mass B on a set of measure k and mass f overall can have.
/// Convex in B with minimum f^p at B = k f.
inline double h_k_eval(const ProblemParams& pr, double B) {
    pr.validate();
    if (!(pr.k < 1.0)) throw std::domain_error("h_k_eval: defined for k < 1 only");
    if (!(B >= 0.0 && B <= pr.f)) throw std::domain_error("h_k_eval: B must lie in [0, f]");
    return detail::h_k_raw(pr, B);
}

/// The interval {B in [0, f] : h_k(B) <= F}.  Each side of the minimum B = kf
/// is monotone, so both edges come from safely bracketed solves.
inline FeasibleDomain feasible_domain(const ProblemParams& pr, const RootFindConfig& cfg = {}) {
    pr.validate();
    if (!(pr.k < 1.0)) throw std::domain_error("feasible_domain: defined for k < 1 only");
    const double kf = pr.k * pr.f;
    if (pr.degenerate()) return {kf, kf};
    auto fn = [&pr](double B) { return detail::h_k_raw(pr, B) - pr.F; };
    auto dfn = [&pr](double B) { return detail::h_k_deriv_raw(pr, B); };
    FeasibleDomain dom{0.0, pr.f};
    if (fn(0.0) > 0.0) dom.p0 = detail::solve_bracketed(fn, dfn, 0.0, kf, cfg);
    if (fn(pr.f) > 0.0) dom.p1 = detail::solve_bracketed(fn, dfn, kf, pr.f, cfg);
    return dom;
}

/// Candidate value at split mass B.  Feasibility h_k(B) <= F puts the omega_p
/// argument inside [0, 1].
inline double r_k_eval(const ProblemParams& pr, double B, const RootFindConfig& cfg = {}) {
    pr.validate();
    if (!(pr.k < 1.0)) throw std::domain_error("r_k_eval: defined for k < 1 only");
    if (!(B >= 0.0 && B <= pr.f)) throw std::domain_error("r_k_eval: B must lie in [0, f]");
    if (detail::h_k_raw(pr, B) > pr.F * (1.0 + 1e-9) + 1e-12)
        throw std::domain_error("r_k_eval: B outside the feasible domain");
    double A = pr.F - std::pow(pr.f - B, pr.p) / std::pow(1.0 - pr.k, pr.p - 1.0);
    if (A <= 0.0) return 0.0;  // only at the boundary case B = 0 with h_k(0) = F
    double Z = std::pow(B, pr.p) / (std::pow(pr.k, pr.p - 1.0) * A);
    Z = std::min(Z, 1.0);
    return A * std::pow(omega_p(pr.p, Z, cfg), pr.p);
}

/// Interior maximizer of the candidate functional, from the omega_{p,k}
/// characterization: f(1-k)/(f-B0) = omega_{p,k}(f^p/F).
inline OptimizerResult solve_b0(const ProblemParams& pr, const RootFindConfig& cfg = {}) {
    pr.validate();
    if (!(pr.k < 1.0)) throw std::domain_error("solve_b0: defined for k < 1 only");
    if (pr.degenerate())
        throw std::domain_error("solve_b0: degenerate F = f^p (the value is k f^p)");
    double theta = std::pow(pr.f, pr.p) / pr.F;
    double w = omega_pk(pr.p, pr.k, theta, cfg);
    OptimizerResult res;
    res.B0 = pr.f - pr.f * (1.0 - pr.k) / w;
    double A = pr.F - std::pow(pr.f - res.B0, pr.p) / std::pow(1.0 - pr.k, pr.p - 1.0);
    res.Z0 = std::pow(res.B0, pr.p) / (std::pow(pr.k, pr.p - 1.0) * A);
    // the optimizer must satisfy H_p((B0/k)(1-k)/(f-B0)) = Z0
    double lhs = detail::h_p_raw(pr.p, (res.B0 / pr.k) * (1.0 - pr.k) / (pr.f - res.B0));
    if (std::fabs(lhs - res.Z0) > 1e-6 * std::max(1.0, std::fabs(res.Z0)))
        throw std::runtime_error("solve_b0: optimizer consistency identity failed");
    res.value = r_k_eval(pr, res.B0, cfg);
    return res;
}

/// B_p(f, F, k): closed branches for k = 1 and for F = f^p, the solved
/// optimizer otherwise.
inline double bellman_value(const ProblemParams& pr, const RootFindConfig& cfg = {}) {
    pr.validate();
    if (pr.k == 1.0) {
        double theta = std::min(std::pow(pr.f, pr.p) / pr.F, 1.0);
        return pr.F * std::pow(omega_p(pr.p, theta, cfg), pr.p);
    }
    if (pr.degenerate()) return pr.k * std::pow(pr.f, pr.p);
    return solve_b0(pr, cfg).value;
}

}  // namespace bellmax
