#pragma once

#include <cmath>
#include <stdexcept>

#include "bellman.hpp"

namespace bellmax {

/// The attaining profile: a power piece A1 t^{-1+1/a} on (0, k] glued
/// continuously to the constant c on (k, 1].  a is the Hardy proportionality
/// factor: the running average of the profile equals a times the profile on
/// the whole power piece.
struct ExtremizerProfile {
    ProblemParams params;
    double B0 = 0.0;  ///< mass carried by (0, k]
    double Z0 = 1.0;
    double a = 1.0;   ///< in [1, p/(p-1))
    double A1 = 0.0;  ///< leading coefficient of the power piece
    double c = 0.0;   ///< constant tail value (equals A1 k^{-1+1/a})
};

inline bool extremizer_is_flat(const ExtremizerProfile& prof) {
    return std::fabs(prof.a - 1.0) <= 1e-12;
}

inline ExtremizerProfile build_extremizer(const ProblemParams& pr, const RootFindConfig& cfg = {}) {
    pr.validate();
    ExtremizerProfile prof;
    prof.params = pr;
    if (pr.degenerate()) {
        prof.B0 = pr.k * pr.f;
        prof.Z0 = 1.0;
        prof.a = 1.0;
        prof.A1 = pr.f;
        prof.c = pr.f;
        return prof;
    }
    if (pr.k == 1.0) {
        prof.B0 = pr.f;
        prof.Z0 = std::pow(pr.f, pr.p) / pr.F;
        prof.a = omega_p(pr.p, prof.Z0, cfg);
        prof.A1 = pr.f / prof.a;
        prof.c = prof.A1;  // value at t = 1; there is no genuine tail piece
        return prof;
    }
    OptimizerResult opt = solve_b0(pr, cfg);
    prof.B0 = opt.B0;
    prof.Z0 = opt.Z0;
    prof.a = omega_p(pr.p, opt.Z0, cfg);
    prof.A1 = prof.B0 * std::pow(pr.k, -1.0 / prof.a) / prof.a;
    prof.c = (pr.f - prof.B0) / (1.0 - pr.k);
    return prof;
}

inline double eval_extremizer(const ExtremizerProfile& prof, double t) {
    if (!(t > 0.0 && t <= 1.0)) throw std::domain_error("eval_extremizer: t must lie in (0, 1]");
    if (t <= prof.params.k) {
        if (extremizer_is_flat(prof)) return prof.A1;
        return prof.A1 * std::pow(t, -1.0 + 1.0 / prof.a);
    }
    return prof.c;
}

/// Exact prefix integral of the profile; the power piece has antiderivative
/// A1 a t^{1/a}.
inline double extremizer_prefix_mass(const ExtremizerProfile& prof, double t) {
    if (t <= 0.0) return 0.0;
    if (t <= prof.params.k) return prof.A1 * prof.a * std::pow(t, 1.0 / prof.a);
    return prof.B0 + prof.c * (t - prof.params.k);
}

/// Exact prefix integral of the p-th power of the profile.  The power-piece
/// exponent 1 - p + p/a is positive precisely because a < p/(p-1).
inline double extremizer_prefix_p_moment(const ExtremizerProfile& prof, double t) {
    const double p = prof.params.p;
    const double k = prof.params.k;
    const double e = 1.0 - p + p / prof.a;
    if (t <= 0.0) return 0.0;
    if (t <= k) return std::pow(prof.A1, p) * std::pow(t, e) / e;
    return std::pow(prof.A1, p) * std::pow(k, e) / e + std::pow(prof.c, p) * (t - k);
}

inline double extremizer_hardy_average(const ExtremizerProfile& prof, double t) {
    if (!(t > 0.0 && t <= 1.0))
        throw std::domain_error("extremizer_hardy_average: t must lie in (0, 1]");
    return extremizer_prefix_mass(prof, t) / t;
}

struct ExtremizerMoments {
    double mass = 0.0;
    double p_moment = 0.0;
    double hardy_lp_on_0k = 0.0;  ///< integral over (0, k] of the Hardy average to the p-th power
};

/// Closed-form moments.  Contract: mass = f, p_moment = F, and the Hardy
/// term equals the Bellman value of the underlying parameters.
inline ExtremizerMoments extremizer_moments(const ExtremizerProfile& prof) {
    ExtremizerMoments m;
    m.mass = extremizer_prefix_mass(prof, 1.0);
    m.p_moment = extremizer_prefix_p_moment(prof, 1.0);
    m.hardy_lp_on_0k =
        std::pow(prof.a, prof.params.p) * extremizer_prefix_p_moment(prof, prof.params.k);
    return m;
}

}  // namespace bellmax
