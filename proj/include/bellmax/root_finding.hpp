#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bellmax {

struct RootFindConfig {
    double abs_tol = 1e-13;
    double rel_tol = 1e-12;
    int max_iterations = 200;

    void validate() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_iterations < 1)
            throw std::invalid_argument(
                "RootFindConfig: need abs_tol > 0, rel_tol > 0, max_iterations >= 1");
    }
};

namespace detail {

// Root of fn on [lo, hi] where fn(lo) and fn(hi) have opposite signs (either
// endpoint value may be zero).  Bisection maintains the bracket; a Newton step
// from the current iterate is taken whenever it lands strictly inside.
template <class F, class DF>
double solve_bracketed(F&& fn, DF&& dfn, double lo, double hi, const RootFindConfig& cfg) {
    cfg.validate();
    double flo = fn(lo);
    if (flo == 0.0) return lo;
    double fhi = fn(hi);
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::logic_error("solve_bracketed: endpoints do not bracket a root");
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < cfg.max_iterations; ++it) {
        double fx = fn(x);
        if (std::fabs(fx) <= cfg.abs_tol) return x;
        if ((fx > 0.0) == (flo > 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        if (hi - lo <= cfg.rel_tol * std::max(1.0, std::fabs(x))) return 0.5 * (lo + hi);
        double d = dfn(x);
        if (d != 0.0) {
            double xn = x - fx / d;
            if (xn > lo && xn < hi) {
                x = xn;
                continue;
            }
        }
        x = 0.5 * (lo + hi);
    }
    throw std::runtime_error("solve_bracketed: iteration budget exhausted");
}

}  // namespace detail
}  // namespace bellmax
