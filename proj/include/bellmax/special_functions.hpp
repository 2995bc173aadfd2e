#pragma once

#include <cmath>
#include <stdexcept>

#include "root_finding.hpp"

namespace bellmax {

// Exponents arbitrarily close to 1 make p/(p-1) blow up; reject them outright.
inline void require_exponent(double p) {
    if (!(p >= 1.0 + 1e-6))
        throw std::domain_error("exponent p must satisfy p > 1 (at least 1 + 1e-6)");
}

namespace detail {

inline double h_p_raw(double p, double z) {
    return p * std::pow(z, p - 1.0) - (p - 1.0) * std::pow(z, p);
}

inline double h_p_deriv(double p, double z) {
    return p * (p - 1.0) * std::pow(z, p - 2.0) * (1.0 - z);
}

}  // namespace detail

/// H_p(z) = p z^{p-1} - (p-1) z^p.  Strictly decreasing on [1, inf) with
/// H_p(1) = 1 and H_p(p/(p-1)) = 0.
inline double h_p_eval(double p, double z) {
    require_exponent(p);
    if (!(z >= 1.0)) throw std::domain_error("h_p_eval: z must be >= 1");
    return detail::h_p_raw(p, z);
}

/// Inverse of H_p on (-inf, 1].  For x in [0, 1] the root lies in
/// [1, p/(p-1)]; for x < 0 the upper bracket is doubled until H_p crosses x
/// (H_p tends to -inf, so this terminates).
inline double omega_p(double p, double x, const RootFindConfig& cfg = {}) {
    require_exponent(p);
    if (x > 1.0) throw std::domain_error("omega_p: x must be <= 1");
    if (x == 1.0) return 1.0;
    // H_p(p/(p-1)) is 0 in exact arithmetic but can round either way, so the
    // growth loop also covers x = 0
    double hi = p / (p - 1.0);
    while (detail::h_p_raw(p, hi) > x) hi *= 2.0;
    return detail::solve_bracketed([p, x](double z) { return detail::h_p_raw(p, z) - x; },
                                   [p](double z) { return detail::h_p_deriv(p, z); }, 1.0, hi,
                                   cfg);
}

/// U_p(x) = omega_p(x)^p / x on (0, 1]; strictly decreasing.
inline double u_p(double p, double x, const RootFindConfig& cfg = {}) {
    require_exponent(p);
    if (!(x > 0.0) || x > 1.0) throw std::domain_error("u_p: x must lie in (0, 1]");
    double w = omega_p(p, x, cfg);
    return std::pow(w, p) / x;
}

/// Residual whose unique root in [1, 1 + k/(p-1)] characterizes the optimal
/// mass split; theta is the moment ratio f^p/F.
inline double sigma_pk(double p, double k, double theta, double z) {
    return -(p - 1.0) * std::pow(z, p) + (p - 1.0 + k) * std::pow(z, p - 1.0) -
           theta * (1.0 + (1.0 - k) * ((p - 1.0) / z - p));
}

/// Root of sigma_pk in [1, 1 + k/(p-1)].  Solved in the multiplied-through
/// polynomial form z * sigma(z), which has no 1/z term.  sigma(1) = k(1-theta)
/// and sigma at the right endpoint is -theta p k^2/(p-1+k), so the bracket
/// always straddles the root.
inline double omega_pk(double p, double k, double theta, const RootFindConfig& cfg = {}) {
    require_exponent(p);
    if (!(k > 0.0 && k < 1.0)) throw std::domain_error("omega_pk: k must lie in (0, 1)");
    if (!(theta >= 0.0 && theta <= 1.0)) throw std::domain_error("omega_pk: theta must lie in [0, 1]");
    const double hi = 1.0 + k / (p - 1.0);
    const double lin = 1.0 - (1.0 - k) * p;
    const double cst = (1.0 - k) * (p - 1.0);
    auto fn = [=](double z) {
        return -(p - 1.0) * std::pow(z, p + 1.0) + (p - 1.0 + k) * std::pow(z, p) -
               theta * (lin * z + cst);
    };
    auto dfn = [=](double z) {
        return -(p + 1.0) * (p - 1.0) * std::pow(z, p) + p * (p - 1.0 + k) * std::pow(z, p - 1.0) -
               theta * lin;
    };
    double flo = fn(1.0);
    if (flo <= 0.0) return 1.0;  // theta = 1 up to rounding
    double fhi = fn(hi);
    if (fhi >= 0.0) return hi;   // theta = 0 up to rounding
    return detail::solve_bracketed(fn, dfn, 1.0, hi, cfg);
}

}  // namespace bellmax
