#pragma once

#include <cmath>
#include <stdexcept>

namespace bellmax {

struct QuadratureConfig {
    double abs_tol = 1e-10;
    int max_subdivisions = 48;

    void validate() const {
        if (!(abs_tol > 0.0) || max_subdivisions < 1)
            throw std::invalid_argument("QuadratureConfig: need abs_tol > 0, max_subdivisions >= 1");
    }
};

namespace detail {

// 7-point Gauss-Legendre nodes and weights on [-1, 1].
inline constexpr double kGaussNodes[7] = {
    0.0,
    -0.4058451513773972,  0.4058451513773972,
    -0.7415311855993945,  0.7415311855993945,
    -0.9491079123427585,  0.9491079123427585,
};
inline constexpr double kGaussWeights[7] = {
    0.4179591836734694,
    0.3818300505051189, 0.3818300505051189,
    0.2797053914892766, 0.2797053914892766,
    0.1294849661688697, 0.1294849661688697,
};

template <class F>
double gauss7(F&& f, double a, double b) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 7; ++i) s += kGaussWeights[i] * f(mid + half * kGaussNodes[i]);
    return s * half;
}

template <class F>
double adaptive_gauss_impl(F&& f, double a, double b, double whole, double tol, int depth,
                           int max_depth) {
    double mid = 0.5 * (a + b);
    double left = gauss7(f, a, mid);
    double right = gauss7(f, mid, b);
    if (std::fabs(left + right - whole) <= tol) return left + right;
    if (depth >= max_depth)
        throw std::runtime_error("adaptive_gauss: subdivision budget exhausted");
    return adaptive_gauss_impl(f, a, mid, left, 0.5 * tol, depth + 1, max_depth) +
           adaptive_gauss_impl(f, mid, b, right, 0.5 * tol, depth + 1, max_depth);
}

// Interval halving until the two-level Gauss estimates agree within tol.
template <class F>
double adaptive_gauss(F&& f, double a, double b, double tol, const QuadratureConfig& q) {
    q.validate();
    if (!(b > a)) return 0.0;
    return adaptive_gauss_impl(f, a, b, gauss7(f, a, b), tol, 0, q.max_subdivisions);
}

}  // namespace detail
}  // namespace bellmax
