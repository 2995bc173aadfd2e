#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dyadic.hpp"
#include "rng.hpp"

namespace bellmax {

/// Nonnegative node weights on the dyadic tree up to max_level, meant to
/// satisfy the packing condition: the subtree total under any node I is at
/// most mu(I).
class CarlesonWeights {
  public:
    explicit CarlesonWeights(int max_level) {
        if (max_level < 0 || max_level > kMaxDyadicLevel)
            throw std::invalid_argument("CarlesonWeights: max_level must lie in [0, 24]");
        levels_.resize(max_level + 1);
        for (int j = 0; j <= max_level; ++j) levels_[j].assign(std::size_t{1} << j, 0.0);
    }

    int max_level() const { return static_cast<int>(levels_.size()) - 1; }

    double& at(int level, std::size_t index) { return levels_[level][index]; }
    double at(int level, std::size_t index) const { return levels_[level][index]; }
    const std::vector<double>& level_weights(int level) const { return levels_[level]; }

    double total() const {
        double s = 0.0;
        for (const auto& lvl : levels_)
            for (double w : lvl) s += w;
        return s;
    }

    /// Minimum over all nodes of mu(I) minus the subtree weight under I;
    /// nonnegative exactly when the packing condition holds.
    double min_packing_slack() const {
        int m = max_level();
        std::vector<double> sub = levels_[m];
        double slack = std::ldexp(1.0, -m);
        for (double s : sub) slack = std::min(slack, std::ldexp(1.0, -m) - s);
        for (int j = m - 1; j >= 0; --j) {
            std::vector<double> up(std::size_t{1} << j);
            double mu = std::ldexp(1.0, -j);
            for (std::size_t i = 0; i < up.size(); ++i) {
                up[i] = levels_[j][i] + sub[2 * i] + sub[2 * i + 1];
                slack = std::min(slack, mu - up[i]);
            }
            sub.swap(up);
        }
        return slack;
    }

    void scale(double factor) {
        for (auto& lvl : levels_)
            for (double& w : lvl) w *= factor;
    }

    /// Packing within tol and all weights nonnegative, else throws.
    void validate(double tol = 1e-12) const {
        for (const auto& lvl : levels_)
            for (double w : lvl)
                if (!(w >= 0.0)) throw std::invalid_argument("CarlesonWeights: negative weight");
        if (min_packing_slack() < -tol)
            throw std::invalid_argument("CarlesonWeights: packing condition violated");
    }

  private:
    std::vector<std::vector<double>> levels_;
};

/// Sum of lambda_I Av_I(phi)^p over all weighted nodes.  The weights are
/// validated against the packing condition first.
inline double carleson_sum(const DyadicStepFunction& dsf, const CarlesonWeights& w, double p,
                           double tol = 1e-12) {
    w.validate(tol);
    std::optional<DyadicStepFunction> refined;
    const DyadicStepFunction* fn = &dsf;
    if (w.max_level() > dsf.level()) {
        refined = dsf.refined_to(w.max_level());
        fn = &*refined;
    }
    double s = 0.0;
    for (int j = 0; j <= w.max_level(); ++j) {
        const auto& lvl = w.level_weights(j);
        for (std::size_t i = 0; i < lvl.size(); ++i)
            if (lvl[i] > 0.0) s += lvl[i] * std::pow(fn->node_average(j, i), p);
    }
    return s;
}

namespace detail {

inline void draw_weights(CarlesonWeights& w, int level, std::size_t index, double allowance,
                         double damping, TrialRng& rng) {
    double draw = rng.uniform(0.0, allowance * damping);
    w.at(level, index) = draw;
    if (level < w.max_level()) {
        double child_allowance = 0.5 * (allowance - draw);
        draw_weights(w, level + 1, 2 * index, child_allowance, damping, rng);
        draw_weights(w, level + 1, 2 * index + 1, child_allowance, damping, rng);
    }
}

}  // namespace detail

/// Random weight family with total k and the packing condition intact.
/// Top-down: each node draws uniformly from a damped share of its remaining
/// subtree allowance, which keeps every subtree total below its node measure.
/// The total is then rescaled down to k, or topped up at the root (the root
/// constraint is the only one a root increment touches, and k <= 1 keeps it
/// satisfiable).
inline CarlesonWeights random_admissible_weights(int max_level, double k, TrialRng& rng,
                                                 double damping = 0.5) {
    if (!(k > 0.0 && k <= 1.0))
        throw std::domain_error("random_admissible_weights: k must lie in (0, 1]");
    CarlesonWeights w(max_level);
    detail::draw_weights(w, 0, 0, 1.0, damping, rng);
    double t = w.total();
    if (t >= k) {
        w.scale(k / t);
    } else {
        w.at(0, 0) += k - t;
    }
    return w;
}

}  // namespace bellmax
