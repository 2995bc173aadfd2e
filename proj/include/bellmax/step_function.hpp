#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "numeric_format.hpp"
#include "quadrature.hpp"

namespace bellmax {

/// Nonnegative piecewise-constant function on (0, 1]: value values()[i] holds
/// on the left-open cell (breakpoints()[i], breakpoints()[i+1]].  Prefix
/// integrals are cached so running averages cost one binary search.
class StepFunction {
  public:
    StepFunction(std::vector<double> breakpoints, std::vector<double> values)
        : breaks_(std::move(breakpoints)), values_(std::move(values)) {
        if (values_.empty() || breaks_.size() != values_.size() + 1)
            throw std::invalid_argument("StepFunction: need n >= 1 cells and n + 1 breakpoints");
        if (breaks_.front() != 0.0)
            throw std::invalid_argument("StepFunction: breakpoints must start at 0");
        if (std::fabs(breaks_.back() - 1.0) > 1e-12)
            throw std::invalid_argument("StepFunction: breakpoints must end at 1");
        breaks_.back() = 1.0;
        for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
            if (!(breaks_[i] < breaks_[i + 1]))
                throw std::invalid_argument("StepFunction: breakpoints must be strictly increasing");
        for (double v : values_)
            if (!(v >= 0.0)) throw std::invalid_argument("StepFunction: values must be nonnegative");
        prefix_.resize(breaks_.size());
        prefix_[0] = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i)
            prefix_[i + 1] = prefix_[i] + values_[i] * (breaks_[i + 1] - breaks_[i]);
    }

    static StepFunction constant(double v) { return StepFunction({0.0, 1.0}, {v}); }

    std::size_t cells() const { return values_.size(); }
    const std::vector<double>& breakpoints() const { return breaks_; }
    const std::vector<double>& values() const { return values_; }
    double mass() const { return prefix_.back(); }

    /// Index of the cell (breaks[i], breaks[i+1]] containing t in (0, 1].
    std::size_t cell_index(double t) const {
        auto it = std::lower_bound(breaks_.begin(), breaks_.end(), t);
        std::size_t j = static_cast<std::size_t>(it - breaks_.begin());
        return j == 0 ? 0 : j - 1;
    }

    double value_at(double t) const {
        if (!(t > 0.0 && t <= 1.0))
            throw std::domain_error("StepFunction::value_at: t must lie in (0, 1]");
        return values_[cell_index(t)];
    }

    /// Exact prefix integral over (0, t].
    double prefix_mass(double t) const {
        if (t <= 0.0) return 0.0;
        if (t > 1.0) throw std::domain_error("StepFunction::prefix_mass: t must be <= 1");
        std::size_t i = cell_index(t);
        return prefix_[i] + values_[i] * (t - breaks_[i]);
    }

    bool non_increasing(double slack = 0.0) const {
        for (std::size_t i = 0; i + 1 < values_.size(); ++i)
            if (values_[i + 1] > values_[i] + slack) return false;
        return true;
    }

    /// Lebesgue measure of the superlevel set {sf > level}.
    double measure_above(double level) const {
        double m = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (values_[i] > level) m += breaks_[i + 1] - breaks_[i];
        return m;
    }

  private:
    std::vector<double> breaks_;
    std::vector<double> values_;
    std::vector<double> prefix_;
};

/// Non-increasing, left-continuous rearrangement: the multiset of
/// (value, measure) pairs is preserved.  Ties keep their original cell order
/// and equal-value runs merge into one cell.
inline StepFunction rearrange_decreasing(const StepFunction& sf) {
    std::vector<std::size_t> order(sf.cells());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&sf](std::size_t a, std::size_t b) {
        return sf.values()[a] > sf.values()[b];
    });
    std::vector<double> breaks{0.0};
    std::vector<double> values;
    double pos = 0.0;
    for (std::size_t idx : order) {
        double w = sf.breakpoints()[idx + 1] - sf.breakpoints()[idx];
        double v = sf.values()[idx];
        pos += w;
        if (!values.empty() && values.back() == v) {
            breaks.back() = pos;
        } else {
            values.push_back(v);
            breaks.push_back(pos);
        }
    }
    breaks.back() = 1.0;
    return StepFunction(std::move(breaks), std::move(values));
}

/// Exact integral of sf^p over (a, b].
inline double lp_integral(const StepFunction& sf, double p, double a, double b) {
    if (!(p >= 1.0)) throw std::domain_error("lp_integral: p must be >= 1");
    if (!(a >= 0.0) || !(b <= 1.0) || a > b)
        throw std::domain_error("lp_integral: need 0 <= a <= b <= 1");
    double s = 0.0;
    for (std::size_t i = 0; i < sf.cells(); ++i) {
        double lo = std::max(a, sf.breakpoints()[i]);
        double hi = std::min(b, sf.breakpoints()[i + 1]);
        if (hi > lo) s += std::pow(sf.values()[i], p) * (hi - lo);
    }
    return s;
}

/// (1/t) int_0^t sf, exact via the cached prefix integrals.
inline double hardy_average(const StepFunction& sf, double t) {
    if (!(t > 0.0)) throw std::domain_error("hardy_average: t must be > 0");
    if (t > 1.0) throw std::domain_error("hardy_average: t must be <= 1");
    return sf.prefix_mass(t) / t;
}

/// int_a^b ((1/t) int_0^t sf)^p dt.  On the first cell the running average is
/// the constant v_1, handled in closed form; later cells have the smooth
/// integrand ((C_i + v_i (t - t_i))/t)^p and go through the adaptive Gauss
/// rule with the tolerance split per cell.
inline double hardy_lp_integral(const StepFunction& sf, double p, double a, double b,
                                const QuadratureConfig& q = {}) {
    if (!(p >= 1.0)) throw std::domain_error("hardy_lp_integral: p must be >= 1");
    if (!(a >= 0.0) || !(b <= 1.0) || !(a < b))
        throw std::domain_error("hardy_lp_integral: need 0 <= a < b <= 1");
    q.validate();
    double total = 0.0;
    for (std::size_t i = 0; i < sf.cells(); ++i) {
        double lo = std::max(a, sf.breakpoints()[i]);
        double hi = std::min(b, sf.breakpoints()[i + 1]);
        if (!(hi > lo)) continue;
        double v = sf.values()[i];
        if (i == 0) {
            total += std::pow(v, p) * (hi - lo);
            continue;
        }
        double t0 = sf.breakpoints()[i];
        double c0 = sf.prefix_mass(t0);
        auto integrand = [v, t0, c0, p](double t) { return std::pow((c0 + v * (t - t0)) / t, p); };
        double tol = q.abs_tol * std::max((hi - lo) / (b - a), 1e-3);
        total += detail::adaptive_gauss(integrand, lo, hi, tol, q);
    }
    return total;
}

struct DeltaStats {
    double delta_k = 1.0;
    double delta_prime_k = 1.0;
};

/// L^p ratios of the running average to the function, separately on (0, k]
/// and (k, 1].  For a non-increasing profile delta_k lies in [1, p/(p-1)) and
/// equals 1 exactly when the profile is constant on (0, k].
inline DeltaStats delta_stat(const StepFunction& sf, double p, double k,
                             const QuadratureConfig& q = {}) {
    if (!(k > 0.0 && k < 1.0)) throw std::domain_error("delta_stat: k must lie in (0, 1)");
    if (!sf.non_increasing(1e-12))
        throw std::invalid_argument("delta_stat: profile must be non-increasing");
    double head = lp_integral(sf, p, 0.0, k);
    double tail = lp_integral(sf, p, k, 1.0);
    if (!(head > 0.0) || !(tail > 0.0))
        throw std::domain_error("delta_stat: a one-sided p-integral vanishes");
    DeltaStats d;
    d.delta_k = std::pow(hardy_lp_integral(sf, p, 0.0, k, q) / head, 1.0 / p);
    d.delta_prime_k = std::pow(hardy_lp_integral(sf, p, k, 1.0, q) / tail, 1.0 / p);
    return d;
}

/// CSV rows "t_start,t_end,value" with a header line.
inline void write_step_csv(const StepFunction& sf, std::ostream& os) {
    os << "t_start,t_end,value\n";
    for (std::size_t i = 0; i < sf.cells(); ++i)
        os << fmt17(sf.breakpoints()[i]) << ',' << fmt17(sf.breakpoints()[i + 1]) << ','
           << fmt17(sf.values()[i]) << '\n';
}

inline StepFunction read_step_csv(std::istream& is) {
    std::vector<double> breaks{0.0};
    std::vector<double> values;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double t0, t1, v;
        if (!(row >> t0 >> t1 >> v)) continue;  // header or malformed row
        if (std::fabs(t0 - breaks.back()) > 1e-12)
            throw std::invalid_argument("read_step_csv: cells must be contiguous from 0");
        breaks.push_back(t1);
        values.push_back(v);
    }
    if (values.empty()) throw std::invalid_argument("read_step_csv: no data rows");
    return StepFunction(std::move(breaks), std::move(values));
}

}  // namespace bellmax
