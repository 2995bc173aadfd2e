#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "extremizer.hpp"
#include "step_function.hpp"

namespace bellmax {

inline constexpr int kMaxDyadicLevel = 24;

/// Function constant on the 2^m level-m dyadic cells [j 2^-m, (j+1) 2^-m) of
/// [0, 1).  Values are dense; prefix sums make every node average O(1).
class DyadicStepFunction {
  public:
    DyadicStepFunction(int level, std::vector<double> values)
        : level_(level), values_(std::move(values)) {
        if (level < 0 || level > kMaxDyadicLevel)
            throw std::invalid_argument("DyadicStepFunction: level must lie in [0, 24]");
        if (values_.size() != (std::size_t{1} << level))
            throw std::invalid_argument("DyadicStepFunction: need exactly 2^level values");
        for (double v : values_)
            if (!(v >= 0.0))
                throw std::invalid_argument("DyadicStepFunction: values must be nonnegative");
        build_prefix();
    }

    static DyadicStepFunction constant(int level, double v) {
        return DyadicStepFunction(level, std::vector<double>(std::size_t{1} << level, v));
    }

    int level() const { return level_; }
    std::size_t cells() const { return values_.size(); }
    double cell_measure() const { return std::ldexp(1.0, -level_); }
    const std::vector<double>& values() const { return values_; }

    double mass() const { return prefix_.back() * cell_measure(); }

    double p_moment(double p) const {
        double s = 0.0;
        for (double v : values_) s += std::pow(v, p);
        return s * cell_measure();
    }

    /// Average over the tree node (node_level, index) with node_level <= level().
    double node_average(int node_level, std::size_t index) const {
        if (node_level < 0 || node_level > level_)
            throw std::invalid_argument("node_average: node level out of range");
        std::size_t span = std::size_t{1} << (level_ - node_level);
        std::size_t lo = index * span;
        return (prefix_[lo + span] - prefix_[lo]) / static_cast<double>(span);
    }

    /// Sum of cell values over [lo, hi), scaled by the cell measure.
    double range_integral(std::size_t lo, std::size_t hi) const {
        return (prefix_[hi] - prefix_[lo]) * cell_measure();
    }

    DyadicStepFunction refined_to(int new_level) const {
        if (new_level < level_ || new_level > kMaxDyadicLevel)
            throw std::invalid_argument("refined_to: level must lie in [level, 24]");
        if (new_level == level_) return *this;
        std::size_t rep = std::size_t{1} << (new_level - level_);
        std::vector<double> vals;
        vals.reserve(values_.size() * rep);
        for (double v : values_) vals.insert(vals.end(), rep, v);
        return DyadicStepFunction(new_level, std::move(vals));
    }

  private:
    void build_prefix() {
        prefix_.resize(values_.size() + 1);
        prefix_[0] = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i) prefix_[i + 1] = prefix_[i] + values_[i];
    }

    int level_;
    std::vector<double> values_;
    std::vector<double> prefix_;
};

/// Exact maximal function over all dyadic subintervals of [0, 1): on each
/// level-m cell it equals the largest ancestor average (averages over strict
/// descendants equal the cell value and never exceed it).  Node sums are
/// built bottom-up pairwise, so a leaf average is exactly the cell value and
/// constant functions come back bit-identical; a top-down pass then carries
/// the running maximum.
inline DyadicStepFunction maximal_operator(const DyadicStepFunction& dsf) {
    const int m = dsf.level();
    std::vector<std::vector<double>> sums(m + 1);
    sums[m] = dsf.values();
    for (int j = m - 1; j >= 0; --j) {
        sums[j].resize(std::size_t{1} << j);
        for (std::size_t i = 0; i < sums[j].size(); ++i)
            sums[j][i] = sums[j + 1][2 * i] + sums[j + 1][2 * i + 1];
    }
    std::vector<double> carry{std::ldexp(sums[0][0], -m)};
    for (int j = 1; j <= m; ++j) {
        std::vector<double> next(std::size_t{1} << j);
        for (std::size_t i = 0; i < next.size(); ++i)
            next[i] = std::max(carry[i / 2], std::ldexp(sums[j][i], j - m));
        carry.swap(next);
    }
    return DyadicStepFunction(m, std::move(carry));
}

/// Non-increasing rearrangement as a StepFunction on (0, 1]; cells have the
/// uniform measure 2^-m and equal-value runs merge.
inline StepFunction rearrangement(const DyadicStepFunction& dsf) {
    std::vector<double> sorted = dsf.values();
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    const double cm = dsf.cell_measure();
    std::vector<double> breaks{0.0};
    std::vector<double> values;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        double pos = (i + 1 == sorted.size()) ? 1.0 : static_cast<double>(i + 1) * cm;
        if (!values.empty() && values.back() == sorted[i]) {
            breaks.back() = pos;
        } else {
            values.push_back(sorted[i]);
            breaks.push_back(pos);
        }
    }
    return StepFunction(std::move(breaks), std::move(values));
}

/// Union of level-m dyadic cells, one flag per cell.
struct DyadicSet {
    int level = 0;
    std::vector<std::uint8_t> mask;

    static DyadicSet full(int level) {
        DyadicSet s;
        s.level = level;
        s.mask.assign(std::size_t{1} << level, 1);
        return s;
    }

    /// The first `count` cells: the interval [0, count 2^-level).
    static DyadicSet prefix_cells(int level, std::size_t count) {
        DyadicSet s;
        s.level = level;
        s.mask.assign(std::size_t{1} << level, 0);
        if (count > s.mask.size())
            throw std::invalid_argument("DyadicSet::prefix_cells: count exceeds cell count");
        std::fill_n(s.mask.begin(), count, std::uint8_t{1});
        return s;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto b : mask) c += (b != 0);
        return c;
    }

    double measure() const { return static_cast<double>(count()) * std::ldexp(1.0, -level); }

    DyadicSet refined_to(int new_level) const {
        if (new_level < level) throw std::invalid_argument("DyadicSet::refined_to: level too small");
        if (new_level == level) return *this;
        std::size_t rep = std::size_t{1} << (new_level - level);
        DyadicSet s;
        s.level = new_level;
        s.mask.reserve(mask.size() * rep);
        for (auto b : mask) s.mask.insert(s.mask.end(), rep, b);
        return s;
    }

    /// Hex encoding of the cell mask, cell 0 in the top bit of the first digit.
    std::string hex_mask() const {
        static const char* digits = "0123456789abcdef";
        std::string out;
        int nibble = 0, filled = 0;
        for (std::size_t i = 0; i < mask.size(); ++i) {
            nibble = (nibble << 1) | (mask[i] ? 1 : 0);
            if (++filled == 4) {
                out.push_back(digits[nibble]);
                nibble = 0;
                filled = 0;
            }
        }
        if (filled > 0) out.push_back(digits[nibble << (4 - filled)]);
        return out;
    }
};

/// Exact integral of dsf^p over the set (levels are aligned by refinement).
inline double integral_over(const DyadicStepFunction& dsf, const DyadicSet& set, double p) {
    int target = std::max(dsf.level(), set.level);
    const DyadicStepFunction fn = dsf.level() == target ? dsf : dsf.refined_to(target);
    const DyadicSet s = set.level == target ? set : set.refined_to(target);
    double sum = 0.0;
    for (std::size_t i = 0; i < fn.cells(); ++i)
        if (s.mask[i]) sum += std::pow(fn.values()[i], p);
    return sum * fn.cell_measure();
}

/// Slack of the weak (1,1) bound at threshold lambda:
/// (1/lambda) int_{{M phi > lambda}} phi  minus  |{M phi > lambda}|.
inline double weak_type_margin(const DyadicStepFunction& dsf, const DyadicStepFunction& maxfn,
                               double lambda) {
    if (!(lambda > 0.0)) throw std::domain_error("weak_type_margin: lambda must be > 0");
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < dsf.cells(); ++i) {
        if (maxfn.values()[i] > lambda) {
            sum += dsf.values()[i];
            ++count;
        }
    }
    double cm = dsf.cell_measure();
    return (sum * cm) / lambda - static_cast<double>(count) * cm;
}

inline double weak_type_margin(const DyadicStepFunction& dsf, double lambda) {
    return weak_type_margin(dsf, maximal_operator(dsf), lambda);
}

/// Level-m discretization by exact cell averages of the profile, so the mass
/// is preserved exactly and the p-th moment can only drop.
inline DyadicStepFunction discretize_extremizer(const ExtremizerProfile& prof, int level) {
    if (level < 0 || level > kMaxDyadicLevel)
        throw std::invalid_argument("discretize_extremizer: level must lie in [0, 24]");
    std::size_t n = std::size_t{1} << level;
    double cm = std::ldexp(1.0, -level);
    std::vector<double> vals(n);
    double prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double next = extremizer_prefix_mass(prof, static_cast<double>(i + 1) * cm);
        vals[i] = (next - prev) / cm;
        prev = next;
    }
    return DyadicStepFunction(level, std::move(vals));
}

/// CSV rows "cell_index,value" with a header line.
inline void write_dyadic_csv(const DyadicStepFunction& dsf, std::ostream& os) {
    os << "cell_index,value\n";
    for (std::size_t i = 0; i < dsf.cells(); ++i) os << i << ',' << fmt17(dsf.values()[i]) << '\n';
}

}  // namespace bellmax
