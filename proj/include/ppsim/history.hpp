#pragma once

#include "ppsim/hawkes.hpp"

#include <vector>

namespace ppsim {

/// Right-continuous step function given by sorted breakpoints, with O(log n)
/// evaluation and exact prefix integrals.
class StepFunction {
public:
    /// `jumps` are (time, delta) pairs, unsorted and possibly repeating
    /// times; the function starts at `base` at time `start`.
    StepFunction(double start, double base, std::vector<std::pair<double, double>> jumps,
                 bool clamp_nonnegative = false);

    double start() const noexcept { return times_.front(); }
    double value(double t) const;
    /// Integral from start() to t (t >= start()).
    double integral_to(double t) const;
    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<double>& levels() const noexcept { return levels_; }

private:
    std::vector<double> times_;
    std::vector<double> levels_;
    std::vector<double> cumulative_;
};

/// Conditional intensity of `node` rebuilt from scratch from a point history
/// via the Hawkes sum (spontaneous rate plus kernel contributions of every
/// listed parent point), independent of any simulator-internal scheduler.
/// `points_by_node` holds each node's point times sorted ascending.
StepFunction reconstruct_intensity(const std::vector<std::vector<double>>& points_by_node,
                                   const HawkesNetwork& net,
                                   int node);

} // namespace ppsim
