#include "ppsim/history.hpp"

#include <algorithm>
#include <stdexcept>

namespace ppsim {

StepFunction::StepFunction(double start, double base,
                           std::vector<std::pair<double, double>> jumps,
                           bool clamp_nonnegative) {
    std::sort(jumps.begin(), jumps.end());
    times_.reserve(jumps.size() + 1);
    levels_.reserve(jumps.size() + 1);
    times_.push_back(start);
    levels_.push_back(base);
    for (std::size_t k = 0; k < jumps.size();) {
        const double t = jumps[k].first;
        double delta = 0.0;
        while (k < jumps.size() && jumps[k].first == t) {
            delta += jumps[k].second;
            ++k;
        }
        if (t < start) {
            throw std::invalid_argument("step-function jump before the domain start");
        }
        double level = levels_.back() + delta;
        if (clamp_nonnegative && level < 0.0) {
            level = 0.0;
        }
        if (t == times_.back()) {
            levels_.back() = level;
        } else {
            times_.push_back(t);
            levels_.push_back(level);
        }
    }
    cumulative_.resize(times_.size(), 0.0);
    for (std::size_t k = 1; k < times_.size(); ++k) {
        cumulative_[k] = cumulative_[k - 1] + levels_[k - 1] * (times_[k] - times_[k - 1]);
    }
}

double StepFunction::value(double t) const {
    if (t < times_.front()) {
        throw std::invalid_argument("step-function query before the domain start");
    }
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    return levels_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

double StepFunction::integral_to(double t) const {
    if (t < times_.front()) {
        throw std::invalid_argument("step-function integral before the domain start");
    }
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const auto k = static_cast<std::size_t>(it - times_.begin()) - 1;
    return cumulative_[k] + levels_[k] * (t - times_[k]);
}

StepFunction reconstruct_intensity(const std::vector<std::vector<double>>& points_by_node,
                                   const HawkesNetwork& net,
                                   int node) {
    std::vector<std::pair<double, double>> jumps;
    for (int j = 0; j < net.node_count(); ++j) {
        const InteractionKernel* kernel = net.kernel(j, node);
        if (kernel == nullptr) {
            continue;
        }
        for (double point : points_by_node.at(static_cast<std::size_t>(j))) {
            for (const auto& [delay, jump] : kernel->steps()) {
                jumps.emplace_back(point + delay, jump);
            }
        }
    }
    return StepFunction(0.0, net.nu().at(static_cast<std::size_t>(node)), std::move(jumps),
                        /*clamp_nonnegative=*/true);
}

} // namespace ppsim
