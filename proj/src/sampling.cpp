#include "ppsim/sampling.hpp"

#include "ppsim/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace ppsim {

namespace {

double checked_level(double level) {
    if (level < -kIntensityTolerance) {
        throw CorruptedIntensityError("negative intensity level: " + std::to_string(level));
    }
    return level < 0.0 ? 0.0 : level;
}

} // namespace

NextPoint invert_cumulative(const Scheduler& q, double target) {
    if (q.empty()) {
        throw std::invalid_argument("get_t_next on empty intensity scheduler");
    }
    double integral = 0.0;
    double level = 0.0;
    double seg_start = 0.0;
    bool first = true;
    for (const auto& [t, jump] : q) {
        if (!first) {
            if (integral >= target) {
                return seg_start; // hit exactly on a break
            }
            const double seg = (t - seg_start) * level;
            if (level > 0.0 && integral + seg >= target) {
                return seg_start + (target - integral) / level;
            }
            integral += seg;
        }
        level = checked_level(level + jump);
        seg_start = t;
        first = false;
    }
    if (integral >= target) {
        return seg_start;
    }
    if (level > 0.0) {
        return seg_start + (target - integral) / level; // last level extends to +inf
    }
    return std::nullopt;
}

NextPoint get_t_next(const Scheduler& q, RngStream& rng) {
    return invert_cumulative(q, -std::log(rng.uniform()));
}

double thin_next(const std::function<double(double)>& lambda,
                 double lambda_star,
                 double t0,
                 RngStream& rng,
                 std::uint64_t max_rejections) {
    if (!(lambda_star > 0.0) || !std::isfinite(lambda_star)) {
        throw std::invalid_argument("thin_next requires a positive finite dominating rate");
    }
    double t = t0;
    for (std::uint64_t iter = 0; iter <= max_rejections; ++iter) {
        t += -std::log(rng.uniform()) / lambda_star;
        const double lam = lambda(t);
        if (lam > lambda_star * (1.0 + 1e-12)) {
            throw DominationError("lambda exceeds the dominating rate at t=" + std::to_string(t));
        }
        if (rng.uniform() <= lam / lambda_star) {
            return t;
        }
    }
    throw DominationError("thinning rejection cap exceeded");
}

} // namespace ppsim
