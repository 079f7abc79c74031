#pragma once

#include "ppsim/rng.hpp"
#include "ppsim/scheduler.hpp"

#include <functional>
#include <optional>

namespace ppsim {

/// Next point of a point process, or nullopt when no further point can occur
/// ("never"). Kept as a distinguished value rather than +inf so comparisons
/// stay total.
using NextPoint = std::optional<double>;

/// Levels closer to zero than this are treated as exactly zero; anything
/// below -kIntensityTolerance is a corrupted intensity.
inline constexpr double kIntensityTolerance = 1e-12;

/// Deterministic core of the transformation method: the smallest t with
/// integral of the encoded intensity from q.front().time to t equal to
/// `target`, walking segment by segment and extrapolating on the final
/// level. Returns nullopt when the final level is zero and the accumulated
/// integral never reaches the target.
/// Throws std::invalid_argument on an empty scheduler and
/// CorruptedIntensityError on a level below -kIntensityTolerance.
NextPoint invert_cumulative(const Scheduler& q, double target);

/// Transformation method for a piecewise-constant intensity encoded in `q`
/// (first event = absolute level at the current time, later events = jumps):
/// invert_cumulative at target -log(V), V uniform.
/// Consumes exactly one uniform per call.
NextPoint get_t_next(const Scheduler& q, RngStream& rng);

/// Ogata-style thinning with a constant dominating rate: draws candidates at
/// rate lambda_star from t0 and accepts each with probability
/// lambda(candidate)/lambda_star. Returns the first accepted time.
/// Throws DominationError when lambda exceeds lambda_star at a candidate or
/// when `max_rejections` candidates were all rejected.
double thin_next(const std::function<double(double)>& lambda,
                 double lambda_star,
                 double t0,
                 RngStream& rng,
                 std::uint64_t max_rejections = 1000000);

} // namespace ppsim
