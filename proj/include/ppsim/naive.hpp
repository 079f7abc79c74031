#pragma once

#include "ppsim/rng.hpp"
#include "ppsim/simulate.hpp"

namespace ppsim {

/// Brute-force reference simulator: thinning under an adaptively refreshed
/// constant bound, with every intensity recomputed from the full point
/// history at every candidate. O(points^2); for cross-validating the real
/// simulators on small instances. Deliberately shares no scheduler machinery
/// with them.
SimulationResult simulate_naive(const HawkesNetwork& net,
                                double horizon,
                                RngStream& rng,
                                const SimOptions& options = {});

} // namespace ppsim
