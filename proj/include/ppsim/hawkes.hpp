#pragma once

#include "ppsim/scheduler.hpp"

#include <map>
#include <span>
#include <utility>
#include <vector>

namespace ppsim {

using Matrix = std::vector<std::vector<double>>;

/// Piecewise-constant interaction function with finite support [0, S],
/// stored pre-encoded as jump events including the closing jump back to
/// level 0, so shift+union needs no special casing at support ends.
class InteractionKernel {
public:
    /// `steps` must start at time >= 0, keep every level >= 0 and return to
    /// level 0 at its last break (std::invalid_argument otherwise).
    explicit InteractionKernel(Scheduler steps);

    /// Constant level on [0, support): the usual benchmark kernel shape.
    static InteractionKernel constant(double level, double support);

    const Scheduler& steps() const noexcept { return steps_; }
    /// Exact integral over [0, inf): sum of level * segment width.
    double integral() const noexcept { return integral_; }
    /// End of the support (time of the closing jump).
    double support_end() const noexcept { return support_end_; }

private:
    Scheduler steps_;
    double integral_ = 0.0;
    double support_end_ = 0.0;
};

/// j -> i interaction map; keys are (source, target) node pairs, 0-indexed.
using KernelMap = std::map<std::pair<int, int>, InteractionKernel>;

/// Largest eigenvalue modulus of a nonnegative square matrix by power
/// iteration (Perron root). Converges to relative tolerance 1e-10;
/// throws NumericError after 1e5 iterations without convergence.
double spectral_radius(const Matrix& h);

/// Stationary mean intensity m = (I - H)^-1 nu. Throws StationarityError
/// when the spectral radius of H is >= 1 or the solve degenerates.
std::vector<double> mean_intensity(const Matrix& h, const std::vector<double>& nu);

struct BalanceResult {
    std::vector<double> nu;
    bool feasible = true;       // false => some nu_i < 0, graph should be discarded
    int first_negative = -1;
};

/// Spontaneous rates that make the network stationary at `target_m`:
/// nu = (I - H) * target_m. A negative component is a discard signal,
/// reported via the result rather than thrown.
BalanceResult balance_rates(const Matrix& h, const std::vector<double>& target_m);

/// Immutable parameterization of a linear multivariate Hawkes process with
/// piecewise-constant finite-support kernels. Construction computes the
/// integral matrix H and adjacency R and enforces spectral radius < 1.
class HawkesNetwork {
public:
    HawkesNetwork(std::vector<double> nu, KernelMap kernels);

    int node_count() const noexcept { return static_cast<int>(nu_.size()); }
    const std::vector<double>& nu() const noexcept { return nu_; }
    const Matrix& interaction_integrals() const noexcept { return h_; }
    const Matrix& adjacency() const noexcept { return r_; }
    double radius() const noexcept { return radius_; }

    /// Kernel of edge source -> target, or nullptr when absent.
    const InteractionKernel* kernel(int source, int target) const;
    /// Outgoing edges of `source` as (target, kernel) pairs, sorted by target.
    std::span<const std::pair<int, const InteractionKernel*>> outgoing(int source) const;

    /// Maximum kernel level over all edges (used for thinning bounds).
    double max_kernel_level() const noexcept { return max_level_; }
    /// Largest support end over all kernels.
    double max_support() const noexcept { return max_support_; }

private:
    std::vector<double> nu_;
    KernelMap kernels_;
    std::vector<std::vector<std::pair<int, const InteractionKernel*>>> outgoing_;
    Matrix h_;
    Matrix r_;
    double radius_ = 0.0;
    double max_level_ = 0.0;
    double max_support_ = 0.0;
};

/// The M per-node intensity schedulers L[i], each encoding lambda_i on
/// [anchor, +inf) in the absence of future points.
struct IntensityState {
    std::vector<Scheduler> lambda;
};

/// Fresh state at time t0: L[i] = [(t0, nu_i)].
IntensityState make_intensity_state(const HawkesNetwork& net, double t0 = 0.0);

/// Registers a point of `source` at time t for every node in `targets`:
/// piecewise-prunes the target's scheduler to t and, when the edge
/// source -> target exists, merges the kernel shifted to t.
/// Throws CausalityError when t precedes a target's current anchor.
void apply_point(IntensityState& state,
                 const HawkesNetwork& net,
                 int source,
                 double t,
                 std::span<const int> targets);

} // namespace ppsim
