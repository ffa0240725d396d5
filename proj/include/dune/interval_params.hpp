#pragma once

#include <cstddef>
#include <vector>

#include "dune/rng.hpp"

namespace dune {

/// Flat vector of concrete network parameters (one instantiation).
using ParameterVector = std::vector<double>;

/// Gradient with the same length and layout as the ParameterVector it
/// differentiates.
using GradientVector = std::vector<double>;

/// Paired endpoint arrays giving one uncertainty interval per network
/// parameter. Outside an update transaction lower[i] <= upper[i] holds for
/// every index; update_intervals may invert an interval transiently and
/// enforce_min_width repairs it.
struct IntervalParameterSet {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t size() const { return lower.size(); }
    double width(std::size_t i) const { return upper[i] - lower[i]; }
    double midpoint(std::size_t i) const { return 0.5 * (lower[i] + upper[i]); }

    /// Mean interval width across all parameters.
    double mean_width() const;

    /// Midpoints of all intervals as a ParameterVector.
    ParameterVector midpoints() const;

    /// True when lengths match, every entry is finite and no interval is
    /// inverted.
    bool invariants_hold() const;
};

/// Interval-method hyperparameters.
struct DuneHyperparams {
    double prior_width = 0.075;  // half-width of intervals at initialization
    double reg_strength = 0.1;   // quadratic width penalty coefficient
    double min_width = 0.15;     // hard floor on interval width
};

/// Builds intervals [theta[i] - prior_width, theta[i] + prior_width].
/// Throws ValidationError on non-finite input or negative width.
IntervalParameterSet init_intervals(const ParameterVector& theta,
                                    double prior_width);

/// Instantiation: draws values[i] uniformly from [lower[i], upper[i]].
/// Consumes exactly one draw per parameter in index order, including for
/// zero-width intervals (which yield their single point). The result is
/// always inside its interval elementwise.
ParameterVector sample(const IntervalParameterSet& params, Rng& rng);

/// Moves each interval in response to the shift of its sampled value.
/// With delta = theta_new[i] - theta_old[i] and
/// p = (theta_old[i] - lower[i]) / (upper[i] - lower[i]):
///   lower[i] += (1 - p) * delta,  upper[i] += p * delta.
/// A zero-width interval shifts both endpoints by delta, which recovers the
/// deterministic update rule. theta_old must lie inside each interval;
/// otherwise ValidationError. The result may transiently violate the width
/// floor; callers follow with enforce_min_width.
IntervalParameterSet update_intervals(IntervalParameterSet params,
                                      const ParameterVector& theta_old,
                                      const ParameterVector& theta_new);

/// One gradient-descent step on the width penalty sum_i beta * w_i^2, taken
/// directly on the endpoints: lower[i] += step_size * 2 * beta * w_i and
/// upper[i] -= the same amount. Midpoints are unchanged.
IntervalParameterSet apply_width_regularization(IntervalParameterSet params,
                                                double reg_strength,
                                                double step_size);

/// Re-centers every interval narrower than min_width to exactly min_width
/// around its (pre-clamp) midpoint. Repairs inverted intervals as a side
/// effect. Idempotent when all widths already satisfy the floor.
IntervalParameterSet enforce_min_width(IntervalParameterSet params,
                                       double min_width);

}  // namespace dune
