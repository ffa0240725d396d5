#include "dune/interval_params.hpp"

#include <algorithm>
#include <cmath>

#include "dune/errors.hpp"

namespace dune {

double IntervalParameterSet::mean_width() const {
    if (lower.empty()) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < lower.size(); ++i) total += upper[i] - lower[i];
    return total / static_cast<double>(lower.size());
}

ParameterVector IntervalParameterSet::midpoints() const {
    ParameterVector mids(lower.size());
    for (std::size_t i = 0; i < lower.size(); ++i) {
        mids[i] = 0.5 * (lower[i] + upper[i]);
    }
    return mids;
}

bool IntervalParameterSet::invariants_hold() const {
    if (lower.size() != upper.size()) return false;
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (!std::isfinite(lower[i]) || !std::isfinite(upper[i])) return false;
        if (lower[i] > upper[i]) return false;
    }
    return true;
}

IntervalParameterSet init_intervals(const ParameterVector& theta,
                                    double prior_width) {
    if (!std::isfinite(prior_width) || prior_width < 0.0) {
        throw ValidationError("init_intervals: prior width must be finite and "
                              "nonnegative");
    }
    IntervalParameterSet set;
    set.lower.resize(theta.size());
    set.upper.resize(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        if (!std::isfinite(theta[i])) {
            throw ValidationError("init_intervals: non-finite parameter at "
                                  "index " + std::to_string(i));
        }
        set.lower[i] = theta[i] - prior_width;
        set.upper[i] = theta[i] + prior_width;
    }
    return set;
}

ParameterVector sample(const IntervalParameterSet& params, Rng& rng) {
    ParameterVector theta(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        double u = rng.uniform();  // one draw per index, always
        double width = params.upper[i] - params.lower[i];
        theta[i] = width == 0.0
                       ? params.lower[i]
                       : std::clamp(params.lower[i] + u * width,
                                    params.lower[i], params.upper[i]);
    }
    return theta;
}

IntervalParameterSet update_intervals(IntervalParameterSet params,
                                      const ParameterVector& theta_old,
                                      const ParameterVector& theta_new) {
    if (theta_old.size() != params.size() ||
        theta_new.size() != params.size()) {
        throw ValidationError("update_intervals: length mismatch");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        double delta = theta_new[i] - theta_old[i];
        double width = params.upper[i] - params.lower[i];
        if (width == 0.0) {
            params.lower[i] += delta;
            params.upper[i] += delta;
            continue;
        }
        if (theta_old[i] < params.lower[i] || theta_old[i] > params.upper[i]) {
            throw ValidationError(
                "update_intervals: sampled value outside its interval at "
                "index " + std::to_string(i));
        }
        double p = (theta_old[i] - params.lower[i]) / width;
        params.lower[i] += (1.0 - p) * delta;
        params.upper[i] += p * delta;
    }
    return params;
}

IntervalParameterSet apply_width_regularization(IntervalParameterSet params,
                                                double reg_strength,
                                                double step_size) {
    if (reg_strength == 0.0) return params;
    for (std::size_t i = 0; i < params.size(); ++i) {
        double shrink =
            step_size * 2.0 * reg_strength * (params.upper[i] - params.lower[i]);
        params.lower[i] += shrink;
        params.upper[i] -= shrink;
    }
    return params;
}

IntervalParameterSet enforce_min_width(IntervalParameterSet params,
                                       double min_width) {
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params.upper[i] - params.lower[i] < min_width) {
            // Midpoint computed once from the incoming endpoints.
            double mid = 0.5 * (params.lower[i] + params.upper[i]);
            params.lower[i] = mid - min_width / 2.0;
            params.upper[i] = mid + min_width / 2.0;
        }
    }
    return params;
}

}  // namespace dune
