#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dune/interval_params.hpp"

namespace dune {

enum class Algorithm { Sgd, Momentum, Adam };

struct OptimizerConfig {
    Algorithm algorithm = Algorithm::Adam;
    double learning_rate = 1e-3;
    double momentum = 0.9;  // momentum coefficient (Momentum only)
    double beta1 = 0.9;     // Adam first-moment decay
    double beta2 = 0.999;   // Adam second-moment decay
    double epsilon = 1e-8;  // Adam denominator offset
};

/// First-order optimizer over a flat parameter vector. State (moment
/// accumulators, step counter) attaches to parameter indices and persists
/// across steps regardless of where each step's values were sampled from.
class Optimizer {
public:
    Optimizer(OptimizerConfig config, std::size_t parameter_count);

    /// One update: SGD theta - lr*g; Momentum v <- mu*v - lr*g, theta + v;
    /// Adam bias-corrected moment update with epsilon outside the sqrt's
    /// numerator: theta - lr * m_hat / (sqrt(v_hat) + eps).
    /// Throws ValidationError on length mismatch.
    ParameterVector step(const ParameterVector& theta,
                         const GradientVector& grad);

    const OptimizerConfig& config() const { return config_; }
    std::int64_t step_count() const { return step_count_; }

private:
    OptimizerConfig config_;
    std::size_t parameter_count_;
    std::int64_t step_count_ = 0;
    std::vector<double> first_moment_;   // Momentum velocity or Adam m
    std::vector<double> second_moment_;  // Adam v
};

Algorithm parse_algorithm(const std::string& name);

}  // namespace dune
