#include "dune/optimizer.hpp"

#include <cmath>

#include "dune/errors.hpp"

namespace dune {

Optimizer::Optimizer(OptimizerConfig config, std::size_t parameter_count)
    : config_(config), parameter_count_(parameter_count) {
    if (config_.learning_rate <= 0.0) {
        throw ValidationError("optimizer: learning rate must be positive");
    }
    if (config_.algorithm != Algorithm::Sgd) {
        first_moment_.assign(parameter_count_, 0.0);
    }
    if (config_.algorithm == Algorithm::Adam) {
        second_moment_.assign(parameter_count_, 0.0);
    }
}

ParameterVector Optimizer::step(const ParameterVector& theta,
                                const GradientVector& grad) {
    if (theta.size() != parameter_count_ || grad.size() != parameter_count_) {
        throw ValidationError("optimizer: parameter/gradient length mismatch");
    }
    ++step_count_;
    const double lr = config_.learning_rate;
    ParameterVector next(parameter_count_);

    switch (config_.algorithm) {
        case Algorithm::Sgd:
            for (std::size_t i = 0; i < parameter_count_; ++i) {
                next[i] = theta[i] - lr * grad[i];
            }
            break;
        case Algorithm::Momentum:
            for (std::size_t i = 0; i < parameter_count_; ++i) {
                first_moment_[i] =
                    config_.momentum * first_moment_[i] - lr * grad[i];
                next[i] = theta[i] + first_moment_[i];
            }
            break;
        case Algorithm::Adam: {
            const double b1 = config_.beta1;
            const double b2 = config_.beta2;
            const double m_corr =
                1.0 - std::pow(b1, static_cast<double>(step_count_));
            const double v_corr =
                1.0 - std::pow(b2, static_cast<double>(step_count_));
            for (std::size_t i = 0; i < parameter_count_; ++i) {
                first_moment_[i] =
                    b1 * first_moment_[i] + (1.0 - b1) * grad[i];
                second_moment_[i] =
                    b2 * second_moment_[i] + (1.0 - b2) * grad[i] * grad[i];
                double m_hat = first_moment_[i] / m_corr;
                double v_hat = second_moment_[i] / v_corr;
                next[i] =
                    theta[i] - lr * m_hat / (std::sqrt(v_hat) + config_.epsilon);
            }
            break;
        }
    }
    return next;
}

Algorithm parse_algorithm(const std::string& name) {
    if (name == "sgd") return Algorithm::Sgd;
    if (name == "momentum") return Algorithm::Momentum;
    if (name == "adam") return Algorithm::Adam;
    throw ConfigError("unknown optimizer '" + name + "'");
}

}  // namespace dune
