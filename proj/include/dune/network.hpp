#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dune/interval_params.hpp"
#include "dune/matrix.hpp"

namespace dune {

/// Fully connected feed-forward classifier: ReLU hidden layers, softmax
/// output. Parameter layout is fixed: per layer, weights row-major
/// (fan_out x fan_in) followed by fan_out biases, layers concatenated in
/// order.
struct NetworkTopology {
    std::vector<std::size_t> layer_sizes;  // input, hidden..., output

    std::size_t parameter_count() const;
    std::size_t num_classes() const { return layer_sizes.back(); }
    std::size_t input_dim() const { return layer_sizes.front(); }

    /// Throws ValidationError unless there are >= 2 layers, all positive.
    void validate() const;
};

/// Minibatch: row-major inputs plus one class label per row.
struct Batch {
    Matrix inputs;
    std::vector<int> labels;
};

struct BackwardResult {
    double loss = 0.0;
    GradientVector grad;
};

/// Pre-softmax logits for each input row.
Matrix forward_logits(const NetworkTopology& topology,
                      const ParameterVector& theta, const Matrix& inputs);

/// Class probabilities for each input row; rows are nonnegative and sum
/// to 1. Softmax subtracts the row max before exponentiating.
Matrix forward(const NetworkTopology& topology, const ParameterVector& theta,
               const Matrix& inputs);

/// Mean over the batch of -log p[label], with probabilities clamped at
/// 1e-12 before the log.
double loss(const Matrix& probabilities, std::span<const int> labels);

/// Loss and its exact gradient with respect to theta at the given batch.
BackwardResult backward(const NetworkTopology& topology,
                        const ParameterVector& theta, const Batch& batch);

/// Row argmax with ties broken toward the smallest index.
std::vector<int> argmax_rows(const Matrix& probabilities);

/// Predicted class per input row (argmax of forward probabilities).
std::vector<int> predict(const NetworkTopology& topology,
                         const ParameterVector& theta, const Matrix& inputs);

}  // namespace dune
