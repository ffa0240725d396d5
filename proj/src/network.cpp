#include "dune/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dune/errors.hpp"

namespace dune {

namespace {

constexpr double kLogClamp = 1e-12;

void check_dimensions(const NetworkTopology& topology,
                      const ParameterVector& theta, const Matrix& inputs) {
    topology.validate();
    if (theta.size() != topology.parameter_count()) {
        throw ValidationError("network: parameter vector has " +
                              std::to_string(theta.size()) + " entries, " +
                              "topology needs " +
                              std::to_string(topology.parameter_count()));
    }
    if (inputs.cols != topology.input_dim()) {
        throw ValidationError("network: input width " +
                              std::to_string(inputs.cols) +
                              " does not match input layer " +
                              std::to_string(topology.input_dim()));
    }
}

void softmax_rows_in_place(Matrix& m) {
    for (std::size_t r = 0; r < m.rows; ++r) {
        auto row = m.row(r);
        double top = *std::max_element(row.begin(), row.end());
        double sum = 0.0;
        for (auto& v : row) {
            v = std::exp(v - top);
            sum += v;
        }
        for (auto& v : row) v /= sum;
    }
}

// z = activations * W^T + bias for one layer; W is (fan_out x fan_in)
// row-major at `weights`, so each output is a dot product of two contiguous
// ranges.
Matrix affine(const Matrix& activations, const double* weights,
              const double* biases, std::size_t fan_in, std::size_t fan_out) {
    Matrix out(activations.rows, fan_out);
    for (std::size_t r = 0; r < activations.rows; ++r) {
        const double* a = activations.data.data() + r * fan_in;
        double* o = out.data.data() + r * fan_out;
        for (std::size_t j = 0; j < fan_out; ++j) {
            const double* w = weights + j * fan_in;
            double z = biases[j];
            for (std::size_t k = 0; k < fan_in; ++k) z += w[k] * a[k];
            o[j] = z;
        }
    }
    return out;
}

}  // namespace

std::size_t NetworkTopology::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        n += (layer_sizes[l] + 1) * layer_sizes[l + 1];
    }
    return n;
}

void NetworkTopology::validate() const {
    if (layer_sizes.size() < 2) {
        throw ValidationError("topology: need at least input and output "
                              "layers");
    }
    for (std::size_t s : layer_sizes) {
        if (s == 0) throw ValidationError("topology: zero-size layer");
    }
}

Matrix forward_logits(const NetworkTopology& topology,
                      const ParameterVector& theta, const Matrix& inputs) {
    check_dimensions(topology, theta, inputs);
    const auto& sizes = topology.layer_sizes;
    Matrix act = inputs;
    std::size_t offset = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        std::size_t fan_in = sizes[l];
        std::size_t fan_out = sizes[l + 1];
        const double* weights = theta.data() + offset;
        const double* biases = weights + fan_in * fan_out;
        act = affine(act, weights, biases, fan_in, fan_out);
        offset += (fan_in + 1) * fan_out;
        if (l + 2 < sizes.size()) {
            for (auto& v : act.data) v = v > 0.0 ? v : 0.0;
        }
    }
    return act;
}

Matrix forward(const NetworkTopology& topology, const ParameterVector& theta,
               const Matrix& inputs) {
    Matrix probs = forward_logits(topology, theta, inputs);
    softmax_rows_in_place(probs);
    return probs;
}

static void check_labels(std::span<const int> labels, std::size_t num_classes,
                         std::size_t rows) {
    if (labels.size() != rows) {
        throw ValidationError("network: one label per row required");
    }
    for (int label : labels) {
        if (label < 0 || static_cast<std::size_t>(label) >= num_classes) {
            throw ValidationError("network: label " + std::to_string(label) +
                                  " outside [0," +
                                  std::to_string(num_classes) + ")");
        }
    }
}

double loss(const Matrix& probabilities, std::span<const int> labels) {
    check_labels(labels, probabilities.cols, probabilities.rows);
    double total = 0.0;
    for (std::size_t r = 0; r < probabilities.rows; ++r) {
        double p = probabilities.at(r, static_cast<std::size_t>(labels[r]));
        total -= std::log(std::max(p, kLogClamp));
    }
    return total / static_cast<double>(probabilities.rows);
}

BackwardResult backward(const NetworkTopology& topology,
                        const ParameterVector& theta, const Batch& batch) {
    check_dimensions(topology, theta, batch.inputs);
    check_labels(batch.labels, topology.num_classes(), batch.inputs.rows);
    const auto& sizes = topology.layer_sizes;
    const std::size_t layers = sizes.size() - 1;
    const std::size_t rows = batch.inputs.rows;

    // Forward pass keeping post-activation values of every layer.
    std::vector<Matrix> activations;
    activations.reserve(layers + 1);
    activations.push_back(batch.inputs);
    {
        std::size_t offset = 0;
        for (std::size_t l = 0; l < layers; ++l) {
            std::size_t fan_in = sizes[l];
            std::size_t fan_out = sizes[l + 1];
            const double* weights = theta.data() + offset;
            const double* biases = weights + fan_in * fan_out;
            Matrix z = affine(activations.back(), weights, biases, fan_in,
                              fan_out);
            offset += (fan_in + 1) * fan_out;
            if (l + 1 < layers) {
                for (auto& v : z.data) v = v > 0.0 ? v : 0.0;
            }
            activations.push_back(std::move(z));
        }
    }

    Matrix probs = activations.back();
    softmax_rows_in_place(probs);

    double batch_loss = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        double p = probs.at(r, static_cast<std::size_t>(batch.labels[r]));
        batch_loss -= std::log(std::max(p, kLogClamp));
    }
    batch_loss /= static_cast<double>(rows);

    // delta starts as d(loss)/d(logits) = (p - onehot) / batch.
    Matrix delta = std::move(probs);
    for (std::size_t r = 0; r < rows; ++r) {
        delta.at(r, static_cast<std::size_t>(batch.labels[r])) -= 1.0;
    }
    for (auto& v : delta.data) v /= static_cast<double>(rows);

    BackwardResult result;
    result.loss = batch_loss;
    result.grad.assign(theta.size(), 0.0);

    // Layer offsets for walking backward.
    std::vector<std::size_t> offsets(layers);
    {
        std::size_t offset = 0;
        for (std::size_t l = 0; l < layers; ++l) {
            offsets[l] = offset;
            offset += (sizes[l] + 1) * sizes[l + 1];
        }
    }

    for (std::size_t l = layers; l-- > 0;) {
        std::size_t fan_in = sizes[l];
        std::size_t fan_out = sizes[l + 1];
        const Matrix& below = activations[l];
        double* grad_w = result.grad.data() + offsets[l];
        double* grad_b = grad_w + fan_in * fan_out;

        for (std::size_t r = 0; r < rows; ++r) {
            const double* d = delta.data.data() + r * fan_out;
            const double* a = below.data.data() + r * fan_in;
            for (std::size_t j = 0; j < fan_out; ++j) {
                double dj = d[j];
                if (dj == 0.0) continue;
                double* gw = grad_w + j * fan_in;
                for (std::size_t k = 0; k < fan_in; ++k) gw[k] += dj * a[k];
                grad_b[j] += dj;
            }
        }

        if (l == 0) break;
        const double* weights = theta.data() + offsets[l];
        Matrix next_delta(rows, fan_in);
        for (std::size_t r = 0; r < rows; ++r) {
            const double* d = delta.data.data() + r * fan_out;
            double* nd = next_delta.data.data() + r * fan_in;
            for (std::size_t j = 0; j < fan_out; ++j) {
                double dj = d[j];
                if (dj == 0.0) continue;
                const double* w = weights + j * fan_in;
                for (std::size_t k = 0; k < fan_in; ++k) nd[k] += dj * w[k];
            }
            // ReLU gate of the layer below.
            const double* a = below.data.data() + r * fan_in;
            for (std::size_t k = 0; k < fan_in; ++k) {
                if (a[k] <= 0.0) nd[k] = 0.0;
            }
        }
        delta = std::move(next_delta);
    }
    return result;
}

std::vector<int> argmax_rows(const Matrix& probabilities) {
    std::vector<int> labels(probabilities.rows);
    for (std::size_t r = 0; r < probabilities.rows; ++r) {
        auto row = probabilities.row(r);
        std::size_t best = 0;
        for (std::size_t c = 1; c < row.size(); ++c) {
            if (row[c] > row[best]) best = c;  // ties keep the smaller index
        }
        labels[r] = static_cast<int>(best);
    }
    return labels;
}

std::vector<int> predict(const NetworkTopology& topology,
                         const ParameterVector& theta, const Matrix& inputs) {
    return argmax_rows(forward(topology, theta, inputs));
}

}  // namespace dune
