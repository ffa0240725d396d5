#include "dune/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "dune/errors.hpp"

namespace dune {

std::string method_name(Method method) {
    switch (method) {
        case Method::DuneMagics: return "dune-magics";
        case Method::PlainMagics: return "plain-magics";
        case Method::Plain: return "plain";
    }
    return "?";
}

Method parse_method(const std::string& name) {
    if (name == "dune-magics") return Method::DuneMagics;
    if (name == "plain-magics") return Method::PlainMagics;
    if (name == "plain") return Method::Plain;
    throw ConfigError("unknown method '" + name + "'");
}

double RunConfig::effective_shift() const {
    return method == Method::Plain ? 0.0 : magic_shift;
}

void RunConfig::validate() const {
    topology.validate();
    if (epochs <= 0) throw ConfigError("config: epochs must be positive");
    if (batch_size <= 0) throw ConfigError("config: batch size must be positive");
    if (optimizer.learning_rate <= 0.0) {
        throw ConfigError("config: learning rate must be positive");
    }
    if (magic_shift <= -0.5) {
        throw ConfigError("config: hs must be > -0.5 to keep the input "
                          "transform increasing");
    }
    if (dune.prior_width < 0.0 || dune.reg_strength < 0.0 ||
        dune.min_width < 0.0) {
        throw ConfigError("config: d, beta and w_min must be nonnegative");
    }
}

ParameterVector initialize_parameters(const NetworkTopology& topology,
                                      Rng& rng) {
    topology.validate();
    ParameterVector theta(topology.parameter_count());
    std::size_t offset = 0;
    const auto& sizes = topology.layer_sizes;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        std::size_t fan_in = sizes[l];
        std::size_t fan_out = sizes[l + 1];
        double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        for (std::size_t i = 0; i < fan_in * fan_out; ++i) {
            theta[offset + i] = rng.uniform(-limit, limit);
        }
        offset += fan_in * fan_out;
        for (std::size_t i = 0; i < fan_out; ++i) theta[offset + i] = 0.0;
        offset += fan_out;
    }
    return theta;
}

TrainerState make_initial_state(const RunConfig& cfg) {
    cfg.validate();
    Rng init_rng(derive_seed(cfg.master_seed, stream::kWeightInit));
    ParameterVector theta = initialize_parameters(cfg.topology, init_rng);

    TrainerState state{
        cfg.method,
        cfg.topology,
        {},
        {},
        Optimizer(cfg.optimizer, theta.size()),
        Rng(derive_seed(cfg.master_seed, stream::kSample)),
    };
    if (cfg.uses_intervals()) {
        state.intervals = init_intervals(theta, cfg.dune.prior_width);
    } else {
        state.theta = std::move(theta);
    }
    return state;
}

double train_step(TrainerState& state, const Batch& batch,
                  const RunConfig& cfg) {
    if (!state.uses_intervals()) {
        auto result = backward(state.topology, state.theta, batch);
        state.theta = state.optimizer.step(state.theta, result.grad);
        return result.loss;
    }
    ParameterVector theta_old = sample(state.intervals, state.sample_rng);
    auto result = backward(state.topology, theta_old, batch);
    ParameterVector theta_new = state.optimizer.step(theta_old, result.grad);
    state.intervals = enforce_min_width(
        apply_width_regularization(
            update_intervals(std::move(state.intervals), theta_old, theta_new),
            cfg.dune.reg_strength, cfg.optimizer.learning_rate),
        cfg.dune.min_width);
    return result.loss;
}

namespace {

ParameterVector evaluation_parameters(const TrainerState& state,
                                      EvalMode mode, std::uint64_t eval_seed) {
    if (!state.uses_intervals()) return state.theta;
    if (mode == EvalMode::Midpoint) return state.intervals.midpoints();
    Rng rng(eval_seed);
    return sample(state.intervals, rng);
}

}  // namespace

double evaluate(const TrainerState& state, const LabeledDataset& dataset,
                const RunConfig& cfg, EvalMode mode, const NoiseSpec& noise,
                std::uint64_t eval_seed) {
    if (dataset.count() == 0) {
        throw ValidationError("evaluate: empty dataset");
    }
    ParameterVector theta = evaluation_parameters(state, mode, eval_seed);
    const double shift = cfg.effective_shift();
    const bool identity = noise.is_identity();

    std::size_t correct = 0;
    const std::size_t chunk = 256;
    Matrix inputs(std::min(chunk, dataset.count()), dataset.images.cols);
    for (std::size_t begin = 0; begin < dataset.count(); begin += chunk) {
        std::size_t rows = std::min(chunk, dataset.count() - begin);
        if (rows != inputs.rows) inputs = Matrix(rows, dataset.images.cols);
        for (std::size_t r = 0; r < rows; ++r) {
            std::size_t index = begin + r;
            std::vector<double> row;
            if (identity) {
                row = magics(dataset.images.row(index), shift);
            } else {
                // Each image owns a noise substream keyed by its index, so
                // every method and every epoch sees the same noisy test set.
                Rng noise_rng(
                    derive_seed(cfg.master_seed, stream::kTestNoise, index));
                row = corrupt_then_shift(dataset.images.row(index),
                                         dataset.image_width,
                                         dataset.image_height, noise, shift,
                                         noise_rng);
            }
            std::copy(row.begin(), row.end(), inputs.row(r).begin());
        }
        auto labels = predict(state.topology, theta, inputs);
        for (std::size_t r = 0; r < rows; ++r) {
            if (labels[r] == dataset.labels[begin + r]) ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(dataset.count());
}

double evaluate(const TrainerState& state, const LabeledDataset& dataset,
                const RunConfig& cfg, EvalMode mode, std::uint64_t eval_seed) {
    return evaluate(state, dataset, cfg, mode, cfg.test_noise, eval_seed);
}

std::vector<MetricsRecord> run_experiment(const RunConfig& cfg,
                                          const LabeledDataset& train,
                                          const LabeledDataset& test) {
    TrainerState state = make_initial_state(cfg);
    return run_experiment(cfg, train, test, state);
}

std::vector<MetricsRecord> run_experiment(const RunConfig& cfg,
                                          const LabeledDataset& train,
                                          const LabeledDataset& test,
                                          TrainerState& state,
                                          const EpochCallback& on_epoch) {
    cfg.validate();
    if (train.count() == 0 || test.count() == 0) {
        throw ValidationError("run_experiment: datasets must be nonempty");
    }
    if (train.images.cols != cfg.topology.input_dim()) {
        throw ValidationError("run_experiment: dataset width does not match "
                              "the input layer");
    }

    const double shift = cfg.effective_shift();
    const std::size_t batch_size = static_cast<std::size_t>(cfg.batch_size);
    Rng shuffle_rng(derive_seed(cfg.master_seed, stream::kShuffle));
    const NoiseSpec clean = NoiseSpec{};  // white, ns = 0

    std::vector<MetricsRecord> records;
    records.reserve(static_cast<std::size_t>(cfg.epochs));

    Batch batch;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        auto start = std::chrono::steady_clock::now();
        auto perm = random_permutation(train.count(), shuffle_rng);

        double loss_sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t begin = 0; begin < train.count();
             begin += batch_size) {
            std::size_t rows = std::min(batch_size, train.count() - begin);
            if (batch.inputs.rows != rows ||
                batch.inputs.cols != train.images.cols) {
                batch.inputs = Matrix(rows, train.images.cols);
                batch.labels.resize(rows);
            }
            for (std::size_t r = 0; r < rows; ++r) {
                std::size_t index = perm[begin + r];
                auto row = magics(train.images.row(index), shift);
                std::copy(row.begin(), row.end(), batch.inputs.row(r).begin());
                batch.labels[r] = train.labels[index];
            }
            loss_sum += train_step(state, batch, cfg);
            ++batches;
        }

        std::uint64_t eval_seed =
            derive_seed(cfg.master_seed, stream::kEval,
                        static_cast<std::uint64_t>(epoch));
        double clean_acc =
            evaluate(state, test, cfg, cfg.eval_mode, clean, eval_seed);
        double noisy_acc =
            cfg.test_noise.is_identity()
                ? clean_acc
                : evaluate(state, test, cfg, cfg.eval_mode, cfg.test_noise,
                           eval_seed);

        auto elapsed = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start)
                           .count();
        records.push_back(MetricsRecord{
            epoch,
            loss_sum / static_cast<double>(batches),
            clean_acc,
            noisy_acc,
            state.uses_intervals() ? state.intervals.mean_width() : 0.0,
            elapsed,
        });
        if (on_epoch) on_epoch(records.back());
    }
    return records;
}

}  // namespace dune
