#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dune/dataio.hpp"
#include "dune/interval_params.hpp"
#include "dune/network.hpp"
#include "dune/optimizer.hpp"

namespace dune {

enum class Method { DuneMagics, PlainMagics, Plain };
enum class EvalMode { SingleSample, Midpoint };

std::string method_name(Method method);
Method parse_method(const std::string& name);

/// Full hyperparameter set for one experiment.
struct RunConfig {
    NetworkTopology topology;
    Method method = Method::DuneMagics;
    int epochs = 30;
    int batch_size = 100;
    OptimizerConfig optimizer;   // Adam lr 1e-3 by default
    DuneHyperparams dune;        // ignored by plain methods
    double magic_shift = 0.0;    // hs; forced to 0 by Method::Plain
    NoiseSpec test_noise;        // applied to test images before magics
    std::uint64_t master_seed = 42;
    EvalMode eval_mode = EvalMode::SingleSample;

    /// Shift actually applied to inputs: 0 for Method::Plain.
    double effective_shift() const;

    bool uses_intervals() const { return method == Method::DuneMagics; }

    void validate() const;
};

/// One per-epoch results row.
struct MetricsRecord {
    int epoch = 0;
    double train_loss = 0.0;
    double clean_acc = 0.0;
    double noisy_acc = 0.0;
    double mean_width = 0.0;
    double seconds = 0.0;
};

/// Mutable training state: interval set for the dune method, a plain
/// parameter vector otherwise, plus optimizer state and the instantiation
/// stream.
struct TrainerState {
    Method method;
    NetworkTopology topology;
    IntervalParameterSet intervals;  // dune method
    ParameterVector theta;           // plain methods
    Optimizer optimizer;
    Rng sample_rng;

    bool uses_intervals() const { return method == Method::DuneMagics; }
};

/// Per-layer uniform weights in +-sqrt(6/(fan_in+fan_out)), zero biases.
ParameterVector initialize_parameters(const NetworkTopology& topology,
                                      Rng& rng);

/// Fresh state for cfg: parameters drawn from the weight-init stream, then
/// widened to intervals for the dune method.
TrainerState make_initial_state(const RunConfig& cfg);

/// One training iteration; returns the batch loss. Batch inputs must
/// already carry the magic shift. Dune order: sample, backward, optimizer
/// step, interval update, width regularization, min-width clamp. Plain:
/// backward, optimizer step.
double train_step(TrainerState& state, const Batch& batch,
                  const RunConfig& cfg);

/// Accuracy over the dataset with the given corruption applied to each
/// image (its own substream derived from (master seed, image index)) and
/// the magic shift applied after. SingleSample draws one instantiation for
/// the whole pass from eval_seed; Midpoint uses interval midpoints.
double evaluate(const TrainerState& state, const LabeledDataset& dataset,
                const RunConfig& cfg, EvalMode mode, const NoiseSpec& noise,
                std::uint64_t eval_seed);

/// Accuracy under cfg.test_noise (spec-facing convenience overload).
double evaluate(const TrainerState& state, const LabeledDataset& dataset,
                const RunConfig& cfg, EvalMode mode, std::uint64_t eval_seed);

/// Full training run: cfg.epochs epochs of shuffled minibatches with one
/// MetricsRecord per epoch (clean and noisy test accuracy, mean interval
/// width, wall-clock seconds). Fully reproducible from cfg.master_seed
/// except for the seconds column.
std::vector<MetricsRecord> run_experiment(const RunConfig& cfg,
                                          const LabeledDataset& train,
                                          const LabeledDataset& test);

/// Invoked after each epoch with the freshly appended record.
using EpochCallback = std::function<void(const MetricsRecord&)>;

/// run_experiment variant that reuses an existing state (model fine-tuning
/// or evaluation-only flows construct states directly).
std::vector<MetricsRecord> run_experiment(const RunConfig& cfg,
                                          const LabeledDataset& train,
                                          const LabeledDataset& test,
                                          TrainerState& state,
                                          const EpochCallback& on_epoch = {});

}  // namespace dune
