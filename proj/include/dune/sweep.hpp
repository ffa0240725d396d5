#pragma once

#include <string>
#include <vector>

#include "dune/trainer.hpp"

namespace dune {

enum class SweepAxis { NoiseToSignal, MagicShift, MinWidth };

std::string axis_name(SweepAxis axis);
SweepAxis parse_axis(const std::string& name);

/// The shift used for magics methods when sweeping noise-to-signal:
/// 1.8 for ns >= 1, otherwise 2*ns.
double magic_shift_rule(double noise_to_signal);

/// One trained model per (method, axis value). The per-point RunConfig is
/// derived from base by overriding the swept field; axis NoiseToSignal also
/// rewrites the shift of magics methods via magic_shift_rule.
struct SweepSpec {
    SweepAxis axis = SweepAxis::NoiseToSignal;
    std::vector<double> values;
    std::vector<Method> methods = {Method::DuneMagics};
    RunConfig base;

    void validate() const;

    /// Config for one sweep point. Every method at the same value shares a
    /// derived seed so initializations are comparable across methods.
    RunConfig point_config(Method method, std::size_t value_index) const;
};

struct SweepRow {
    Method method;
    SweepAxis axis;
    double value = 0.0;
    double hs = 0.0;
    double final_noisy_acc = 0.0;
};

/// Runs every sweep point and returns rows sorted by (method order, value),
/// independent of execution order. jobs > 1 runs points concurrently.
std::vector<SweepRow> run_sweep(const SweepSpec& spec,
                                const LabeledDataset& train,
                                const LabeledDataset& test, int jobs = 1);

}  // namespace dune
