#include "dune/sweep.hpp"

#include <algorithm>
#include <future>

#include "dune/errors.hpp"

namespace dune {

std::string axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::NoiseToSignal: return "ns";
        case SweepAxis::MagicShift: return "hs";
        case SweepAxis::MinWidth: return "wmin";
    }
    return "?";
}

SweepAxis parse_axis(const std::string& name) {
    if (name == "ns") return SweepAxis::NoiseToSignal;
    if (name == "hs") return SweepAxis::MagicShift;
    if (name == "wmin") return SweepAxis::MinWidth;
    throw ConfigError("unknown sweep axis '" + name + "'");
}

double magic_shift_rule(double noise_to_signal) {
    return noise_to_signal >= 1.0 ? 1.8 : 2.0 * noise_to_signal;
}

void SweepSpec::validate() const {
    if (values.empty()) throw ConfigError("sweep: value list is empty");
    if (methods.empty()) throw ConfigError("sweep: method list is empty");
    for (double v : values) {
        bool ok = true;
        switch (axis) {
            case SweepAxis::NoiseToSignal: ok = v >= 0.0; break;
            case SweepAxis::MagicShift: ok = v > -0.5; break;
            case SweepAxis::MinWidth: ok = v >= 0.0; break;
        }
        if (!std::isfinite(v) || !ok) {
            throw ConfigError("sweep: value " + std::to_string(v) +
                              " outside the valid range for axis " +
                              axis_name(axis));
        }
    }
}

RunConfig SweepSpec::point_config(Method method,
                                  std::size_t value_index) const {
    RunConfig cfg = base;
    cfg.method = method;
    cfg.master_seed =
        derive_seed(base.master_seed, stream::kSweepPoint, value_index);
    double value = values.at(value_index);
    switch (axis) {
        case SweepAxis::NoiseToSignal:
            cfg.test_noise = NoiseSpec::parse("white:ns=" +
                                              std::to_string(value));
            cfg.magic_shift =
                method == Method::Plain ? 0.0 : magic_shift_rule(value);
            break;
        case SweepAxis::MagicShift:
            cfg.magic_shift = method == Method::Plain ? 0.0 : value;
            break;
        case SweepAxis::MinWidth:
            cfg.dune.min_width = value;
            cfg.dune.prior_width = value / 2.0;  // default d tracks w_min
            break;
    }
    return cfg;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec,
                                const LabeledDataset& train,
                                const LabeledDataset& test, int jobs) {
    spec.validate();

    struct Point {
        Method method;
        std::size_t value_index;
    };
    std::vector<Point> points;
    for (Method method : spec.methods) {
        for (std::size_t i = 0; i < spec.values.size(); ++i) {
            points.push_back({method, i});
        }
    }

    std::vector<SweepRow> rows(points.size());
    auto run_point = [&](std::size_t p) {
        RunConfig cfg = spec.point_config(points[p].method,
                                          points[p].value_index);
        auto records = run_experiment(cfg, train, test);
        rows[p] = SweepRow{points[p].method, spec.axis,
                           spec.values[points[p].value_index],
                           cfg.effective_shift(),
                           records.back().noisy_acc};
    };

    if (jobs <= 1) {
        for (std::size_t p = 0; p < points.size(); ++p) run_point(p);
    } else {
        std::size_t next = 0;
        while (next < points.size()) {
            std::vector<std::future<void>> wave;
            for (int j = 0; j < jobs && next < points.size(); ++j, ++next) {
                wave.push_back(
                    std::async(std::launch::async, run_point, next));
            }
            for (auto& f : wave) f.get();
        }
    }

    std::stable_sort(rows.begin(), rows.end(),
                     [](const SweepRow& a, const SweepRow& b) {
                         if (a.method != b.method) {
                             return static_cast<int>(a.method) <
                                    static_cast<int>(b.method);
                         }
                         return a.value < b.value;
                     });
    return rows;
}

}  // namespace dune
