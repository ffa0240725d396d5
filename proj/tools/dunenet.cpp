// Experiment CLI for interval-parameter ("dune") networks with the magic
// shift input transform. Subcommands: train, sweep, dump-samples, eval.
// Exit codes: 0 success, 1 runtime/data failure, 2 usage/config failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "dune/csv.hpp"
#include "dune/dataio.hpp"
#include "dune/errors.hpp"
#include "dune/model_io.hpp"
#include "dune/sweep.hpp"
#include "dune/trainer.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct CommonFlags {
    std::string mnist_dir;
    std::uint64_t seed = 42;
    int epochs = 30;
    int batch_size = 100;
    double lr = 0.001;
    std::string method = "dune-magics";
    std::string optimizer = "adam";
    double hs = 0.0;
    double d = -1.0;  // negative = derive from wmin/2
    double beta = 0.1;
    double wmin = 0.15;
    double ns = 0.0;
    std::vector<std::string> patterns;
    std::string hidden = "150";
    std::string eval_mode = "sample";
    std::string out;
    std::string save_model;
    std::string load_model;
};

void add_hyper_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--seed", flags.seed, "Master seed")->capture_default_str();
    cmd->add_option("--epochs", flags.epochs, "Training epochs")
        ->capture_default_str();
    cmd->add_option("--batch-size", flags.batch_size, "Minibatch size")
        ->capture_default_str();
    cmd->add_option("--lr", flags.lr, "Learning rate")->capture_default_str();
    cmd->add_option("--method", flags.method,
                    "dune-magics | plain-magics | plain")
        ->capture_default_str();
    cmd->add_option("--optimizer", flags.optimizer, "sgd | momentum | adam")
        ->capture_default_str();
    cmd->add_option("--hs", flags.hs, "Magic shift applied to inputs")
        ->capture_default_str();
    cmd->add_option("--d", flags.d,
                    "Prior interval half-width (default wmin/2)");
    cmd->add_option("--beta", flags.beta, "Interval width penalty")
        ->capture_default_str();
    cmd->add_option("--wmin", flags.wmin, "Minimum interval width")
        ->capture_default_str();
    auto* ns_opt =
        cmd->add_option("--ns", flags.ns, "White-noise ratio for the test set")
            ->capture_default_str();
    cmd->add_option("--pattern", flags.patterns,
                    "Test corruption spec kind:param=value,... (repeatable)")
        ->excludes(ns_opt);
    cmd->add_option("--hidden", flags.hidden,
                    "Comma-separated hidden layer sizes")
        ->capture_default_str();
    cmd->add_option("--eval-mode", flags.eval_mode, "sample | midpoint")
        ->capture_default_str();
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        items.push_back(text.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return items;
}

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> values;
    for (const auto& item : split_list(text)) {
        if (item.empty()) {
            throw dune::ConfigError("empty entry in list '" + text + "'");
        }
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw dune::ConfigError("bad number '" + item + "' in list");
        }
    }
    return values;
}

dune::NetworkTopology build_topology(const std::string& hidden,
                                     std::size_t input_dim) {
    dune::NetworkTopology topology;
    topology.layer_sizes.push_back(input_dim);
    for (double v : parse_value_list(hidden)) {
        if (v < 1.0 || v != std::floor(v)) {
            throw dune::ConfigError("hidden sizes must be positive integers");
        }
        topology.layer_sizes.push_back(static_cast<std::size_t>(v));
    }
    topology.layer_sizes.push_back(10);
    return topology;
}

dune::EvalMode parse_eval_mode(const std::string& name) {
    if (name == "sample") return dune::EvalMode::SingleSample;
    if (name == "midpoint") return dune::EvalMode::Midpoint;
    throw dune::ConfigError("unknown eval mode '" + name + "'");
}

dune::LabeledDataset load_split(const fs::path& dir, bool training) {
    fs::path images =
        dir / (training ? "train-images-idx3-ubyte" : "t10k-images-idx3-ubyte");
    fs::path labels =
        dir / (training ? "train-labels-idx1-ubyte" : "t10k-labels-idx1-ubyte");
    return dune::load_idx(images, labels);
}

dune::NoiseSpec resolve_test_noise(const CommonFlags& flags) {
    if (!flags.patterns.empty()) {
        if (flags.patterns.size() > 1) {
            throw dune::ConfigError(
                "train/eval take a single --pattern; dump-samples accepts "
                "several");
        }
        return dune::NoiseSpec::parse(flags.patterns.front());
    }
    char text[64];
    std::snprintf(text, sizeof(text), "white:ns=%.17g", flags.ns);
    return dune::NoiseSpec::parse(text);
}

dune::RunConfig build_config(const CommonFlags& flags, std::size_t input_dim) {
    dune::RunConfig cfg;
    cfg.topology = build_topology(flags.hidden, input_dim);
    cfg.method = dune::parse_method(flags.method);
    cfg.epochs = flags.epochs;
    cfg.batch_size = flags.batch_size;
    cfg.optimizer.algorithm = dune::parse_algorithm(flags.optimizer);
    cfg.optimizer.learning_rate = flags.lr;
    cfg.dune.reg_strength = flags.beta;
    cfg.dune.min_width = flags.wmin;
    cfg.dune.prior_width = flags.d >= 0.0 ? flags.d : flags.wmin / 2.0;
    cfg.magic_shift = flags.hs;
    cfg.test_noise = resolve_test_noise(flags);
    cfg.master_seed = flags.seed;
    cfg.eval_mode = parse_eval_mode(flags.eval_mode);
    cfg.validate();
    return cfg;
}

void write_lines(const fs::path& path, const std::string& header,
                 const std::vector<std::string>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw dune::ParseError("cannot open " + path.string() +
                               " for writing");
    }
    out << header << "\n";
    for (const auto& row : rows) out << row << "\n";
    if (!out) throw dune::ParseError("write failed for " + path.string());
}

int cmd_train(const CommonFlags& flags) {
    auto train = load_split(flags.mnist_dir, true);
    auto test = load_split(flags.mnist_dir, false);
    auto cfg = build_config(flags, train.images.cols);

    dune::TrainerState state = [&] {
        if (flags.load_model.empty()) return dune::make_initial_state(cfg);
        auto model = dune::load_model(flags.load_model);
        cfg.topology = model.topology;
        dune::TrainerState loaded{
            cfg.method,
            model.topology,
            {},
            {},
            dune::Optimizer(cfg.optimizer, model.intervals.size()),
            dune::Rng(dune::derive_seed(cfg.master_seed,
                                        dune::stream::kSample)),
        };
        if (cfg.uses_intervals()) {
            loaded.intervals = std::move(model.intervals);
        } else {
            loaded.theta = model.intervals.midpoints();
        }
        return loaded;
    }();

    auto records = dune::run_experiment(
        cfg, train, test, state, [](const dune::MetricsRecord& r) {
            std::fprintf(stderr, "epoch %d: loss %.4f clean %.4f noisy %.4f\n",
                         r.epoch, r.train_loss, r.clean_acc, r.noisy_acc);
        });

    std::vector<std::string> rows;
    rows.reserve(records.size());
    for (const auto& r : records) rows.push_back(dune::metrics_csv_row(r));
    write_lines(flags.out.empty() ? "metrics.csv" : flags.out,
                dune::kMetricsCsvHeader, rows);

    if (!flags.save_model.empty()) {
        if (state.uses_intervals()) {
            dune::save_model(flags.save_model, state.intervals, cfg.topology);
        } else {
            dune::save_model(flags.save_model,
                             dune::init_intervals(state.theta, 0.0),
                             cfg.topology);
        }
    }
    const auto& last = records.back();
    std::printf("final clean_acc %.6f noisy_acc %.6f\n", last.clean_acc,
                last.noisy_acc);
    return 0;
}

int cmd_sweep(const CommonFlags& flags, const std::string& axis,
              const std::string& values, const std::string& methods,
              int jobs) {
    auto train = load_split(flags.mnist_dir, true);
    auto test = load_split(flags.mnist_dir, false);

    dune::SweepSpec spec;
    spec.axis = dune::parse_axis(axis);
    spec.values = parse_value_list(values);
    spec.methods.clear();
    for (const auto& name : split_list(methods)) {
        spec.methods.push_back(dune::parse_method(name));
    }
    spec.base = build_config(flags, train.images.cols);
    spec.validate();

    auto rows = dune::run_sweep(spec, train, test, jobs);
    std::vector<std::string> lines;
    lines.reserve(rows.size());
    for (const auto& row : rows) lines.push_back(dune::sweep_csv_row(row));
    write_lines(flags.out.empty() ? "sweep.csv" : flags.out,
                dune::kSweepCsvHeader, lines);
    return 0;
}

int cmd_dump_samples(const CommonFlags& flags, std::size_t index) {
    auto test = load_split(flags.mnist_dir, false);
    if (index >= test.count()) {
        throw dune::ValidationError("--index is past the end of the test set");
    }
    // Validate every spec before writing anything.
    std::vector<dune::NoiseSpec> specs;
    for (const auto& text : flags.patterns) {
        specs.push_back(dune::NoiseSpec::parse(text));
    }

    fs::path dir = flags.out.empty() ? "samples" : flags.out;
    fs::create_directories(dir);

    auto image = test.images.row(index);
    dune::write_pgm(image, test.image_width, test.image_height,
                    dir / "00_original.pgm");
    for (std::size_t i = 0; i < specs.size(); ++i) {
        dune::Rng rng(
            dune::derive_seed(flags.seed, dune::stream::kTestNoise, i));
        auto corrupted = dune::apply_pattern(image, test.image_width,
                                             test.image_height, specs[i], rng);
        char name[64];
        std::snprintf(name, sizeof(name), "%02zu_%s.pgm", i + 1,
                      flags.patterns[i]
                          .substr(0, flags.patterns[i].find(':'))
                          .c_str());
        dune::write_pgm(corrupted, test.image_width, test.image_height,
                        dir / name);
    }
    std::printf("wrote %zu files to %s\n", specs.size() + 1,
                dir.string().c_str());
    return 0;
}

int cmd_eval(const CommonFlags& flags) {
    auto model = dune::load_model(flags.load_model);
    auto test = load_split(flags.mnist_dir, false);

    dune::RunConfig cfg;
    cfg.topology = model.topology;
    cfg.method = dune::Method::DuneMagics;  // evaluation samples intervals
    cfg.magic_shift = flags.hs;
    cfg.test_noise = resolve_test_noise(flags);
    cfg.master_seed = flags.seed;
    cfg.eval_mode = parse_eval_mode(flags.eval_mode);

    dune::TrainerState state{
        cfg.method,
        cfg.topology,
        std::move(model.intervals),
        {},
        dune::Optimizer(cfg.optimizer, cfg.topology.parameter_count()),
        dune::Rng(dune::derive_seed(cfg.master_seed, dune::stream::kSample)),
    };
    double accuracy = dune::evaluate(
        state, test, cfg, cfg.eval_mode,
        dune::derive_seed(cfg.master_seed, dune::stream::kEval, 0));
    std::printf("accuracy %.6f\n", accuracy);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interval-parameter network trainer with the magic-shift "
                 "input transform"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string axis = "ns";
    std::string values;
    std::string methods = "dune-magics";
    int jobs = 1;
    std::size_t sample_index = 0;

    auto* train =
        app.add_subcommand("train", "Train one model, emit metrics CSV");
    train
        ->add_option("--mnist-dir", flags.mnist_dir,
                     "Directory with the four IDX files")
        ->required();
    add_hyper_flags(train, flags);
    train->add_option("--out", flags.out, "Metrics CSV path (metrics.csv)");
    train->add_option("--save-model", flags.save_model,
                      "Save the final model");
    train->add_option("--load-model", flags.load_model,
                      "Start from a saved model");

    auto* sweep = app.add_subcommand(
        "sweep", "Train one model per axis value per method, emit summary "
                 "CSV");
    sweep->add_option("--mnist-dir", flags.mnist_dir)->required();
    add_hyper_flags(sweep, flags);
    sweep->add_option("--axis", axis, "ns | hs | wmin")->capture_default_str();
    sweep->add_option("--values", values, "Comma-separated axis values")
        ->required();
    sweep->add_option("--methods", methods, "Comma-separated method list")
        ->capture_default_str();
    sweep->add_option("--jobs", jobs, "Concurrent sweep points")
        ->capture_default_str();
    sweep->add_option("--out", flags.out, "Sweep CSV path (sweep.csv)");

    auto* dump = app.add_subcommand(
        "dump-samples", "Write one test image as PGM, original plus each "
                        "requested corruption");
    dump->add_option("--mnist-dir", flags.mnist_dir)->required();
    dump->add_option("--index", sample_index, "Test image index")
        ->capture_default_str();
    dump->add_option("--seed", flags.seed)->capture_default_str();
    dump->add_option("--pattern", flags.patterns,
                     "Corruption spec (repeatable)");
    dump->add_option("--out", flags.out, "Output directory (samples)");

    auto* eval =
        app.add_subcommand("eval", "Evaluate a saved model on the test set");
    eval->add_option("--mnist-dir", flags.mnist_dir)->required();
    eval->add_option("--load-model", flags.load_model, "Model file")
        ->required();
    eval->add_option("--seed", flags.seed)->capture_default_str();
    eval->add_option("--hs", flags.hs, "Magic shift used during training")
        ->capture_default_str();
    auto* eval_ns = eval->add_option("--ns", flags.ns)->capture_default_str();
    eval->add_option("--pattern", flags.patterns)->excludes(eval_ns);
    eval->add_option("--eval-mode", flags.eval_mode)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help() << "\n";
        return kExitUsage;
    }

    try {
        if (train->parsed()) return cmd_train(flags);
        if (sweep->parsed()) {
            return cmd_sweep(flags, axis, values, methods, jobs);
        }
        if (dump->parsed()) return cmd_dump_samples(flags, sample_index);
        if (eval->parsed()) return cmd_eval(flags);
    } catch (const dune::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
