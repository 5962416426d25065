// mvqn: k-valued neurons on the unit circle - train/eval CLI, spin-block
// table, radix cost scan, perceptron contraction demo, and SVG sector plots.
//
// Exit codes: 0 success, 1 usage, 2 parse/unreadable file, 3 range or shape
// mismatch, 4 model schema, 5 numeric degeneracy.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mvqn/io.hpp"

namespace {

using namespace mvqn;

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag_seed) {
    if (flag_seed) return *flag_seed;
    if (const char* env = std::getenv("MVQN_SEED")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') return v;
        throw ParseError("MVQN_SEED is not an integer: " + std::string(env));
    }
    return 1;
}

DatasetFormat parse_format(const std::string& name) {
    if (name == "sector") return DatasetFormat::sector_csv;
    if (name == "complex") return DatasetFormat::complex_csv;
    throw ShapeError("unknown dataset format '" + name + "'");
}

std::vector<int> parse_layer_counts(const std::string& spec) {
    std::vector<int> counts;
    size_t pos = 0;
    while (pos <= spec.size()) {
        size_t comma = spec.find(',', pos);
        std::string field = comma == std::string::npos ? spec.substr(pos)
                                                       : spec.substr(pos, comma - pos);
        try {
            size_t used = 0;
            int v = std::stoi(field, &used);
            if (used != field.size() || v < 1) throw std::invalid_argument(field);
            counts.push_back(v);
        } catch (const std::exception&) {
            throw ShapeError("bad layer count '" + field + "' in --layers");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return counts;
}

void print_report(const TrainReport& report) {
    std::cout << "converged: " << (report.converged ? "yes" : "no") << "\n";
    std::cout << "epochs: " << report.epochs_run << "\n";
    std::cout << "accuracy: " << detail::shortest(report.final_accuracy) << "\n";
    std::cout << "degenerate_zero_inputs: " << report.degenerate_zero_count << "\n";
}

void print_confusion(const EvalReport& ev) {
    std::cout << "confusion:\n";
    for (size_t t = 0; t < ev.confusion.size(); ++t) {
        std::cout << "target " << t << ":";
        for (long c : ev.confusion[t]) std::cout << " " << c;
        std::cout << "\n";
    }
}

struct TrainArgs {
    std::string kind = "neuron";
    int k = 0;
    std::string data;
    std::string format = "sector";
    bool header = false;
    double lr = 1.0;
    int max_epochs = 100;
    std::optional<std::uint64_t> seed;
    bool shuffle = false;
    std::string init = "random";
    std::string layers;
    std::string out;
    std::string report_path;
};

int run_train(const TrainArgs& args) {
    Dataset ds = load_dataset(args.data, parse_format(args.format), args.k, args.header);
    std::uint64_t seed = resolve_seed(args.seed);
    TrainConfig cfg{args.lr, args.max_epochs,
                    args.shuffle ? std::optional<std::uint64_t>{seed} : std::nullopt, 1.0};

    TrainReport report;
    AnyModel trained;
    if (args.kind == "neuron") {
        Rng rng(seed);
        NeuronModel start = args.init == "hebbian" ? hebbian_init(ds)
                            : args.init == "random"
                                ? random_neuron(ds.k, ds.n, rng)
                                : throw ShapeError("unknown init '" + args.init + "'");
        auto [model, rep] = train(std::move(start), ds, cfg);
        trained = std::move(model);
        report = std::move(rep);
    } else if (args.kind == "network") {
        if (args.layers.empty()) throw ShapeError("--layers is required for --kind network");
        if (args.init != "random") throw ShapeError("--init " + args.init + " applies to neurons only");
        std::vector<int> counts = parse_layer_counts(args.layers);
        if (counts.back() != 1)
            throw ShapeError("single-target datasets need exactly one output neuron");
        std::vector<LayerSpec> specs;
        for (int c : counts) specs.push_back({c, ds.k});
        Rng rng(seed);
        NetworkModel start = random_network(ds.n, specs, rng);
        auto [model, rep] = net_train(std::move(start), to_net_dataset(ds), cfg);
        trained = std::move(model);
        report = std::move(rep);
    } else {
        throw ShapeError("unknown kind '" + args.kind + "'");
    }

    save_model(trained, args.out);
    if (!args.report_path.empty())
        write_text_file(args.report_path, render_train_report_csv(report, ds.samples.size()));
    print_report(report);
    return 0;
}

int run_eval(const std::string& model_path, const std::string& data, const std::string& format,
             bool header) {
    AnyModel model = load_model(model_path);
    if (const auto* neuron = std::get_if<NeuronModel>(&model)) {
        Dataset ds = load_dataset(data, parse_format(format), neuron->k, header);
        EvalReport ev = evaluate(*neuron, ds);
        std::cout << "accuracy: " << detail::shortest(ev.accuracy) << "\n";
        std::cout << "mean_angular_error: " << detail::shortest(ev.mean_angular_error) << "\n";
        print_confusion(ev);
        return 0;
    }
    if (const auto* net = std::get_if<NetworkModel>(&model)) {
        Dataset ds = load_dataset(data, parse_format(format), net->layers.back().spec.k, header);
        NetEvalReport ev = net_evaluate(*net, to_net_dataset(ds));
        std::cout << "accuracy: " << detail::shortest(ev.accuracy) << "\n";
        for (size_t o = 0; o < ev.per_output.size(); ++o) {
            std::cout << "output " << o << " accuracy: "
                      << detail::shortest(ev.per_output[o].accuracy) << "\n";
            std::cout << "output " << o << " mean_angular_error: "
                      << detail::shortest(ev.per_output[o].mean_angular_error) << "\n";
            print_confusion(ev.per_output[o]);
        }
        return 0;
    }
    throw ShapeError("eval expects a neuron or network model");
}

int run_demo(int n, double eta, int steps, std::optional<std::uint64_t> seed_flag,
             const std::string& mode, const std::string& out) {
    if (n < 1) throw ShapeError("--n must be >= 1");
    Rng rng(resolve_seed(seed_flag));
    std::vector<QubitState> inputs;
    for (int j = 0; j < n; ++j) inputs.push_back(random_qubit(rng));
    QubitState desired = random_qubit(rng);
    PerceptronModel model = mode == "matrix"   ? random_matrix_perceptron(static_cast<size_t>(n), rng)
                            : mode == "scalar" ? PerceptronModel::zero_scalar(static_cast<size_t>(n))
                                               : throw ShapeError("unknown mode '" + mode + "'");
    auto [trained, trace] = qp_train(std::move(model), inputs, desired, eta, steps);
    std::string csv = render_perceptron_trace_csv(trace);
    if (out.empty())
        std::cout << csv;
    else
        write_text_file(out, csv);
    if (trace.eta_outside_contraction_range)
        std::cerr << "note: eta outside (0, 1/n); contraction is not guaranteed\n";
    return 0;
}

struct PlotArgs {
    std::string model;
    std::string data;
    std::string format = "sector";
    bool header = false;
    std::string out;
    int track = -1;
    int epochs = 0;
    double lr = 1.0;
};

int run_plot(const PlotArgs& args) {
    AnyModel any = load_model(args.model);
    const auto* neuron = std::get_if<NeuronModel>(&any);
    if (!neuron) throw ShapeError("plot expects a neuron model");
    Dataset ds = load_dataset(args.data, parse_format(args.format), neuron->k, args.header);

    std::vector<Complex> trajectory;
    NeuronModel model = *neuron;
    if (args.track >= 0) {
        if (static_cast<size_t>(args.track) >= ds.samples.size())
            throw ShapeError("--track index out of range");
        if (args.epochs < 1) throw ShapeError("--epochs must be >= 1 when tracking");
        const Sample& tracked = ds.samples[static_cast<size_t>(args.track)];
        trajectory.push_back(forward(model, tracked.inputs).weighted_sum);
        for (int e = 0; e < args.epochs; ++e) {
            auto [next, rep] = train(std::move(model), ds, TrainConfig{args.lr, 1, {}, 1.0});
            model = std::move(next);
            trajectory.push_back(forward(model, tracked.inputs).weighted_sum);
        }
    }

    std::vector<PlotPoint> points;
    for (const Sample& s : ds.samples) {
        ForwardResult fr = forward(model, s.inputs);
        points.push_back({fr.weighted_sum, fr.output == s.target});
    }
    write_text_file(args.out, render_svg_plot(model.k, points, trajectory));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-valued neurons over roots of unity"};
    app.require_subcommand(1);

    // table
    int two_j = 1;
    CLI::App* table = app.add_subcommand("table", "print the spin <-> roots-of-unity block");
    table->add_option("--two-j", two_j, "doubled spin (1 -> j=1/2)")->required();

    // radix
    double radix_range = 1e6;
    int r_max = 10;
    CLI::App* radix = app.add_subcommand("radix", "cost table over integer radices");
    radix->add_option("--N", radix_range, "represented range")->required();
    radix->add_option("--r-max", r_max, "largest radix to scan");

    // train
    TrainArgs train_args;
    std::optional<std::uint64_t> train_seed;
    CLI::App* train_cmd = app.add_subcommand("train", "train a neuron or network from CSV");
    train_cmd->add_option("--kind", train_args.kind, "neuron or network");
    train_cmd->add_option("--k", train_args.k, "logic order")->required();
    train_cmd->add_option("--data", train_args.data, "dataset CSV path")->required();
    train_cmd->add_option("--format", train_args.format, "sector or complex");
    train_cmd->add_flag("--header", train_args.header, "skip the first CSV row");
    train_cmd->add_option("--lr", train_args.lr, "learning rate");
    train_cmd->add_option("--max-epochs", train_args.max_epochs, "epoch budget");
    train_cmd->add_option("--seed", train_seed, "rng seed (default: MVQN_SEED, then 1)");
    train_cmd->add_flag("--shuffle", train_args.shuffle, "shuffle samples each epoch");
    train_cmd->add_option("--init", train_args.init, "random or hebbian (neuron only)");
    train_cmd->add_option("--layers", train_args.layers, "network neuron counts, e.g. 2,1");
    train_cmd->add_option("--out", train_args.out, "model output path")->required();
    train_cmd->add_option("--report", train_args.report_path, "per-epoch CSV report path");

    // eval
    std::string eval_model, eval_data, eval_format = "sector";
    bool eval_header = false;
    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a saved model on a dataset");
    eval_cmd->add_option("--model", eval_model, "model JSON path")->required();
    eval_cmd->add_option("--data", eval_data, "dataset CSV path")->required();
    eval_cmd->add_option("--format", eval_format, "sector or complex");
    eval_cmd->add_flag("--header", eval_header, "skip the first CSV row");

    // perceptron-demo
    int demo_n = 2, demo_steps = 5;
    double demo_eta = 0.25;
    std::optional<std::uint64_t> demo_seed;
    std::string demo_mode = "matrix", demo_out;
    CLI::App* demo = app.add_subcommand("perceptron-demo", "per-step contraction trace as CSV");
    demo->add_option("--n", demo_n, "input count");
    demo->add_option("--eta", demo_eta, "learning step");
    demo->add_option("--steps", demo_steps, "iterations to trace");
    demo->add_option("--seed", demo_seed, "rng seed (default: MVQN_SEED, then 1)");
    demo->add_option("--mode", demo_mode, "matrix or scalar weights");
    demo->add_option("--out", demo_out, "CSV path (default: stdout)");

    // plot
    PlotArgs plot_args;
    CLI::App* plot = app.add_subcommand("plot", "SVG of sectors, sample sums, and a trajectory");
    plot->add_option("--model", plot_args.model, "neuron model JSON path")->required();
    plot->add_option("--data", plot_args.data, "dataset CSV path")->required();
    plot->add_option("--format", plot_args.format, "sector or complex");
    plot->add_flag("--header", plot_args.header, "skip the first CSV row");
    plot->add_option("--out", plot_args.out, "SVG output path")->required();
    plot->add_option("--track", plot_args.track, "sample index whose sum is traced over epochs");
    plot->add_option("--epochs", plot_args.epochs, "epochs to trace when tracking");
    plot->add_option("--lr", plot_args.lr, "learning rate for the traced run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (table->parsed()) {
            std::cout << render_table(two_j);
            return 0;
        }
        if (radix->parsed()) {
            std::cout << render_radix_table(radix_range, r_max);
            return 0;
        }
        if (train_cmd->parsed()) {
            train_args.seed = train_seed;
            return run_train(train_args);
        }
        if (eval_cmd->parsed()) return run_eval(eval_model, eval_data, eval_format, eval_header);
        if (demo->parsed()) return run_demo(demo_n, demo_eta, demo_steps, demo_seed, demo_mode, demo_out);
        if (plot->parsed()) return run_plot(plot_args);
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ShapeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const DegenerateError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
