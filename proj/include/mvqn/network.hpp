#pragma once

#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mvqn/neuron.hpp"

namespace mvqn {

/// Feedforward networks of k-valued neurons. Layer L+1 consumes the sector
/// values (unit-circle complex numbers) emitted by layer L, so every signal
/// between layers lies exactly on the unit circle.

struct LayerSpec {
    int neuron_count = 1;
    int k = 2;
};

struct Layer {
    LayerSpec spec;
    std::vector<NeuronModel> neurons;
};

struct NetworkModel {
    int input_arity = 1;
    std::vector<Layer> layers;
};

inline void validate_network(const NetworkModel& net) {
    if (net.input_arity < 1) throw ShapeError("network input arity must be >= 1");
    if (net.layers.empty()) throw ShapeError("network needs at least one layer");
    int arity = net.input_arity;
    for (size_t l = 0; l < net.layers.size(); ++l) {
        const Layer& layer = net.layers[l];
        if (layer.spec.neuron_count < 1) throw ShapeError("layer neuron count must be >= 1");
        if (layer.neurons.size() != static_cast<size_t>(layer.spec.neuron_count))
            throw ShapeError("layer " + std::to_string(l) + " neuron count mismatch");
        for (const NeuronModel& nm : layer.neurons) {
            if (nm.k != layer.spec.k) throw ShapeError("layer " + std::to_string(l) + " order mismatch");
            if (nm.n != arity) throw ShapeError("layer " + std::to_string(l) + " arity chain broken");
        }
        arity = layer.spec.neuron_count;
    }
}

/// Builds a network with seeded random weights, layer by layer, neuron by
/// neuron, drawing exactly as random_neuron does so a 1-1 network consumes
/// the same stream as a lone neuron.
inline NetworkModel random_network(int input_arity, std::span<const LayerSpec> specs, Rng& rng) {
    NetworkModel net{input_arity, {}};
    int arity = input_arity;
    for (const LayerSpec& spec : specs) {
        Layer layer{spec, {}};
        for (int i = 0; i < spec.neuron_count; ++i)
            layer.neurons.push_back(random_neuron(spec.k, arity, rng));
        net.layers.push_back(std::move(layer));
        arity = spec.neuron_count;
    }
    validate_network(net);
    return net;
}

struct LayerActivation {
    std::vector<Complex> weighted_sums;
    std::vector<Sector> outputs;
};

struct NetForwardResult {
    std::vector<Sector> outputs; ///< final layer sectors
    std::vector<LayerActivation> activations;
    int degenerate_count = 0; ///< zero weighted sums anywhere in the pass
};

inline NetForwardResult net_forward(const NetworkModel& net, std::span<const Complex> inputs) {
    if (inputs.size() != static_cast<size_t>(net.input_arity))
        throw ShapeError("net_forward: input arity mismatch");
    NetForwardResult result;
    std::vector<Complex> current(inputs.begin(), inputs.end());
    for (const Layer& layer : net.layers) {
        LayerActivation act;
        std::vector<Complex> next;
        for (const NeuronModel& nm : layer.neurons) {
            ForwardResult fr = forward(nm, current);
            act.weighted_sums.push_back(fr.weighted_sum);
            act.outputs.push_back(fr.output);
            next.push_back(sector_value(fr.output));
            if (fr.degenerate) ++result.degenerate_count;
        }
        result.activations.push_back(std::move(act));
        current = std::move(next);
    }
    result.outputs = result.activations.back().outputs;
    return result;
}

/// Multi-output sample: one target sector per output-layer neuron.
struct NetSample {
    std::vector<Complex> inputs;
    std::vector<Sector> targets;
};

struct NetDataset {
    int k = 2;       ///< order of the inputs and targets
    int n = 1;       ///< input arity
    int outputs = 1; ///< target count per sample
    std::vector<NetSample> samples;
};

inline void validate_net_dataset(const NetDataset& ds) {
    if (ds.samples.empty()) throw ShapeError("dataset is empty");
    for (size_t i = 0; i < ds.samples.size(); ++i) {
        const NetSample& s = ds.samples[i];
        if (s.inputs.size() != static_cast<size_t>(ds.n))
            throw ShapeError("sample " + std::to_string(i) + " arity mismatch");
        if (s.targets.size() != static_cast<size_t>(ds.outputs))
            throw ShapeError("sample " + std::to_string(i) + " target count mismatch");
        for (const Sector& t : s.targets)
            if (t.k != ds.k) throw ShapeError("sample " + std::to_string(i) + " target order mismatch");
        for (const Complex& x : s.inputs)
            if (std::abs(std::abs(x) - 1.0) > 1e-9)
                throw ShapeError("sample " + std::to_string(i) + " input is off the unit circle");
    }
}

inline NetDataset to_net_dataset(const Dataset& ds) {
    NetDataset out{ds.k, ds.n, 1, {}};
    out.samples.reserve(ds.samples.size());
    for (const Sample& s : ds.samples) out.samples.push_back({s.inputs, {s.target}});
    return out;
}

namespace detail {

inline void check_net_vs_dataset(const NetworkModel& net, const NetDataset& ds) {
    validate_network(net);
    validate_net_dataset(ds);
    if (net.input_arity != ds.n) throw ShapeError("dataset arity does not match the network");
    const Layer& out = net.layers.back();
    if (out.spec.neuron_count != ds.outputs)
        throw ShapeError("dataset target count does not match the output layer");
    if (out.spec.k != ds.k) throw ShapeError("dataset order does not match the output layer");
}

/// Single-layer training: each output neuron runs the plain neuron rule, so a
/// 1-1 network is bit-identical to training the lone neuron.
inline TrainReport train_single_layer(NetworkModel& net, const NetDataset& ds,
                                      const TrainConfig& cfg) {
    const double d = static_cast<double>(ds.samples.size());
    std::vector<size_t> order(ds.samples.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::optional<Rng> shuffler;
    if (cfg.shuffle_seed) shuffler.emplace(*cfg.shuffle_seed);

    Layer& layer = net.layers.front();
    TrainReport report;
    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        if (shuffler) shuffler->shuffle(order);
        int errors = 0;
        for (size_t idx : order) {
            const NetSample& s = ds.samples[idx];
            bool wrong = false;
            for (size_t o = 0; o < layer.neurons.size(); ++o) {
                NeuronModel& nm = layer.neurons[o];
                ForwardResult fr = forward(nm, s.inputs);
                if (fr.degenerate) ++report.degenerate_zero_count;
                if (fr.output != s.targets[o]) {
                    wrong = true;
                    Complex delta = sector_value(s.targets[o]) - sector_value(fr.output);
                    shift_weights(nm, s.inputs, delta, cfg.learning_rate);
                }
            }
            if (wrong) ++errors;
        }
        report.per_epoch_errors.push_back(errors);
        ++report.epochs_run;
        report.final_accuracy = (d - errors) / d;
        if (report.final_accuracy >= cfg.target_accuracy) {
            report.converged = true;
            break;
        }
    }
    return report;
}

/// One layered correction of a misclassified sample. Wrong output neurons take
/// the error toward the target from the direction the sum actually points in
/// (target root minus z/|z|); hidden neurons receive that error shared equally
/// over fan-in+1 through reciprocal weights; every neuron then applies the
/// usual shift. Hidden sector feeds are refreshed layer by layer as
/// corrections proceed upward.
inline void correct_sample(NetworkModel& net, const NetSample& sample,
                           const NetForwardResult& pass, double alpha) {
    const size_t depth = net.layers.size();
    std::vector<std::vector<Complex>> deltas(depth);

    const LayerActivation& out_act = pass.activations.back();
    deltas[depth - 1].resize(net.layers.back().neurons.size(), Complex{0.0, 0.0});
    for (size_t o = 0; o < deltas[depth - 1].size(); ++o) {
        if (out_act.outputs[o] == sample.targets[o]) continue;
        Complex z = out_act.weighted_sums[o];
        double mag = std::abs(z);
        Complex actual = mag > 0.0 ? z / mag : Complex{0.0, 0.0};
        deltas[depth - 1][o] = sector_value(sample.targets[o]) - actual;
    }

    for (size_t l = depth - 1; l-- > 0;) {
        deltas[l].assign(net.layers[l].neurons.size(), Complex{0.0, 0.0});
        for (size_t o = 0; o < net.layers[l + 1].neurons.size(); ++o) {
            const NeuronModel& nm = net.layers[l + 1].neurons[o];
            Complex share = deltas[l + 1][o] / static_cast<double>(nm.n + 1);
            for (size_t i = 0; i < deltas[l].size(); ++i) {
                Complex w = nm.weights[i + 1];
                if (std::abs(w) > 1e-12) deltas[l][i] += share / w;
            }
        }
    }

    std::vector<Complex> inputs = sample.inputs;
    for (size_t l = 0; l < depth; ++l) {
        for (size_t i = 0; i < net.layers[l].neurons.size(); ++i)
            shift_weights(net.layers[l].neurons[i], inputs, deltas[l][i], alpha);
        if (l + 1 < depth) {
            std::vector<Complex> refreshed;
            refreshed.reserve(net.layers[l].neurons.size());
            for (const NeuronModel& nm : net.layers[l].neurons)
                refreshed.push_back(sector_value(forward(nm, inputs).output));
            inputs = std::move(refreshed);
        }
    }
}

/// Multi-layer training. Corrections iterate on a misclassified sample until
/// it classifies correctly (bounded per visit). The loss surface of layered
/// discrete neurons has flat traps, so the loop re-seeds all weights on a
/// fixed epoch schedule and keeps the best model seen; the re-seed stream
/// derives from the shuffle seed, which keeps runs bit-reproducible.
inline TrainReport train_layered(NetworkModel& net, const NetDataset& ds, const TrainConfig& cfg) {
    constexpr int inner_correction_cap = 30;
    constexpr int restart_period = 50;

    const double d = static_cast<double>(ds.samples.size());
    std::vector<size_t> order(ds.samples.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::optional<Rng> shuffler;
    if (cfg.shuffle_seed) shuffler.emplace(*cfg.shuffle_seed);
    Rng reseed(cfg.shuffle_seed.value_or(0x6d76716eULL) ^ 0x9e3779b97f4a7c15ULL);

    std::vector<LayerSpec> specs;
    for (const Layer& layer : net.layers) specs.push_back(layer.spec);

    NetworkModel best = net;
    int best_errors = static_cast<int>(ds.samples.size()) + 1;

    TrainReport report;
    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        if (epoch > 0 && epoch % restart_period == 0)
            net = random_network(net.input_arity, specs, reseed);
        if (shuffler) shuffler->shuffle(order);
        int errors = 0;
        for (size_t idx : order) {
            const NetSample& s = ds.samples[idx];
            NetForwardResult pass = net_forward(net, s.inputs);
            report.degenerate_zero_count += pass.degenerate_count;
            if (pass.outputs == s.targets) continue;
            ++errors;
            for (int inner = 0; inner < inner_correction_cap; ++inner) {
                correct_sample(net, s, pass, cfg.learning_rate);
                pass = net_forward(net, s.inputs);
                if (pass.outputs == s.targets) break;
            }
        }
        report.per_epoch_errors.push_back(errors);
        ++report.epochs_run;
        if (errors < best_errors) {
            best_errors = errors;
            best = net;
        }
        if ((d - errors) / d >= cfg.target_accuracy) {
            report.converged = true;
            break;
        }
    }
    if (!report.converged) net = best;
    long correct = 0;
    for (const NetSample& s : ds.samples)
        if (net_forward(net, s.inputs).outputs == s.targets) ++correct;
    report.final_accuracy = static_cast<double>(correct) / d;
    return report;
}

} // namespace detail

/// Layered error-correction training. A single-layer network uses the plain
/// neuron rule per output neuron; deeper networks share errors backward
/// through reciprocal weights and correct every layer.
inline std::pair<NetworkModel, TrainReport> net_train(NetworkModel net, const NetDataset& ds,
                                                      const TrainConfig& cfg) {
    validate_config(cfg);
    detail::check_net_vs_dataset(net, ds);
    TrainReport report = net.layers.size() == 1 ? detail::train_single_layer(net, ds, cfg)
                                                : detail::train_layered(net, ds, cfg);
    return {std::move(net), std::move(report)};
}

struct NetEvalReport {
    double accuracy = 0.0; ///< fraction of samples with every output correct
    std::vector<EvalReport> per_output;
};

inline NetEvalReport net_evaluate(const NetworkModel& net, const NetDataset& ds) {
    detail::check_net_vs_dataset(net, ds);
    const int k = ds.k;
    NetEvalReport report;
    report.per_output.resize(static_cast<size_t>(ds.outputs));
    for (EvalReport& per : report.per_output)
        per.confusion.assign(static_cast<size_t>(k), std::vector<long>(static_cast<size_t>(k), 0));

    long all_correct = 0;
    std::vector<long> correct(static_cast<size_t>(ds.outputs), 0);
    std::vector<double> angular(static_cast<size_t>(ds.outputs), 0.0);
    for (const NetSample& s : ds.samples) {
        NetForwardResult pass = net_forward(net, s.inputs);
        bool whole = true;
        for (size_t o = 0; o < s.targets.size(); ++o) {
            const Sector& out = pass.outputs[o];
            const Sector& want = s.targets[o];
            report.per_output[o].confusion[static_cast<size_t>(want.j)][static_cast<size_t>(out.j)]++;
            if (out == want) ++correct[o];
            else whole = false;
            angular[o] += std::abs(std::remainder(out.phase() - want.phase(), two_pi));
        }
        if (whole) ++all_correct;
    }
    const double d = static_cast<double>(ds.samples.size());
    report.accuracy = static_cast<double>(all_correct) / d;
    for (size_t o = 0; o < report.per_output.size(); ++o) {
        report.per_output[o].accuracy = static_cast<double>(correct[o]) / d;
        report.per_output[o].mean_angular_error = angular[o] / d;
    }
    return report;
}

/// The four-sample XOR problem at order 2: inputs and targets all in {-1, 1}.
inline NetDataset xor_dataset_k2() {
    NetDataset ds{2, 2, 1, {}};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            NetSample s;
            s.inputs = {sector_value(Sector(2, a)), sector_value(Sector(2, b))};
            s.targets = {Sector(2, (a + b) % 2)};
            ds.samples.push_back(std::move(s));
        }
    return ds;
}

} // namespace mvqn
