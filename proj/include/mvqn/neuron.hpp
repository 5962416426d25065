#pragma once

#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mvqn/errors.hpp"
#include "mvqn/rng.hpp"
#include "mvqn/unity.hpp"

namespace mvqn {

/// A k-valued neuron over the complex field: n inputs on the unit circle,
/// n+1 complex weights (bias first), csign activation. The weighted sum
/// w_0 + sum_i w_i x_i is folded onto the unit circle by csign, so training
/// is movement of that sum's direction toward the target root of unity.
struct NeuronModel {
    int k = 2;                    ///< logic order of the output
    int n = 1;                    ///< input arity
    std::vector<Complex> weights; ///< w_0 (bias), w_1 ... w_n

    NeuronModel() = default;

    NeuronModel(int order, int arity, std::vector<Complex> w)
        : k(order), n(arity), weights(std::move(w)) {
        if (order < 2) throw ShapeError("neuron order must be >= 2");
        if (arity < 1) throw ShapeError("neuron arity must be >= 1");
        if (weights.size() != static_cast<size_t>(arity) + 1)
            throw ShapeError("neuron needs arity+1 weights, got " + std::to_string(weights.size()));
    }
};

/// Fresh neuron with both weight parts drawn uniformly from [-0.5, 0.5].
inline NeuronModel random_neuron(int k, int n, Rng& rng) {
    if (k < 2 || n < 1) throw ShapeError("invalid neuron dimensions");
    std::vector<Complex> w(static_cast<size_t>(n) + 1);
    for (auto& c : w) c = rng.box_complex(0.5);
    return NeuronModel(k, n, std::move(w));
}

/// Fresh neuron with real weights drawn uniformly from [-0.5, 0.5]. At k = 2
/// with +/-1 inputs every update term is real, so imaginary weight parts never
/// train; starting on the real axis keeps the whole trajectory inside the
/// trainable subspace.
inline NeuronModel random_real_neuron(int k, int n, Rng& rng) {
    if (k < 2 || n < 1) throw ShapeError("invalid neuron dimensions");
    std::vector<Complex> w(static_cast<size_t>(n) + 1);
    for (auto& c : w) c = Complex{rng.uniform(-0.5, 0.5), 0.0};
    return NeuronModel(k, n, std::move(w));
}

/// One labeled example: unit-modulus inputs plus the desired output root.
struct Sample {
    std::vector<Complex> inputs;
    Sector target;
};

struct Dataset {
    int k = 2;
    int n = 1;
    std::vector<Sample> samples;
};

inline void validate_dataset(const Dataset& ds) {
    if (ds.k < 2) throw ShapeError("dataset order must be >= 2");
    if (ds.n < 1) throw ShapeError("dataset arity must be >= 1");
    if (ds.samples.empty()) throw ShapeError("dataset is empty");
    for (size_t i = 0; i < ds.samples.size(); ++i) {
        const Sample& s = ds.samples[i];
        if (s.inputs.size() != static_cast<size_t>(ds.n))
            throw ShapeError("sample " + std::to_string(i) + " arity mismatch");
        if (s.target.k != ds.k)
            throw ShapeError("sample " + std::to_string(i) + " target order mismatch");
        for (const Complex& x : s.inputs)
            if (std::abs(std::abs(x) - 1.0) > 1e-9)
                throw ShapeError("sample " + std::to_string(i) + " input is off the unit circle");
    }
}

inline Dataset make_dataset(int k, int n, std::vector<Sample> samples) {
    Dataset ds{k, n, std::move(samples)};
    validate_dataset(ds);
    return ds;
}

/// Sample whose inputs are given as sector indices of order k.
inline Sample sector_sample(int k, const std::vector<int>& input_indices, int target_index) {
    Sample s;
    s.inputs.reserve(input_indices.size());
    for (int j : input_indices) s.inputs.push_back(sector_value(make_sector(k, j)));
    s.target = make_sector(k, target_index);
    return s;
}

struct ForwardResult {
    Complex weighted_sum;
    Sector output;
    bool degenerate = false; ///< weighted sum was exactly zero
};

/// Weighted sum plus activation.
inline ForwardResult forward(const NeuronModel& model, std::span<const Complex> inputs) {
    if (inputs.size() != static_cast<size_t>(model.n))
        throw ShapeError("forward: expected " + std::to_string(model.n) + " inputs, got " +
                         std::to_string(inputs.size()));
    Complex sum = model.weights[0];
    for (size_t i = 0; i < inputs.size(); ++i) sum += model.weights[i + 1] * inputs[i];
    Activation act = csign_activation(sum, model.k);
    return {sum, act.sector, act.degenerate};
}

/// Non-iterative weight formula: w_j = (1/d) sum_i f_i conj(x_j^i), with the
/// constant input x_0 = 1 feeding the bias. Conjugating the inputs makes a
/// single-sample dataset exactly reproducible: the weighted sum collapses to
/// f * (n+1), which csign maps straight back to the target.
inline NeuronModel hebbian_init(const Dataset& ds) {
    validate_dataset(ds);
    std::vector<Complex> w(static_cast<size_t>(ds.n) + 1, Complex{0.0, 0.0});
    for (const Sample& s : ds.samples) {
        Complex f = sector_value(s.target);
        w[0] += f;
        for (size_t j = 0; j < s.inputs.size(); ++j) w[j + 1] += f * std::conj(s.inputs[j]);
    }
    double inv_d = 1.0 / static_cast<double>(ds.samples.size());
    for (Complex& c : w) c *= inv_d;
    return NeuronModel(ds.k, ds.n, std::move(w));
}

namespace detail {

/// W <- W + (alpha/(n+1)) * delta * conj(X) with X = (1, x_1, ..., x_n).
inline void shift_weights(NeuronModel& model, std::span<const Complex> inputs, Complex delta,
                          double alpha) {
    Complex step = delta * (alpha / static_cast<double>(model.n + 1));
    model.weights[0] += step;
    for (size_t i = 0; i < inputs.size(); ++i) model.weights[i + 1] += step * std::conj(inputs[i]);
}

} // namespace detail

/// One error-correction update. delta is the chord between the desired and
/// actual roots, so a correctly classified sample leaves the weights alone.
/// For unit-modulus inputs the update shifts the weighted sum by exactly
/// alpha * delta.
inline NeuronModel error_correction_step(const NeuronModel& model, const Sample& sample,
                                         double alpha) {
    if (alpha <= 0.0) throw ShapeError("learning rate must be positive");
    if (sample.target.k != model.k) throw ShapeError("sample target order mismatch");
    ForwardResult fr = forward(model, sample.inputs);
    Complex delta = sector_value(sample.target) - sector_value(fr.output);
    NeuronModel next = model;
    detail::shift_weights(next, sample.inputs, delta, alpha);
    return next;
}

struct TrainConfig {
    double learning_rate = 1.0;
    int max_epochs = 100;
    std::optional<std::uint64_t> shuffle_seed; ///< per-epoch sample shuffling when set
    double target_accuracy = 1.0;
};

inline void validate_config(const TrainConfig& cfg) {
    if (cfg.learning_rate <= 0.0) throw ShapeError("learning rate must be positive");
    if (cfg.max_epochs < 1) throw ShapeError("max_epochs must be >= 1");
    if (cfg.target_accuracy <= 0.0 || cfg.target_accuracy > 1.0)
        throw ShapeError("target accuracy must be in (0, 1]");
}

struct TrainReport {
    int epochs_run = 0;
    double final_accuracy = 0.0;
    bool converged = false;
    std::vector<int> per_epoch_errors;    ///< online misclassification count per epoch
    long degenerate_zero_count = 0;       ///< zero weighted sums seen while training
};

/// Epochs of online error correction over the dataset, in file order or in a
/// seeded per-epoch shuffle. Stops at the first epoch whose accuracy reaches
/// the target, else after max_epochs.
inline std::pair<NeuronModel, TrainReport> train(NeuronModel model, const Dataset& ds,
                                                 const TrainConfig& cfg) {
    validate_config(cfg);
    validate_dataset(ds);
    if (ds.k != model.k || ds.n != model.n) throw ShapeError("dataset does not match the neuron");

    const double d = static_cast<double>(ds.samples.size());
    std::vector<size_t> order(ds.samples.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::optional<Rng> shuffler;
    if (cfg.shuffle_seed) shuffler.emplace(*cfg.shuffle_seed);

    TrainReport report;
    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        if (shuffler) shuffler->shuffle(order);
        int errors = 0;
        for (size_t idx : order) {
            const Sample& s = ds.samples[idx];
            ForwardResult fr = forward(model, s.inputs);
            if (fr.degenerate) ++report.degenerate_zero_count;
            if (fr.output != s.target) {
                ++errors;
                Complex delta = sector_value(s.target) - sector_value(fr.output);
                detail::shift_weights(model, s.inputs, delta, cfg.learning_rate);
            }
        }
        report.per_epoch_errors.push_back(errors);
        ++report.epochs_run;
        report.final_accuracy = (d - errors) / d;
        if (report.final_accuracy >= cfg.target_accuracy) {
            report.converged = true;
            break;
        }
    }
    return {std::move(model), std::move(report)};
}

struct EvalReport {
    double accuracy = 0.0;
    std::vector<std::vector<long>> confusion; ///< confusion[target.j][output.j]
    double mean_angular_error = 0.0;          ///< mean |wrapped angle| between output and target
};

inline EvalReport evaluate(const NeuronModel& model, const Dataset& ds) {
    validate_dataset(ds);
    if (ds.k != model.k || ds.n != model.n) throw ShapeError("dataset does not match the neuron");
    EvalReport report;
    report.confusion.assign(static_cast<size_t>(model.k),
                            std::vector<long>(static_cast<size_t>(model.k), 0));
    long correct = 0;
    double angular_sum = 0.0;
    for (const Sample& s : ds.samples) {
        ForwardResult fr = forward(model, s.inputs);
        report.confusion[static_cast<size_t>(s.target.j)][static_cast<size_t>(fr.output.j)]++;
        if (fr.output == s.target) ++correct;
        angular_sum += std::abs(std::remainder(fr.output.phase() - s.target.phase(), two_pi));
    }
    double d = static_cast<double>(ds.samples.size());
    report.accuracy = static_cast<double>(correct) / d;
    report.mean_angular_error = angular_sum / d;
    return report;
}

/// The four-sample parity problem that a single k=4 neuron can solve: inputs
/// are +/-1 (sectors 0 and 2), targets are the sectors the solving weight
/// triple (0, 1, i) produces, whose parity is the XOR of the inputs.
inline Dataset xor_dataset_k4() {
    Dataset ds{4, 2, {}};
    ds.samples.push_back(sector_sample(4, {0, 0}, 0));
    ds.samples.push_back(sector_sample(4, {2, 0}, 1));
    ds.samples.push_back(sector_sample(4, {0, 2}, 3));
    ds.samples.push_back(sector_sample(4, {2, 2}, 2));
    return ds;
}

} // namespace mvqn
