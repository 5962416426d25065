#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mvqn/network.hpp"

using namespace mvqn;

namespace {

NetworkModel single_neuron_net(const NeuronModel& nm) {
    NetworkModel net{nm.n, {Layer{LayerSpec{1, nm.k}, {nm}}}};
    validate_network(net);
    return net;
}

} // namespace

TEST_CASE("a single-layer network forwards exactly like its neurons") {
    NeuronModel nm(4, 2, {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
    NetworkModel net = single_neuron_net(nm);
    Dataset ds = xor_dataset_k4();
    for (const Sample& s : ds.samples) {
        NetForwardResult nf = net_forward(net, s.inputs);
        ForwardResult fr = forward(nm, s.inputs);
        CHECK(nf.outputs.size() == 1);
        CHECK(nf.outputs[0] == fr.output);
        CHECK(nf.activations[0].weighted_sums[0] == fr.weighted_sum);
    }
}

TEST_CASE("a pass-through output layer relays the hidden neuron") {
    NeuronModel hidden(4, 2, {{0.1, 0.2}, {0.5, -0.3}, {-0.2, 0.4}});
    NeuronModel relay(4, 1, {{0.0, 0.0}, {1.0, 0.0}});
    NetworkModel net{2, {Layer{LayerSpec{1, 4}, {hidden}}, Layer{LayerSpec{1, 4}, {relay}}}};
    validate_network(net);
    std::vector<Complex> in{sector_value(Sector(4, 1)), sector_value(Sector(4, 3))};
    NetForwardResult nf = net_forward(net, in);
    CHECK(nf.outputs[0] == forward(hidden, in).output);
}

TEST_CASE("a chain of identity neurons reproduces the input sector") {
    for (int k : {3, 5, 8}) {
        NeuronModel identity(k, 1, {{0.0, 0.0}, {1.0, 0.0}});
        NetworkModel net{1, {Layer{LayerSpec{1, k}, {identity}}, Layer{LayerSpec{1, k}, {identity}}}};
        for (int j = 0; j < k; ++j) {
            std::vector<Complex> in{sector_value(Sector(k, j))};
            CHECK(net_forward(net, in).outputs[0] == Sector(k, j));
        }
    }
}

TEST_CASE("intermediate layer signals stay on the unit circle") {
    Rng rng(17);
    std::vector<LayerSpec> specs{{3, 4}, {2, 4}, {1, 4}};
    NetworkModel net = random_network(2, specs, rng);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Complex> in{rng.unit_complex(), rng.unit_complex()};
        NetForwardResult nf = net_forward(net, in);
        for (const LayerActivation& act : nf.activations)
            for (const Sector& s : act.outputs)
                CHECK(std::abs(std::abs(sector_value(s)) - 1.0) < 1e-12);
    }
}

TEST_CASE("forward is pure: repeated calls agree bitwise") {
    Rng rng(23);
    NetworkModel net = random_network(2, std::vector<LayerSpec>{{2, 2}, {1, 2}}, rng);
    std::vector<Complex> in{sector_value(Sector(2, 0)), sector_value(Sector(2, 1))};
    NetForwardResult a = net_forward(net, in);
    NetForwardResult b = net_forward(net, in);
    CHECK(a.outputs == b.outputs);
    for (size_t l = 0; l < a.activations.size(); ++l)
        CHECK(a.activations[l].weighted_sums == b.activations[l].weighted_sums);
}

TEST_CASE("shape mismatches are rejected") {
    Rng rng(3);
    NetworkModel net = random_network(2, std::vector<LayerSpec>{{2, 2}, {1, 2}}, rng);
    CHECK_THROWS_AS(net_forward(net, std::vector<Complex>{{1.0, 0.0}}), ShapeError);

    NetDataset bad = xor_dataset_k2();
    bad.n = 1;
    for (auto& s : bad.samples) s.inputs.resize(1);
    CHECK_THROWS_AS(net_train(net, bad, TrainConfig{}), ShapeError);

    NetDataset empty{2, 2, 1, {}};
    CHECK_THROWS_AS(net_evaluate(net, empty), ShapeError);

    CHECK_THROWS_AS(net_train(net, xor_dataset_k2(), TrainConfig{1.0, 0, {}, 1.0}), ShapeError);
}

TEST_CASE("single-layer training is bit-identical to the neuron trainer") {
    Dataset ds = xor_dataset_k4();
    NetDataset nds = to_net_dataset(ds);
    for (std::uint64_t seed : {1ull, 5ull, 11ull}) {
        Rng r1(seed);
        Rng r2(seed);
        TrainConfig cfg{1.0, 150, seed, 1.0};
        auto [neuron, rep] = train(random_neuron(4, 2, r1), ds, cfg);
        auto [net, nrep] = net_train(random_network(2, std::vector<LayerSpec>{{1, 4}}, r2), nds, cfg);
        CHECK(net.layers[0].neurons[0].weights == neuron.weights);
        CHECK(rep.epochs_run == nrep.epochs_run);
        CHECK(rep.per_epoch_errors == nrep.per_epoch_errors);
        CHECK(rep.final_accuracy == nrep.final_accuracy);
        CHECK(rep.converged == nrep.converged);
        CHECK(rep.degenerate_zero_count == nrep.degenerate_zero_count);
    }
}

TEST_CASE("a 2-2-1 network learns XOR at k = 2") {
    NetDataset ds = xor_dataset_k2();
    std::vector<LayerSpec> specs{{2, 2}, {1, 2}};
    int converged = 0;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        Rng rng(seed);
        auto [net, rep] = net_train(random_network(2, specs, rng), ds, TrainConfig{1.0, 2000, seed, 1.0});
        if (rep.converged) {
            ++converged;
            CHECK(net_evaluate(net, ds).accuracy == 1.0);
        }
    }
    CHECK(converged >= 3);
}

TEST_CASE("net training is deterministic given the seed") {
    NetDataset ds = xor_dataset_k2();
    std::vector<LayerSpec> specs{{2, 2}, {1, 2}};
    TrainConfig cfg{1.0, 500, 9ull, 1.0};
    Rng r1(9);
    Rng r2(9);
    auto [n1, rep1] = net_train(random_network(2, specs, r1), ds, cfg);
    auto [n2, rep2] = net_train(random_network(2, specs, r2), ds, cfg);
    for (size_t l = 0; l < n1.layers.size(); ++l)
        for (size_t i = 0; i < n1.layers[l].neurons.size(); ++i)
            CHECK(n1.layers[l].neurons[i].weights == n2.layers[l].neurons[i].weights);
    CHECK(rep1.per_epoch_errors == rep2.per_epoch_errors);
}

TEST_CASE("net_evaluate matches the single-neuron evaluation") {
    NeuronModel solved(4, 2, {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
    NetworkModel net = single_neuron_net(solved);
    Dataset ds = xor_dataset_k4();
    EvalReport er = evaluate(solved, ds);
    NetEvalReport ner = net_evaluate(net, to_net_dataset(ds));
    CHECK(ner.accuracy == er.accuracy);
    CHECK(ner.per_output.size() == 1);
    CHECK(ner.per_output[0].accuracy == er.accuracy);
    CHECK(ner.per_output[0].confusion == er.confusion);
    CHECK(ner.per_output[0].mean_angular_error == er.mean_angular_error);
    CHECK(ner.accuracy == 1.0);
}

TEST_CASE("training leaves a fully correct dataset untouched") {
    NeuronModel solved(4, 2, {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
    NetworkModel net = single_neuron_net(solved);
    auto [trained, rep] = net_train(net, to_net_dataset(xor_dataset_k4()), TrainConfig{1.0, 10, {}, 1.0});
    CHECK(rep.epochs_run == 1);
    CHECK(rep.converged);
    CHECK(trained.layers[0].neurons[0].weights == solved.weights);
}
