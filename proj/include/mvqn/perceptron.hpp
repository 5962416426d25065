#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mvqn/bargmann.hpp"
#include "mvqn/errors.hpp"
#include "mvqn/rng.hpp"
#include "mvqn/unity.hpp"

namespace mvqn {

/// Linear quantum perceptron: qubit inputs |x_j> = alpha_j|0> + beta_j|1>,
/// output |y> = sum_j w_j |x_j> with matrix or scalar weights, trained by the
/// ket-bra rule w_j <- w_j + eta (|d> - |y>)<x_j|. For normalized inputs the
/// squared error contracts by exactly (1 - eta n)^2 per step; the output is
/// deliberately never renormalized, as the contraction law lives on the raw
/// linear combination.

struct QubitState {
    Complex alpha{0.0, 0.0}; ///< coefficient of |0> (Bargmann monomial z)
    Complex beta{0.0, 0.0};  ///< coefficient of |1> (Bargmann monomial w)

    double norm_squared() const { return std::norm(alpha) + std::norm(beta); }

    friend QubitState operator+(QubitState a, const QubitState& b) {
        return {a.alpha + b.alpha, a.beta + b.beta};
    }
    friend QubitState operator-(QubitState a, const QubitState& b) {
        return {a.alpha - b.alpha, a.beta - b.beta};
    }
    friend QubitState operator*(Complex s, const QubitState& x) {
        return {s * x.alpha, s * x.beta};
    }
    friend bool operator==(const QubitState&, const QubitState&) = default;
};

inline double distance_squared(const QubitState& a, const QubitState& b) {
    return (a - b).norm_squared();
}

inline QubitState normalized(QubitState x) {
    double mag = std::sqrt(x.norm_squared());
    if (mag == 0.0) throw DegenerateError("cannot normalize the zero state");
    return {x.alpha / mag, x.beta / mag};
}

/// 2x2 complex weight acting on the |0>, |1> coefficients.
struct MatrixWeight {
    Complex m00{0.0, 0.0}, m01{0.0, 0.0};
    Complex m10{0.0, 0.0}, m11{0.0, 0.0};

    QubitState apply(const QubitState& x) const {
        return {m00 * x.alpha + m01 * x.beta, m10 * x.alpha + m11 * x.beta};
    }

    static MatrixWeight identity() { return {{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}; }

    /// |u><v| with <v| the conjugate row of v.
    static MatrixWeight outer(const QubitState& u, const QubitState& v) {
        Complex va = std::conj(v.alpha);
        Complex vb = std::conj(v.beta);
        return {u.alpha * va, u.alpha * vb, u.beta * va, u.beta * vb};
    }

    MatrixWeight& operator+=(const MatrixWeight& rhs) {
        m00 += rhs.m00;
        m01 += rhs.m01;
        m10 += rhs.m10;
        m11 += rhs.m11;
        return *this;
    }
    friend MatrixWeight operator*(Complex s, const MatrixWeight& w) {
        return {s * w.m00, s * w.m01, s * w.m10, s * w.m11};
    }
    friend bool operator==(const MatrixWeight&, const MatrixWeight&) = default;
};

/// Weight set: one 2x2 matrix per input, or one complex scalar per input.
struct PerceptronModel {
    std::variant<std::vector<MatrixWeight>, std::vector<Complex>> weights;

    bool matrix_mode() const { return weights.index() == 0; }

    size_t arity() const {
        return matrix_mode() ? std::get<0>(weights).size() : std::get<1>(weights).size();
    }

    static PerceptronModel zero_matrix(size_t n) {
        return {std::vector<MatrixWeight>(n)};
    }
    static PerceptronModel zero_scalar(size_t n) {
        return {std::vector<Complex>(n, Complex{0.0, 0.0})};
    }
};

inline PerceptronModel random_matrix_perceptron(size_t n, Rng& rng) {
    std::vector<MatrixWeight> w(n);
    for (auto& m : w)
        m = {rng.box_complex(0.5), rng.box_complex(0.5), rng.box_complex(0.5), rng.box_complex(0.5)};
    return {std::move(w)};
}

inline QubitState random_qubit(Rng& rng) { return normalized({rng.box_complex(1.0), rng.box_complex(1.0)}); }

/// |y> = sum_j w_j |x_j>, a raw linear combination.
inline QubitState qp_forward(const PerceptronModel& model, std::span<const QubitState> inputs) {
    if (inputs.size() != model.arity()) throw ShapeError("perceptron arity mismatch");
    QubitState y;
    if (model.matrix_mode()) {
        const auto& w = std::get<0>(model.weights);
        for (size_t j = 0; j < inputs.size(); ++j) y = y + w[j].apply(inputs[j]);
    } else {
        const auto& w = std::get<1>(model.weights);
        for (size_t j = 0; j < inputs.size(); ++j) y = y + w[j] * inputs[j];
    }
    return y;
}

/// Ket-bra learning rule. Matrix mode: w_j += eta |d - y><x_j|. Scalar mode
/// cannot absorb an outer product, so the scalar picks up the projection of
/// the error onto its input: w_j += eta <x_j | d - y>.
inline PerceptronModel qp_update(PerceptronModel model, std::span<const QubitState> inputs,
                                 const QubitState& desired, const QubitState& y, double eta) {
    if (inputs.size() != model.arity()) throw ShapeError("perceptron arity mismatch");
    QubitState error = desired - y;
    if (model.matrix_mode()) {
        auto& w = std::get<0>(model.weights);
        for (size_t j = 0; j < inputs.size(); ++j)
            w[j] += Complex{eta, 0.0} * MatrixWeight::outer(error, inputs[j]);
    } else {
        auto& w = std::get<1>(model.weights);
        for (size_t j = 0; j < inputs.size(); ++j)
            w[j] += eta * (std::conj(inputs[j].alpha) * error.alpha +
                           std::conj(inputs[j].beta) * error.beta);
    }
    return model;
}

struct PerceptronStep {
    QubitState output;
    double squared_error = 0.0;
    std::optional<double> contraction_ratio; ///< error(t)/error(t-1), step 2 onward
};

struct PerceptronTrace {
    std::vector<PerceptronStep> steps;
    bool eta_outside_contraction_range = false; ///< eta not in (0, 1/n)
};

/// Runs `steps` rounds of forward + update against a fixed input set and
/// desired state. Inputs must be normalized (within 1e-9); that is the only
/// hypothesis the contraction law needs, so with eta in (0, 1/n) every
/// recorded ratio equals (1 - eta n)^2 up to rounding.
inline std::pair<PerceptronModel, PerceptronTrace> qp_train(PerceptronModel model,
                                                            std::span<const QubitState> inputs,
                                                            const QubitState& desired, double eta,
                                                            int steps) {
    if (steps < 1) throw ShapeError("qp_train needs at least one step");
    if (inputs.size() != model.arity()) throw ShapeError("perceptron arity mismatch");
    if (eta < 0.0) throw ShapeError("eta must be non-negative");
    for (const QubitState& x : inputs)
        if (std::abs(x.norm_squared() - 1.0) > 1e-9)
            throw ShapeError("qp_train requires normalized inputs");

    PerceptronTrace trace;
    double n = static_cast<double>(inputs.size());
    trace.eta_outside_contraction_range = !(eta > 0.0 && eta < 1.0 / n);
    double previous_error = 0.0;
    for (int t = 0; t < steps; ++t) {
        QubitState y = qp_forward(model, inputs);
        PerceptronStep step;
        step.output = y;
        step.squared_error = distance_squared(desired, y);
        if (t > 0 && previous_error > 1e-15)
            step.contraction_ratio = step.squared_error / previous_error;
        previous_error = step.squared_error;
        trace.steps.push_back(step);
        model = qp_update(std::move(model), inputs, desired, y, eta);
    }
    return {std::move(model), std::move(trace)};
}

/// Bargmann form of a qubit: alpha z + beta w in the normalized basis.
inline TwoModeState qubit_to_bargmann(const QubitState& x) {
    TwoModeState s;
    s.add_term({1, 0}, x.alpha);
    s.add_term({0, 1}, x.beta);
    return s;
}

} // namespace mvqn
