#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mvqn/errors.hpp"
#include "mvqn/quadrature.hpp"
#include "mvqn/unity.hpp"

namespace mvqn {

/// Holomorphic-representation states over two boson modes.
///
/// A state is a sparse complex combination of the normalized monomials
///   f_{n1,n2} = z^{n1} w^{n2} / sqrt(n1! n2!),
/// which are orthonormal under the Gaussian-measure inner product at t = 1.
/// Multiplication by a mode variable is the creation operator of that mode,
/// differentiation is annihilation; everything else here (oscillator
/// Hamiltonian, angular-momentum operators, spin <-> occupation bookkeeping)
/// is built from those two.

namespace detail {

inline double factorial(int n) {
    static const std::vector<double> table = [] {
        std::vector<double> t(171);
        t[0] = 1.0;
        for (int i = 1; i <= 170; ++i) t[i] = t[i - 1] * static_cast<double>(i);
        return t;
    }();
    if (n < 0 || n > 170) throw ShapeError("factorial argument out of range");
    return table[static_cast<size_t>(n)];
}

inline double sqrt_factorial(int n) { return std::sqrt(factorial(n)); }

} // namespace detail

/// Occupation-number key (n1, n2) of a normalized monomial.
struct Occupation {
    int n1 = 0;
    int n2 = 0;
    friend auto operator<=>(const Occupation&, const Occupation&) = default;
};

enum class Mode { z, w };

class TwoModeState {
public:
    /// Coefficients with modulus below this are dropped after every operation,
    /// so rounding residue cannot accumulate through composed operators.
    static constexpr double prune_threshold = 1e-15;

    using TermMap = std::map<Occupation, Complex>;

    TwoModeState() = default;

    static TwoModeState zero() { return {}; }

    const TermMap& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    Complex coefficient(Occupation occ) const {
        auto it = terms_.find(occ);
        return it == terms_.end() ? Complex{0.0, 0.0} : it->second;
    }

    /// Adds c * f_{n1,n2} into the state.
    void add_term(Occupation occ, Complex c) {
        if (occ.n1 < 0 || occ.n2 < 0) throw ShapeError("occupation numbers must be non-negative");
        auto [it, inserted] = terms_.try_emplace(occ, c);
        if (!inserted) it->second += c;
        if (std::abs(it->second) < prune_threshold) terms_.erase(it);
    }

    TwoModeState& operator+=(const TwoModeState& rhs) {
        for (const auto& [occ, c] : rhs.terms_) add_term(occ, c);
        return *this;
    }

    TwoModeState& operator-=(const TwoModeState& rhs) {
        for (const auto& [occ, c] : rhs.terms_) add_term(occ, -c);
        return *this;
    }

    TwoModeState& operator*=(Complex scale) {
        for (auto it = terms_.begin(); it != terms_.end();) {
            it->second *= scale;
            if (std::abs(it->second) < prune_threshold)
                it = terms_.erase(it);
            else
                ++it;
        }
        return *this;
    }

    friend TwoModeState operator+(TwoModeState a, const TwoModeState& b) { return a += b; }
    friend TwoModeState operator-(TwoModeState a, const TwoModeState& b) { return a -= b; }
    friend TwoModeState operator*(Complex s, TwoModeState a) { return a *= s; }
    friend TwoModeState operator*(TwoModeState a, Complex s) { return a *= s; }

    /// True when every stored term has w-occupation zero.
    bool single_mode() const {
        return std::all_of(terms_.begin(), terms_.end(),
                           [](const auto& kv) { return kv.first.n2 == 0; });
    }

    int max_degree(Mode m) const {
        int d = 0;
        for (const auto& [occ, c] : terms_) d = std::max(d, m == Mode::z ? occ.n1 : occ.n2);
        return d;
    }

    /// Pointwise value of the state as a holomorphic function of (z, w).
    Complex evaluate(Complex z, Complex w) const {
        Complex total{0.0, 0.0};
        for (const auto& [occ, c] : terms_) {
            Complex zp{1.0, 0.0};
            for (int i = 0; i < occ.n1; ++i) zp *= z;
            Complex wp{1.0, 0.0};
            for (int i = 0; i < occ.n2; ++i) wp *= w;
            total += c * zp * wp / (detail::sqrt_factorial(occ.n1) * detail::sqrt_factorial(occ.n2));
        }
        return total;
    }

private:
    TermMap terms_;
};

/// Largest |a_c - b_c| over the union of the two states' terms.
inline double infinity_distance(const TwoModeState& a, const TwoModeState& b) {
    double d = 0.0;
    for (const auto& [occ, c] : a.terms()) d = std::max(d, std::abs(c - b.coefficient(occ)));
    for (const auto& [occ, c] : b.terms()) d = std::max(d, std::abs(a.coefficient(occ) - c));
    return d;
}

/// The basis state f_{n1,n2} itself.
inline TwoModeState monomial(int n1, int n2) {
    if (n1 < 0 || n2 < 0) throw ShapeError("occupation numbers must be non-negative");
    TwoModeState s;
    s.add_term({n1, n2}, Complex{1.0, 0.0});
    return s;
}

/// Truncated coherent state: e^{-|alpha|^2/2} sum_{n<=truncation} alpha^n / sqrt(n!) f_{n,0}.
/// The squared norm approaches 1 as the truncation grows.
inline TwoModeState coherent_state(Complex alpha, int truncation) {
    if (truncation < 0) throw ShapeError("truncation must be non-negative");
    TwoModeState s;
    double damp = std::exp(-0.5 * std::norm(alpha));
    Complex alpha_pow{1.0, 0.0};
    for (int n = 0; n <= truncation; ++n) {
        s.add_term({n, 0}, damp * alpha_pow / detail::sqrt_factorial(n));
        alpha_pow *= alpha;
    }
    return s;
}

/// <f|g> in the normalized basis: the plain sesquilinear coefficient sum,
/// conjugating f. Valid because the f_{n1,n2} are orthonormal at t = 1.
inline Complex inner_product_analytic(const TwoModeState& f, const TwoModeState& g) {
    const auto& small = f.term_count() <= g.term_count() ? f : g;
    const auto& other = f.term_count() <= g.term_count() ? g : f;
    bool small_is_f = &small == &f;
    Complex total{0.0, 0.0};
    for (const auto& [occ, c] : small.terms()) {
        Complex oc = other.coefficient(occ);
        total += small_is_f ? std::conj(c) * oc : std::conj(oc) * c;
    }
    return total;
}

inline double norm_squared(const TwoModeState& s) { return inner_product_analytic(s, s).real(); }

/// Measure parameter and node counts for the numerically integrated inner
/// product. Exactness needs radial_nodes >= degree+1 and angular_nodes >=
/// 2*degree+1 per mode, where degree is the larger of the two states' degrees
/// in that mode.
struct InnerProductConfig {
    double t = 1.0;
    int radial_nodes = 12;
    int angular_nodes = 24;
};

struct QuadratureValue {
    Complex value;
    bool node_warning = false; ///< node counts below the documented sufficiency bound
};

/// Gaussian-measure inner product
///   (pi t)^{-2} int conj(f) g e^{-(|z|^2+|w|^2)/t} dz dw
/// evaluated numerically: per mode, radial Gauss–Laguerre in |z|^2/t crossed
/// with a uniform angular grid. The substitution makes the weight exactly
/// e^{-s}, so the rule is exact at sufficient node counts; the only measure
/// dependence left is the sqrt(t) scaling of the sample points.
inline QuadratureValue inner_product_quadrature(const TwoModeState& f, const TwoModeState& g,
                                                const InnerProductConfig& cfg) {
    if (cfg.t <= 0.0) throw ShapeError("measure parameter t must be positive");
    if (cfg.radial_nodes < 1 || cfg.angular_nodes < 1) throw ShapeError("node counts must be >= 1");

    QuadratureValue out;
    int dz = std::max(f.max_degree(Mode::z), g.max_degree(Mode::z));
    int dw = std::max(f.max_degree(Mode::w), g.max_degree(Mode::w));
    int dmax = std::max(dz, dw);
    out.node_warning = cfg.radial_nodes < dmax + 1 || cfg.angular_nodes < 2 * dmax + 1;

    QuadratureRule radial = gauss_laguerre(cfg.radial_nodes);
    int m = cfg.angular_nodes;

    // Sample points and combined weights for one complex mode. The angular
    // rule carries weight 1/m per node: (pi t)^{-1} dz -> e^{-s} ds dtheta/(2 pi).
    std::vector<Complex> points;
    std::vector<double> weights;
    points.reserve(static_cast<size_t>(cfg.radial_nodes) * m);
    weights.reserve(points.capacity());
    for (int i = 0; i < cfg.radial_nodes; ++i) {
        double r = std::sqrt(cfg.t * radial.nodes[i]);
        double wgt = radial.weights[i] / static_cast<double>(m);
        for (int a = 0; a < m; ++a) {
            points.push_back(std::polar(r, two_pi * a / m));
            weights.push_back(wgt);
        }
    }

    Complex total{0.0, 0.0};
    for (size_t zi = 0; zi < points.size(); ++zi) {
        Complex partial{0.0, 0.0};
        for (size_t wi = 0; wi < points.size(); ++wi) {
            partial += weights[wi] * std::conj(f.evaluate(points[zi], points[wi])) *
                       g.evaluate(points[zi], points[wi]);
        }
        total += weights[zi] * partial;
    }
    out.value = total;
    return out;
}

/// Creation operator of the given mode: multiplication by z (or w) expressed
/// in the normalized basis, f_{n,.} -> sqrt(n+1) f_{n+1,.}.
inline TwoModeState apply_create(const TwoModeState& state, Mode mode) {
    TwoModeState out;
    for (const auto& [occ, c] : state.terms()) {
        if (mode == Mode::z)
            out.add_term({occ.n1 + 1, occ.n2}, c * std::sqrt(static_cast<double>(occ.n1 + 1)));
        else
            out.add_term({occ.n1, occ.n2 + 1}, c * std::sqrt(static_cast<double>(occ.n2 + 1)));
    }
    return out;
}

/// Annihilation operator: d/dz (or d/dw) in the normalized basis,
/// f_{n,.} -> sqrt(n) f_{n-1,.}; the vacuum of that mode is killed.
inline TwoModeState apply_annihilate(const TwoModeState& state, Mode mode) {
    TwoModeState out;
    for (const auto& [occ, c] : state.terms()) {
        int n = mode == Mode::z ? occ.n1 : occ.n2;
        if (n == 0) continue;
        if (mode == Mode::z)
            out.add_term({occ.n1 - 1, occ.n2}, c * std::sqrt(static_cast<double>(n)));
        else
            out.add_term({occ.n1, occ.n2 - 1}, c * std::sqrt(static_cast<double>(n)));
    }
    return out;
}

struct OscillatorConfig {
    double hbar_omega = 1.0;
};

/// Harmonic-oscillator Hamiltonian hbar*omega (z d/dz + 1/2) on one-mode
/// states: each f_{n,0} picks up the energy hbar*omega (n + 1/2).
inline TwoModeState apply_hamiltonian(const TwoModeState& state, const OscillatorConfig& cfg) {
    if (cfg.hbar_omega <= 0.0) throw ShapeError("energy quantum must be positive");
    if (!state.single_mode()) throw ShapeError("oscillator Hamiltonian expects a one-mode state");
    TwoModeState out;
    for (const auto& [occ, c] : state.terms())
        out.add_term(occ, c * cfg.hbar_omega * (static_cast<double>(occ.n1) + 0.5));
    return out;
}

enum class SpinOperator { Jx, Jy, Jz, Jsquared };

/// Two-mode boson realization of the angular-momentum algebra:
///   Jx = (z d/dw + w d/dz)/2, Jy = -i (z d/dw - w d/dz)/2,
///   Jz = (z d/dz - w d/dw)/2, and J^2 = Jx^2 + Jy^2 + Jz^2.
/// Jz is diagonal on the basis with eigenvalue (n1 - n2)/2, so it is applied
/// directly; the transverse operators are composed from the ladder pair.
inline TwoModeState apply_spin(SpinOperator op, const TwoModeState& state) {
    switch (op) {
    case SpinOperator::Jx: {
        TwoModeState raise_z = apply_create(apply_annihilate(state, Mode::w), Mode::z);
        TwoModeState raise_w = apply_create(apply_annihilate(state, Mode::z), Mode::w);
        return Complex{0.5, 0.0} * (raise_z + raise_w);
    }
    case SpinOperator::Jy: {
        TwoModeState raise_z = apply_create(apply_annihilate(state, Mode::w), Mode::z);
        TwoModeState raise_w = apply_create(apply_annihilate(state, Mode::z), Mode::w);
        return Complex{0.0, -0.5} * (raise_z - raise_w);
    }
    case SpinOperator::Jz: {
        TwoModeState out;
        for (const auto& [occ, c] : state.terms())
            out.add_term(occ, c * 0.5 * static_cast<double>(occ.n1 - occ.n2));
        return out;
    }
    case SpinOperator::Jsquared: {
        TwoModeState total = apply_spin(SpinOperator::Jx, apply_spin(SpinOperator::Jx, state));
        total += apply_spin(SpinOperator::Jy, apply_spin(SpinOperator::Jy, state));
        total += apply_spin(SpinOperator::Jz, apply_spin(SpinOperator::Jz, state));
        return total;
    }
    }
    throw ShapeError("unknown spin operator");
}

/// Angular-momentum labels (j, m) stored doubled so half-integers stay exact.
struct SpinLabel {
    int two_j = 0;
    int two_m = 0;

    SpinLabel() = default;

    SpinLabel(int tj, int tm) : two_j(tj), two_m(tm) {
        if (tj < 0) throw ShapeError("2j must be non-negative");
        if (std::abs(tm) > tj) throw ShapeError("|m| must not exceed j");
        if ((tj + tm) % 2 != 0) throw ShapeError("j and m must differ by an integer");
    }

    friend bool operator==(const SpinLabel&, const SpinLabel&) = default;
};

/// j = (n1+n2)/2, m = (n1-n2)/2, inverted: n1 = j+m, n2 = j-m.
inline Occupation spin_to_occupation(const SpinLabel& s) {
    return {(s.two_j + s.two_m) / 2, (s.two_j - s.two_m) / 2};
}

inline SpinLabel occupation_to_spin(int n1, int n2) {
    if (n1 < 0 || n2 < 0) throw ShapeError("occupation numbers must be non-negative");
    return SpinLabel(n1 + n2, n1 - n2);
}

/// Roots-of-unity encoding of a basis state: with N = n1 + n2 + 1 distinct
/// states at this spin, f_{n1,n2} carries the phase pair (e_N^{n1}, e_N^{n2}).
/// Moduli are not observable, so only the sector pair is returned.
inline std::pair<Sector, Sector> encode_state_roots(int n1, int n2) {
    if (n1 < 0 || n2 < 0) throw ShapeError("occupation numbers must be non-negative");
    int order = n1 + n2 + 1;
    return {Sector(order, n1), Sector(order, n2)};
}

/// One row of the spin <-> roots-of-unity mapping table.
struct TableRow {
    Sector root_z;
    Sector root_w;
    Sector product; ///< always e_N^{N-1} within a block
    int n1 = 0;
    int n2 = 0;
    SpinLabel spin;
    std::string monomial_description;
};

namespace detail {

/// Canonical text for z^{n1} w^{n2} / sqrt(n1! n2!): factors ordered z then w,
/// exponent 1 and the sqrt(1) denominator omitted, e.g. "z^3 w / sqrt(6)".
inline std::string monomial_text(int n1, int n2) {
    if (n1 == 0 && n2 == 0) return "1";
    std::string text;
    if (n1 == 1)
        text += "z";
    else if (n1 > 1)
        text += "z^" + std::to_string(n1);
    if (n2 >= 1) {
        if (!text.empty()) text += " ";
        text += n2 == 1 ? "w" : "w^" + std::to_string(n2);
    }
    // n1! * n2! stays within 64 bits for every supported spin (2j <= 20).
    std::uint64_t denom = 1;
    for (int i = 2; i <= n1; ++i) denom *= static_cast<std::uint64_t>(i);
    for (int i = 2; i <= n2; ++i) denom *= static_cast<std::uint64_t>(i);
    if (denom > 1) text += " / sqrt(" + std::to_string(denom) + ")";
    return text;
}

} // namespace detail

/// The mapping between basis states and root-of-unity pairs for one spin
/// block: a row per m from j down to -j. Capped at 2j = 20 so the denominator
/// arithmetic stays exact.
inline std::vector<TableRow> table_rows(int two_j) {
    if (two_j < 1) throw ShapeError("table needs 2j >= 1");
    if (two_j > 20) throw ShapeError("table supports 2j <= 20");
    int order = two_j + 1;
    std::vector<TableRow> rows;
    rows.reserve(static_cast<size_t>(order));
    for (int two_m = two_j; two_m >= -two_j; two_m -= 2) {
        SpinLabel spin(two_j, two_m);
        Occupation occ = spin_to_occupation(spin);
        TableRow row;
        row.root_z = Sector(order, occ.n1);
        row.root_w = Sector(order, occ.n2);
        row.product = sector_mul(row.root_z, row.root_w);
        row.n1 = occ.n1;
        row.n2 = occ.n2;
        row.spin = spin;
        row.monomial_description = detail::monomial_text(occ.n1, occ.n2);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace mvqn
