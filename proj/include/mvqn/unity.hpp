#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "mvqn/errors.hpp"

namespace mvqn {

using Complex = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// One of the k-th roots of unity, identified by its order k and index j.
/// Sectors are the universal logic value of the library: the alphabet
/// E_k = {1, e^{2*pi*i/k}, ..., e^{2*pi*i(k-1)/k}} encodes k-valued truth
/// values as equally spaced points on the unit circle.
///
/// The constructor reduces any integer index into 0..k-1 (Euclidean
/// remainder), so sector arithmetic never has to re-normalize. Order k = 1
/// is the degenerate one-letter alphabet {1}; it appears only in the
/// vacuum row of the spin-state encoding. Logic code should go through
/// make_sector, which insists on k >= 2.
struct Sector {
    int k = 2; ///< order: how many roots in the alphabet
    int j = 0; ///< index into 0..k-1

    Sector() = default;

    Sector(int order, int index) : k(order) {
        if (order < 1) throw ShapeError("sector order must be >= 1, got " + std::to_string(order));
        j = index % order;
        if (j < 0) j += order;
    }

    /// Angle 2*pi*j/k of this root.
    double phase() const { return two_pi * static_cast<double>(j) / static_cast<double>(k); }

    /// The complex number e^{2*pi*i*j/k} itself. Quarter-turn roots come out
    /// exact, so the k = 2 and k = 4 alphabets are {-1, 1} and {1, i, -1, -i}
    /// with no trigonometric residue.
    Complex value() const {
        long long quarters = 4LL * j;
        if (quarters % k == 0) {
            switch ((quarters / k) % 4) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            case 3: return {0.0, -1.0};
            }
        }
        return std::polar(1.0, phase());
    }

    friend bool operator==(const Sector&, const Sector&) = default;
};

/// k-valued logic constructor: index is reduced mod k, order must be >= 2.
inline Sector make_sector(int k, int j) {
    if (k < 2) throw ShapeError("logic order must be >= 2, got " + std::to_string(k));
    return Sector(k, j);
}

inline Complex sector_value(const Sector& s) { return s.value(); }

/// Group product of two roots of the same order: indices add mod k.
inline Sector sector_mul(const Sector& a, const Sector& b) {
    if (a.k != b.k)
        throw ShapeError("sector order mismatch: " + std::to_string(a.k) + " vs " + std::to_string(b.k));
    return Sector(a.k, a.j + b.j);
}

/// Group inverse: the root with index k - j (mod k).
inline Sector sector_inverse(const Sector& s) { return Sector(s.k, s.k - s.j); }

/// Argument of z normalized into [0, 2*pi). Throws for z = 0, which has no direction.
inline double arg_principal(Complex z) {
    if (z == Complex{0.0, 0.0}) throw DegenerateError("arg of zero is undefined");
    double a = std::arg(z);
    if (a < 0.0) a += two_pi;
    if (a >= two_pi) a = 0.0; // -tiny wrapped onto 2*pi collapses back to 0
    return a;
}

/// Result of the csign activation. `degenerate` marks the z = 0 input, which
/// has no sector of its own and is mapped to Sector(k, 0) by policy so that
/// training loops stay total; callers that care (training statistics) count it.
struct Activation {
    Sector sector;
    bool degenerate = false;
};

/// The k-valued activation: maps any nonzero z to the root of unity whose
/// sector [2*pi*j/k, 2*pi*(j+1)/k) contains arg z. The interval is half-open,
/// so an argument exactly on a lower boundary belongs to that sector.
///
/// A relative epsilon of 1e-12*k is added before flooring so that roots of
/// unity computed in floating point cannot land one sector low; exact roots
/// are fixed points of csign composed with sector_value.
inline Activation csign_activation(Complex z, int k) {
    if (k < 2) throw ShapeError("logic order must be >= 2, got " + std::to_string(k));
    if (z == Complex{0.0, 0.0}) return {Sector(k, 0), true};
    double scaled = arg_principal(z) * static_cast<double>(k) / two_pi;
    int j = static_cast<int>(std::floor(scaled + 1e-12 * static_cast<double>(k)));
    if (j >= k) j -= k;
    return {Sector(k, j), false};
}

inline Sector csign(Complex z, int k) { return csign_activation(z, k).sector; }

/// Hardware-complexity query for a positional number system: radix r,
/// represented range N, and a proportionality constant.
struct RadixCostQuery {
    int radix = 2;
    double range = 2.0;
    double scale = 1.0;
};

/// Cost C = scale * r * log(N)/log(r). Digits needed to span N scale as
/// log N / log r, and hardware per digit scales as r.
inline double radix_cost(const RadixCostQuery& q) {
    if (q.radix < 2) throw ShapeError("radix must be >= 2");
    if (q.range < 2.0) throw ShapeError("range must be >= 2");
    if (q.scale <= 0.0) throw ShapeError("scale must be positive");
    return q.scale * static_cast<double>(q.radix) * std::log(q.range) / std::log(static_cast<double>(q.radix));
}

/// Integer radix in 2..r_max minimizing radix_cost; ties break toward the
/// smaller radix. The continuous minimum sits at r = e, so the scan returns 3
/// for every N once r_max >= 3.
inline int optimal_radix(double range, int r_max) {
    if (range < 2.0) throw ShapeError("range must be >= 2");
    if (r_max < 3) throw ShapeError("r_max must be >= 3");
    int best = 2;
    double best_cost = radix_cost({2, range, 1.0});
    for (int r = 3; r <= r_max; ++r) {
        double c = radix_cost({r, range, 1.0});
        if (c < best_cost) {
            best = r;
            best_cost = c;
        }
    }
    return best;
}

} // namespace mvqn
