#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mvqn/bargmann.hpp"
#include "mvqn/quadrature.hpp"

using namespace mvqn;

namespace {

// Independent oracle for the Gauss-Laguerre rule: int_0^inf e^{-s} s^p ds = p!.
double exact_moment(int p) {
    double f = 1.0;
    for (int i = 2; i <= p; ++i) f *= i;
    return f;
}

TwoModeState random_state(std::mt19937_64& eng, int max_deg, int terms) {
    TwoModeState s;
    auto u = [&] { return (eng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    for (int t = 0; t < terms; ++t) {
        int n1 = static_cast<int>(eng() % static_cast<unsigned>(max_deg + 1));
        int n2 = static_cast<int>(eng() % static_cast<unsigned>(max_deg + 1 - n1));
        s.add_term({n1, n2}, Complex{u(), u()});
    }
    return s;
}

} // namespace

TEST_CASE("Gauss-Laguerre rules reproduce factorial moments") {
    for (int n : {1, 2, 4, 7, 12, 20, 32}) {
        QuadratureRule rule = gauss_laguerre(n);
        REQUIRE(rule.nodes.size() == static_cast<size_t>(n));
        for (int i = 1; i < n; ++i) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
        for (double w : rule.weights) CHECK(w > 0.0);
        for (int p = 0; p <= std::min(2 * n - 1, 14); ++p) {
            double approx = 0.0;
            for (int i = 0; i < n; ++i) approx += rule.weights[i] * std::pow(rule.nodes[i], p);
            CHECK(approx == doctest::Approx(exact_moment(p)).epsilon(1e-10));
        }
    }
    CHECK_THROWS_AS(gauss_laguerre(0), ShapeError);
}

TEST_CASE("monomial builds a single normalized basis term") {
    TwoModeState f10 = monomial(1, 0);
    CHECK(f10.term_count() == 1);
    CHECK(f10.coefficient({1, 0}) == Complex{1.0, 0.0});

    CHECK(monomial(0, 0).coefficient({0, 0}) == Complex{1.0, 0.0});
    CHECK(monomial(4, 0).coefficient({4, 0}) == Complex{1.0, 0.0});
    CHECK_THROWS_AS(monomial(-1, 0), ShapeError);
}

TEST_CASE("coherent states follow the exponential series") {
    TwoModeState vac = coherent_state({0.0, 0.0}, 7);
    CHECK(vac.term_count() == 1);
    CHECK(vac.coefficient({0, 0}) == Complex{1.0, 0.0});

    // oracle: squared norm of the truncated series is e^{-1} * sum_{n<=20} 1/n!
    double series = 0.0;
    double inv_fact = 1.0;
    for (int n = 0; n <= 20; ++n) {
        if (n > 0) inv_fact /= n;
        series += inv_fact;
    }
    double expected = std::exp(-1.0) * series;
    TwoModeState c1 = coherent_state({1.0, 0.0}, 20);
    CHECK(norm_squared(c1) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(norm_squared(c1) == doctest::Approx(1.0).epsilon(1e-12));

    TwoModeState ci = coherent_state({0.0, 1.0}, 0);
    CHECK(ci.term_count() == 1);
    CHECK(ci.coefficient({0, 0}).real() == doctest::Approx(std::exp(-0.5)));
}

TEST_CASE("analytic inner product is the orthonormal coefficient sum") {
    CHECK(inner_product_analytic(monomial(2, 0), monomial(2, 0)) == Complex{1.0, 0.0});
    CHECK(inner_product_analytic(monomial(1, 0), monomial(0, 1)) == Complex{0.0, 0.0});

    TwoModeState a = Complex{2.0, 0.0} * monomial(1, 1);
    TwoModeState b = Complex{0.0, 3.0} * monomial(1, 1);
    CHECK(inner_product_analytic(a, b) == Complex{0.0, 6.0});

    for (int a1 = 0; a1 <= 5; ++a1)
        for (int a2 = 0; a1 + a2 <= 5; ++a2)
            for (int b1 = 0; b1 <= 5; ++b1)
                for (int b2 = 0; b1 + b2 <= 5; ++b2) {
                    Complex ip = inner_product_analytic(monomial(a1, a2), monomial(b1, b2));
                    Complex expect = (a1 == b1 && a2 == b2) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
                    CHECK(ip == expect);
                }
}

TEST_CASE("quadrature inner product matches the analytic one at t = 1") {
    InnerProductConfig cfg{1.0, 12, 24};
    QuadratureValue same = inner_product_quadrature(monomial(2, 0), monomial(2, 0), cfg);
    CHECK_FALSE(same.node_warning);
    CHECK(std::abs(same.value - Complex{1.0, 0.0}) < 1e-9);

    QuadratureValue ortho = inner_product_quadrature(monomial(1, 0), monomial(3, 0), cfg);
    CHECK(std::abs(ortho.value) < 1e-9);

    std::mt19937_64 eng(5);
    for (int trial = 0; trial < 12; ++trial) {
        TwoModeState f = random_state(eng, 5, 4);
        TwoModeState g = random_state(eng, 5, 4);
        Complex analytic = inner_product_analytic(f, g);
        QuadratureValue quad = inner_product_quadrature(f, g, cfg);
        CHECK(std::abs(quad.value - analytic) < 1e-9);
    }
}

TEST_CASE("quadrature reproduces the t^n n! norm of raw monomials") {
    // z^n = sqrt(n!) f_{n,0}; its squared norm under the t-measure is t^n n!.
    for (int n = 0; n <= 6; ++n) {
        double scale = 1.0;
        for (int i = 2; i <= n; ++i) scale *= i;
        TwoModeState zn = Complex{std::sqrt(scale), 0.0} * monomial(n, 0);
        QuadratureValue v = inner_product_quadrature(zn, zn, {2.0, 10, 16});
        double expected = std::pow(2.0, n) * scale;
        CHECK(std::abs(v.value - Complex{expected, 0.0}) < 1e-9 * expected);
    }
    QuadratureValue one = inner_product_quadrature(monomial(1, 0), monomial(1, 0), {2.0, 10, 16});
    CHECK(one.value.real() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("quadrature flags insufficient node counts") {
    QuadratureValue v = inner_product_quadrature(monomial(6, 0), monomial(6, 0), {1.0, 3, 5});
    CHECK(v.node_warning);
    CHECK_THROWS_AS(inner_product_quadrature(monomial(1, 0), monomial(1, 0), {0.0, 4, 4}),
                    ShapeError);
    CHECK_THROWS_AS(inner_product_quadrature(monomial(1, 0), monomial(1, 0), {1.0, 0, 4}),
                    ShapeError);
}

TEST_CASE("creation and annihilation act as sqrt-weighted shifts") {
    CHECK(apply_create(monomial(0, 0), Mode::z).coefficient({1, 0}) == Complex{1.0, 0.0});

    // z * z = z^2 = sqrt(2) f_20
    TwoModeState up = apply_create(monomial(1, 0), Mode::z);
    CHECK(up.term_count() == 1);
    CHECK(up.coefficient({2, 0}).real() == doctest::Approx(std::sqrt(2.0)));

    TwoModeState upw = apply_create(monomial(3, 1), Mode::w);
    CHECK(upw.coefficient({3, 2}).real() == doctest::Approx(std::sqrt(2.0)));

    CHECK(apply_annihilate(monomial(0, 0), Mode::z).empty());
    TwoModeState down = apply_annihilate(monomial(2, 0), Mode::z);
    CHECK(down.coefficient({1, 0}).real() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("the ladder commutator is the identity") {
    for (int n = 0; n <= 10; ++n) {
        TwoModeState f = monomial(n, 0);
        TwoModeState comm = apply_annihilate(apply_create(f, Mode::z), Mode::z) -
                            apply_create(apply_annihilate(f, Mode::z), Mode::z);
        CHECK(infinity_distance(comm, f) < 1e-12);
    }
}

TEST_CASE("oscillator Hamiltonian scales each level by its energy") {
    TwoModeState h2 = apply_hamiltonian(monomial(2, 0), {1.0});
    CHECK(h2.coefficient({2, 0}) == Complex{2.5, 0.0});
    CHECK(apply_hamiltonian(monomial(0, 0), {1.0}).coefficient({0, 0}) == Complex{0.5, 0.0});

    TwoModeState sum = monomial(0, 0) + monomial(1, 0);
    TwoModeState h = apply_hamiltonian(sum, {2.0});
    CHECK(h.coefficient({0, 0}) == Complex{1.0, 0.0});
    CHECK(h.coefficient({1, 0}) == Complex{3.0, 0.0});

    CHECK_THROWS_AS(apply_hamiltonian(monomial(1, 1), {1.0}), ShapeError);
    CHECK_THROWS_AS(apply_hamiltonian(monomial(1, 0), {-1.0}), ShapeError);

    for (int n = 0; n <= 20; ++n) {
        for (double hw : {1.0, 2.0}) {
            TwoModeState e = apply_hamiltonian(monomial(n, 0), {hw});
            CHECK(e.coefficient({n, 0}).real() == hw * (n + 0.5));
        }
    }
}

TEST_CASE("spin operators have the right eigenstates") {
    TwoModeState jz31 = apply_spin(SpinOperator::Jz, monomial(3, 1));
    CHECK(infinity_distance(jz31, monomial(3, 1)) < 1e-12);

    CHECK(apply_spin(SpinOperator::Jz, monomial(2, 2)).empty());

    TwoModeState jsq = apply_spin(SpinOperator::Jsquared, monomial(1, 0));
    CHECK(jsq.coefficient({1, 0}).real() == doctest::Approx(0.75).epsilon(1e-12));

    for (int n1 = 0; n1 + 0 <= 8; ++n1)
        for (int n2 = 0; n1 + n2 <= 8; ++n2) {
            TwoModeState basis = monomial(n1, n2);
            double m = 0.5 * (n1 - n2);
            double j = 0.5 * (n1 + n2);
            TwoModeState jz = apply_spin(SpinOperator::Jz, basis);
            CHECK(infinity_distance(jz, Complex{m, 0.0} * basis) < 1e-10);
            TwoModeState j2 = apply_spin(SpinOperator::Jsquared, basis);
            CHECK(infinity_distance(j2, Complex{j * (j + 1.0), 0.0} * basis) < 1e-10);
        }
}

TEST_CASE("spin operators close the angular-momentum algebra") {
    auto commutator = [](SpinOperator a, SpinOperator b, const TwoModeState& s) {
        return apply_spin(a, apply_spin(b, s)) - apply_spin(b, apply_spin(a, s));
    };
    const Complex i_unit{0.0, 1.0};
    for (int n1 = 0; n1 <= 8; ++n1)
        for (int n2 = 0; n1 + n2 <= 8; ++n2) {
            TwoModeState s = monomial(n1, n2);
            CHECK(infinity_distance(commutator(SpinOperator::Jx, SpinOperator::Jy, s),
                                    i_unit * apply_spin(SpinOperator::Jz, s)) < 1e-12);
            CHECK(infinity_distance(commutator(SpinOperator::Jy, SpinOperator::Jz, s),
                                    i_unit * apply_spin(SpinOperator::Jx, s)) < 1e-12);
            CHECK(infinity_distance(commutator(SpinOperator::Jz, SpinOperator::Jx, s),
                                    i_unit * apply_spin(SpinOperator::Jy, s)) < 1e-12);
        }
}

TEST_CASE("spin labels and occupations round-trip") {
    CHECK(spin_to_occupation(SpinLabel(1, -1)) == Occupation{0, 1});
    CHECK(spin_to_occupation(SpinLabel(4, 0)) == Occupation{2, 2});
    CHECK(spin_to_occupation(SpinLabel(0, 0)) == Occupation{0, 0});

    CHECK(occupation_to_spin(3, 1) == SpinLabel(4, 2));
    CHECK(occupation_to_spin(1, 1) == SpinLabel(2, 0));
    CHECK(occupation_to_spin(0, 4) == SpinLabel(4, -4));

    for (int tj = 0; tj <= 9; ++tj)
        for (int tm = -tj; tm <= tj; tm += 2) {
            SpinLabel label(tj, tm);
            Occupation occ = spin_to_occupation(label);
            CHECK(occupation_to_spin(occ.n1, occ.n2) == label);
        }

    CHECK_THROWS_AS(SpinLabel(2, 3), ShapeError);
    CHECK_THROWS_AS(SpinLabel(2, 1), ShapeError);
    CHECK_THROWS_AS(SpinLabel(-1, 0), ShapeError);
}

TEST_CASE("basis states encode as root-of-unity pairs") {
    auto [z40, w40] = encode_state_roots(4, 0);
    CHECK(z40 == Sector(5, 4));
    CHECK(w40 == Sector(5, 0));

    auto [z11, w11] = encode_state_roots(1, 1);
    CHECK(z11 == Sector(3, 1));
    CHECK(w11 == Sector(3, 1));

    auto [zv, wv] = encode_state_roots(0, 0);
    CHECK(zv.k == 1);
    CHECK(zv.j == 0);
    CHECK(wv == zv);
}

TEST_CASE("table rows reproduce the spin blocks") {
    auto half = table_rows(1);
    REQUIRE(half.size() == 2);
    CHECK(half[0].root_z == Sector(2, 1));
    CHECK(half[0].root_w == Sector(2, 0));
    CHECK(half[0].spin == SpinLabel(1, 1));
    CHECK(half[0].monomial_description == "z");
    CHECK(half[1].root_z == Sector(2, 0));
    CHECK(half[1].root_w == Sector(2, 1));
    CHECK(half[1].monomial_description == "w");
    CHECK(half[0].product == Sector(2, 1));
    CHECK(half[1].product == Sector(2, 1));

    auto one = table_rows(2);
    REQUIRE(one.size() == 3);
    CHECK(one[0].monomial_description == "z^2 / sqrt(2)");
    CHECK(one[1].monomial_description == "z w");
    CHECK(one[2].monomial_description == "w^2 / sqrt(2)");
    for (const auto& row : one) CHECK(row.product == Sector(3, 2));

    auto two = table_rows(4);
    REQUIRE(two.size() == 5);
    CHECK(two[0].monomial_description == "z^4 / sqrt(24)");
    CHECK(two[1].monomial_description == "z^3 w / sqrt(6)");
    CHECK(two[2].monomial_description == "z^2 w^2 / sqrt(4)");
    CHECK(two[3].monomial_description == "z w^3 / sqrt(6)");
    CHECK(two[4].monomial_description == "w^4 / sqrt(24)");
    for (const auto& row : two) CHECK(row.product == Sector(5, 4));
    CHECK(two[4].spin == SpinLabel(4, -4));

    for (int tj = 1; tj <= 10; ++tj) {
        auto rows = table_rows(tj);
        CHECK(rows.size() == static_cast<size_t>(tj + 1));
        for (const auto& row : rows) {
            CHECK(row.product == Sector(tj + 1, tj));
            CHECK(sector_mul(row.root_z, row.root_w) == row.product);
        }
    }

    CHECK_THROWS_AS(table_rows(0), ShapeError);
    CHECK_THROWS_AS(table_rows(21), ShapeError);
}

TEST_CASE("state arithmetic prunes vanishing coefficients") {
    TwoModeState s = monomial(2, 1);
    TwoModeState cancel = s - monomial(2, 1);
    CHECK(cancel.empty());

    TwoModeState tiny = Complex{1e-20, 0.0} * monomial(1, 0);
    CHECK(tiny.empty());

    TwoModeState sum = monomial(1, 0) + Complex{0.0, 2.0} * monomial(0, 1);
    CHECK(sum.term_count() == 2);
    CHECK(sum.coefficient({0, 1}) == Complex{0.0, 2.0});
}
