#include "doctest.h"

#include "golden.hpp"
#include "wicklab/wick.hpp"

using namespace wicklab;

namespace {

std::vector<LawSpec> catalog() {
    return {LawSpec::normal(),
            LawSpec::exponential(Q(2)),
            LawSpec::gamma(Q(1, 2), Q(1, 2)),
            LawSpec::gamma_combo(Q(1), Q(1, 2), Q(2), Q(3), Q(2), Q(5)),
            LawSpec::poisson(Q(1)),
            LawSpec::binomial(3, Q(1, 2))};
}

}  // namespace

TEST_CASE("hermite table for the standard normal") {
    auto m = moments(LawSpec::normal(), 10);
    auto h = golden::hermite();
    for (unsigned n = 0; n <= 5; ++n) CHECK(wick_explicit(m, n).poly == h[n]);
    CHECK(wick_explicit(m, 2).poly.to_string() == "x^2 - 1");
    CHECK(wick_explicit(m, 5).poly.to_string() == "x^5 - 10x^3 + 15x");
}

TEST_CASE("exponential table follows the general formula") {
    const Q l(3, 2);
    auto m = moments(LawSpec::exponential(l), 6);
    auto e = golden::exponential(l);
    for (unsigned n = 0; n <= 5; ++n) CHECK(wick_explicit(m, n).poly == e[n]);
    CHECK(wick_explicit(m, 3).poly == Poly({0, 0, -3 / l, 1}));
    // The literal printed E_2 is not centered, so it cannot be the Wick square.
    CHECK(golden::printed_e2_as_written(l).expectation(m.m) != 0);
}

TEST_CASE("gamma tables") {
    for (auto [a, b] : {std::pair<Q, Q>{Q(2), Q(3)}, {Q(5, 2), Q(1, 3)}, {Q(1, 2), Q(1, 2)}}) {
        auto m = moments(LawSpec::gamma(a, b), 6);
        auto g = golden::gamma(a, b);
        for (unsigned n = 0; n <= 5; ++n) CHECK(wick_explicit(m, n).poly == g[n]);
    }
    auto m = moments(LawSpec::gamma(Q(1, 2), Q(1, 2)), 6);
    auto g = golden::gamma_half_half();
    for (unsigned n = 0; n <= 5; ++n) CHECK(wick_explicit(m, n).poly == g[n]);
}

TEST_CASE("poisson table agrees with the printed one except the misprinted term") {
    for (Q a : {Q(1), Q(2), Q(1, 3), Q(5, 2)}) {
        auto m = moments(LawSpec::poisson(a), 6);
        auto printed = golden::poisson_printed(a);
        for (unsigned n = 0; n <= 2; ++n) CHECK(wick_explicit(m, n).poly == printed[n]);
        const Q correct3 = -a * a * a + 3 * a * a - a;
        CHECK(wick_explicit(m, 3).poly.coeff(0) == correct3);
        CHECK(wick_explicit(m, 4).poly.coeff(1) == 4 * correct3);
        CHECK(wick_explicit(m, 5).poly.coeff(2) == 10 * correct3);
        CHECK(wick_explicit(m, 4).poly.coeff(0) == printed[4].coeff(0));
        CHECK(wick_explicit(m, 5).poly.coeff(0) == printed[5].coeff(0));
        const bool same = wick_explicit(m, 3).poly == printed[3];
        CHECK(same == (a == 1));
    }
}

TEST_CASE("explicit formula and both recurrences agree") {
    for (const auto& law : catalog()) {
        auto m = moments(law, 7);
        for (unsigned n = 0; n <= 6; ++n) {
            auto w = wick_explicit(m, n);
            CHECK(wick_recurrence1(m, n).poly == w.poly);
            CHECK(wick_recurrence2(m, n).poly == w.poly);
            CHECK(ode_residual(w, m, 1).is_zero());
            CHECK(ode_residual(w, m, 2).is_zero());
            CHECK(w.poly.coeff(n) == 1);
            if (n >= 1) CHECK(w.poly.expectation(m.m) == 0);
        }
    }
}

TEST_CASE("first-order members and the hermite recurrence") {
    auto m = moments(LawSpec::poisson(Q(7, 3)), 6);
    CHECK(wick_recurrence1(m, 1).poly == Poly::x_minus(m[1]));
    CHECK(wick_recurrence2(m, 1).poly == Poly::x_minus(m[1]));
    auto n = moments(LawSpec::normal(), 8);
    for (unsigned k = 2; k <= 6; ++k)
        CHECK(wick_recurrence1(n, k).poly ==
              Poly::monomial(1) * wick_explicit(n, k - 1).poly - wick_explicit(n, k - 2).poly * Q(k - 1));
}

TEST_CASE("ode residual of a non-wick cubic is nonzero") {
    auto m = moments(LawSpec::normal(), 6);
    WickPolynomial cube{Poly::monomial(3), m.tag};
    CHECK_FALSE(ode_residual(cube, m, 1).is_zero());
    CHECK_FALSE(ode_residual(cube, m, 2).is_zero());
    CHECK(ode_residual(wick_explicit(m, 0), m, 1).is_zero());
    auto other = moments(LawSpec::exponential(1), 6);
    CHECK_THROWS(ode_residual(wick_explicit(other, 3), m, 1));
}

TEST_CASE("formal derivation lowers the wick index") {
    auto n = moments(LawSpec::normal(), 4);
    CHECK(derive(wick_explicit(n, 2)) == Poly({0, 2}));
    CHECK(derive(wick_explicit(n, 0)).is_zero());
    auto e = moments(LawSpec::exponential(2), 6);
    CHECK(derive(wick_explicit(e, 4)) == wick_explicit(e, 3).poly * Q(4));
}

TEST_CASE("laguerre bridge") {
    CHECK(laguerre_wick(Q(3), Q(7), 0).poly == Poly({1}));
    CHECK(laguerre_wick(Q(1, 2), Q(1, 2), 3).poly == Poly({-3, -3, -3, 1}));
    auto m = moments(LawSpec::gamma(Q(2), Q(3)), 6);
    for (unsigned n = 0; n <= 5; ++n) CHECK(laguerre_wick(Q(2), Q(3), n).poly == wick_explicit(m, n).poly);
    // Closed form oracle L_2^alpha(x) = x^2/2 - (alpha+2) x + (alpha+1)(alpha+2)/2.
    const Q al(1, 3);
    CHECK(laguerre(2, al) == Poly({(al + 1) * (al + 2) / 2, -(al + 2), Q(1, 2)}));
}

TEST_CASE("gram matrix dichotomy") {
    auto n = moments(LawSpec::normal(), 10);
    CHECK(wick_gram(n, 1, 3) == 0);
    CHECK(wick_gram(n, 0, 0) == 1);
    for (unsigned i = 0; i <= 5; ++i)
        for (unsigned j = 0; j <= 5; ++j)
            if (i != j) CHECK(wick_gram(n, i, j) == 0);
    auto e = moments(LawSpec::exponential(1), 10);
    CHECK(wick_gram(e, 1, 2) != 0);
    CHECK_THROWS(wick_gram(moments(LawSpec::normal(), 3), 2, 2));
}

TEST_CASE("affine covariance of wick powers") {
    auto m = moments(LawSpec::gamma(Q(2), Q(3)), 6);
    const Q s(5, 2), t(-1, 3);
    auto mh = affine_moments(m, s, t);
    for (unsigned n = 0; n <= 5; ++n) {
        // W_n^h(s x + t) = s^n W_n^f(x)
        CHECK(wick_explicit(mh, n).poly.compose_affine(s, t) == wick_explicit(m, n).poly * pow_q(s, n));
    }
}
