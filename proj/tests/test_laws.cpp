#include "doctest.h"

#include "wicklab/laws.hpp"

#include <cmath>

using namespace wicklab;

namespace {

// Independent closed forms used as oracles.
Q double_factorial_odd(unsigned n) {  // (2n-1)!!
    Q r = 1;
    for (unsigned k = 1; k <= n; ++k) r *= 2 * k - 1;
    return r;
}

Q rising(const Q& a, unsigned n) {
    Q r = 1;
    for (unsigned k = 0; k < n; ++k) r *= a + k;
    return r;
}

// Touchard polynomial T_n(a) = sum_k S(n,k) a^k via Stirling numbers of the second kind.
Q touchard(unsigned n, const Q& a) {
    std::vector<std::vector<Q>> s(n + 1, std::vector<Q>(n + 1, Q(0)));
    s[0][0] = 1;
    for (unsigned i = 1; i <= n; ++i)
        for (unsigned k = 1; k <= i; ++k) s[i][k] = Q(k) * s[i - 1][k] + s[i - 1][k - 1];
    Q r = 0;
    for (unsigned k = 0; k <= n; ++k) r += s[n][k] * pow_q(a, k);
    return r;
}

Q binomial_moment(unsigned N, const Q& p, unsigned n) {
    Q r = 0;
    for (unsigned k = 0; k <= N; ++k)
        r += binomial(N, k) * pow_q(p, k) * pow_q(1 - p, N - k) * pow_q(Q(k), n);
    return r;
}

std::vector<LawSpec> catalog() {
    return {LawSpec::normal(),
            LawSpec::exponential(Q(3, 2)),
            LawSpec::gamma(Q(2), Q(3)),
            LawSpec::gamma_combo(Q(1), Q(1, 2), Q(2), Q(3), Q(2), Q(5)),
            LawSpec::poisson(Q(5, 2)),
            LawSpec::binomial(4, Q(1, 3))};
}

}  // namespace

TEST_CASE("normal moments are the odd double factorials") {
    auto m = moments(LawSpec::normal(), 10);
    CHECK(m.m == std::vector<Q>{1, 0, 1, 0, 3, 0, 15, 0, 105, 0, 945});
    for (unsigned n = 0; n <= 5; ++n) CHECK(m[2 * n] == double_factorial_odd(n));
}

TEST_CASE("zero order gives only m0") {
    for (const auto& law : catalog()) CHECK(moments(law, 0).m == std::vector<Q>{1});
}

TEST_CASE("exponential and gamma moments match rising factorials") {
    CHECK(moments(LawSpec::exponential(1), 4).m == std::vector<Q>{1, 1, 2, 6, 24});
    const Q a(5, 2), b(3, 4);
    auto m = moments(LawSpec::gamma(a, b), 8);
    for (unsigned n = 0; n <= 8; ++n) CHECK(m[n] == rising(a, n) / pow_q(b, n));
}

TEST_CASE("gamma combination moments match the convolution of the parts") {
    const Q al(1, 2), a1(3), b1(2), be(2), a2(1, 3), b2(5);
    auto m = moments(LawSpec::gamma_combo(al, a1, b1, be, a2, b2), 6);
    for (unsigned n = 0; n <= 6; ++n) {
        Q expect = 0;
        for (unsigned k = 0; k <= n; ++k)
            expect += binomial(n, k) * pow_q(al, k) * rising(a1, k) / pow_q(b1, k) *
                      pow_q(be, n - k) * rising(a2, n - k) / pow_q(b2, n - k);
        CHECK(m[n] == expect);
    }
}

TEST_CASE("poisson and binomial moments") {
    const Q a(7, 3);
    auto m = moments(LawSpec::poisson(a), 8);
    for (unsigned n = 0; n <= 8; ++n) CHECK(m[n] == touchard(n, a));
    auto mb = moments(LawSpec::binomial(5, Q(2, 7)), 8);
    for (unsigned n = 0; n <= 8; ++n) CHECK(mb[n] == binomial_moment(5, Q(2, 7), n));
}

TEST_CASE("inverse coefficients solve the convolution exactly") {
    for (const auto& law : catalog()) {
        auto m = moments(law, 8);
        auto a = inverse_laplace_coeffs(m, 8).a;
        CHECK(a[0] == 1);
        CHECK(a[1] == -m[1]);
        for (unsigned n = 0; n <= 8; ++n) {
            Q s = 0;
            for (unsigned k = 0; k <= n; ++k) s += binomial(n, k) * m[k] * a[n - k];
            CHECK(s == (n == 0 ? Q(1) : Q(0)));
        }
    }
    CHECK(inverse_laplace_coeffs(moments(LawSpec::normal(), 4), 4).a == std::vector<Q>{1, 0, -1, 0, 3});
}

TEST_CASE("poisson inverse coefficients are touchard values at -a") {
    const Q a(3, 2);
    auto c = inverse_laplace_coeffs(moments(LawSpec::poisson(a), 7), 7).a;
    for (unsigned n = 0; n <= 7; ++n) CHECK(c[n] == touchard(n, -a));
}

TEST_CASE("hankel matrices are positive semidefinite") {
    for (const auto& law : catalog()) CHECK(hankel_psd(moments(law, 8)));
    // A sequence with negative variance is rejected.
    CHECK_FALSE(hankel_psd(MomentSequence{{1, 1, Q(1, 2)}, "bad"}));
}

TEST_CASE("standardization and affine transport") {
    auto e = standardized_moments(LawSpec::exponential(3), 4);
    CHECK(e[1] == 0);
    CHECK(e[2] == 1);
    CHECK(e[3] == 2);
    CHECK(e[4] == 9);
    auto p = standardized_moments(LawSpec::poisson(4), 4);
    CHECK(p[1] == 0);
    CHECK(p[2] == 1);
    CHECK(p[3] == Q(1, 2));  // skewness 1/sqrt(a)
    CHECK_THROWS(standardized_moments(LawSpec::poisson(2), 4));
    auto n = moments(LawSpec::normal(), 6);
    auto shifted = affine_moments(n, 2, 1);
    CHECK(shifted[1] == 1);
    CHECK(shifted[2] == 5);
}

TEST_CASE("law parsing") {
    CHECK(LawSpec::parse("gamma:1/2,1/2").tag() == "gamma:1/2,1/2");
    CHECK(LawSpec::parse("exponential:0.5").params[0] == Q(1, 2));
    CHECK(LawSpec::parse("binomial:3,1/2").kind == LawKind::Binomial);
    CHECK_THROWS(LawSpec::parse("binomial:3,2"));
    CHECK_THROWS(LawSpec::parse("gamma:-1,1"));
    CHECK_THROWS(LawSpec::parse("cauchy"));
    CHECK_THROWS(moments(LawSpec::custom({1, 0, 1}), 4));
}

TEST_CASE("samplers are deterministic and standardized") {
    CHECK(sample(LawSpec::normal(), 7, 100) == sample(LawSpec::normal(), 7, 100));
    CHECK(sample(LawSpec::normal(), 7, 100) != sample(LawSpec::normal(), 8, 100));
    CHECK_THROWS(sample(LawSpec::custom({1, 0, 1}), 1, 10));

    const std::size_t n = 1000000;
    auto xs = sample(LawSpec::exponential(1), 11, n);
    double mean = 0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(n);
    CHECK(std::abs(mean) <= 0.01);

    auto ps = sample(LawSpec::poisson(1), 12, n);
    double m3 = 0;
    for (double x : ps) m3 += x * x * x;
    m3 /= static_cast<double>(n);
    auto exact = standardized_moments(LawSpec::poisson(1), 6);
    const double tol = 3.0 * std::sqrt(exact[6].get_d()) / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(m3 - exact[3].get_d()) <= tol);
}
