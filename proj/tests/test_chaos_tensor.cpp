#include "doctest.h"

#include "chaos_oracles.hpp"
#include "wicklab/chaos/tensor.hpp"

#include <cmath>

using namespace wicklab;
using namespace wicklab::chaos;

namespace {

MomentSequence law_moments(const LawSpec& law) { return standardized_moments(law, 8); }

std::vector<LawSpec> laws() {
    return {LawSpec::normal(), LawSpec::exponential(1), LawSpec::gamma(4, 3), LawSpec::poisson(1)};
}

// Oracle: Phi^{on}(T) as an explicit polynomial built from the P_k.
MPoly<double> tensor_poly(const SymTensor& T, const GammaTables& tables, std::size_t n) {
    MPoly<double> acc(n);
    for (const auto& [m, c] : T.terms()) {
        MPoly<double> term = MPoly<double>::constant(n, c);
        for (auto [j, a] : multiplicities(m)) term = term * MPoly<double>::univariate(n, j, tables.P[a]);
        acc += term;
    }
    return acc;
}

std::vector<double> to_double(const std::vector<Q>& v) {
    std::vector<double> out;
    for (const auto& q : v) out.push_back(q.get_d());
    return out;
}

SymmetricKernel2 random_kernel(std::mt19937_64& rng, std::size_t n) {
    return SymmetricKernel2::from_matrix(oracle::random_symmetric(rng, n));
}

}  // namespace

TEST_CASE("gamma tables reproduce the printed Hermite rows") {
    auto t = GammaTables::build(law_moments(LawSpec::normal()));
    CHECK(t.Gamma[3][1] == 3);
    CHECK(t.Gamma[4][2] == 6);
    CHECK(t.Gamma[4][0] == 3);
    CHECK(t.Gamma[2][0] == 1);
    CHECK(t.H[4] == Poly({Q(3), Q(0), Q(-6), Q(0), Q(1)}));
    for (unsigned n = 0; n <= 4; ++n)
        for (unsigned k = 0; k <= n; ++k) CHECK(t.gamma[n][k] == t.Gamma[n][k]);
    for (unsigned k = 1; k <= 4; ++k) CHECK(t.C_const[k] == 0);
}

TEST_CASE("gamma tables for non-Gaussian laws") {
    for (const auto& law : laws()) {
        auto m = law_moments(law);
        auto t = GammaTables::build(m);
        CHECK(t.gamma[2][1] == m[3]);
        CHECK(t.P[2] == Poly({Q(-1), Q(-m[3]), Q(1)}));
        for (unsigned n = 0; n <= 4; ++n) {
            // X^n = sum gamma[n][k] P_k as a polynomial identity.
            Poly sum;
            for (unsigned k = 0; k <= n; ++k) sum += t.P[k] * t.gamma[n][k];
            CHECK(sum == Poly::monomial(n));
            for (unsigned k = 0; k < n; ++k) CHECK((t.P[n] * t.P[k]).expectation(m.m) == 0);
        }
    }
    oracle::ThreePoint three;
    CHECK_THROWS_AS(GammaTables::build(three.moments(8)), std::domain_error);
}

TEST_CASE("C constants are sups over compositions") {
    auto t = GammaTables::build(law_moments(LawSpec::exponential(1)));
    // k = 4 with alpha = (4): |gamma_{4,0} - Gamma_{4,0}| = |m4 - 3|; alpha = (2,2): (gamma_{2,0} - 1)^2 = 0.
    CHECK(t.C_const[4] >= abs(t.diff(4, 0)));
    CHECK(t.C_const[1] >= abs(t.diff(2, 1)));
    CHECK(t.C_const[1] >= abs(t.diff(4, 3)));
    Q best = 0;
    for (unsigned a = 1; a <= 4; ++a) best = std::max(best, Q(abs(t.diff(a, a - 1))));
    CHECK(t.C_const[1] == best);
}

TEST_CASE("annihilation special cases") {
    auto m = law_moments(LawSpec::exponential(1));
    auto t = GammaTables::build(m);
    SymTensor d;
    d.add({0, 0}, 1.0);
    auto a12 = annihilate(d, 1, t);
    CHECK(a12.size() == 1);
    CHECK(a12.at({0}) == doctest::Approx(m[3].get_d()));
    SymTensor off;
    off.add({0, 1}, 1.0);
    CHECK(annihilate(off, 1, t).size() == 0);
    SymTensor e4;
    e4.add({2, 2, 2, 2}, 1.0);
    CHECK(annihilate(e4, 1, t).at({2, 2, 2}) == doctest::Approx(t.gamma[4][3].get_d()));
    CHECK(annihilate(e4, 3, t).at({2}) == doctest::Approx(t.gamma[4][1].get_d()));
    SymTensor e31;
    e31.add({0, 0, 0, 1}, 1.0);
    auto a34 = annihilate(e31, 3, t);
    CHECK(a34.size() == 1);
    CHECK(a34.at({1}) == doctest::Approx(m[3].get_d()));
    CHECK_THROWS(annihilate(d, 3, t));

    auto g = GammaTables::build(law_moments(LawSpec::normal()));
    for (unsigned k = 1; k <= 4; ++k) CHECK(annihilate(e4, k, g).size() == 0);
}

TEST_CASE("contraction matches the series expansion") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t n = 5;
        QMatrix a = oracle::random_symmetric(rng, n);
        auto f = SymmetricKernel2::from_matrix(a);
        auto c = contraction1(f);
        // Oracle: f = sum_{j,k} a_jk e_j (x) e_k; integrating the shared variable pairs e_l with e_l.
        QMatrix series = zero_matrix(n, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t l = 0; l < n; ++l)
                for (std::size_t l2 = 0; l2 < n; ++l2)
                    for (std::size_t k = 0; k < n; ++k)
                        if (l == l2) series[j][k] += a[j][l] * a[k][l2];
        CHECK(c.a.R == series);
    }
    // e1 o e1 contracts to itself; e1 o e2 has diagonal entries on both indices.
    CHECK(contraction1(SymmetricKernel2::unit(2, 0, 0)).a.R == SymmetricKernel2::unit(2, 0, 0).a.R);
    auto c12 = contraction1(SymmetricKernel2::unit(2, 0, 1)).a.R;
    CHECK(c12[0][0] == 1);
    CHECK(c12[1][1] == 1);
    CHECK(c12[0][1] == 0);
}

TEST_CASE("a_1^2 of the contraction follows the m3-weighted series") {
    auto m = law_moments(LawSpec::gamma(4, 3));
    auto t = GammaTables::build(m);
    std::mt19937_64 rng(4);
    QMatrix a = oracle::random_symmetric(rng, 4);
    auto f = SymmetricKernel2::from_matrix(a);
    auto got = annihilate(SymTensor::from_kernel(contraction1(f).a.values()), 1, t);
    // m3 sum_{j1<j2} a_{j1j2}^2 (e_{j1} + e_{j2}) + m3 sum_j a_j^2 e_j
    std::vector<Q> want(4, Q(0));
    for (std::size_t j = 0; j < 4; ++j) {
        want[j] += m[3] * a[j][j] * a[j][j];
        for (std::size_t k = j + 1; k < 4; ++k) {
            want[j] += m[3] * a[j][k] * a[j][k];
            want[k] += m[3] * a[j][k] * a[j][k];
        }
    }
    for (std::size_t j = 0; j < 4; ++j) CHECK(got.at({static_cast<std::uint8_t>(j)}) == doctest::Approx(want[j].get_d()));
}

TEST_CASE("order decomposition is a pointwise identity") {
    std::mt19937_64 rng(8);
    for (const auto& law : laws()) {
        auto t = GammaTables::build(law_moments(law));
        for (int trial = 0; trial < 30; ++trial) {
            auto f = random_kernel(rng, 5);
            auto xs = oracle::random_realization(rng, 5);
            auto d = order_decomposition(f, t, xs);
            CHECK(d.residual < 1e-10 * d.scale);
        }
    }
    // Gaussian e1 o e1: (x^2 - 1)^2 = H_4 + 4 H_2 + 2.
    auto g = GammaTables::build(law_moments(LawSpec::normal()));
    auto ot = order_tensors(SymmetricKernel2::unit(1, 0, 0), g);
    CHECK(ot.by_order[4].at({0, 0, 0, 0}) == 1.0);
    CHECK(ot.by_order[3].size() == 0);
    CHECK(ot.by_order[2].at({0, 0}) == 4.0);
    CHECK(ot.by_order[1].size() == 0);
    CHECK(ot.by_order[0].at({}) == 2.0);
}

TEST_CASE("order components are orthogonal and carry the fourth moment") {
    std::mt19937_64 rng(12);
    const std::size_t n = 4;
    for (const auto& law : {LawSpec::normal(), LawSpec::exponential(1), LawSpec::poisson(4)}) {
        auto m = law_moments(law);
        auto t = GammaTables::build(m);
        auto md = to_double(m.m);
        auto f = random_kernel(rng, n);
        auto ot = order_tensors(f, t);
        std::array<MPoly<double>, 5> polys;
        for (unsigned i = 0; i <= 4; ++i) polys[i] = tensor_poly(ot.by_order[i], t, n);
        double scale = 0;
        for (unsigned i = 0; i <= 4; ++i) scale += (polys[i] * polys[i]).expectation_iid(md);
        for (unsigned i = 0; i <= 4; ++i)
            for (unsigned j = i + 1; j <= 4; ++j)
                CHECK(std::abs((polys[i] * polys[j]).expectation_iid(md)) < 1e-12 * scale);
        // Direct E[J^4] from the explicit quadratic polynomial.
        MPoly<double> J(n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                MPoly<double>::Exps e(n, 0);
                e[j] += 1;
                e[k] += 1;
                J.add_term(e, f.a.R[j][k].get_d());
            }
        J.add_term(MPoly<double>::Exps(n, 0), -f.a.trace().get_d());
        MPoly<double> J2 = J * J;
        double direct = (J2 * J2).expectation_iid(md);
        CHECK(fourth_moment_by_orders(ot, t) == doctest::Approx(direct).epsilon(1e-11));
        CHECK(scale == doctest::Approx(direct).epsilon(1e-11));
    }
}
