#include "doctest.h"

#include "chaos_oracles.hpp"
#include "wicklab/chaos/quadratic.hpp"

#include <cmath>

using namespace wicklab;
using namespace wicklab::chaos;

namespace {

MomentSequence gaussian() { return standardized_moments(LawSpec::normal(), 8); }
MomentSequence expo() { return standardized_moments(LawSpec::exponential(1), 8); }

// Oracle: x^T a x - tr a evaluated exactly on a rational point.
Q j2_exact(const QMatrix& a, const std::vector<Q>& x) {
    Q acc = 0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        acc -= a[j][j];
        for (std::size_t k = 0; k < a.size(); ++k) acc += a[j][k] * x[j] * x[k];
    }
    return acc;
}

Q phi11_exact(const QMatrix& a, const std::vector<Q>& x) {
    Q acc = 0;
    for (std::size_t j = 0; j < a.size(); ++j)
        for (std::size_t k = 0; k < j; ++k) acc += a[j][k] * x[j] * x[k];
    return acc;
}

Q phi2_exact(const QMatrix& a, const std::vector<Q>& x) {
    Q acc = 0;
    for (std::size_t j = 0; j < a.size(); ++j) acc += a[j][j] * (x[j] * x[j] - 1);
    return acc;
}

}  // namespace

TEST_CASE("phi operators on unit kernels") {
    Realization xs{0.7, -1.3, 2.0};
    CHECK(phi(std::vector<double>{1, 0, 0}, xs) == doctest::Approx(0.7));
    auto f = SymmetricKernel2::unit(3, 0, 1);
    CHECK(phi11(f, xs) == doctest::Approx(0.7 * -1.3));
    CHECK(phi2(f, xs) == 0);
    CHECK(j2(f, xs) == doctest::Approx(2 * 0.7 * -1.3));
    auto d = SymmetricKernel2::unit(3, 2, 2);
    CHECK(phi2(d, xs) == doctest::Approx(3.0));
    CHECK(phi11(d, xs) == 0);
}

TEST_CASE("product identity is algebraic at fixed truncation") {
    Realization xs{1.5, -0.2};
    auto e1 = std::vector<double>{1, 0};
    auto r = product_identity(e1, e1, xs);
    CHECK(r.residual == doctest::Approx(0).epsilon(1e-15));
    CHECK(r.rhs == doctest::Approx((1.5 * 1.5 - 1) + 1));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> h(8), g(8);
        for (auto& v : h) v = u(rng);
        for (auto& v : g) v = u(rng);
        auto xr = oracle::random_realization(rng, 8);
        auto p = product_identity(h, g, xr);
        CHECK(p.residual < 1e-12 * p.scale);
    }
}

TEST_CASE("orthogonal functions have vanishing bracket") {
    auto one = FunctionSpec::constant(1);
    auto x = FunctionSpec::polynomial(Poly({Q(-1, 2), Q(1)}));
    for (unsigned N : {2u, 8u}) {
        BasisSpec basis{N};
        CHECK(ito_bracket(coeffs_of(one, std::nullopt, basis), coeffs_of(x, std::nullopt, basis)) == 0);
        CHECK(ito_bracket(coeffs_of(one, std::nullopt, basis), coeffs_of(one, std::nullopt, basis)) == 1);
    }
}

TEST_CASE("Ito residual vanishes identically at fixed truncation") {
    BasisSpec basis{6};
    auto h = FunctionSpec::polynomial(Poly({Q(1), Q(-1), Q(2)}));
    auto g = FunctionSpec::parse(R"({"pieces":[{"from":0,"to":"1/2","coeffs":[1]},{"from":"1/2","to":1,"coeffs":[0,3]}]})");
    auto ch = coeffs_of(h, std::nullopt, basis), cg = coeffs_of(g, std::nullopt, basis);
    auto Khg = triangle_kernel(h, g, basis), Kgh = triangle_kernel(g, h, basis);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        auto xs = oracle::random_realization(rng, basis.N);
        CHECK(std::abs(ito_residual(ch, cg, Khg, Kgh, xs)) < 1e-12);
    }
    // Gaussian form of the identity with h = g: 2 I(h,h) = Phi(h)^2 - ||h||_N^2.
    auto Khh = triangle_kernel(h, h, basis);
    auto xs = oracle::random_realization(rng, basis.N);
    CHECK(2 * integral(Khh, xs) == doctest::Approx(phi(ch, xs) * phi(ch, xs) - ch.norm_sq().get_d()));
}

TEST_CASE("operator moments against the enumeration oracle") {
    oracle::ThreePoint law;
    auto m = law.moments(8);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        QMatrix a = oracle::random_symmetric(rng, 4), b = oracle::random_symmetric(rng, 4);
        auto f = SymmetricKernel2::from_matrix(a), g = SymmetricKernel2::from_matrix(b);
        auto om = operator_moments(f, g, m);
        CHECK(om.e_phi11_sq == law.expect(4, [&](auto& x) { Q v = phi11_exact(a, x); return Q(v * v); }));
        CHECK(om.e_phi11_phi2 == law.expect(4, [&](auto& x) { return Q(phi11_exact(a, x) * phi2_exact(b, x)); }));
        CHECK(om.e_phi2_sq == law.expect(4, [&](auto& x) { Q v = phi2_exact(a, x); return Q(v * v); }));
        // Closed forms: E phi11^2 = sum_{j>k} a^2, cross moment zero, E phi2^2 = (m4 - 1) sum a_jj^2.
        CHECK(om.e_phi11_sq == om.offdiag_sq);
        CHECK(om.e_phi11_phi2 == 0);
        CHECK(om.e_phi2_sq == (m[4] - 1) * om.diag_sq);
    }
}

TEST_CASE("isometries are exact") {
    oracle::ThreePoint law;
    auto m3pt = law.moments(8);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        QMatrix a = oracle::random_symmetric(rng, 4);
        auto f = SymmetricKernel2::from_matrix(a);
        for (auto v : {NormVariant::A, NormVariant::B, NormVariant::C}) {
            auto chk = isometry_check(f, v, m3pt);
            CHECK(chk.residual == 0);
        }
        // Independent oracle for the C variant.
        Q e = law.expect(4, [&](auto& x) { Q v = j2_exact(a, x); return Q(v * v); });
        CHECK(e == weighted_norm_sq(f, NormVariant::C, m3pt));
        for (const auto& mm : {gaussian(), expo()}) {
            CHECK(isometry_check(f, NormVariant::C, mm).residual == 0);
            CHECK(isometry_check(f, NormVariant::A, mm).residual == 0);
            CHECK(isometry_check(f, NormVariant::B, mm).residual == 0);
            CHECK(sandwich(f, mm).holds);
        }
    }
    // Gaussian diagonal kernel: ||e1 o e1||_C^2 = E(X^2 - 1)^2 = 2.
    CHECK(weighted_norm_sq(SymmetricKernel2::unit(2, 0, 0), NormVariant::C, gaussian()) == 2);
    // Off-diagonal e1 o e2 with a12 = a21 = 1: J_2 = 2 x1 x2, squared norm 4.
    auto off = SymmetricKernel2::unit(2, 0, 1);
    CHECK(weighted_norm_sq(off, NormVariant::C, gaussian()) == 4);
    CHECK(isometry_check(off, NormVariant::C, gaussian()).image_sq == 4);
    // phi^(1,1) on e2 (x) e1 has unit norm.
    CHECK(weighted_norm_sq(off, NormVariant::B, gaussian()) == 1);
}

TEST_CASE("phi2 operator bound") {
    std::mt19937_64 rng(9);
    for (const auto& mm : {gaussian(), expo()}) {
        auto f = SymmetricKernel2::from_matrix(oracle::random_symmetric(rng, 5));
        auto b = phi2_bound(f, mm);
        CHECK(b.holds);
        CHECK(b.measured_operator_norm == doctest::Approx(std::sqrt(mm[4].get_d() - 1)));
    }
}

TEST_CASE("quadratic form variance matches symbolic expansion with scales") {
    BasisSpec basis{5};
    auto h = FunctionSpec::polynomial(Poly({Q(1), Q(2)}));
    auto g = FunctionSpec::parse(R"({"pieces":[{"from":"1/4","to":1,"coeffs":[1,-1]}]})");
    auto K = triangle_kernel(h, g, basis);
    for (const auto& mm : {gaussian(), expo()}) {
        auto ni = norm_identity(K, mm);
        CHECK(ni.lhs == ni.lhs_formula);
        CHECK(ni.exact);
    }
}

TEST_CASE("norm identity") {
    auto one = FunctionSpec::constant(1);
    auto e = expo();
    auto ni = norm_identity(one, one, BasisSpec{8}, e);
    CHECK(ni.exact);
    CHECK(ni.lhs == ni.rhs + ni.cross);
    CHECK(ni.second_term == Q(1, 4) * (e[4] - 3));
    // Gaussian second term vanishes.
    CHECK(norm_identity(one, one, BasisSpec{8}, gaussian()).second_term == 0);

    // The truncation cross term tr(K^2) decays with N.
    auto h = FunctionSpec::polynomial(Poly({Q(0), Q(1)}));
    Q prev = -1;
    for (unsigned N : {4u, 8u, 16u}) {
        Q c = abs(norm_identity(h, one, BasisSpec{N}, e).cross);
        if (prev >= 0) CHECK(c < prev);
        prev = c;
    }

    // Double-precision oracle: enumerate the three-point law with scaled coefficients.
    oracle::ThreePoint law;
    BasisSpec basis{3};
    auto K = triangle_kernel(h, one, basis);
    auto n3 = norm_identity(K, law.moments(8));
    auto Kd = K.values();
    Q e_sq = law.expect(3, [&](auto& x) {
        std::vector<double> xd;
        for (auto& v : x) xd.push_back(v.get_d());
        double I = integral(Kd, xd);
        return Q(I * I);
    });
    CHECK(n3.lhs.get_d() == doctest::Approx(e_sq.get_d()).epsilon(1e-12));
}
