#include "doctest.h"

#include "wicklab/chaos/basis.hpp"

#include <cmath>

using namespace wicklab;
using namespace wicklab::chaos;

namespace {

// Oracle: integral of a polynomial over [0,1] from its coefficients.
Q integral01(const Poly& p) {
    Q acc = 0;
    for (std::size_t k = 0; k < p.coeffs().size(); ++k) acc += p.coeffs()[k] / Q(static_cast<long>(k + 1));
    return acc;
}

// Oracle: the triangle integral of x^a y^b over {0 < x < y < 1} is 1 / ((a+1)(a+b+2)).
Q triangle_oracle(const Poly& px, const Poly& py) {
    Q acc = 0;
    for (std::size_t a = 0; a < px.coeffs().size(); ++a)
        for (std::size_t b = 0; b < py.coeffs().size(); ++b)
            acc += px.coeffs()[a] * py.coeffs()[b] / Q(static_cast<long>((a + 1) * (a + b + 2)));
    return acc;
}

}  // namespace

TEST_CASE("shifted Legendre basis is orthonormal") {
    BasisSpec basis{10};
    for (unsigned j = 1; j <= basis.N; ++j)
        for (unsigned k = 1; k <= basis.N; ++k) {
            Q v = basis.scale(j) * integral01(basis.q(j) * basis.q(k));
            CHECK(v == (j == k ? Q(1) : Q(0)));
        }
    CHECK(basis.q(1) == Poly::constant(1));
    CHECK(basis.q(2) == Poly({Q(-1), Q(2)}));
}

TEST_CASE("function specs parse from JSON") {
    auto c = FunctionSpec::parse("\"1/2\"");
    CHECK(c.f.value(Q(1, 3)) == Q(1, 2));
    auto bare = FunctionSpec::parse("3/4");
    CHECK(bare.f.value(Q(1, 3)) == Q(3, 4));
    auto lin = FunctionSpec::parse("[\"0\", 1]");
    CHECK(lin.f.value(Q(2, 5)) == Q(2, 5));
    auto pw = FunctionSpec::parse(R"({"pieces":[{"from":"1/4","to":"1/2","coeffs":[2]},{"from":"1/2","to":1,"coeffs":[0,1]}]})");
    CHECK(pw.f.value(Q(1, 8)) == 0);
    CHECK(pw.f.value(Q(1, 4)) == 0);  // pieces are left-open
    CHECK(pw.f.value(Q(1, 3)) == 2);
    CHECK(pw.f.value(Q(1, 2)) == 2);
    CHECK(pw.f.value(Q(3, 4)) == Q(3, 4));
    CHECK(pw.f.integral() == Q(1, 2) + Q(3, 8));
    CHECK_THROWS(FunctionSpec::parse(R"({"pieces":[{"from":"0","to":"2","coeffs":[1]}]})"));
    CHECK_THROWS(FunctionSpec::parse(R"({"pieces":[{"from":"0","to":"1/2","coeffs":[1]},{"from":"1/4","to":"1","coeffs":[1]}]})"));
}

TEST_CASE("piecewise antiderivative and restriction") {
    auto f = FunctionSpec::parse(R"({"pieces":[{"from":0,"to":"1/2","coeffs":[1]},{"from":"1/2","to":1,"coeffs":[0,0,3]}]})").f;
    auto F = f.antiderivative();
    CHECK(F.value(Q(1, 4)) == Q(1, 4));
    CHECK(F.value(Q(1)) == Q(1, 2) + Q(1) - Q(1, 8));
    CHECK(f.restricted(Q(1, 4), Q(3, 4)).integral() == Q(1, 4) + Q(27, 64) - Q(1, 8));
    CHECK(f.integral(Q(1, 4), Q(3, 4)) == Q(1, 4) + Q(27, 64) - Q(1, 8));
}

TEST_CASE("coeffs_of examples") {
    BasisSpec basis{6};
    auto one = FunctionSpec::constant(1);
    auto c = coeffs_of(one, std::nullopt, basis);
    CHECK(c.r[0] == 1);
    for (std::size_t j = 1; j < c.size(); ++j) CHECK(c.r[j] == 0);

    auto half = coeffs_of(one, Q(1, 2), basis);
    CHECK(half.r[0] == Q(1, 2));
    CHECK(half.r[1] == Q(-1, 4));
    CHECK(half.values()[1] == doctest::Approx(-std::sqrt(3.0) / 4));

    // Parseval for h = x: exact once x lies in the span.
    auto x = FunctionSpec::polynomial(Poly({Q(0), Q(1)}));
    CHECK(coeffs_of(x, std::nullopt, BasisSpec{1}).norm_sq() == Q(1, 4));
    CHECK(coeffs_of(x, std::nullopt, BasisSpec{2}).norm_sq() == Q(1, 3));
    CHECK(coeffs_of(x, std::nullopt, BasisSpec{5}).norm_sq() == Q(1, 3));

    // A step function converges from below with a shrinking tail.
    Q prev = 0;
    for (unsigned N : {2u, 4u, 8u, 16u}) {
        Q v = coeffs_of(one, Q(1, 3), BasisSpec{N}).norm_sq();
        CHECK(v >= prev);
        CHECK(v <= Q(1, 3));
        prev = v;
    }
    CHECK(Q(1, 3) - prev < Q(1, 100));
}

TEST_CASE("triangle kernel matches the monomial oracle") {
    BasisSpec basis{5};
    Poly hp({Q(1), Q(-2), Q(3)}), gp({Q(1, 2), Q(1)});
    auto h = FunctionSpec::polynomial(hp), g = FunctionSpec::polynomial(gp);
    ScaledMatrix K = triangle_kernel(h, g, basis);
    for (unsigned j = 1; j <= basis.N; ++j)
        for (unsigned k = 1; k <= basis.N; ++k)
            CHECK(K.R[j - 1][k - 1] == triangle_oracle(hp * basis.q(j), gp * basis.q(k)));
}

TEST_CASE("triangle kernel examples") {
    BasisSpec basis{8};
    auto one = FunctionSpec::constant(1);
    ScaledMatrix K = triangle_kernel(one, one, basis);
    CHECK(K.R[0][0] == Q(1, 2));

    auto h = FunctionSpec::parse(R"({"pieces":[{"from":0,"to":"1/3","coeffs":[1,1]},{"from":"1/3","to":1,"coeffs":[-1]}]})");
    auto g = FunctionSpec::polynomial(Poly({Q(0), Q(0), Q(1)}));
    ScaledMatrix lower = triangle_kernel(h, g, basis, Region::Lower);
    ScaledMatrix upper = triangle_kernel(g, h, basis, Region::Upper);
    CHECK(lower.R == transpose(upper.R));

    // The lower and upper pieces of h (x) g add up to the outer product of coefficients.
    ScaledMatrix other = triangle_kernel(h, g, basis, Region::Upper);
    auto ch = coeffs_of(h.f, basis), cg = coeffs_of(g.f, basis);
    for (std::size_t j = 0; j < basis.N; ++j)
        for (std::size_t k = 0; k < basis.N; ++k) CHECK(lower.R[j][k] + other.R[j][k] == ch.r[j] * cg.r[k]);

    // Parseval on the triangle for h = g = 1.
    Q prev = 0;
    for (unsigned N : {2u, 4u, 8u, 16u}) {
        Q v = triangle_kernel(one, one, BasisSpec{N}).frobenius_sq();
        CHECK(v > prev);
        CHECK(v < Q(1, 2));
        prev = v;
    }
    CHECK(Q(1, 2) - prev < Q(1, 50));
}

TEST_CASE("cut kernel builder agrees with direct construction") {
    BasisSpec basis{6};
    auto h = FunctionSpec::polynomial(Poly({Q(1), Q(1)}));
    auto g = FunctionSpec::parse(R"({"pieces":[{"from":0,"to":"1/2","coeffs":[2]},{"from":"1/2","to":1,"coeffs":[0,1]}]})");
    CutKernelBuilder b(h, g, basis);
    for (auto [lo, hi] : {std::pair{Q(0), Q(1)}, std::pair{Q(1, 4), Q(3, 4)}, std::pair{Q(3, 8), Q(1, 2)}}) {
        FunctionSpec cut{g.f.restricted(lo, hi), "cut"};
        CHECK(b.kernel(lo, hi).R == triangle_kernel(h, cut, basis).R);
        CHECK(b.g_coeffs(lo, hi).r == coeffs_of(cut.f, basis).r);
    }
    CHECK(b.h_coeffs(Q(2, 3)).r == coeffs_of(h, Q(2, 3), basis).r);
}

TEST_CASE("quadratic-variation matrix") {
    BasisSpec basis{4};
    auto one = FunctionSpec::constant(1);
    CutKernelBuilder b(one, one, basis);
    ScaledMatrix M = b.qv_matrix(Q(3, 4));
    // c_1(s) = s, so M_11 = t^3 / 3.
    CHECK(M.R[0][0] == Q(27, 64) / 3);
    // trace: int_0^t sum_j c_j(s)^2 ds = int_0^t s ds once the step lies in the span.
    CHECK(b.qv_matrix(Q(1)).trace() < Q(1, 2));
    CHECK(b.qv_matrix(Q(0)).trace() == 0);
}
