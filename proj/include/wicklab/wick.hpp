#pragma once

#include "wicklab/laws.hpp"
#include "wicklab/poly.hpp"

#include <vector>

namespace wicklab {

// The n-th Wick power of a law, tagged with the moment sequence it was built from.
struct WickPolynomial {
    Poly poly;
    std::string law_tag;

    int degree() const { return poly.degree(); }
};

// b_0..b_K with b_n = sum_k C(n,k) k m_k a_{n-k}.
std::vector<Q> recurrence_aux(const MomentSequence& m, unsigned K);

// W_n = sum_k C(n,k) a_k x^{n-k}.
WickPolynomial wick_explicit(const MomentSequence& m, unsigned n);

// W_n = (x - m_1) W_{n-1} - (1/n) sum_{j<=n-2} C(n,j) b_{n-j} W_j.
WickPolynomial wick_recurrence1(const MomentSequence& m, unsigned n);

// n W_n = sum_{k=1}^n C(n,k) (k x m_{k-1} - n m_k) W_{n-k}.
WickPolynomial wick_recurrence2(const MomentSequence& m, unsigned n);

// Residual of the first (which = 1) or second (which = 2) differential equation.
// Identically zero when W is the Wick power of m; throws on a law tag mismatch.
Poly ode_residual(const WickPolynomial& w, const MomentSequence& m, int which);

// Formal derivative D(sum c_k x^k) = sum k c_k x^{k-1}.
Poly derive(const WickPolynomial& w);

// Generalized Laguerre polynomial L_n^alpha(x).
Poly laguerre(unsigned n, const Q& alpha);

// Wick powers of Gamma(a,b) through Laguerre polynomials.
WickPolynomial laguerre_wick(const Q& a, const Q& b, unsigned n);

// E[W_n W_k] paired against the exact moments.
Q wick_gram(const MomentSequence& m, unsigned n, unsigned k);

// W_0..W_max_n by the explicit formula.
std::vector<WickPolynomial> wick_table(const MomentSequence& m, unsigned max_n);

}  // namespace wicklab
