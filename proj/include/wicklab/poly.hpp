#pragma once

#include "wicklab/rational.hpp"

#include <string>
#include <vector>

namespace wicklab {

// Dense univariate polynomial with exact rational coefficients.
// coeffs[k] is the coefficient of x^k; trailing zeros are trimmed.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<Q> coeffs);
    static Poly constant(const Q& c);
    static Poly monomial(unsigned k, const Q& c = 1);
    static Poly x_minus(const Q& c);

    const std::vector<Q>& coeffs() const { return c_; }
    // Coefficient of x^k, zero beyond the degree.
    Q coeff(unsigned k) const;
    // Degree, with -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }

    Q eval(const Q& x) const;
    double eval(double x) const;
    Poly derivative(unsigned order = 1) const;
    // p(s*x + t)
    Poly compose_affine(const Q& s, const Q& t) const;
    // Replaces x^k by moments[k]; throws if moments are too short.
    Q expectation(const std::vector<Q>& moments) const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Q& s);

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const Q& s) { return a *= s; }
    friend Poly operator*(const Q& s, Poly a) { return a *= s; }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    // Human-readable form such as "x^3 - 3/2x^2 + 1".
    std::string to_string(const std::string& var = "x") const;

private:
    void trim();
    std::vector<Q> c_;
};

// Truncated power-series helpers (coefficient vectors of length K+1).
namespace series {

std::vector<Q> mul(const std::vector<Q>& f, const std::vector<Q>& g, unsigned K);
// exp(u) for u with u[0] == 0.
std::vector<Q> exp(const std::vector<Q>& u, unsigned K);
// f^r for f with f[0] == 1 and rational r.
std::vector<Q> pow(const std::vector<Q>& f, const Q& r, unsigned K);

}  // namespace series

}  // namespace wicklab
