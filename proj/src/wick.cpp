#include "wicklab/wick.hpp"

#include <stdexcept>

namespace wicklab {

namespace {

void require_order(const MomentSequence& m, unsigned n) {
    if (m.m.size() < n + 1)
        throw std::invalid_argument("moment sequence too short for order " + std::to_string(n));
}

}  // namespace

std::vector<Q> recurrence_aux(const MomentSequence& m, unsigned K) {
    const auto a = inverse_laplace_coeffs(m, K).a;
    std::vector<Q> b(K + 1, Q(0));
    for (unsigned n = 0; n <= K; ++n)
        for (unsigned k = 0; k <= n; ++k) b[n] += binomial(n, k) * Q(k) * m.m[k] * a[n - k];
    return b;
}

WickPolynomial wick_explicit(const MomentSequence& m, unsigned n) {
    require_order(m, n);
    const auto a = inverse_laplace_coeffs(m, n).a;
    std::vector<Q> c(n + 1, Q(0));
    for (unsigned k = 0; k <= n; ++k) c[n - k] = binomial(n, k) * a[k];
    return {Poly(std::move(c)), m.tag};
}

WickPolynomial wick_recurrence1(const MomentSequence& m, unsigned n) {
    require_order(m, n);
    const auto b = recurrence_aux(m, n);
    std::vector<Poly> w{Poly::constant(1)};
    const Poly shift = Poly::x_minus(n >= 1 ? m.m[1] : Q(0));
    for (unsigned k = 1; k <= n; ++k) {
        Poly next = shift * w[k - 1];
        Poly tail;
        for (unsigned j = 0; j + 2 <= k; ++j) tail += w[j] * (binomial(k, j) * b[k - j]);
        next -= tail * Q(1, k);
        w.push_back(std::move(next));
    }
    return {w[n], m.tag};
}

WickPolynomial wick_recurrence2(const MomentSequence& m, unsigned n) {
    require_order(m, n);
    std::vector<Poly> w{Poly::constant(1)};
    for (unsigned j = 1; j <= n; ++j) {
        Poly s;
        for (unsigned k = 1; k <= j; ++k) {
            const Poly factor({-Q(j) * m.m[k], Q(k) * m.m[k - 1]});
            s += factor * w[j - k] * binomial(j, k);
        }
        w.push_back(s * Q(1, j));
    }
    return {w[n], m.tag};
}

Poly ode_residual(const WickPolynomial& w, const MomentSequence& m, int which) {
    if (w.law_tag != m.tag)
        throw std::invalid_argument("law tag mismatch: '" + w.law_tag + "' vs '" + m.tag + "'");
    if (w.poly.is_zero()) return Poly();
    const unsigned n = static_cast<unsigned>(w.degree());
    require_order(m, n);
    Poly r = w.poly * Q(n);
    if (n == 0) return r;
    if (which == 1) {
        const auto b = recurrence_aux(m, n);
        r -= Poly::x_minus(m.m[1]) * w.poly.derivative(1);
        for (unsigned k = 2; k <= n; ++k) r += w.poly.derivative(k) * (b[k] / factorial(k));
    } else if (which == 2) {
        for (unsigned k = 1; k <= n; ++k) {
            const Poly factor({-Q(n) * m.m[k], Q(k) * m.m[k - 1]});
            r -= factor * w.poly.derivative(k) * (1 / factorial(k));
        }
    } else {
        throw std::invalid_argument("ODE selector must be 1 or 2");
    }
    return r;
}

Poly derive(const WickPolynomial& w) { return w.poly.derivative(1); }

Poly laguerre(unsigned n, const Q& alpha) {
    std::vector<Q> c(n + 1, Q(0));
    for (unsigned k = 0; k <= n; ++k) {
        Q term = binomial_q(alpha + n, n - k) / factorial(k);
        c[k] = (k % 2 == 0) ? term : Q(-term);
    }
    return Poly(std::move(c));
}

WickPolynomial laguerre_wick(const Q& a, const Q& b, unsigned n) {
    if (a <= 0 || b <= 0) throw std::invalid_argument("Gamma parameters must be positive");
    const std::string tag = LawSpec::gamma(a, b).tag();
    if (n == 0) return {laguerre(0, a - 1), tag};
    Poly s;
    for (unsigned k = 0; k + 1 <= n; ++k) {
        Poly l = laguerre(n - k, a - 1).compose_affine(b, 0);
        Q sign = ((n - k) % 2 == 0) ? Q(1) : Q(-1);
        s += l * (sign * binomial(n - 1, k));
    }
    return {s * (factorial(n) / pow_q(b, n)), tag};
}

Q wick_gram(const MomentSequence& m, unsigned n, unsigned k) {
    require_order(m, n + k);
    return (wick_explicit(m, n).poly * wick_explicit(m, k).poly).expectation(m.m);
}

std::vector<WickPolynomial> wick_table(const MomentSequence& m, unsigned max_n) {
    std::vector<WickPolynomial> out;
    for (unsigned n = 0; n <= max_n; ++n) out.push_back(wick_explicit(m, n));
    return out;
}

}  // namespace wicklab
