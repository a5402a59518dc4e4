#include "wicklab/poly.hpp"

#include <sstream>
#include <stdexcept>

namespace wicklab {

Poly::Poly(std::vector<Q> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::constant(const Q& c) { return Poly({c}); }

Poly Poly::monomial(unsigned k, const Q& c) {
    std::vector<Q> v(k + 1, Q(0));
    v[k] = c;
    return Poly(std::move(v));
}

Poly Poly::x_minus(const Q& c) { return Poly({-c, Q(1)}); }

void Poly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Q Poly::coeff(unsigned k) const { return k < c_.size() ? c_[k] : Q(0); }

Q Poly::eval(const Q& x) const {
    Q r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
    return r;
}

double Poly::eval(double x) const {
    double r = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + it->get_d();
    return r;
}

Poly Poly::derivative(unsigned order) const {
    if (order == 0) return *this;
    if (c_.size() <= order) return Poly();
    std::vector<Q> d(c_.size() - order);
    for (std::size_t k = order; k < c_.size(); ++k) {
        Q f = 1;
        for (unsigned i = 0; i < order; ++i) f *= static_cast<unsigned long>(k - i);
        d[k - order] = c_[k] * f;
    }
    return Poly(std::move(d));
}

Poly Poly::compose_affine(const Q& s, const Q& t) const {
    Poly result;
    const Poly inner({t, s});
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) result = result * inner + Poly::constant(*it);
    return result;
}

Q Poly::expectation(const std::vector<Q>& moments) const {
    if (c_.size() > moments.size()) throw std::out_of_range("not enough moments for expectation");
    Q r = 0;
    for (std::size_t k = 0; k < c_.size(); ++k) r += c_[k] * moments[k];
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Q(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Q(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
}

Poly& Poly::operator*=(const Q& s) {
    for (auto& c : c_) c *= s;
    trim();
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Q> r(a.c_.size() + b.c_.size() - 1, Q(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(r));
}

std::string Poly::to_string(const std::string& var) const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        const Q& c = c_[static_cast<std::size_t>(k)];
        if (c == 0) continue;
        Q mag = abs(c);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        if (k == 0 || mag != 1) os << mag.get_str();
        if (k >= 1) os << var;
        if (k >= 2) os << "^" << k;
    }
    return os.str();
}

namespace series {

std::vector<Q> mul(const std::vector<Q>& f, const std::vector<Q>& g, unsigned K) {
    std::vector<Q> r(K + 1, Q(0));
    for (unsigned i = 0; i <= K && i < f.size(); ++i)
        for (unsigned j = 0; i + j <= K && j < g.size(); ++j) r[i + j] += f[i] * g[j];
    return r;
}

std::vector<Q> exp(const std::vector<Q>& u, unsigned K) {
    if (!u.empty() && u[0] != 0) throw std::invalid_argument("series::exp needs u(0) = 0");
    // g' = u' g gives n g_n = sum_k k u_k g_{n-k}.
    std::vector<Q> g(K + 1, Q(0));
    g[0] = 1;
    for (unsigned n = 1; n <= K; ++n) {
        Q s = 0;
        for (unsigned k = 1; k <= n && k < u.size(); ++k) s += Q(k) * u[k] * g[n - k];
        g[n] = s / Q(n);
    }
    return g;
}

std::vector<Q> pow(const std::vector<Q>& f, const Q& r, unsigned K) {
    if (f.empty() || f[0] != 1) throw std::invalid_argument("series::pow needs f(0) = 1");
    // f g' = r f' g gives n g_n = sum_{k=1}^n (r k - (n - k)) f_k g_{n-k}.
    std::vector<Q> g(K + 1, Q(0));
    g[0] = 1;
    for (unsigned n = 1; n <= K; ++n) {
        Q s = 0;
        for (unsigned k = 1; k <= n && k < f.size(); ++k)
            s += (r * Q(k) - Q(n - k)) * f[k] * g[n - k];
        g[n] = s / Q(n);
    }
    return g;
}

}  // namespace series

}  // namespace wicklab
