#pragma once

#include "wicklab/poly.hpp"
#include "wicklab/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace wicklab::chaos {

// Sparse multivariate polynomial in x_1..x_n (0-based internally) with coefficients in T.
// Used as the symbolic expectation engine: independence factorizes monomial expectations.
template <class T>
class MPoly {
public:
    using Exps = std::vector<std::uint8_t>;

    explicit MPoly(std::size_t nvars = 0) : n_(nvars) {}

    static MPoly constant(std::size_t nvars, const T& c) {
        MPoly p(nvars);
        p.add_term(Exps(nvars, 0), c);
        return p;
    }

    static MPoly variable(std::size_t nvars, std::size_t j, const T& c = T(1)) {
        MPoly p(nvars);
        Exps e(nvars, 0);
        e.at(j) = 1;
        p.add_term(e, c);
        return p;
    }

    // u(x_j) for a univariate polynomial u.
    static MPoly univariate(std::size_t nvars, std::size_t j, const Poly& u) {
        MPoly p(nvars);
        for (int k = 0; k <= u.degree(); ++k) {
            const Q& c = u.coeffs()[static_cast<std::size_t>(k)];
            if (c == 0) continue;
            Exps e(nvars, 0);
            e.at(j) = static_cast<std::uint8_t>(k);
            p.add_term(e, convert(c));
        }
        return p;
    }

    std::size_t nvars() const { return n_; }
    std::size_t size() const { return terms_.size(); }
    const std::map<Exps, T>& terms() const { return terms_; }

    void add_term(const Exps& e, const T& c) {
        if (c == T(0)) return;
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == T(0)) terms_.erase(it);
        }
    }

    MPoly& operator+=(const MPoly& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    MPoly& operator-=(const MPoly& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, T(-c));
        return *this;
    }
    MPoly& operator*=(const T& s) {
        if (s == T(0)) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }
    friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
    friend MPoly operator*(MPoly a, const T& s) { return a *= s; }
    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        MPoly r(std::max(a.n_, b.n_));
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exps e(r.n_, 0);
                for (std::size_t i = 0; i < r.n_; ++i)
                    e[i] = static_cast<std::uint8_t>((i < ea.size() ? ea[i] : 0) + (i < eb.size() ? eb[i] : 0));
                r.add_term(e, T(ca * cb));
            }
        return r;
    }

    double eval(const std::vector<double>& x) const {
        double s = 0;
        for (const auto& [e, c] : terms_) {
            double t = to_double(c);
            for (std::size_t i = 0; i < e.size(); ++i)
                for (int k = 0; k < e[i]; ++k) t *= x.at(i);
            s += t;
        }
        return s;
    }

    // E[p] given moment(j, k) = E[x_j^k]. A provider may return nullopt for a value it
    // cannot represent in T; that is an error only when the monomial's expectation is not
    // already forced to zero by another factor.
    T expectation(const std::function<std::optional<T>(std::size_t, unsigned)>& moment) const {
        T s(0);
        for (const auto& [e, c] : terms_) {
            T prod(1);
            bool unknown = false, zero = false;
            for (std::size_t i = 0; i < e.size() && !zero; ++i) {
                if (e[i] == 0) continue;
                auto m = moment(i, e[i]);
                if (!m) unknown = true;
                else if (*m == T(0)) zero = true;
                else prod *= *m;
            }
            if (zero) continue;
            if (unknown) throw std::domain_error("monomial expectation not representable");
            s += c * prod;
        }
        return s;
    }

    // Expectation under i.i.d. coordinates with moments m (m[k] = E[x^k]).
    T expectation_iid(const std::vector<T>& m) const {
        return expectation([&](std::size_t, unsigned k) -> std::optional<T> {
            if (k >= m.size()) throw std::out_of_range("not enough moments");
            return m[k];
        });
    }

private:
    static T convert(const Q& q) {
        if constexpr (std::is_same_v<T, Q>) return q;
        else return T(q.get_d());
    }
    static double to_double(const T& c) {
        if constexpr (std::is_same_v<T, Q>) return c.get_d();
        else return static_cast<double>(c);
    }

    std::size_t n_;
    std::map<Exps, T> terms_;
};

}  // namespace wicklab::chaos
