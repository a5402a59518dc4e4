#include "wicklab/chaos/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace wicklab::chaos {

namespace {

// Monic orthogonal polynomials of degree <= 4 by exact Gram-Schmidt on the moments.
void gram_schmidt(const std::vector<Q>& m, std::vector<Poly>& P, std::vector<Q>& norms, std::vector<std::vector<Q>>& coef) {
    const unsigned D = GammaTables::max_degree;
    P.clear();
    norms.clear();
    coef.assign(D + 1, std::vector<Q>(D + 1, Q(0)));
    for (unsigned n = 0; n <= D; ++n) {
        Poly xn = Poly::monomial(n);
        Poly p = xn;
        for (unsigned k = 0; k < n; ++k) {
            Q c = (xn * P[k]).expectation(m) / norms[k];
            coef[n][k] = c;
            p -= P[k] * c;
        }
        coef[n][n] = 1;
        Q nn = (p * p).expectation(m);
        if (nn == 0) {
            throw std::domain_error("orthogonal polynomial of degree " + std::to_string(n) +
                                    " has zero norm; the law has too few support points");
        }
        P.push_back(p);
        norms.push_back(nn);
    }
}

// All multiplicity patterns (partitions) of n.
void partitions(unsigned n, unsigned max_part, std::vector<unsigned>& cur, std::vector<std::vector<unsigned>>& out) {
    if (n == 0) {
        out.push_back(cur);
        return;
    }
    for (unsigned p = std::min(n, max_part); p >= 1; --p) {
        cur.push_back(p);
        partitions(n - p, p, cur, out);
        cur.pop_back();
    }
}

}  // namespace

GammaTables GammaTables::build(const MomentSequence& standardized) {
    if (standardized.m.size() < 2 * max_degree + 1) {
        throw std::domain_error("gamma tables need standardized moments up to order 8");
    }
    GammaTables t;
    gram_schmidt(standardized.m, t.P, t.norms, t.gamma);
    std::vector<Q> gm = standardized_moments(LawSpec::normal(), 2 * max_degree).m;
    std::vector<Q> hn;
    gram_schmidt(gm, t.H, hn, t.Gamma);

    // C_(k,4): sup over multiplicity patterns alpha of 4 and compositions k_i <= alpha_i with sum k.
    std::vector<std::vector<unsigned>> parts;
    std::vector<unsigned> cur;
    partitions(max_degree, max_degree, cur, parts);
    t.C_const.assign(max_degree + 1, Q(0));
    t.C_const[0] = 1;
    for (const auto& alpha : parts) {
        std::function<void(std::size_t, unsigned, Q)> rec = [&](std::size_t i, unsigned used, Q prod) {
            if (i == alpha.size()) {
                if (used > 0) t.C_const[used] = std::max(t.C_const[used], Q(abs(prod)));
                return;
            }
            for (unsigned ki = 0; ki <= alpha[i]; ++ki) {
                rec(i + 1, used + ki, ki == 0 ? prod : Q(prod * t.diff(alpha[i], alpha[i] - ki)));
            }
        };
        rec(0, 0, Q(1));
    }
    return t;
}

Q GammaTables::a_weight(const std::vector<unsigned>& alphas) const {
    Q w = 1;
    for (unsigned a : alphas) w *= norms.at(a) / factorial(a);
    return w;
}

SymTensor SymTensor::scalar(double c) {
    SymTensor t;
    t.add({}, c);
    return t;
}

SymTensor SymTensor::from_vector(const std::vector<double>& c) {
    SymTensor t;
    for (std::size_t j = 0; j < c.size(); ++j) t.add({static_cast<std::uint8_t>(j)}, c[j]);
    return t;
}

SymTensor SymTensor::from_kernel(const DMatrix& a) {
    SymTensor t;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const auto uj = static_cast<std::uint8_t>(j);
        t.add({uj, uj}, a[j][j]);
        for (std::size_t k = j + 1; k < a.size(); ++k) t.add({uj, static_cast<std::uint8_t>(k)}, a[j][k] + a[k][j]);
    }
    return t;
}

void SymTensor::add(const Multiset& m, double c) {
    if (c == 0) return;
    Multiset key = m;
    std::sort(key.begin(), key.end());
    t_[key] += c;
}

double SymTensor::at(const Multiset& m) const {
    Multiset key = m;
    std::sort(key.begin(), key.end());
    auto it = t_.find(key);
    return it == t_.end() ? 0.0 : it->second;
}

SymTensor& SymTensor::operator+=(const SymTensor& o) {
    for (const auto& [m, c] : o.t_) add(m, c);
    return *this;
}

SymTensor operator*(double s, SymTensor a) {
    for (auto& [m, c] : a.t_) c *= s;
    return a;
}

SymTensor circ(const SymTensor& a, const SymTensor& b) {
    SymTensor r;
    for (const auto& [ma, ca] : a.t_)
        for (const auto& [mb, cb] : b.t_) {
            SymTensor::Multiset m = ma;
            m.insert(m.end(), mb.begin(), mb.end());
            r.add(m, ca * cb);
        }
    return r;
}

std::vector<std::pair<std::uint8_t, unsigned>> multiplicities(const SymTensor::Multiset& m) {
    std::vector<std::pair<std::uint8_t, unsigned>> out;
    for (std::uint8_t j : m) {
        if (!out.empty() && out.back().first == j) ++out.back().second;
        else out.push_back({j, 1});
    }
    return out;
}

double SymTensor::evaluate(const GammaTables& tables, const Realization& xs) const {
    double acc = 0;
    for (const auto& [m, c] : t_) {
        double prod = c;
        for (auto [j, a] : multiplicities(m)) prod *= tables.P.at(a).eval(xs.at(j));
        acc += prod;
    }
    return acc;
}

double SymTensor::norm_a_sq(const GammaTables& tables) const {
    double acc = 0;
    for (const auto& [m, c] : t_) {
        double w = 1;
        for (auto [j, a] : multiplicities(m)) w *= tables.norms.at(a).get_d();
        acc += c * c * w;
    }
    return acc;
}

SymTensor annihilate(const SymTensor& T, unsigned k, const GammaTables& tables) {
    SymTensor out;
    for (const auto& [m, c] : T.terms()) {
        if (k > m.size()) throw std::invalid_argument("annihilation order exceeds tensor order");
        auto mult = multiplicities(m);
        std::vector<unsigned> ks(mult.size(), 0);
        std::function<void(std::size_t, unsigned, double)> rec = [&](std::size_t i, unsigned left, double prod) {
            if (i == mult.size()) {
                if (left != 0) return;
                SymTensor::Multiset target;
                for (std::size_t r = 0; r < mult.size(); ++r)
                    target.insert(target.end(), mult[r].second - ks[r], mult[r].first);
                out.add(target, c * prod);
                return;
            }
            const unsigned a = mult[i].second;
            for (unsigned ki = 0; ki <= std::min(a, left); ++ki) {
                ks[i] = ki;
                double f = ki == 0 ? 1.0 : tables.diff(a, a - ki).get_d();
                if (f != 0) rec(i + 1, left - ki, prod * f);
            }
            ks[i] = 0;
        };
        rec(0, k, 1.0);
    }
    return out;
}

SymmetricKernel2 contraction1(const SymmetricKernel2& f) {
    const std::size_t n = f.size();
    ScaledMatrix out{zero_matrix(n, n), f.a.s};
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            Q acc = 0;
            for (std::size_t l = 0; l < n; ++l) acc += f.a.s[l] * f.a.R[j][l] * f.a.R[l][k];
            out.R[j][k] = acc;
        }
    return SymmetricKernel2{out};
}

OrderTensors order_tensors(const SymmetricKernel2& f, const GammaTables& tables) {
    const DMatrix a = f.a.values();
    const std::size_t n = a.size();
    const double m3 = tables.gamma[2][1].get_d();
    SymTensor F = SymTensor::from_kernel(a);
    SymTensor ff = circ(F, F);
    SymTensor C = SymTensor::from_kernel(contraction1(f).a.values());

    OrderTensors ot;
    ot.by_order[4] = ff;
    ot.by_order[3] = annihilate(ff, 1, tables);
    ot.by_order[2] = 4.0 * C + annihilate(ff, 2, tables);
    SymTensor diag;
    for (std::size_t j = 0; j < n; ++j) diag.add({static_cast<std::uint8_t>(j)}, a[j][j] * a[j][j]);
    ot.by_order[1] = annihilate(ff, 3, tables) + 4.0 * annihilate(C, 1, tables) + (-6.0 * m3) * diag;
    double fro = 0;
    for (const auto& row : a)
        for (double v : row) fro += v * v;
    ot.by_order[0] = SymTensor::scalar(2.0 * fro) + annihilate(ff, 4, tables);
    return ot;
}

OrderDecomposition evaluate_orders(const OrderTensors& ot, const SymmetricKernel2& f, const GammaTables& tables,
                                   const Realization& xs) {
    OrderDecomposition out;
    double sum = 0, scale = 0;
    for (unsigned i = 0; i <= 4; ++i) {
        out.components[i] = ot.by_order[i].evaluate(tables, xs);
        sum += out.components[i];
        scale += std::abs(out.components[i]);
    }
    const double j = j2(f, xs);
    out.lhs = j * j;
    out.residual = std::abs(sum - out.lhs);
    out.scale = scale + out.lhs + 1.0;
    return out;
}

OrderDecomposition order_decomposition(const SymmetricKernel2& f, const GammaTables& tables, const Realization& xs) {
    return evaluate_orders(order_tensors(f, tables), f, tables, xs);
}

double fourth_moment_by_orders(const OrderTensors& ot, const GammaTables& tables) {
    double acc = 0;
    for (const auto& T : ot.by_order) acc += T.norm_a_sq(tables);
    return acc;
}

}  // namespace wicklab::chaos
