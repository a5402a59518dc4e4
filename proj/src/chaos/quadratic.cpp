#include "wicklab/chaos/quadratic.hpp"

#include <cmath>
#include <stdexcept>

namespace wicklab::chaos {

namespace {

const Q& moment_at(const MomentSequence& m, std::size_t k) {
    if (k >= m.m.size()) throw std::out_of_range("law moments not available to order " + std::to_string(k));
    return m.m[k];
}

void check_size(std::size_t n, const Realization& xs) {
    if (xs.size() < n) throw std::invalid_argument("realization shorter than truncation");
}

MPoly<Q>::Exps exps_of(std::size_t n, std::size_t j, unsigned pj, std::size_t k = 0, unsigned pk = 0) {
    MPoly<Q>::Exps e(n, 0);
    e[j] = static_cast<std::uint8_t>(e[j] + pj);
    if (pk) e[k] = static_cast<std::uint8_t>(e[k] + pk);
    return e;
}

}  // namespace

SymmetricKernel2 SymmetricKernel2::from_raw(const ScaledMatrix& K) { return SymmetricKernel2{K.symmetrized()}; }

SymmetricKernel2 SymmetricKernel2::from_matrix(const QMatrix& a) {
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j].size() != a.size()) throw std::invalid_argument("kernel matrix must be square");
        for (std::size_t k = 0; k < j; ++k) {
            if (a[j][k] != a[k][j]) throw std::invalid_argument("kernel matrix must be symmetric");
        }
    }
    return SymmetricKernel2{plain_matrix(a)};
}

SymmetricKernel2 SymmetricKernel2::unit(std::size_t N, std::size_t j, std::size_t k) {
    QMatrix a = zero_matrix(N, N);
    a.at(j).at(k) = 1;
    a.at(k).at(j) = 1;
    return from_matrix(a);
}

bool SymmetricKernel2::unit_scales() const {
    for (const Q& s : a.s) {
        if (s != 1) return false;
    }
    return true;
}

double phi(const std::vector<double>& c, const Realization& xs) {
    check_size(c.size(), xs);
    double acc = 0;
    for (std::size_t j = 0; j < c.size(); ++j) acc += c[j] * xs[j];
    return acc;
}

double phi(const ChaosVector& h, const Realization& xs) { return phi(h.values(), xs); }

double phi11(const DMatrix& m, const Realization& xs) {
    check_size(m.size(), xs);
    double acc = 0;
    for (std::size_t j = 0; j < m.size(); ++j)
        for (std::size_t k = 0; k < j; ++k) acc += m[j][k] * xs[j] * xs[k];
    return acc;
}

double phi2(const DMatrix& m, const Realization& xs) {
    check_size(m.size(), xs);
    double acc = 0;
    for (std::size_t j = 0; j < m.size(); ++j) acc += m[j][j] * (xs[j] * xs[j] - 1.0);
    return acc;
}

double phi11(const SymmetricKernel2& f, const Realization& xs) { return phi11(f.a.values(), xs); }
double phi2(const SymmetricKernel2& f, const Realization& xs) { return phi2(f.a.values(), xs); }

double j2(const SymmetricKernel2& f, const Realization& xs) { return integral(f.a.values(), xs); }

double integral(const DMatrix& K, const Realization& xs) {
    check_size(K.size(), xs);
    double acc = 0;
    for (std::size_t j = 0; j < K.size(); ++j) {
        double row = 0;
        for (std::size_t k = 0; k < K.size(); ++k) row += K[j][k] * xs[k];
        acc += xs[j] * row - K[j][j];
    }
    return acc;
}

double integral(const ScaledMatrix& K, const Realization& xs) { return integral(K.values(), xs); }

double integral(const FunctionSpec& h, const FunctionSpec& g, const BasisSpec& basis, const Realization& xs) {
    return integral(triangle_kernel(h, g, basis), xs);
}

ProductIdentity product_identity(const std::vector<double>& h, const std::vector<double>& g, const Realization& xs) {
    if (h.size() != g.size()) throw std::invalid_argument("product identity needs a common truncation");
    const std::size_t n = h.size();
    DMatrix hg(n, std::vector<double>(n)), sym(n, std::vector<double>(n));
    double inner = 0, scale = 0;
    for (std::size_t j = 0; j < n; ++j) {
        inner += h[j] * g[j];
        for (std::size_t k = 0; k < n; ++k) {
            hg[j][k] = h[j] * g[k];
            sym[j][k] = h[j] * g[k] + g[j] * h[k];
        }
    }
    ProductIdentity out;
    out.lhs = phi(h, xs) * phi(g, xs);
    out.rhs = phi2(hg, xs) + phi11(sym, xs) + inner;
    out.residual = std::abs(out.lhs - out.rhs);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) scale += std::abs(h[j] * g[k] * xs[j] * xs[k]);
    out.scale = scale + std::abs(inner) + 1.0;
    return out;
}

double product_identity_residual(const ChaosVector& h, const ChaosVector& g, const Realization& xs) {
    return product_identity(h.values(), g.values(), xs).residual;
}

Q ito_bracket(const ChaosVector& h, const ChaosVector& g) {
    if (h.size() != g.size()) throw std::invalid_argument("bracket needs a common truncation");
    Q acc = 0;
    for (std::size_t j = 0; j < h.size(); ++j) acc += h.s[j] * h.r[j] * g.r[j];
    return acc;
}

double ito_residual(const ChaosVector& h, const ChaosVector& g, const ScaledMatrix& K_hg, const ScaledMatrix& K_gh,
                    const Realization& xs) {
    return phi(h, xs) * phi(g, xs) - integral(K_hg, xs) - integral(K_gh, xs) - ito_bracket(h, g).get_d();
}

Q quadratic_form_variance(const ScaledMatrix& M, const Q& m4) {
    const ScaledMatrix S = M.symmetrized();
    Q off = 0, diag = 0;
    for (std::size_t j = 0; j < S.size(); ++j) {
        for (std::size_t k = 0; k < S.size(); ++k) {
            Q v = S.s[j] * S.s[k] * S.R[j][k] * S.R[j][k];
            if (j == k) diag += v;
            else off += v;
        }
    }
    return 2 * off + (m4 - 1) * diag;
}

std::function<std::optional<Q>(std::size_t, unsigned)> scaled_moments(const std::vector<Q>& s, const std::vector<Q>& m) {
    return [s, m](std::size_t j, unsigned k) -> std::optional<Q> {
        if (k >= m.size()) throw std::out_of_range("law moments not available to order " + std::to_string(k));
        if (m[k] == 0) return Q(0);
        if (k % 2 == 0) return pow_q(s.at(j), k / 2) * m[k];
        Q root;
        if (rational_sqrt(s.at(j), root)) return pow_q(root, k) * m[k];
        return std::nullopt;
    };
}

MPoly<Q> integral_poly(const ScaledMatrix& K) {
    const std::size_t n = K.size();
    MPoly<Q> p(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            if (K.R[j][k] == 0) continue;
            p.add_term(j == k ? exps_of(n, j, 2) : exps_of(n, j, 1, k, 1), K.R[j][k]);
        }
    }
    p.add_term(MPoly<Q>::Exps(n, 0), -K.trace());
    return p;
}

NormIdentity norm_identity(const ScaledMatrix& K, const MomentSequence& standardized) {
    const Q& m4 = moment_at(standardized, 4);
    NormIdentity out;
    MPoly<Q> I = integral_poly(K);
    out.lhs = (I * I).expectation(scaled_moments(K.s, standardized.m));
    out.lhs_formula = quadratic_form_variance(K, m4);
    out.first_term = K.frobenius_sq();
    out.second_term = K.diag_sq() * (m4 - 3);
    out.rhs = out.first_term + out.second_term;
    out.cross = K.trace_of_square();
    out.exact = out.lhs == out.rhs + out.cross && out.lhs == out.lhs_formula;
    return out;
}

NormIdentity norm_identity(const FunctionSpec& h, const FunctionSpec& g, const BasisSpec& basis,
                           const MomentSequence& standardized) {
    return norm_identity(triangle_kernel(h, g, basis), standardized);
}

NormVariant parse_norm_variant(const std::string& name) {
    if (name == "A" || name == "a") return NormVariant::A;
    if (name == "B" || name == "b") return NormVariant::B;
    if (name == "C" || name == "c") return NormVariant::C;
    throw std::invalid_argument("unknown norm variant: " + name);
}

Q weighted_norm_sq(const SymmetricKernel2& f, NormVariant variant, const MomentSequence& standardized) {
    const Q& m3 = moment_at(standardized, 3);
    const Q& m4 = moment_at(standardized, 4);
    const ScaledMatrix& a = f.a;
    Q lower = 0, diag = 0;  // sum_{j>k} a_jk^2 and sum_j a_jj^2
    for (std::size_t j = 0; j < a.size(); ++j) {
        diag += a.s[j] * a.s[j] * a.R[j][j] * a.R[j][j];
        for (std::size_t k = 0; k < j; ++k) lower += a.s[j] * a.s[k] * a.R[j][k] * a.R[j][k];
    }
    switch (variant) {
        case NormVariant::A: return 4 * lower + (m4 - m3 * m3 - 1) * diag;
        case NormVariant::B: return lower + (m4 - 1) * diag;
        case NormVariant::C: return 4 * lower + (m4 - 1) * diag;
    }
    return 0;
}

MPoly<Q> phi11_poly(const SymmetricKernel2& f) {
    const std::size_t n = f.size();
    MPoly<Q> p(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < j; ++k) p.add_term(exps_of(n, j, 1, k, 1), f.a.R[j][k]);
    return p;
}

MPoly<Q> phi2_poly(const SymmetricKernel2& f) {
    const std::size_t n = f.size();
    MPoly<Q> p(n);
    for (std::size_t j = 0; j < n; ++j) {
        p.add_term(exps_of(n, j, 2), f.a.R[j][j]);
        p.add_term(MPoly<Q>::Exps(n, 0), -f.a.s[j] * f.a.R[j][j]);
    }
    return p;
}

MPoly<Q> image_poly(const SymmetricKernel2& f, NormVariant variant, const MomentSequence& standardized) {
    switch (variant) {
        case NormVariant::B: return phi11_poly(f) + phi2_poly(f);
        case NormVariant::C: return integral_poly(f.a);
        case NormVariant::A: {
            if (!f.unit_scales()) throw std::domain_error("variant A image needs unit scales");
            // Phi^{o2}(f) = J_2(f) - m3 sum_j a_jj x_j
            MPoly<Q> p = integral_poly(f.a);
            const Q& m3 = moment_at(standardized, 3);
            for (std::size_t j = 0; j < f.size(); ++j) p.add_term(exps_of(f.size(), j, 1), -m3 * f.a.R[j][j]);
            return p;
        }
    }
    return MPoly<Q>(f.size());
}

IsometryCheck isometry_check(const SymmetricKernel2& f, NormVariant variant, const MomentSequence& standardized) {
    MPoly<Q> p = image_poly(f, variant, standardized);
    IsometryCheck out;
    out.image_sq = (p * p).expectation(scaled_moments(f.a.s, standardized.m));
    out.norm_sq = weighted_norm_sq(f, variant, standardized);
    out.residual = abs(out.image_sq - out.norm_sq);
    return out;
}

Sandwich sandwich(const SymmetricKernel2& f, const MomentSequence& standardized) {
    const Q v = moment_at(standardized, 4) - 1;
    Sandwich out;
    out.a = v < 2 ? v : Q(2);
    out.b = v < 2 ? Q(2) : v;
    out.plain_sq = f.norm_sq();
    out.j2_sq = weighted_norm_sq(f, NormVariant::C, standardized);
    out.holds = out.a * out.plain_sq <= out.j2_sq && out.j2_sq <= out.b * out.plain_sq;
    return out;
}

Phi2Bound phi2_bound(const SymmetricKernel2& f, const MomentSequence& standardized) {
    const Q& m4 = moment_at(standardized, 4);
    Phi2Bound out;
    MPoly<Q> p = phi2_poly(f);
    out.lhs = (p * p).expectation(scaled_moments(f.a.s, standardized.m));
    out.rhs = (m4 + 2 + 1) * f.norm_sq();
    out.measured_operator_norm = std::sqrt(Q(m4 - 1).get_d());
    out.holds = out.lhs <= out.rhs;
    return out;
}

OperatorMoments operator_moments(const SymmetricKernel2& f, const SymmetricKernel2& g, const MomentSequence& standardized) {
    if (f.a.s != g.a.s) throw std::invalid_argument("kernels must share scales");
    auto provider = scaled_moments(f.a.s, standardized.m);
    MPoly<Q> p11 = phi11_poly(f), p2f = phi2_poly(f), p2g = phi2_poly(g);
    OperatorMoments out;
    out.e_phi11_sq = (p11 * p11).expectation(provider);
    out.e_phi11_phi2 = (p11 * p2g).expectation(provider);
    out.e_phi2_sq = (p2f * p2f).expectation(provider);
    out.offdiag_sq = 0;
    out.diag_sq = f.a.diag_sq();
    for (std::size_t j = 0; j < f.size(); ++j)
        for (std::size_t k = 0; k < j; ++k) out.offdiag_sq += f.a.s[j] * f.a.s[k] * f.a.R[j][k] * f.a.R[j][k];
    return out;
}

}  // namespace wicklab::chaos
