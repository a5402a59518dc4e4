#include "wicklab/chaos/basis.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wicklab::chaos {

namespace {

Poly antiderivative_poly(const Poly& p) {
    std::vector<Q> c(p.coeffs().size() + 1, Q(0));
    for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
        c[k + 1] = p.coeffs()[k] / Q(static_cast<long>(k + 1));
    }
    return Poly(std::move(c));
}

std::vector<Q> merge_breaks(const std::vector<Q>& a, const std::vector<Q>& b) {
    std::vector<Q> out;
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Q json_q(const nlohmann::json& j) {
    if (j.is_string()) return parse_q(j.get<std::string>());
    if (j.is_number_integer()) return Q(j.get<long>());
    if (j.is_number()) return parse_q(j.dump());
    throw std::invalid_argument("expected a rational number, got " + j.dump());
}

Poly json_poly(const nlohmann::json& j) {
    if (!j.is_array()) return Poly::constant(json_q(j));
    std::vector<Q> c;
    for (const auto& v : j) c.push_back(json_q(v));
    return Poly(std::move(c));
}

}  // namespace

PiecewisePoly::PiecewisePoly() : breaks_{Q(0), Q(1)}, polys_{Poly()} {}

PiecewisePoly::PiecewisePoly(std::vector<Q> breaks, std::vector<Poly> polys)
    : breaks_(std::move(breaks)), polys_(std::move(polys)) {
    if (breaks_.size() < 2 || polys_.size() + 1 != breaks_.size()) {
        throw std::invalid_argument("piecewise polynomial: breakpoint/piece count mismatch");
    }
    if (breaks_.front() != 0 || breaks_.back() != 1) {
        throw std::invalid_argument("piecewise polynomial: breakpoints must span [0,1]");
    }
    for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
        if (!(breaks_[i] < breaks_[i + 1])) {
            throw std::invalid_argument("piecewise polynomial: breakpoints must increase");
        }
    }
}

PiecewisePoly PiecewisePoly::constant(const Q& c) { return polynomial(Poly::constant(c)); }

PiecewisePoly PiecewisePoly::polynomial(const Poly& p) { return PiecewisePoly({Q(0), Q(1)}, {p}); }

std::size_t PiecewisePoly::piece_of(const Q& x) const {
    // Piece i covers ]b_i, b_{i+1}]; x = 0 is assigned to the first piece.
    for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
        if (x <= breaks_[i + 1]) return i;
    }
    return polys_.size() - 1;
}

PiecewisePoly PiecewisePoly::refined(const std::vector<Q>& extra) const {
    std::vector<Q> sorted;
    for (const Q& e : extra) {
        if (e > 0 && e < 1) sorted.push_back(e);
    }
    std::sort(sorted.begin(), sorted.end());
    std::vector<Q> nb = merge_breaks(breaks_, sorted);
    if (nb.size() == breaks_.size()) return *this;
    std::vector<Poly> np;
    np.reserve(nb.size() - 1);
    for (std::size_t i = 0; i + 1 < nb.size(); ++i) np.push_back(polys_[piece_of(nb[i + 1])]);
    return PiecewisePoly(std::move(nb), std::move(np));
}

PiecewisePoly PiecewisePoly::restricted(const Q& lo, const Q& hi) const {
    PiecewisePoly r = refined({lo, hi});
    for (std::size_t i = 0; i + 1 < r.breaks_.size(); ++i) {
        if (r.breaks_[i] < lo || r.breaks_[i + 1] > hi) r.polys_[i] = Poly();
    }
    return r;
}

PiecewisePoly PiecewisePoly::antiderivative() const {
    std::vector<Poly> np;
    np.reserve(polys_.size());
    Q acc = 0;
    for (std::size_t i = 0; i < polys_.size(); ++i) {
        Poly P = antiderivative_poly(polys_[i]);
        Q shift = acc - P.eval(breaks_[i]);
        np.push_back(P + Poly::constant(shift));
        acc += P.eval(breaks_[i + 1]) - P.eval(breaks_[i]);
    }
    return PiecewisePoly(breaks_, std::move(np));
}

Q PiecewisePoly::integral(const Q& lo, const Q& hi) const {
    Q total = 0;
    for (std::size_t i = 0; i < polys_.size(); ++i) {
        Q a = std::max(lo, breaks_[i]);
        Q b = std::min(hi, breaks_[i + 1]);
        if (!(a < b) || polys_[i].is_zero()) continue;
        Poly P = antiderivative_poly(polys_[i]);
        total += P.eval(b) - P.eval(a);
    }
    return total;
}

Q PiecewisePoly::value(const Q& x) const { return polys_[piece_of(x)].eval(x); }

double PiecewisePoly::value(double x) const {
    for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
        if (x <= breaks_[i + 1].get_d()) return polys_[i].eval(x);
    }
    return polys_.back().eval(x);
}

Q PiecewisePoly::norm_sq() const { return ((*this) * (*this)).integral(); }

PiecewisePoly operator*(const PiecewisePoly& a, const PiecewisePoly& b) {
    std::vector<Q> nb = merge_breaks(a.breaks_, b.breaks_);
    std::vector<Poly> np;
    np.reserve(nb.size() - 1);
    for (std::size_t i = 0; i + 1 < nb.size(); ++i) {
        const Poly& pa = a.polys_[a.piece_of(nb[i + 1])];
        const Poly& pb = b.polys_[b.piece_of(nb[i + 1])];
        np.push_back(pa.is_zero() || pb.is_zero() ? Poly() : pa * pb);
    }
    return PiecewisePoly(std::move(nb), std::move(np));
}

PiecewisePoly operator*(const PiecewisePoly& a, const Poly& p) {
    PiecewisePoly r = a;
    for (auto& q : r.polys_) q = q.is_zero() ? Poly() : q * p;
    return r;
}

PiecewisePoly operator+(const PiecewisePoly& a, const PiecewisePoly& b) {
    std::vector<Q> nb = merge_breaks(a.breaks_, b.breaks_);
    std::vector<Poly> np;
    np.reserve(nb.size() - 1);
    for (std::size_t i = 0; i + 1 < nb.size(); ++i) {
        np.push_back(a.polys_[a.piece_of(nb[i + 1])] + b.polys_[b.piece_of(nb[i + 1])]);
    }
    return PiecewisePoly(std::move(nb), std::move(np));
}

FunctionSpec FunctionSpec::parse(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception&) {
        // Bare rationals such as 1/2 are not JSON; accept them directly.
        return FunctionSpec{PiecewisePoly::constant(parse_q(json_text)), json_text};
    }
    if (j.is_object()) {
        if (!j.contains("pieces")) throw std::invalid_argument("function object needs \"pieces\"");
        struct Piece {
            Q from, to;
            Poly p;
        };
        std::vector<Piece> pieces;
        for (const auto& pj : j.at("pieces")) {
            Piece pc{json_q(pj.at("from")), json_q(pj.at("to")), json_poly(pj.at("coeffs"))};
            if (pc.from < 0 || pc.to > 1 || !(pc.from < pc.to)) {
                throw std::invalid_argument("piece interval must satisfy 0 <= from < to <= 1");
            }
            pieces.push_back(std::move(pc));
        }
        std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.from < b.from; });
        std::vector<Q> breaks{Q(0)};
        std::vector<Poly> polys;
        for (const auto& pc : pieces) {
            if (pc.from < breaks.back()) throw std::invalid_argument("function pieces overlap");
            if (pc.from > breaks.back()) {
                polys.push_back(Poly());
                breaks.push_back(pc.from);
            }
            polys.push_back(pc.p);
            breaks.push_back(pc.to);
        }
        if (breaks.back() < 1) {
            polys.push_back(Poly());
            breaks.push_back(Q(1));
        }
        return FunctionSpec{PiecewisePoly(std::move(breaks), std::move(polys)), json_text};
    }
    return FunctionSpec{PiecewisePoly::polynomial(json_poly(j)), json_text};
}

FunctionSpec FunctionSpec::constant(const Q& c) { return FunctionSpec{PiecewisePoly::constant(c), to_string(c)}; }

FunctionSpec FunctionSpec::polynomial(const Poly& p) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Q& c : p.coeffs()) arr.push_back(to_string(c));
    return FunctionSpec{PiecewisePoly::polynomial(p), arr.dump()};
}

Poly BasisSpec::q(unsigned j) const {
    if (j == 0) throw std::invalid_argument("basis index is 1-based");
    // P_n(2x - 1) = sum_k (-1)^(n+k) C(n,k) C(n+k,k) x^k
    const long n = static_cast<long>(j) - 1;
    std::vector<Q> c(static_cast<std::size_t>(n + 1));
    for (long k = 0; k <= n; ++k) {
        Q v = binomial(n, k) * binomial(n + k, k);
        c[static_cast<std::size_t>(k)] = ((n + k) % 2 == 0) ? v : Q(-v);
    }
    return Poly(std::move(c));
}

std::vector<Q> BasisSpec::scales() const {
    std::vector<Q> s;
    for (unsigned j = 1; j <= N; ++j) s.push_back(scale(j));
    return s;
}

double BasisSpec::e(unsigned j, double x) const { return std::sqrt(2.0 * j - 1.0) * q(j).eval(x); }

std::vector<double> ChaosVector::values() const {
    std::vector<double> v(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) v[j] = std::sqrt(s[j].get_d()) * r[j].get_d();
    return v;
}

Q ChaosVector::norm_sq() const {
    Q acc = 0;
    for (std::size_t j = 0; j < r.size(); ++j) acc += s[j] * r[j] * r[j];
    return acc;
}

ChaosVector coeffs_of(const PiecewisePoly& h, const BasisSpec& basis) {
    ChaosVector v;
    v.s = basis.scales();
    for (unsigned j = 1; j <= basis.N; ++j) v.r.push_back((h * basis.q(j)).integral());
    return v;
}

ChaosVector coeffs_of(const FunctionSpec& h, std::optional<Q> t_cut, const BasisSpec& basis) {
    return coeffs_of(t_cut ? h.f.restricted(0, *t_cut) : h.f, basis);
}

double ScaledMatrix::value(std::size_t j, std::size_t k) const {
    return std::sqrt(Q(s[j] * s[k]).get_d()) * R[j][k].get_d();
}

std::vector<std::vector<double>> ScaledMatrix::values() const {
    std::vector<std::vector<double>> out(size(), std::vector<double>(size()));
    for (std::size_t j = 0; j < size(); ++j)
        for (std::size_t k = 0; k < size(); ++k) out[j][k] = value(j, k);
    return out;
}

ScaledMatrix ScaledMatrix::transposed() const { return ScaledMatrix{transpose(R), s}; }

ScaledMatrix ScaledMatrix::symmetrized() const {
    ScaledMatrix out{zero_matrix(size(), size()), s};
    for (std::size_t j = 0; j < size(); ++j)
        for (std::size_t k = 0; k < size(); ++k) out.R[j][k] = (R[j][k] + R[k][j]) / 2;
    return out;
}

Q ScaledMatrix::frobenius_sq() const {
    Q acc = 0;
    for (std::size_t j = 0; j < size(); ++j)
        for (std::size_t k = 0; k < size(); ++k) acc += s[j] * s[k] * R[j][k] * R[j][k];
    return acc;
}

Q ScaledMatrix::trace() const {
    Q acc = 0;
    for (std::size_t j = 0; j < size(); ++j) acc += s[j] * R[j][j];
    return acc;
}

Q ScaledMatrix::trace_of_square() const {
    Q acc = 0;
    for (std::size_t j = 0; j < size(); ++j)
        for (std::size_t k = 0; k < size(); ++k) acc += s[j] * s[k] * R[j][k] * R[k][j];
    return acc;
}

Q ScaledMatrix::diag_sq() const {
    Q acc = 0;
    for (std::size_t j = 0; j < size(); ++j) acc += s[j] * s[j] * R[j][j] * R[j][j];
    return acc;
}

ScaledMatrix& ScaledMatrix::operator+=(const ScaledMatrix& o) {
    if (o.size() != size() || o.s != s) throw std::invalid_argument("scaled matrix shape mismatch");
    for (std::size_t j = 0; j < size(); ++j)
        for (std::size_t k = 0; k < size(); ++k) R[j][k] += o.R[j][k];
    return *this;
}

ScaledMatrix plain_matrix(const QMatrix& a) { return ScaledMatrix{a, std::vector<Q>(a.size(), Q(1))}; }

ScaledMatrix triangle_kernel(const FunctionSpec& h, const FunctionSpec& g, const BasisSpec& basis, Region region) {
    const unsigned N = basis.N;
    ScaledMatrix out{zero_matrix(N, N), basis.scales()};
    // Lower: int_{x<y} h(x) q_j(x) g(y) q_k(y) = int g(y) q_k(y) H_j(y) dy with H_j = int_0^y h q_j.
    // Upper: the same with the roles of the variables exchanged.
    const PiecewisePoly& inner = region == Region::Lower ? h.f : g.f;
    const PiecewisePoly& outer = region == Region::Lower ? g.f : h.f;
    std::vector<PiecewisePoly> prim;
    std::vector<PiecewisePoly> outer_q;
    for (unsigned j = 1; j <= N; ++j) {
        prim.push_back((inner * basis.q(j)).antiderivative());
        outer_q.push_back(outer * basis.q(j));
    }
    for (unsigned j = 0; j < N; ++j) {
        for (unsigned k = 0; k < N; ++k) {
            // Lower: row j belongs to the inner (first) variable.
            if (region == Region::Lower) {
                out.R[j][k] = (outer_q[k] * prim[j]).integral();
            } else {
                out.R[j][k] = (outer_q[j] * prim[k]).integral();
            }
        }
    }
    return out;
}

CutKernelBuilder::CutKernelBuilder(const FunctionSpec& h, const FunctionSpec& g, const BasisSpec& basis)
    : basis_(basis), g2_(g.f * g.f) {
    const unsigned N = basis.N;
    std::vector<PiecewisePoly> gq;
    for (unsigned j = 1; j <= N; ++j) {
        H_.push_back((h.f * basis.q(j)).antiderivative());
        gq.push_back(g.f * basis.q(j));
        G_.push_back(gq.back().antiderivative());
    }
    prim_.assign(N, {});
    for (unsigned j = 0; j < N; ++j) {
        for (unsigned k = 0; k < N; ++k) prim_[j].push_back((gq[k] * H_[j]).antiderivative());
    }
}

ScaledMatrix CutKernelBuilder::kernel(const Q& a, const Q& b) const {
    const unsigned N = basis_.N;
    ScaledMatrix out{zero_matrix(N, N), basis_.scales()};
    for (unsigned j = 0; j < N; ++j)
        for (unsigned k = 0; k < N; ++k) out.R[j][k] = prim_[j][k].value(b) - prim_[j][k].value(a);
    return out;
}

ChaosVector CutKernelBuilder::h_coeffs(const Q& s) const {
    ChaosVector v;
    v.s = basis_.scales();
    for (const auto& H : H_) v.r.push_back(H.value(s));
    return v;
}

ChaosVector CutKernelBuilder::g_coeffs(const Q& a, const Q& b) const {
    ChaosVector v;
    v.s = basis_.scales();
    for (const auto& G : G_) v.r.push_back(G.value(b) - G.value(a));
    return v;
}

ScaledMatrix CutKernelBuilder::qv_matrix(const Q& t) const {
    const unsigned N = basis_.N;
    ScaledMatrix out{zero_matrix(N, N), basis_.scales()};
    for (unsigned j = 0; j < N; ++j) {
        PiecewisePoly w = g2_ * H_[j];
        for (unsigned k = j; k < N; ++k) {
            out.R[j][k] = (w * H_[k]).integral(0, t);
            out.R[k][j] = out.R[j][k];
        }
    }
    return out;
}

}  // namespace wicklab::chaos
