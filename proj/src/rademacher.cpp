#include "wicklab/rademacher.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include <algorithm>
#include <array>
#include <iomanip>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace wicklab {

namespace {

using HP = boost::multiprecision::cpp_dec_float_50;

int sign_of(unsigned long cell, unsigned depth, unsigned k) {
    return ((cell >> (depth - k)) & 1UL) ? -1 : 1;
}

void check_tuple(const PartitionSystem& ps, const std::vector<unsigned>& ks) {
    if (ks.empty()) throw std::invalid_argument("empty index tuple");
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (ks[i] < 1 || ks[i] > ps.depth()) throw std::invalid_argument("index outside 1..depth");
        if (i && ks[i] <= ks[i - 1]) throw std::invalid_argument("indices must be increasing");
    }
}

Q overlap(const Q& l, const Q& r, const Q& gl, const Q& gr) {
    const Q lo = std::max(l, gl), hi = std::min(r, gr);
    return hi > lo ? Q(hi - lo) : Q(0);
}

// True when the atom at `level` belongs to the cell ]l,r] (the first cell when level = 0).
bool holds_atom(const Q& l, const Q& r, const Q& level) {
    return (l < level && level <= r) || (level == 0 && l == 0);
}

Q rationalize(const HP& x) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(40) << x;
    return parse_q(os.str());
}

// Sum_{m > n} (-1)^m / m in closed form through the digamma function.
HP alternating_tail(unsigned n) {
    const HP half = HP(1) / 2;
    HP v = half * (boost::math::digamma(HP(n + 2) / 2) - boost::math::digamma(HP(n + 1) / 2));
    return ((n + 1) % 2 == 0) ? v : HP(-v);
}

}  // namespace

PartitionSystem build_partition(const std::vector<Q>& alphas, unsigned depth) {
    if (depth > alphas.size()) throw std::invalid_argument("depth exceeds the number of alphas");
    if (depth > 24) throw std::invalid_argument("depth too large");
    for (unsigned k = 0; k < depth; ++k)
        if (alphas[k] <= 0 || alphas[k] >= 1) throw std::invalid_argument("alpha outside (0,1)");
    PartitionSystem ps;
    ps.alphas.assign(alphas.begin(), alphas.begin() + depth);
    ps.levels.push_back({Q(0), Q(1)});
    for (unsigned k = 0; k < depth; ++k) {
        const auto& prev = ps.levels.back();
        std::vector<Q> next(2 * (prev.size() - 1) + 1);
        for (std::size_t j = 0; j + 1 < prev.size(); ++j) {
            next[2 * j] = prev[j];
            next[2 * j + 1] = prev[j] + alphas[k] * (prev[j + 1] - prev[j]);
        }
        next.back() = 1;
        ps.levels.push_back(std::move(next));
    }
    return ps;
}

Q beta_nu(const std::vector<Q>& alphas, unsigned N, unsigned long nu) {
    if (N > alphas.size() || nu < 1 || nu > (1UL << N)) throw std::invalid_argument("bad beta index");
    Q b = 1;
    const unsigned long bits = nu - 1;
    for (unsigned i = 1; i <= N; ++i) {
        const bool one = (bits >> (N - i)) & 1UL;
        b *= one ? Q(1 - alphas[i - 1]) : alphas[i - 1];
    }
    return b;
}

int evaluate_r(const PartitionSystem& ps, unsigned k, const Q& x) {
    if (k < 1 || k > ps.depth()) throw std::invalid_argument("k outside 1..depth");
    if (x <= 0 || x > 1) throw std::invalid_argument("x outside ]0,1]");
    const auto& lv = ps.levels[k];
    // First endpoint >= x closes the cell ]a_j, a_{j+1}] containing x.
    const auto it = std::lower_bound(lv.begin(), lv.end(), x);
    const auto j = static_cast<unsigned long>(it - lv.begin()) - 1;
    return (j % 2 == 0) ? 1 : -1;
}

Q phi(const PartitionSystem& ps, unsigned k, int eps) {
    const Q& a = ps.alphas.at(k - 1);
    return eps == 1 ? a : Q(1 - a);
}

Q joint_law(const PartitionSystem& ps, const std::vector<unsigned>& ks, const std::vector<int>& eps) {
    check_tuple(ps, ks);
    if (eps.size() != ks.size()) throw std::invalid_argument("sign list length mismatch");
    const unsigned D = ks.back();
    const auto& lv = ps.levels[D];
    Q s = 0;
    for (unsigned long j = 0; j + 1 < lv.size(); ++j) {
        bool match = true;
        for (std::size_t i = 0; i < ks.size() && match; ++i) match = sign_of(j, D, ks[i]) == eps[i];
        if (match) s += lv[j + 1] - lv[j];
    }
    return s;
}

Q product_law(const PartitionSystem& ps, const std::vector<unsigned>& ks, const std::vector<int>& eps) {
    Q p = 1;
    for (std::size_t i = 0; i < ks.size(); ++i) p *= phi(ps, ks[i], eps[i]);
    return p;
}

void JumpCDF::validate() const {
    if (delta < 0) throw std::invalid_argument("jump height must be nonnegative");
    if (level < 0) throw std::invalid_argument("F(x0) must be nonnegative");
    if (level + delta >= 1) throw std::invalid_argument("F(x0) + delta must be < 1");
}

TransportLaw transport_joint_law(const PartitionSystem& ps, const JumpCDF& cdf,
                                 const std::vector<unsigned>& ks, const std::vector<int>& eps) {
    check_tuple(ps, ks);
    cdf.validate();
    if (eps.size() != ks.size()) throw std::invalid_argument("sign list length mismatch");
    const unsigned D = ks.back();
    const auto& lv = ps.levels[D];
    TransportLaw t{0, 0, 0};
    for (unsigned long j = 0; j + 1 < lv.size(); ++j) {
        bool match = true;
        for (std::size_t i = 0; i < ks.size() && match; ++i) match = sign_of(j, D, ks[i]) == eps[i];
        if (!match) continue;
        t.continuous += lv[j + 1] - lv[j] - overlap(lv[j], lv[j + 1], cdf.gap_left(), cdf.gap_right());
        if (holds_atom(lv[j], lv[j + 1], cdf.level)) t.atom += cdf.delta;
    }
    t.total = t.continuous + t.atom;
    return t;
}

TransportLaw transport_expectation(const PartitionSystem& ps, const JumpCDF& cdf,
                                   const std::vector<unsigned>& ks) {
    TransportLaw e{0, 0, 0};
    const std::size_t n = ks.size();
    for (unsigned long pat = 0; pat < (1UL << n); ++pat) {
        std::vector<int> eps(n);
        int sign = 1;
        for (std::size_t i = 0; i < n; ++i) {
            eps[i] = ((pat >> (n - 1 - i)) & 1UL) ? -1 : 1;
            sign *= eps[i];
        }
        const auto t = transport_joint_law(ps, cdf, ks, eps);
        e.continuous += sign * t.continuous;
        e.atom += sign * t.atom;
    }
    e.total = e.continuous + e.atom;
    return e;
}

std::vector<Q> transport_cell_masses(const PartitionSystem& ps, const JumpCDF& cdf) {
    cdf.validate();
    const auto& lv = ps.levels.back();
    std::vector<Q> mass(lv.size() - 1);
    for (std::size_t j = 0; j + 1 < lv.size(); ++j) {
        mass[j] = lv[j + 1] - lv[j] - overlap(lv[j], lv[j + 1], cdf.gap_left(), cdf.gap_right());
        if (holds_atom(lv[j], lv[j + 1], cdf.level)) mass[j] += cdf.delta;
    }
    return mass;
}

std::vector<Q> joint_table(const std::vector<Q>& cell_masses, unsigned depth,
                           const std::vector<unsigned>& ks) {
    const std::size_t n = ks.size();
    std::vector<Q> table(1UL << n, Q(0));
    for (unsigned long j = 0; j < cell_masses.size(); ++j) {
        unsigned long idx = 0;
        for (unsigned k : ks) idx = (idx << 1) | ((j >> (depth - k)) & 1UL);
        table[idx] += cell_masses[j];
    }
    return table;
}

IndependenceReport verify_independence(const PartitionSystem& ps, unsigned max_order,
                                       const JumpCDF* cdf, bool keep_all) {
    const unsigned D = ps.depth();
    std::vector<Q> masses;
    if (cdf) {
        masses = transport_cell_masses(ps, *cdf);
    } else {
        const auto& lv = ps.levels.back();
        for (std::size_t j = 0; j + 1 < lv.size(); ++j) masses.push_back(lv[j + 1] - lv[j]);
    }
    // Scale every cell mass to an integer over the common denominator L, so the tuple sums are
    // integer additions. A pattern factorizes iff T * L^(n-1) == prod M_i.
    mpz_class L = 1;
    for (const Q& m : masses) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), m.get_den_mpz_t());
    std::vector<mpz_class> scaled(masses.size());
    for (std::size_t j = 0; j < masses.size(); ++j) scaled[j] = masses[j].get_num() * (L / masses[j].get_den());
    auto integer_table = [&](const std::vector<unsigned>& ks) {
        std::vector<mpz_class> table(1UL << ks.size(), mpz_class(0));
        for (unsigned long j = 0; j < scaled.size(); ++j) {
            unsigned long idx = 0;
            for (unsigned k : ks) idx = (idx << 1) | ((j >> (D - k)) & 1UL);
            table[idx] += scaled[j];
        }
        return table;
    };
    std::vector<std::array<mpz_class, 2>> marginal(D + 1);
    for (unsigned k = 1; k <= D; ++k) {
        const auto t = integer_table({k});
        marginal[k] = {t[0], t[1]};
    }
    std::vector<mpz_class> L_pow{1};
    IndependenceReport rep;
    std::vector<unsigned> ks;
    std::function<void(unsigned)> rec = [&](unsigned start) {
        if (ks.size() >= 2) {
            ++rep.tuples;
            const auto table = integer_table(ks);
            const std::size_t n = ks.size();
            while (L_pow.size() <= n) L_pow.push_back(L_pow.back() * L);
            for (unsigned long pat = 0; pat < table.size(); ++pat) {
                mpz_class prod = 1;
                std::vector<int> eps(n);
                for (std::size_t i = 0; i < n; ++i) {
                    const unsigned bit = (pat >> (n - 1 - i)) & 1UL;
                    eps[i] = bit ? -1 : 1;
                    prod *= marginal[ks[i]][bit];
                }
                ++rep.patterns;
                const bool eq = table[pat] * L_pow[n - 1] == prod;
                if (!eq) ++rep.failures;
                if (keep_all || !eq) {
                    Q joint(table[pat], L), product(prod, L_pow[n]);
                    joint.canonicalize();
                    product.canonicalize();
                    rep.checks.push_back({ks, eps, joint, product, eq});
                }
            }
        }
        if (ks.size() == max_order) return;
        for (unsigned k = start; k <= D; ++k) {
            ks.push_back(k);
            rec(k + 1);
            ks.pop_back();
        }
    };
    rec(1);
    return rep;
}

SchemeSpec SchemeSpec::parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("scheme needs a parameter: " + text);
    const std::string name = text.substr(0, colon), arg = text.substr(colon + 1);
    SchemeSpec s;
    if (name == "constant") {
        s.kind = SchemeKind::Constant;
        s.param = parse_q(arg);
    } else if (name == "after") {
        s.kind = SchemeKind::JumpAfter;
        s.param = parse_q(arg);
    } else if (name == "before") {
        s.kind = SchemeKind::JumpBefore;
        s.param = parse_q(arg);
    } else if (name == "alternating") {
        s.kind = SchemeKind::JumpAlternating;
        const Q p = parse_q(arg);
        if (!is_integer(p) || p < 0) throw std::invalid_argument("alternating precision must be >= 0");
        s.p = static_cast<unsigned>(p.get_num().get_ui());
    } else {
        throw std::invalid_argument("unknown scheme '" + name + "'");
    }
    return s;
}

std::string SchemeSpec::name() const {
    switch (kind) {
        case SchemeKind::Constant: return "constant:" + to_string(param);
        case SchemeKind::JumpAfter: return "after:" + to_string(param);
        case SchemeKind::JumpBefore: return "before:" + to_string(param);
        case SchemeKind::JumpAlternating: return "alternating:" + std::to_string(p);
    }
    return "unknown";
}

const ConditionStatus& AlphaScheme::status(const std::string& id) const {
    for (const auto& c : conditions)
        if (c.id == id) return c;
    throw std::out_of_range("no condition " + id);
}

int first_failure_c1(const std::vector<Q>& alphas, const JumpCDF& cdf) {
    Q prod = 1;
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        prod *= alphas[k];
        if (!(prod > cdf.level + cdf.delta)) return static_cast<int>(k + 1);
    }
    return -1;
}

int first_failure_c2(const std::vector<Q>& alphas, const JumpCDF& cdf) {
    // Left end of the rightmost cell: s_N = s_{N-1} + alpha_N (1 - s_{N-1}).
    Q s = 0;
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        s += alphas[k] * (1 - s);
        if (!(s < cdf.level)) return static_cast<int>(k + 1);
    }
    return -1;
}

int first_failure_c3(const std::vector<Q>& alphas, const JumpCDF& cdf) {
    Q L = 0, R = 1;
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        const Q split = L + alphas[k] * (R - L);
        if ((k + 1) % 2 == 1) {
            if (!(split < cdf.level)) return static_cast<int>(k + 1);
            L = split;
        } else {
            if (!(split > cdf.level + cdf.delta)) return static_cast<int>(k + 1);
            R = split;
        }
    }
    return -1;
}

int first_failure_gap(const std::vector<Q>& alphas, const JumpCDF& cdf) {
    Q L = 0, R = 1;
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        const Q split = L + alphas[k] * (R - L);
        if (cdf.level + cdf.delta <= split) {
            R = split;
        } else if (split < cdf.level) {
            L = split;
        } else {
            return static_cast<int>(k + 1);
        }
    }
    return -1;
}

AlphaScheme alpha_scheme(const SchemeSpec& spec, const JumpCDF& cdf, unsigned depth) {
    cdf.validate();
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    AlphaScheme s;
    s.spec = spec;
    s.cdf = cdf;
    s.depth = depth;
    const Q F = cdf.level, D = cdf.delta, top = F + D;
    const Q& a = spec.param;
    switch (spec.kind) {
        case SchemeKind::Constant:
            s.condition = "C1/C2/C3";
            s.feasible = a > 0 && a < 1;
            if (!s.feasible) s.infeasible_reason = "alpha outside (0,1)";
            else s.alphas.assign(depth, a);
            break;
        case SchemeKind::JumpAfter: {
            s.condition = "C1";
            s.feasible = a > 0 && a < 1 - top;
            if (!s.feasible) {
                s.infeasible_reason = "need 0 < a < 1 - F(x0) - delta";
                break;
            }
            Q pw = a;
            s.alphas.push_back(top + a);
            for (unsigned k = 2; k <= depth; ++k) {
                const Q next = pw * a;
                s.alphas.push_back((top + next) / (top + pw));
                pw = next;
            }
            Q prod = 1;
            for (const auto& al : s.alphas) s.running.push_back(prod *= al);
            break;
        }
        case SchemeKind::JumpBefore: {
            s.condition = "C2";
            const Q den = 1 - a * (1 + a);
            s.feasible = a > 0 && den > 0 && a / den < F;
            if (!s.feasible) {
                s.infeasible_reason = "need 0 < a/(1 - a(1 + a)) < F(x0)";
                break;
            }
            Q pw = 1;
            for (unsigned k = 1; k <= depth; ++k) s.alphas.push_back(pw *= a);
            Q left = 0;
            for (const auto& al : s.alphas) s.running.push_back(left += al * (1 - left));
            break;
        }
        case SchemeKind::JumpAlternating: {
            s.condition = "C3";
            const HP ln2 = boost::multiprecision::log(HP(2));
            const HP A = 1 / ln2;
            const HP tenp = boost::multiprecision::pow(HP(10), -static_cast<int>(spec.p));
            const HP Fx = HP(F.get_num().get_str()) / HP(F.get_den().get_str());
            const HP Dx = HP(D.get_num().get_str()) / HP(D.get_den().get_str());
            const HP dt = (Dx + tenp) * ln2;
            const HP ah = 1 - (Fx + Dx + tenp / 10);
            std::vector<HP> al;
            al.push_back(1 - A * (dt + ah));
            for (unsigned k = 2; k <= depth; ++k) {
                const HP u = (dt + ah / k) / (dt + ah / (k - 1));
                al.push_back(k % 2 == 0 ? u : HP(1 - u));
            }
            s.feasible = al[0] > 0 && al[0] < Fx && ah > 0;
            for (const auto& x : al) s.feasible = s.feasible && x > 0 && x < 1;
            if (!s.feasible) {
                s.infeasible_reason = "alpha_1 must lie in (0, F(x0)) and all alphas in (0,1)";
                break;
            }
            for (const auto& x : al) s.alphas.push_back(rationalize(x));
            const HP g = Fx - HP(9) * tenp / 10, d = Fx + Dx + tenp / 10;
            s.g_limit = g.convert_to<double>();
            s.d_limit = d.convert_to<double>();
            HP L = 0, R = 1, err = 0, prev_g = -1, prev_d = 2;
            s.monotone = true;
            for (unsigned k = 1; k <= depth; ++k) {
                const HP split = L + al[k - 1] * (R - L);
                const HP corr = A * ah * alternating_tail(k);
                if (k % 2 == 1) {
                    L = split;
                    s.g_values.push_back(L.convert_to<double>());
                    err = std::max(err, HP(boost::multiprecision::abs(L + corr - g)));
                    if (!(L > prev_g)) s.monotone = false;
                    prev_g = L;
                } else {
                    R = split;
                    s.d_values.push_back(R.convert_to<double>());
                    err = std::max(err, HP(boost::multiprecision::abs(R + corr - d)));
                    if (!(R < prev_d)) s.monotone = false;
                    prev_d = R;
                }
            }
            s.limit_error = err.convert_to<double>();
            break;
        }
    }
    if (s.feasible) {
        s.conditions = {{"C1", first_failure_c1(s.alphas, cdf)},
                        {"C2", first_failure_c2(s.alphas, cdf)},
                        {"C3", first_failure_c3(s.alphas, cdf)},
                        {"gap", first_failure_gap(s.alphas, cdf)}};
        if (spec.kind == SchemeKind::Constant) {
            s.accepted = false;
        } else {
            const bool designed = s.status(s.condition).first_failure < 0;
            s.accepted = designed && s.status("gap").first_failure < 0;
            if (spec.kind == SchemeKind::JumpAlternating)
                s.accepted = s.accepted && s.monotone && s.limit_error < 1e-12;
        }
    }
    return s;
}

}  // namespace wicklab
