#include "wicklab/discrete.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace wicklab {

namespace {

void check_rv(const FiniteSpace& sp, const DiscreteRV& v) {
    if (v.size() != sp.n()) throw std::invalid_argument("random variable length differs from space size");
}

Q level_prob(const FiniteSpace& sp, const std::vector<std::size_t>& atoms) {
    Q s = 0;
    for (auto i : atoms) s += sp.p[i];
    return s;
}

std::string join_sizes(const std::vector<std::vector<std::size_t>>& lv) {
    std::string s = "(";
    for (std::size_t i = 0; i < lv.size(); ++i) s += (i ? "," : "") + std::to_string(lv[i].size());
    return s + ")";
}

}  // namespace

void FiniteSpace::validate() const {
    if (p.empty()) throw std::invalid_argument("empty space");
    Q s = 0;
    for (const auto& x : p) {
        if (x <= 0) throw std::invalid_argument("atom weights must be positive");
        s += x;
    }
    if (s != 1) throw std::invalid_argument("atom weights must sum to 1");
}

FiniteSpace FiniteSpace::uniform(std::size_t n) {
    Q w(1, static_cast<unsigned long>(n));
    return FiniteSpace{std::vector<Q>(n, w)};
}

QMatrix a_matrix(const FiniteSpace& sp) {
    sp.validate();
    const std::size_t n = sp.n();
    QMatrix a = zero_matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = (i == j) ? Q(sp.p[i] * sp.p[i] - sp.p[i]) : Q(sp.p[i] * sp.p[j]);
    return a;
}

std::vector<std::vector<std::size_t>> level_sets(const DiscreteRV& v) {
    std::vector<Q> seen;
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        auto it = std::find(seen.begin(), seen.end(), v[i]);
        if (it == seen.end()) {
            seen.push_back(v[i]);
            out.push_back({i});
        } else {
            out[static_cast<std::size_t>(it - seen.begin())].push_back(i);
        }
    }
    return out;
}

bool independent_by_matrix(const FiniteSpace& sp, const DiscreteRV& b, const DiscreteRV& c) {
    check_rv(sp, b);
    check_rv(sp, c);
    const auto A = a_matrix(sp);
    for (const auto& lc : level_sets(c)) {
        // A g for the indicator g of one level of c.
        std::vector<Q> ag(sp.n(), Q(0));
        for (std::size_t i = 0; i < sp.n(); ++i)
            for (auto j : lc) ag[i] += A[i][j];
        for (const auto& lb : level_sets(b)) {
            Q s = 0;
            for (auto i : lb) s += ag[i];
            if (s != 0) return false;
        }
    }
    return true;
}

bool independent_by_factorization(const FiniteSpace& sp, const DiscreteRV& b, const DiscreteRV& c) {
    check_rv(sp, b);
    check_rv(sp, c);
    sp.validate();
    for (const auto& lb : level_sets(b))
        for (const auto& lc : level_sets(c)) {
            Q joint = 0;
            for (auto i : lb)
                if (std::find(lc.begin(), lc.end(), i) != lc.end()) joint += sp.p[i];
            if (joint != level_prob(sp, lb) * level_prob(sp, lc)) return false;
        }
    return true;
}

bool independent(const FiniteSpace& sp, const DiscreteRV& b, const DiscreteRV& c) {
    const bool m = independent_by_matrix(sp, b, c);
    if (m != independent_by_factorization(sp, b, c))
        throw std::logic_error("matrix criterion and joint factorization disagree");
    return m;
}

unsigned n_max(unsigned long n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    unsigned k = 1;
    while ((1UL << k) <= n) ++k;  // 2^(k) <= n means k+1 is admissible
    return k;
}

bool NecessaryReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return !c.applicable || c.pass; });
}

NecessaryReport necessary_conditions(const FiniteSpace& sp, const DiscreteRV& c,
                                     const std::vector<DiscreteRV>& bs) {
    sp.validate();
    check_rv(sp, c);
    const std::size_t n = sp.n();
    const auto lc = level_sets(c);
    const std::size_t ncd = lc.size();
    NecessaryReport rep;
    for (std::size_t i = 0; i < bs.size(); ++i) {
        check_rv(sp, bs[i]);
        const auto lb = level_sets(bs[i]);
        const std::string tag = "b" + std::to_string(i + 1);
        const bool nonconstant = lb.size() > 1;

        ConditionCheck singleton{"singleton_level:" + tag, nonconstant && ncd > 1, true, ""};
        for (std::size_t k = 0; k < ncd; ++k)
            if (lc[k].size() == 1 && singleton.applicable) {
                singleton.pass = false;
                singleton.witness = "level " + std::to_string(k + 1) + " of c is a single atom";
                break;
            }
        rep.checks.push_back(singleton);

        bool prop_hyp = ncd >= 2 && ncd <= n - 1 && nonconstant;
        for (const auto& l : lc) prop_hyp = prop_hyp && l.size() >= 2 && l.size() < n;

        ConditionCheck mults{"level_multiplicity:" + tag, prop_hyp, true, ""};
        if (prop_hyp)
            for (std::size_t v = 0; v < lb.size(); ++v)
                if (lb[v].size() < 2) {
                    mults.pass = false;
                    mults.witness = "level " + std::to_string(v + 1) + " of " + tag + " has one atom";
                    break;
                }
        rep.checks.push_back(mults);

        ConditionCheck count{"level_count_bound:" + tag, prop_hyp, true, ""};
        if (prop_hyp) {
            std::size_t tightest = n;
            std::size_t arg = 0;
            for (std::size_t k = 0; k < ncd; ++k) {
                std::size_t bound = n;
                for (std::size_t j = 0; j < ncd; ++j)
                    if (j != k) bound = std::min({bound, lc[j].size(), n - lc[j].size()});
                if (bound < tightest) {
                    tightest = bound;
                    arg = k;
                }
            }
            count.pass = lb.size() <= tightest;
            count.witness = "q=" + std::to_string(lb.size()) + " bound=" + std::to_string(tightest) +
                            " (k=" + std::to_string(arg + 1) + ", levels " + join_sizes(lc) + ")";
        }
        rep.checks.push_back(count);
    }
    ConditionCheck prod{"counting_bound", ncd >= 1 && ncd < n, true, ""};
    std::size_t total = ncd;
    for (const auto& b : bs) {
        const auto s = level_sets(b).size();
        if (s > 1) total *= s;
    }
    if (prod.applicable) {
        prod.pass = total <= n;
        prod.witness = "NCD*prod n(b_i)=" + std::to_string(total) + " n=" + std::to_string(n);
    }
    rep.checks.push_back(prod);
    return rep;
}

MaxSystem build_max_system(unsigned N) {
    if (N < 1 || N > 20) throw std::invalid_argument("N must be in 1..20");
    const std::size_t n = std::size_t{1} << N;
    MaxSystem ms{FiniteSpace::uniform(n), {}};
    for (unsigned k = 1; k <= N; ++k) {
        DiscreteRV b(n);
        for (std::size_t i = 0; i < n; ++i) b[i] = ((i >> (N - k)) % 2 == 0) ? Q(1) : Q(-1);
        ms.vars.push_back(std::move(b));
    }
    return ms;
}

bool atom_condition(const FiniteSpace& sp, const std::vector<DiscreteRV>& vars) {
    sp.validate();
    std::vector<std::vector<std::vector<std::size_t>>> levels;
    for (const auto& v : vars) {
        check_rv(sp, v);
        levels.push_back(level_sets(v));
    }
    std::vector<std::size_t> choice(vars.size(), 0);
    std::function<bool(std::size_t)> rec = [&](std::size_t d) -> bool {
        if (d == vars.size()) {
            Q joint = 0, prod = 1;
            for (std::size_t i = 0; i < sp.n(); ++i) {
                bool in = true;
                for (std::size_t v = 0; v < vars.size() && in; ++v) {
                    const auto& l = levels[v][choice[v]];
                    in = std::find(l.begin(), l.end(), i) != l.end();
                }
                if (in) joint += sp.p[i];
            }
            for (std::size_t v = 0; v < vars.size(); ++v) prod *= level_prob(sp, levels[v][choice[v]]);
            return joint == prod;
        }
        for (choice[d] = 0; choice[d] < levels[d].size(); ++choice[d])
            if (!rec(d + 1)) return false;
        return true;
    };
    return rec(0);
}

std::size_t walsh_gram_rank(const std::vector<Q>& values, const std::vector<Q>& probs, unsigned n_vars) {
    if (values.size() != probs.size() || values.empty()) throw std::invalid_argument("bad law");
    FiniteSpace{probs}.validate();
    const std::size_t N = values.size();
    std::size_t size = 1;
    for (unsigned i = 0; i < n_vars; ++i) {
        size *= N;
        if (size > 4096) throw std::invalid_argument("Gram matrix larger than 4096");
    }
    std::vector<Q> m(2 * N - 1, Q(0));
    for (std::size_t k = 0; k < m.size(); ++k)
        for (std::size_t i = 0; i < N; ++i) m[k] += probs[i] * pow_q(values[i], static_cast<unsigned>(k));
    auto digits = [&](std::size_t idx) {
        std::vector<std::size_t> d(n_vars);
        for (unsigned i = 0; i < n_vars; ++i) {
            d[i] = idx % N;
            idx /= N;
        }
        return d;
    };
    QMatrix g = zero_matrix(size, size);
    for (std::size_t a = 0; a < size; ++a) {
        const auto da = digits(a);
        for (std::size_t b = 0; b < size; ++b) {
            const auto db = digits(b);
            Q e = 1;
            for (unsigned i = 0; i < n_vars; ++i) e *= m[da[i] + db[i]];
            g[a][b] = e;
        }
    }
    return rank(g);
}

}  // namespace wicklab
