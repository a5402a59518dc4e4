#include "wicklab/laws.hpp"

#include "wicklab/poly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wicklab {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    return out;
}

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string join(const std::vector<Q>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_string(v[i]);
    return s;
}

// Series of (1 - c t)^(-a).
std::vector<Q> gamma_series(const Q& a, const Q& c, unsigned K) {
    return series::pow({Q(1), Q(-c)}, Q(-a), K);
}

// Series of e^t - 1 scaled by s.
std::vector<Q> expm1_series(const Q& s, unsigned K) {
    std::vector<Q> u(K + 1, Q(0));
    for (unsigned k = 1; k <= K; ++k) u[k] = s / factorial(k);
    return u;
}

}  // namespace

LawSpec LawSpec::normal() { return {LawKind::Normal01, {}, {}}; }
LawSpec LawSpec::exponential(const Q& lambda) { return {LawKind::Exponential, {lambda}, {}}; }
LawSpec LawSpec::gamma(const Q& a, const Q& b) { return {LawKind::Gamma, {a, b}, {}}; }
LawSpec LawSpec::gamma_combo(const Q& alpha, const Q& a1, const Q& b1, const Q& beta, const Q& a2,
                             const Q& b2) {
    return {LawKind::GammaCombo, {alpha, a1, b1, beta, a2, b2}, {}};
}
LawSpec LawSpec::poisson(const Q& a) { return {LawKind::Poisson, {a}, {}}; }
LawSpec LawSpec::binomial(unsigned n, const Q& p) { return {LawKind::Binomial, {Q(n), p}, {}}; }
LawSpec LawSpec::custom(std::vector<Q> moments) { return {LawKind::Custom, {}, std::move(moments)}; }

LawSpec LawSpec::parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string name = lower(text.substr(0, colon));
    std::vector<Q> args;
    if (colon != std::string::npos)
        for (const auto& part : split(text.substr(colon + 1), ',')) args.push_back(parse_q(part));
    auto need = [&](std::size_t n) {
        if (args.size() != n)
            throw std::invalid_argument("law '" + name + "' expects " + std::to_string(n) +
                                        " parameters");
    };
    LawSpec law;
    if (name == "normal" || name == "normal01" || name == "gaussian") {
        need(0);
        law = normal();
    } else if (name == "exponential" || name == "exp") {
        if (args.empty()) args.push_back(1);
        need(1);
        law = exponential(args[0]);
    } else if (name == "gamma") {
        need(2);
        law = gamma(args[0], args[1]);
    } else if (name == "gammacombo") {
        need(6);
        law = gamma_combo(args[0], args[1], args[2], args[3], args[4], args[5]);
    } else if (name == "poisson") {
        need(1);
        law = poisson(args[0]);
    } else if (name == "binomial") {
        need(2);
        if (!is_integer(args[0])) throw std::invalid_argument("binomial N must be an integer");
        law = binomial(static_cast<unsigned>(args[0].get_num().get_ui()), args[1]);
    } else if (name == "custom") {
        law = custom(args);
    } else {
        throw std::invalid_argument("unknown law '" + name + "'");
    }
    law.validate();
    return law;
}

std::string LawSpec::tag() const {
    switch (kind) {
        case LawKind::Normal01: return "normal";
        case LawKind::Exponential: return "exponential:" + join(params);
        case LawKind::Gamma: return "gamma:" + join(params);
        case LawKind::GammaCombo: return "gammacombo:" + join(params);
        case LawKind::Poisson: return "poisson:" + join(params);
        case LawKind::Binomial: return "binomial:" + join(params);
        case LawKind::Custom: return "custom:" + join(custom_moments);
    }
    return "unknown";
}

void LawSpec::validate() const {
    auto positive = [&](const Q& q, const char* what) {
        if (q <= 0) throw std::invalid_argument(std::string(what) + " must be positive");
    };
    switch (kind) {
        case LawKind::Normal01: break;
        case LawKind::Exponential: positive(params.at(0), "lambda"); break;
        case LawKind::Gamma:
            positive(params.at(0), "a");
            positive(params.at(1), "b");
            break;
        case LawKind::GammaCombo:
            for (const auto& p : params) positive(p, "gamma combination parameter");
            if (params.size() != 6) throw std::invalid_argument("gamma combination needs 6 params");
            break;
        case LawKind::Poisson: positive(params.at(0), "a"); break;
        case LawKind::Binomial:
            positive(params.at(0), "N");
            if (!is_integer(params[0])) throw std::invalid_argument("N must be an integer");
            if (params.at(1) <= 0 || params[1] >= 1) throw std::invalid_argument("p must lie in (0,1)");
            break;
        case LawKind::Custom:
            if (custom_moments.empty() || custom_moments[0] != 1)
                throw std::invalid_argument("custom moments must start with m_0 = 1");
            break;
    }
}

MomentSequence moments(const LawSpec& law, unsigned K) {
    law.validate();
    if (law.kind == LawKind::Custom) {
        if (law.custom_moments.size() < K + 1)
            throw std::invalid_argument("custom moment sequence shorter than requested order");
        return {std::vector<Q>(law.custom_moments.begin(), law.custom_moments.begin() + K + 1),
                law.tag()};
    }
    std::vector<Q> g;
    const auto& p = law.params;
    switch (law.kind) {
        case LawKind::Normal01: {
            std::vector<Q> u(K + 1, Q(0));
            if (K >= 2) u[2] = Q(1, 2);
            g = series::exp(u, K);
            break;
        }
        case LawKind::Exponential: g = gamma_series(1, 1 / p[0], K); break;
        case LawKind::Gamma: g = gamma_series(p[0], 1 / p[1], K); break;
        case LawKind::GammaCombo:
            g = series::mul(gamma_series(p[1], p[0] / p[2], K), gamma_series(p[4], p[3] / p[5], K), K);
            break;
        case LawKind::Poisson: g = series::exp(expm1_series(p[0], K), K); break;
        case LawKind::Binomial: {
            auto f = expm1_series(p[1], K);
            f[0] = 1;
            g = series::pow(f, p[0], K);
            break;
        }
        case LawKind::Custom: break;
    }
    MomentSequence out{std::vector<Q>(K + 1), law.tag()};
    for (unsigned n = 0; n <= K; ++n) out.m[n] = factorial(n) * g[n];
    return out;
}

InverseLaplaceCoeffs inverse_laplace_coeffs(const MomentSequence& m, unsigned K) {
    if (m.m.size() < K + 1) throw std::invalid_argument("moment sequence shorter than K");
    if (m.m[0] != 1) throw std::invalid_argument("m_0 must equal 1");
    InverseLaplaceCoeffs out{std::vector<Q>(K + 1, Q(0))};
    out.a[0] = 1;
    for (unsigned n = 1; n <= K; ++n) {
        Q s = 0;
        for (unsigned k = 1; k <= n; ++k) s += binomial(n, k) * m.m[k] * out.a[n - k];
        out.a[n] = -s;
    }
    return out;
}

MomentSequence affine_moments(const MomentSequence& m, const Q& s, const Q& t) {
    MomentSequence out{std::vector<Q>(m.m.size(), Q(0)),
                       m.tag + "|affine:" + to_string(s) + "," + to_string(t)};
    for (std::size_t n = 0; n < m.m.size(); ++n)
        for (std::size_t k = 0; k <= n; ++k)
            out.m[n] += binomial(static_cast<long>(n), static_cast<long>(k)) *
                        pow_q(s, static_cast<unsigned>(k)) * pow_q(t, static_cast<unsigned>(n - k)) *
                        m.m[k];
    return out;
}

MomentSequence standardized_moments(const MomentSequence& m) {
    if (m.m.size() < 3) throw std::invalid_argument("standardization needs m_1 and m_2");
    const Q var = m.m[2] - m.m[1] * m.m[1];
    Q sd;
    if (var <= 0 || !rational_sqrt(var, sd))
        throw std::invalid_argument("variance " + to_string(var) + " is not a rational square");
    MomentSequence out = affine_moments(m, 1 / sd, -m.m[1] / sd);
    out.tag = m.tag + "|std";
    return out;
}

MomentSequence standardized_moments(const LawSpec& law, unsigned K) {
    return standardized_moments(moments(law, std::max(K, 2u)));
}

QMatrix hankel(const MomentSequence& m) {
    const std::size_t h = m.max_order() / 2;
    QMatrix out = zero_matrix(h + 1, h + 1);
    for (std::size_t i = 0; i <= h; ++i)
        for (std::size_t j = 0; j <= h; ++j) out[i][j] = m.m[i + j];
    return out;
}

bool hankel_psd(const MomentSequence& m) { return is_psd(hankel(m)); }

Sampler::Sampler(const LawSpec& law, std::uint64_t seed, std::uint64_t stream) : law_(law) {
    if (law.kind == LawKind::Custom) throw std::invalid_argument("custom laws have no sampler");
    law.validate();
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    rng_.seed(seq);
    if (law.kind == LawKind::GammaCombo) {
        const auto& p = law.params;
        const double al = p[0].get_d(), a1 = p[1].get_d(), b1 = p[2].get_d();
        const double be = p[3].get_d(), a2 = p[4].get_d(), b2 = p[5].get_d();
        mean_ = al * a1 / b1 + be * a2 / b2;
        sd_ = std::sqrt(al * al * a1 / (b1 * b1) + be * be * a2 / (b2 * b2));
    }
}

double Sampler::next() {
    const auto& p = law_.params;
    switch (law_.kind) {
        case LawKind::Normal01: return std::normal_distribution<double>(0.0, 1.0)(rng_);
        case LawKind::Exponential: return std::exponential_distribution<double>(1.0)(rng_) - 1.0;
        case LawKind::Gamma: {
            const double a = p[0].get_d();
            return (std::gamma_distribution<double>(a, 1.0)(rng_) - a) / std::sqrt(a);
        }
        case LawKind::GammaCombo: {
            const double x = std::gamma_distribution<double>(p[1].get_d(), 1.0 / p[2].get_d())(rng_);
            const double y = std::gamma_distribution<double>(p[4].get_d(), 1.0 / p[5].get_d())(rng_);
            return (p[0].get_d() * x + p[3].get_d() * y - mean_) / sd_;
        }
        case LawKind::Poisson: {
            const double a = p[0].get_d();
            return (static_cast<double>(std::poisson_distribution<long>(a)(rng_)) - a) / std::sqrt(a);
        }
        case LawKind::Binomial: {
            const long n = p[0].get_num().get_si();
            const double pr = p[1].get_d();
            const double x = static_cast<double>(std::binomial_distribution<long>(n, pr)(rng_));
            return (x - static_cast<double>(n) * pr) / std::sqrt(static_cast<double>(n) * pr * (1 - pr));
        }
        case LawKind::Custom: break;
    }
    throw std::logic_error("no sampler for this law");
}

void Sampler::fill(std::vector<double>& out) {
    for (auto& x : out) x = next();
}

std::vector<double> sample(const LawSpec& law, std::uint64_t seed, std::size_t count) {
    Sampler s(law, seed);
    std::vector<double> out(count);
    s.fill(out);
    return out;
}

}  // namespace wicklab
