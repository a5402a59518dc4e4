#pragma once

#include "wicklab/linalg.hpp"
#include "wicklab/rational.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace wicklab {

enum class LawKind { Normal01, Exponential, Gamma, GammaCombo, Poisson, Binomial, Custom };

// A probability law from the catalog, or a custom moment sequence.
// Parameter layout per kind:
//   Exponential {lambda}; Gamma {a, b}; GammaCombo {alpha, a1, b1, beta, a2, b2};
//   Poisson {a}; Binomial {N, p}; Normal01 and Custom take none.
struct LawSpec {
    LawKind kind = LawKind::Normal01;
    std::vector<Q> params;
    std::vector<Q> custom_moments;

    static LawSpec normal();
    static LawSpec exponential(const Q& lambda);
    static LawSpec gamma(const Q& a, const Q& b);
    static LawSpec gamma_combo(const Q& alpha, const Q& a1, const Q& b1, const Q& beta, const Q& a2,
                               const Q& b2);
    static LawSpec poisson(const Q& a);
    static LawSpec binomial(unsigned n, const Q& p);
    static LawSpec custom(std::vector<Q> moments);

    // Parses "normal", "exponential:1", "gamma:1/2,1/2", "gammacombo:al,a1,b1,be,a2,b2",
    // "poisson:2", "binomial:3,1/2" or "custom:1,0,1,0,3".
    static LawSpec parse(const std::string& text);

    // Canonical textual form accepted by parse(); used as the law tag.
    std::string tag() const;

    // Throws std::invalid_argument when parameters violate positivity constraints.
    void validate() const;
};

// Raw moments m_0..m_K with a tag naming the law they came from.
struct MomentSequence {
    std::vector<Q> m;
    std::string tag;

    std::size_t max_order() const { return m.empty() ? 0 : m.size() - 1; }
    const Q& operator[](std::size_t k) const { return m.at(k); }
};

// Coefficients a_0..a_K of the reciprocal Laplace series.
struct InverseLaplaceCoeffs {
    std::vector<Q> a;
};

MomentSequence moments(const LawSpec& law, unsigned K);
InverseLaplaceCoeffs inverse_laplace_coeffs(const MomentSequence& m, unsigned K);

// Moments of s*X + t given the moments of X.
MomentSequence affine_moments(const MomentSequence& m, const Q& s, const Q& t);

// Moments of (X - m_1)/sigma. Throws unless the variance is a rational square.
MomentSequence standardized_moments(const MomentSequence& m);

// Exact moments of the centered, reduced version of a catalog law.
MomentSequence standardized_moments(const LawSpec& law, unsigned K);

// Hankel matrix (m_{i+j}) for 0 <= i, j <= K/2.
QMatrix hankel(const MomentSequence& m);
bool hankel_psd(const MomentSequence& m);

// Deterministic stream of i.i.d. draws from the centered, reduced version of a law.
class Sampler {
public:
    Sampler(const LawSpec& law, std::uint64_t seed, std::uint64_t stream = 0);
    double next();
    void fill(std::vector<double>& out);

private:
    LawSpec law_;
    std::mt19937_64 rng_;
    double mean_ = 0.0;
    double sd_ = 1.0;
};

std::vector<double> sample(const LawSpec& law, std::uint64_t seed, std::size_t count);

}  // namespace wicklab
