#pragma once

#include "wicklab/linalg.hpp"
#include "wicklab/rational.hpp"

#include <string>
#include <vector>

namespace wicklab {

// A finite probability space with atoms a_1..a_n of weights p_1..p_n.
struct FiniteSpace {
    std::vector<Q> p;

    std::size_t n() const { return p.size(); }
    void validate() const;
    static FiniteSpace uniform(std::size_t n);
};

// Values of a random variable on each atom.
using DiscreteRV = std::vector<Q>;

// a_ii = p_i^2 - p_i and a_ij = p_i p_j.
QMatrix a_matrix(const FiniteSpace& sp);

// Distinct values of a variable in order of first appearance, and the atoms of each level.
std::vector<std::vector<std::size_t>> level_sets(const DiscreteRV& v);

// (f(b), A g(c)) = 0 over all level-set indicators f and g.
bool independent_by_matrix(const FiniteSpace& sp, const DiscreteRV& b, const DiscreteRV& c);

// P(b = x, c = y) = P(b = x) P(c = y) for all values.
bool independent_by_factorization(const FiniteSpace& sp, const DiscreteRV& b, const DiscreteRV& c);

// Matrix criterion, cross-checked against factorization; throws std::logic_error on disagreement.
bool independent(const FiniteSpace& sp, const DiscreteRV& b, const DiscreteRV& c);

// max{k : 2^(k-1) <= n}
unsigned n_max(unsigned long n);

struct ConditionCheck {
    std::string id;
    bool applicable = true;
    bool pass = true;
    std::string witness;
};

struct NecessaryReport {
    std::vector<ConditionCheck> checks;
    bool all_pass() const;
};

// Necessary conditions for c, b_1..b_N to be independent: the singleton-level lemma and the
// level-count bounds for each pair (c, b_i), and the counting bound for the whole family.
NecessaryReport necessary_conditions(const FiniteSpace& sp, const DiscreteRV& c,
                                     const std::vector<DiscreteRV>& bs);

struct MaxSystem {
    FiniteSpace space;
    std::vector<DiscreteRV> vars;
};

// 2^N uniform atoms and N sign variables, b_k(i) = +1 iff floor(i / 2^(N-k)) is even.
MaxSystem build_max_system(unsigned N);

// Global independence through the atom condition: every intersection of one level set per
// variable has probability equal to the product of the level probabilities.
bool atom_condition(const FiniteSpace& sp, const std::vector<DiscreteRV>& vars);

// Rank of the exact Gram matrix of the monomials X_1^a_1 ... X_n^a_n, a_i in 0..N-1, for
// n_vars i.i.d. copies of a variable with the given values and probabilities.
std::size_t walsh_gram_rank(const std::vector<Q>& values, const std::vector<Q>& probs,
                            unsigned n_vars);

}  // namespace wicklab
