#pragma once

#include "wicklab/rational.hpp"

#include <string>
#include <vector>

namespace wicklab {

// Nested partitions of ]0,1]: level k has 2^k cells ]a_j^k, a_{j+1}^k].
struct PartitionSystem {
    std::vector<Q> alphas;
    std::vector<std::vector<Q>> levels;  // levels[k] holds a_0^k .. a_{2^k}^k

    unsigned depth() const { return static_cast<unsigned>(levels.size()) - 1; }
};

PartitionSystem build_partition(const std::vector<Q>& alphas, unsigned depth);

// Length of the nu-th cell (1-based) at level N from the product of alpha / (1 - alpha) factors.
Q beta_nu(const std::vector<Q>& alphas, unsigned N, unsigned long nu);

// r_k(x) in {-1, +1}; x must lie in ]0,1].
int evaluate_r(const PartitionSystem& ps, unsigned k, const Q& x);

// phi_k(eps): alpha_k for eps = +1 and 1 - alpha_k for eps = -1.
Q phi(const PartitionSystem& ps, unsigned k, int eps);

// Lebesgue measure of {r_{k_1} = eps_1, ..., r_{k_N} = eps_N}.
Q joint_law(const PartitionSystem& ps, const std::vector<unsigned>& ks, const std::vector<int>& eps);

// Product of phi_{k_i}(eps_i).
Q product_law(const PartitionSystem& ps, const std::vector<unsigned>& ks, const std::vector<int>& eps);

// A distribution function with one jump of height delta at x0, F(x0) = level, and
// continuous elsewhere. The image of mu under F is Lebesgue measure on [0,1] with the
// gap ]level, level + delta] removed, plus an atom of mass delta located at level.
struct JumpCDF {
    Q x0;
    Q level;
    Q delta;

    void validate() const;
    Q gap_left() const { return level; }
    Q gap_right() const { return level + delta; }
};

// Measure of an event under the transported law, split into the part carried by the
// continuous piece of F and the part carried by the atom.
struct TransportLaw {
    Q continuous;
    Q atom;
    Q total;
};

TransportLaw transport_joint_law(const PartitionSystem& ps, const JumpCDF& cdf,
                                 const std::vector<unsigned>& ks, const std::vector<int>& eps);

// E[prod_i r_{k_i} o F] under the transported law.
TransportLaw transport_expectation(const PartitionSystem& ps, const JumpCDF& cdf,
                                   const std::vector<unsigned>& ks);

// Per-cell transported masses (atom included) at the deepest level.
std::vector<Q> transport_cell_masses(const PartitionSystem& ps, const JumpCDF& cdf);

// Joint table of (r_{k_1}, ..., r_{k_N}) from deepest-level cell masses. Entry index bit i
// (most significant first) is set when eps_i = -1.
std::vector<Q> joint_table(const std::vector<Q>& cell_masses, unsigned depth,
                           const std::vector<unsigned>& ks);

struct TupleCheck {
    std::vector<unsigned> ks;
    std::vector<int> eps;
    Q joint;
    Q product;
    bool equal = false;
};

struct IndependenceReport {
    std::size_t tuples = 0;
    std::size_t patterns = 0;
    std::size_t failures = 0;
    std::vector<TupleCheck> checks;  // every checked pattern when keep_all, else only failures
    bool ok() const { return failures == 0; }
};

// Checks that every tuple of size 2..max_order drawn from 1..depth factorizes exactly.
// With cdf absent the Lebesgue law is used.
IndependenceReport verify_independence(const PartitionSystem& ps, unsigned max_order,
                                       const JumpCDF* cdf = nullptr, bool keep_all = false);

enum class SchemeKind { Constant, JumpAfter, JumpBefore, JumpAlternating };

struct SchemeSpec {
    SchemeKind kind = SchemeKind::JumpAfter;
    Q param;        // alpha for Constant, a for JumpAfter and JumpBefore
    unsigned p = 2; // precision exponent for JumpAlternating

    // "constant:1/2", "after:1/4", "before:1/10" or "alternating:2".
    static SchemeSpec parse(const std::string& text);
    std::string name() const;
};

struct ConditionStatus {
    std::string id;       // "C1", "C2", "C3" or "gap"
    int first_failure = -1;  // depth of the first failure, -1 when it holds at every depth
};

struct AlphaScheme {
    SchemeSpec spec;
    JumpCDF cdf;
    unsigned depth = 0;
    std::vector<Q> alphas;
    std::string condition;  // the condition the variant is designed to satisfy
    bool feasible = false;  // parameter pre-check
    std::string infeasible_reason;
    std::vector<ConditionStatus> conditions;  // C1, C2, C3 and generic gap containment
    bool accepted = false;
    std::vector<Q> running;  // p(N) for JumpAfter, left end of the last cell for JumpBefore

    // Alternating variant diagnostics, computed in 50-digit arithmetic.
    std::vector<double> g_values;  // g(1), g(3), ...
    std::vector<double> d_values;  // d(2), d(4), ...
    double g_limit = 0, d_limit = 0;
    double limit_error = 0;  // max deviation of tail-corrected values from the limits
    bool monotone = false;

    const ConditionStatus& status(const std::string& id) const;
};

AlphaScheme alpha_scheme(const SchemeSpec& spec, const JumpCDF& cdf, unsigned depth);

// First depth at which each condition fails for a given alpha sequence.
int first_failure_c1(const std::vector<Q>& alphas, const JumpCDF& cdf);
int first_failure_c2(const std::vector<Q>& alphas, const JumpCDF& cdf);
int first_failure_c3(const std::vector<Q>& alphas, const JumpCDF& cdf);
int first_failure_gap(const std::vector<Q>& alphas, const JumpCDF& cdf);

}  // namespace wicklab
