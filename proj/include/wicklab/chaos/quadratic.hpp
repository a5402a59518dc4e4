#pragma once

#include "wicklab/chaos/basis.hpp"
#include "wicklab/chaos/mpoly.hpp"
#include "wicklab/laws.hpp"

#include <string>
#include <vector>

namespace wicklab::chaos {

using Realization = std::vector<double>;
using DMatrix = std::vector<std::vector<double>>;

// Symmetric second-order kernel f with a_jk = <f, e_j o e_k> stored as a full symmetric matrix.
struct SymmetricKernel2 {
    ScaledMatrix a;

    // (K + K^T) / 2 of a raw coefficient matrix.
    static SymmetricKernel2 from_raw(const ScaledMatrix& K);
    // Unit-scale symmetric matrix; throws if a is not symmetric.
    static SymmetricKernel2 from_matrix(const QMatrix& a);
    // Unit off-diagonal (j != k) or diagonal (j == k) kernel e_j o e_k, 0-based indices.
    static SymmetricKernel2 unit(std::size_t N, std::size_t j, std::size_t k);

    std::size_t size() const { return a.size(); }
    Q norm_sq() const { return a.frobenius_sq(); }  // sum over all (j, k) of a_jk^2
    bool unit_scales() const;
};

// Phi(h) = sum c_j x_j
double phi(const ChaosVector& h, const Realization& xs);
double phi(const std::vector<double>& c, const Realization& xs);

// phi^(1,1)(f) = sum_{j>k} a_jk x_j x_k ; phi^(2)(f) = sum_j a_jj (x_j^2 - 1).
double phi11(const SymmetricKernel2& f, const Realization& xs);
double phi2(const SymmetricKernel2& f, const Realization& xs);
// Same operators on a plain double matrix (the j > k entries and the diagonal are read).
double phi11(const DMatrix& m, const Realization& xs);
double phi2(const DMatrix& m, const Realization& xs);

// Second-order chaos J_2(f) = Phi^{o2}(f) + Phi(a_1^2 f) = x^T a x - tr a.
double j2(const SymmetricKernel2& f, const Realization& xs);

// x^T K x - tr K, i.e. the stochastic integral with raw kernel K.
double integral(const ScaledMatrix& K, const Realization& xs);
double integral(const DMatrix& K, const Realization& xs);
// Stochastic integral of h against g on the realization (builds the kernel).
double integral(const FunctionSpec& h, const FunctionSpec& g, const BasisSpec& basis, const Realization& xs);

struct ProductIdentity {
    double lhs = 0;       // Phi(h) Phi(g)
    double rhs = 0;       // phi^(2)(h (x) g) + phi^(1,1)(h (x) g + g (x) h) + <h, g>_N
    double residual = 0;  // |lhs - rhs|
    double scale = 0;     // magnitude scale for relative tolerances
};
ProductIdentity product_identity(const std::vector<double>& h, const std::vector<double>& g,
                                 const Realization& xs);
double product_identity_residual(const ChaosVector& h, const ChaosVector& g, const Realization& xs);

// Truncated bracket [Phi(h), Phi(g)]: the diagonal-set kernel vanishes for the diffuse
// reference measure, leaving <h, g>_N.
Q ito_bracket(const ChaosVector& h, const ChaosVector& g);
// Phi(h)Phi(g) - I(h,g) - I(g,h) - [Phi(h), Phi(g)] on the realization.
double ito_residual(const ChaosVector& h, const ChaosVector& g, const ScaledMatrix& K_hg,
                    const ScaledMatrix& K_gh, const Realization& xs);

// Exact variance of x^T M x for i.i.d. standardized coordinates with fourth moment m4:
// 2 sum_{j != k} S_jk^2 + (m4 - 1) sum_j S_jj^2 with S the symmetric part of M.
Q quadratic_form_variance(const ScaledMatrix& M, const Q& m4);

// Moment provider for y_j = sqrt(s_j) x_j with x_j standardized i.i.d.: E[y^k] = s^{k/2} m_k,
// returned only when rational (even k, or k = 1 where it vanishes).
std::function<std::optional<Q>(std::size_t, unsigned)> scaled_moments(const std::vector<Q>& s,
                                                                     const std::vector<Q>& m);

// x^T K x - tr K as a polynomial in y_j = sqrt(s_j) x_j with rational coefficients.
MPoly<Q> integral_poly(const ScaledMatrix& K);

struct NormIdentity {
    Q lhs;              // E|I(h,g)|^2 by symbolic expansion
    Q lhs_formula;      // the same by the quadratic-form variance formula
    Q first_term;       // ||h (x) g 1_C||^2 at truncation
    Q second_term;      // sum_j <h (x) g 1_C, e_j (x) e_j>^2 (m4 - 3)
    Q rhs;              // first_term + second_term
    Q cross;            // tr(K^2) = <f, f~> at truncation
    bool exact = false; // lhs == rhs + cross and lhs == lhs_formula
};
NormIdentity norm_identity(const FunctionSpec& h, const FunctionSpec& g, const BasisSpec& basis,
                           const MomentSequence& standardized);
NormIdentity norm_identity(const ScaledMatrix& K, const MomentSequence& standardized);

enum class NormVariant { A, B, C };
NormVariant parse_norm_variant(const std::string& name);

// Squared weighted norms of a symmetric kernel.
// A: E[Phi^{o2}(f)^2] = 4 sum_{j<k} a_jk^2 + E[P_2^2] sum_j a_jj^2
// B: sum_{j>k} a_jk^2 + (m4 - 1) sum_j a_jj^2   (phi^(1,1) + phi^(2) isometry)
// C: 2 sum_{j!=k} a_jk^2 + (m4 - 1) sum_j a_jj^2 (J_2 isometry)
Q weighted_norm_sq(const SymmetricKernel2& f, NormVariant variant, const MomentSequence& standardized);

// Image of f under the operator paired with the variant, as a polynomial in x (unit scales)
// or y_j = sqrt(s_j) x_j (general scales; variant A then requires unit scales).
MPoly<Q> image_poly(const SymmetricKernel2& f, NormVariant variant, const MomentSequence& standardized);

struct IsometryCheck {
    Q image_sq;   // E[image^2], symbolic
    Q norm_sq;    // ||f||_variant^2
    Q residual;   // |image_sq - norm_sq|
};
IsometryCheck isometry_check(const SymmetricKernel2& f, NormVariant variant, const MomentSequence& standardized);

struct Sandwich {
    Q a, b;         // min and max of {m4 - 1, 2}
    Q plain_sq;     // sum a_jk^2
    Q j2_sq;        // E[J_2(f)^2]
    bool holds = false;
};
Sandwich sandwich(const SymmetricKernel2& f, const MomentSequence& standardized);

struct Phi2Bound {
    Q lhs;          // E|phi^(2)(f)|^2
    Q rhs;          // (K_4 + 2 K_2 + 1) ||f||^2
    double measured_operator_norm = 0;  // sqrt(m4 - 1) on the diagonal subspace
    bool holds = false;
};
// K_p is the p-th absolute moment of the standardized law (K_2 = 1, K_4 = m4).
Phi2Bound phi2_bound(const SymmetricKernel2& f, const MomentSequence& standardized);

// Symbolic expectations of the operator identities on kernels with unit scales.
struct OperatorMoments {
    Q e_phi11_sq;           // E[phi^(1,1)(f)^2]
    Q e_phi11_phi2;         // E[phi^(1,1)(f) phi^(2)(g)]
    Q e_phi2_sq;            // E[phi^(2)(f)^2]
    Q offdiag_sq;           // sum_{j>k} a_jk^2
    Q diag_sq;              // sum_j a_jj^2
};
OperatorMoments operator_moments(const SymmetricKernel2& f, const SymmetricKernel2& g,
                                 const MomentSequence& standardized);

MPoly<Q> phi11_poly(const SymmetricKernel2& f);
MPoly<Q> phi2_poly(const SymmetricKernel2& f);

}  // namespace wicklab::chaos
