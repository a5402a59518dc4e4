#pragma once

#include "wicklab/chaos/quadratic.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <vector>

namespace wicklab::chaos {

// Change-of-basis tables between monomials and the law's monic orthogonal polynomials P_k,
// and between monomials and the Hermite polynomials H_k, for degrees up to 4.
struct GammaTables {
    static constexpr unsigned max_degree = 4;

    std::vector<Poly> P;                   // P_0..P_4 for the law
    std::vector<Poly> H;                   // H_0..H_4 (Gaussian)
    std::vector<Q> norms;                  // E[P_k^2]
    std::vector<std::vector<Q>> gamma;     // X^n = sum_k gamma[n][k] P_k(X)
    std::vector<std::vector<Q>> Gamma;     // X^n = sum_k Gamma[n][k] H_k(X)
    std::vector<Q> C_const;                // C_(k,4), k = 0..4

    // Needs standardized moments up to order 8; throws std::domain_error when some P_k,
    // k <= 4, has zero norm (law with fewer than five support points).
    static GammaTables build(const MomentSequence& standardized);

    Q diff(unsigned n, unsigned k) const { return gamma[n][k] - Gamma[n][k]; }
    // A-weight prod E[P_{alpha_i}^2] / prod alpha_i! for a multiplicity pattern.
    Q a_weight(const std::vector<unsigned>& alphas) const;
};

// Symmetric tensor in the o-basis: keys are sorted index multisets, so
// Phi^{on}(T) = sum_m T[m] prod_{j in m} P_{mult_j(m)}(x_j).
class SymTensor {
public:
    using Multiset = std::vector<std::uint8_t>;

    SymTensor() = default;
    static SymTensor scalar(double c);
    static SymTensor from_vector(const std::vector<double>& c);
    // Order-2 tensor of a symmetric kernel: 2 a_jk on {j,k} for j < k, a_jj on {j,j}.
    static SymTensor from_kernel(const DMatrix& a);

    const std::map<Multiset, double>& terms() const { return t_; }
    void add(const Multiset& m, double c);
    double at(const Multiset& m) const;
    std::size_t size() const { return t_.size(); }

    SymTensor& operator+=(const SymTensor& o);
    friend SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
    friend SymTensor operator*(double s, SymTensor a);

    // f o g: the coefficient of a multiset sums products over ordered pairs whose union it is.
    friend SymTensor circ(const SymTensor& a, const SymTensor& b);

    // Phi^{on}(T) on the realization using the law's P_k.
    double evaluate(const GammaTables& tables, const Realization& xs) const;
    // E[Phi^{on}(T)^2] = sum T[m]^2 prod E[P_{mult}^2].
    double norm_a_sq(const GammaTables& tables) const;

private:
    std::map<Multiset, double> t_;
};

// Multiplicity pattern (alpha_i) of a multiset, in index order.
std::vector<std::pair<std::uint8_t, unsigned>> multiplicities(const SymTensor::Multiset& m);

// Annihilation a_k^n: each multiset with multiplicities alpha_i maps to the sum over
// k_1 + ... + k_r = k, 0 <= k_i <= alpha_i, of prod_{k_i != 0} (gamma - Gamma)_{alpha_i, alpha_i - k_i}
// times the multiset with multiplicities alpha_i - k_i.
SymTensor annihilate(const SymTensor& T, unsigned k, const GammaTables& tables);

// f ~1 f as a kernel: the matrix product a a (exact, scales carried along).
SymmetricKernel2 contraction1(const SymmetricKernel2& f);

// The order 0..4 components of J_2(f)^2:
//   order 4: Phi^{o4}(f o f)
//   order 3: Phi^{o3}(a_1^4(f o f))
//   order 2: Phi^{o2}(4 f ~1 f + a_2^4(f o f))
//   order 1: Phi(a_3^4(f o f) + 4 a_1^2(f ~1 f) - 6 m3 sum_j a_jj^2 e_j)
//   order 0: 2 ||f||^2 + a_4^4(f o f)
struct OrderTensors {
    std::array<SymTensor, 5> by_order;
};
OrderTensors order_tensors(const SymmetricKernel2& f, const GammaTables& tables);

struct OrderDecomposition {
    std::array<double, 5> components{};
    double lhs = 0;       // J_2(f)^2 on the realization
    double residual = 0;  // |sum components - lhs|
    double scale = 0;
};
OrderDecomposition order_decomposition(const SymmetricKernel2& f, const GammaTables& tables, const Realization& xs);
OrderDecomposition evaluate_orders(const OrderTensors& ot, const SymmetricKernel2& f, const GammaTables& tables,
                                   const Realization& xs);

// E[J_2(f)^4] as the sum of the squared A-norms of the order components.
double fourth_moment_by_orders(const OrderTensors& ot, const GammaTables& tables);

}  // namespace wicklab::chaos
