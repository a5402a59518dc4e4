#pragma once

#include "wicklab/linalg.hpp"
#include "wicklab/poly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wicklab::chaos {

// Piecewise polynomial on [0,1]: polys[i] applies on ]breaks[i], breaks[i+1]].
class PiecewisePoly {
public:
    PiecewisePoly();  // the zero function
    PiecewisePoly(std::vector<Q> breaks, std::vector<Poly> polys);
    static PiecewisePoly constant(const Q& c);
    static PiecewisePoly polynomial(const Poly& p);

    const std::vector<Q>& breaks() const { return breaks_; }
    const std::vector<Poly>& polys() const { return polys_; }

    // Same function with the given extra breakpoints inserted.
    PiecewisePoly refined(const std::vector<Q>& extra) const;

    // f * 1_{]lo, hi]}
    PiecewisePoly restricted(const Q& lo, const Q& hi) const;
    // Antiderivative F(y) = integral of f over [0, y].
    PiecewisePoly antiderivative() const;

    Q integral(const Q& lo, const Q& hi) const;
    Q integral() const { return integral(0, 1); }
    Q value(const Q& x) const;  // value at x in ]0,1], using the piece ]b_i, b_{i+1}] containing x
    double value(double x) const;
    Q norm_sq() const;

    friend PiecewisePoly operator*(const PiecewisePoly& a, const PiecewisePoly& b);
    friend PiecewisePoly operator*(const PiecewisePoly& a, const Poly& p);
    friend PiecewisePoly operator+(const PiecewisePoly& a, const PiecewisePoly& b);

private:
    std::size_t piece_of(const Q& x) const;
    std::vector<Q> breaks_;
    std::vector<Poly> polys_;
};

// A function on [0,1] given by piecewise polynomial pieces.
// JSON forms accepted by parse: a number ("1/2" or 3), a coefficient array ["0","1"] for x,
// or {"pieces":[{"from":"0","to":"1/2","coeffs":["1"]}, ...]} (zero where no piece applies).
struct FunctionSpec {
    PiecewisePoly f;
    std::string source;

    static FunctionSpec parse(const std::string& json_text);
    static FunctionSpec constant(const Q& c);
    static FunctionSpec polynomial(const Poly& p);
};

// Orthonormal shifted Legendre basis of L^2([0,1], dx): e_j = sqrt(s_j) q_j with
// q_j(x) = P_{j-1}(2x - 1) (rational coefficients) and s_j = 2j - 1.
struct BasisSpec {
    unsigned N = 8;

    Poly q(unsigned j) const;  // 1-based
    Q scale(unsigned j) const { return Q(2 * static_cast<long>(j) - 1); }
    std::vector<Q> scales() const;
    double e(unsigned j, double x) const;
};

// Coefficients c_j = <h, e_j> = sqrt(s_j) r_j with exact rational parts r_j.
struct ChaosVector {
    std::vector<Q> r;
    std::vector<Q> s;

    std::size_t size() const { return r.size(); }
    std::vector<double> values() const;
    Q norm_sq() const;  // sum c_j^2
};

// <h 1_{]0, t_cut]}, e_j> for j = 1..N.
ChaosVector coeffs_of(const FunctionSpec& h, std::optional<Q> t_cut, const BasisSpec& basis);
ChaosVector coeffs_of(const PiecewisePoly& h, const BasisSpec& basis);

// Matrix with entries K_jk = sqrt(s_j s_k) R_jk where R is exact.
struct ScaledMatrix {
    QMatrix R;
    std::vector<Q> s;

    std::size_t size() const { return R.size(); }
    double value(std::size_t j, std::size_t k) const;
    std::vector<std::vector<double>> values() const;
    ScaledMatrix transposed() const;
    ScaledMatrix symmetrized() const;  // (K + K^T) / 2
    Q frobenius_sq() const;            // sum K_jk^2
    Q trace() const;                   // sum K_jj
    Q trace_of_square() const;         // sum K_jk K_kj
    Q diag_sq() const;                 // sum K_jj^2
    ScaledMatrix& operator+=(const ScaledMatrix& o);
};

ScaledMatrix plain_matrix(const QMatrix& a);  // unit scales

enum class Region { Lower, Upper };  // Lower: C = {x < y}; Upper: the transposed region {x > y}

// Entries <h (x) g 1_region, e_j (x) e_k> with h in the first variable.
ScaledMatrix triangle_kernel(const FunctionSpec& h, const FunctionSpec& g, const BasisSpec& basis,
                             Region region = Region::Lower);

// Precomputed antiderivatives for kernels of h (x) (g 1_{]a,b]}) 1_C over many cuts.
class CutKernelBuilder {
public:
    CutKernelBuilder(const FunctionSpec& h, const FunctionSpec& g, const BasisSpec& basis);
    ScaledMatrix kernel(const Q& a, const Q& b) const;
    // <h 1_{]0,s]}, e_j>
    ChaosVector h_coeffs(const Q& s) const;
    // <g 1_{]a,b]}, e_j>
    ChaosVector g_coeffs(const Q& a, const Q& b) const;
    // M_jk = int_0^t g(u)^2 c_j(u) c_k(u) du with c_j(u) = <h 1_{]0,u]}, e_j>.
    ScaledMatrix qv_matrix(const Q& t) const;
    const BasisSpec& basis() const { return basis_; }

private:
    BasisSpec basis_;
    PiecewisePoly g2_;
    std::vector<PiecewisePoly> H_;                     // H_j(y) = int_0^y h q_j
    std::vector<PiecewisePoly> G_;                     // G_j(y) = int_0^y g q_j
    std::vector<std::vector<PiecewisePoly>> prim_;     // antiderivative of g q_k H_j
};

}  // namespace wicklab::chaos
