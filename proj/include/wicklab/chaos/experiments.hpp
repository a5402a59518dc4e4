#pragma once

#include "wicklab/chaos/tensor.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace wicklab::chaos {

struct MCStat {
    double mean = 0;
    double stderr_ = 0;
    std::size_t n = 0;
};

struct MCConfig {
    std::size_t paths = 10000;
    std::uint64_t seed = 42;
    unsigned workers = 0;            // 0: hardware concurrency
    std::size_t chunk_size = 256;    // paths per deterministic RNG stream
};

// Data-parallel Monte Carlo over standardized i.i.d. realizations of length dim.
// Chunk c draws from stream c; per-chunk sums are reduced pairwise in chunk order, so
// results depend only on (seed, chunk_size) and not on the worker count.
// fn writes n_stats values for one realization.
using PathFn = std::function<void(const Realization&, double* out)>;
std::vector<MCStat> monte_carlo(const LawSpec& law, std::size_t dim, std::size_t n_stats, const MCConfig& cfg,
                                const PathFn& fn);

// Riemann sums S_n = sum_k Phi(h 1_{]0,t_k]}) Phi(g 1_{]t_k,t_{k+1}]}) on dyadic partitions.
// At fixed truncation E[S_n] = sum_k <h 1_{]0,t_k]}, g 1_{]t_k,t_{k+1}]}>_N (the offset), so the
// renormalized sum S_n - offset is compared with I(h, g).
struct RiemannRow {
    unsigned depth = 0;
    std::size_t intervals = 0;
    Q offset;           // E[S_n] at truncation N
    Q exact_error;      // E|S_n - offset - I|^2
    MCStat mc_error;    // Monte Carlo estimate of the same
};
struct RiemannDiagnostic {
    Q trace_K;          // limit of the offsets
    std::vector<RiemannRow> rows;
    bool monotone = false;  // exact errors non-increasing
};
RiemannDiagnostic riemann_diagnostic(const FunctionSpec& h, const FunctionSpec& g, const BasisSpec& basis,
                                     const LawSpec& law, const std::vector<unsigned>& depths, const MCConfig& cfg);

// Ito residual Phi(h)Phi(g) - I(h,g) - I(g,h) - [Phi(h), Phi(g)] across truncations.
struct ItoRow {
    unsigned N = 0;
    Q bracket;
    MCStat residual_sq;
    double max_abs_residual = 0;
};
std::vector<ItoRow> ito_diagnostic(const FunctionSpec& h, const FunctionSpec& g, const std::vector<unsigned>& truncations,
                                   const LawSpec& law, const MCConfig& cfg);

// E|Z_t - Z_s|^4 for Z_t = I(h1, h2 1_{]0,t]}) against the bound
// (7/2 C_41 + C_42 + C_43 + C_44 + 2) ||h1||^4 ||h2 1_{]s,t]}||^4.
struct FourthMoment {
    Q s, t;
    double lhs = 0;          // sum of squared A-norms of the order components
    double lhs_direct = -1;  // direct expansion of E[J^4] when moments are supplied, else -1
    double constant = 0;     // 7/2 C_41 + C_42 + C_43 + C_44 + 2
    Q h1_norm_sq, h2_cut_norm_sq;
    double rhs = 0;
    bool bounded = false;
};
FourthMoment fourth_moment_check(const CutKernelBuilder& builder, const FunctionSpec& h1, const FunctionSpec& h2,
                                 const Q& s, const Q& t, const GammaTables& tables,
                                 const MomentSequence* direct_moments = nullptr);
FourthMoment fourth_moment_check(const FunctionSpec& h1, const FunctionSpec& h2, const Q& s, const Q& t,
                                 const BasisSpec& basis, const MomentSequence& standardized, bool direct = false);

struct FourthMomentGrid {
    std::vector<FourthMoment> points;
    std::vector<std::pair<Q, double>> slopes;   // least-squares log-log slope of lhs vs t - s, per s
    double min_slope = 0;
    bool all_bounded = false;
};
FourthMomentGrid fourth_moment_grid(const FunctionSpec& h1, const FunctionSpec& h2, const BasisSpec& basis,
                                    const MomentSequence& standardized, const std::vector<Q>& starts,
                                    const std::vector<Q>& lengths);

// Quadratic variation QV_d = sum_k |Z_{t_{k+1}} - Z_{t_k}|^2 on the dyadic partition of ]0, t]
// against RHS = x^T M x + m3 sum_j M_jj x_j with M_jk = int_0^t h2^2 c_j c_k.
struct QVRow {
    unsigned depth = 0;
    MCStat qv;
    MCStat error_sq;    // E|QV_d - RHS|^2
    Q exact_mean;       // E[QV_d]
};
struct QuadraticVariation {
    Q t;
    Q exact_rhs_mean;   // tr M
    MCStat rhs;
    std::vector<QVRow> rows;
    bool monotone = false;       // error_sq non-increasing within one combined stderr
    double mean_gap = 0;         // |mean QV_dmax - mean RHS|
    double mean_gap_stderr = 0;  // combined stderr
    bool mean_ok = false;        // gap < 3 combined stderr
};
QuadraticVariation quadratic_variation(const FunctionSpec& h1, const FunctionSpec& h2, const Q& t,
                                       const BasisSpec& basis, const LawSpec& law, const std::vector<unsigned>& depths,
                                       const MCConfig& cfg);

// Random piecewise polynomial on [0,1]: up to three pieces on a 1/8 grid, degree <= 2,
// coefficients in {-3, ..., 3} / {1, 2}.
FunctionSpec random_function(std::mt19937_64& rng);
// Random symmetric kernel with unit scales and entries in {-5, ..., 5} / {1, ..., 4}.
SymmetricKernel2 random_kernel(std::mt19937_64& rng, std::size_t N);

}  // namespace wicklab::chaos
