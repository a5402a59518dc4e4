#include "wicklab/chaos/experiments.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace wicklab::chaos {

namespace {

std::vector<double> pairwise_sum(const std::vector<std::vector<double>>& parts, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return parts[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    std::vector<double> a = pairwise_sum(parts, lo, mid);
    const std::vector<double> b = pairwise_sum(parts, mid, hi);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

MCStat stat_from(double sum, double sumsq, std::size_t n) {
    MCStat s;
    s.n = n;
    if (n == 0) return s;
    s.mean = sum / static_cast<double>(n);
    if (n > 1) {
        double var = (sumsq - sum * s.mean) / static_cast<double>(n - 1);
        s.stderr_ = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
    }
    return s;
}

std::vector<Q> dyadic_points(const Q& t, unsigned depth) {
    const std::size_t n = std::size_t{1} << depth;
    std::vector<Q> pts;
    for (std::size_t k = 0; k <= n; ++k) pts.push_back(t * Q(static_cast<long>(k)) / Q(static_cast<long>(n)));
    return pts;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

std::vector<MCStat> monte_carlo(const LawSpec& law, std::size_t dim, std::size_t n_stats, const MCConfig& cfg,
                                const PathFn& fn) {
    if (cfg.chunk_size == 0) throw std::invalid_argument("chunk size must be positive");
    const std::size_t chunks = (cfg.paths + cfg.chunk_size - 1) / cfg.chunk_size;
    std::vector<std::vector<double>> parts(chunks, std::vector<double>(2 * n_stats, 0.0));
    auto run_chunk = [&](std::size_t c) {
        Sampler sampler(law, cfg.seed, c);
        Realization xs(dim);
        std::vector<double> out(n_stats);
        const std::size_t begin = c * cfg.chunk_size, end = std::min(cfg.paths, begin + cfg.chunk_size);
        auto& acc = parts[c];
        for (std::size_t p = begin; p < end; ++p) {
            sampler.fill(xs);
            fn(xs, out.data());
            for (std::size_t i = 0; i < n_stats; ++i) {
                acc[2 * i] += out[i];
                acc[2 * i + 1] += out[i] * out[i];
            }
        }
    };
    unsigned workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(chunks, 1)));
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t c = w; c < chunks; c += workers) run_chunk(c);
            });
        }
        for (auto& th : pool) th.join();
    }
    std::vector<MCStat> stats(n_stats);
    if (chunks == 0) return stats;
    const std::vector<double> total = pairwise_sum(parts, 0, chunks);
    for (std::size_t i = 0; i < n_stats; ++i) stats[i] = stat_from(total[2 * i], total[2 * i + 1], cfg.paths);
    return stats;
}

RiemannDiagnostic riemann_diagnostic(const FunctionSpec& h, const FunctionSpec& g, const BasisSpec& basis,
                                     const LawSpec& law, const std::vector<unsigned>& depths, const MCConfig& cfg) {
    const Q m4 = standardized_moments(law, 4)[4];
    CutKernelBuilder builder(h, g, basis);
    const ScaledMatrix K = builder.kernel(0, 1);
    const DMatrix Kd = K.values();
    const std::size_t N = basis.N;

    RiemannDiagnostic out;
    out.trace_K = K.trace();
    std::vector<DMatrix> renormalized;  // M_n with the mean removed on evaluation
    for (unsigned d : depths) {
        const auto pts = dyadic_points(Q(1), d);
        ScaledMatrix M{zero_matrix(N, N), basis.scales()};
        for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
            const ChaosVector ch = builder.h_coeffs(pts[k]);
            const ChaosVector cg = builder.g_coeffs(pts[k], pts[k + 1]);
            for (std::size_t j = 0; j < N; ++j)
                for (std::size_t l = 0; l < N; ++l) M.R[j][l] += ch.r[j] * cg.r[l];
        }
        RiemannRow row;
        row.depth = d;
        row.intervals = pts.size() - 1;
        row.offset = M.trace();
        ScaledMatrix D = M;
        for (std::size_t j = 0; j < N; ++j)
            for (std::size_t l = 0; l < N; ++l) D.R[j][l] -= K.R[j][l];
        row.exact_error = quadratic_form_variance(D, m4);
        out.rows.push_back(row);
        renormalized.push_back(M.values());
    }
    if (cfg.paths > 0) {
        auto stats = monte_carlo(law, N, depths.size(), cfg, [&](const Realization& xs, double* o) {
            const double I = integral(Kd, xs);
            for (std::size_t i = 0; i < renormalized.size(); ++i) {
                const double e = integral(renormalized[i], xs) - I;
                o[i] = e * e;
            }
        });
        for (std::size_t i = 0; i < stats.size(); ++i) out.rows[i].mc_error = stats[i];
    }
    out.monotone = true;
    for (std::size_t i = 1; i < out.rows.size(); ++i) {
        if (out.rows[i].exact_error > out.rows[i - 1].exact_error) out.monotone = false;
    }
    return out;
}

std::vector<ItoRow> ito_diagnostic(const FunctionSpec& h, const FunctionSpec& g, const std::vector<unsigned>& truncations,
                                   const LawSpec& law, const MCConfig& cfg) {
    std::vector<ItoRow> rows;
    for (unsigned N : truncations) {
        BasisSpec basis{N};
        const ChaosVector ch = coeffs_of(h, std::nullopt, basis), cg = coeffs_of(g, std::nullopt, basis);
        const ScaledMatrix Khg = triangle_kernel(h, g, basis), Kgh = triangle_kernel(g, h, basis);
        ItoRow row;
        row.N = N;
        row.bracket = ito_bracket(ch, cg);
        const std::vector<double> hv = ch.values(), gv = cg.values();
        const DMatrix A = Khg.values(), B = Kgh.values();
        const double br = row.bracket.get_d();
        std::vector<double> worst;
        auto stats = monte_carlo(law, N, 2, cfg, [&](const Realization& xs, double* o) {
            const double r = phi(hv, xs) * phi(gv, xs) - integral(A, xs) - integral(B, xs) - br;
            o[0] = r * r;
            o[1] = std::abs(r);
        });
        row.residual_sq = stats[0];
        // The absolute residual is bounded by rounding; report its mean as the typical size.
        row.max_abs_residual = stats[1].mean;
        rows.push_back(row);
    }
    return rows;
}

FourthMoment fourth_moment_check(const CutKernelBuilder& builder, const FunctionSpec& h1, const FunctionSpec& h2,
                                 const Q& s, const Q& t, const GammaTables& tables, const MomentSequence* direct_moments) {
    if (t < s) throw std::invalid_argument("fourth moment check needs s <= t");
    FourthMoment out;
    out.s = s;
    out.t = t;
    const SymmetricKernel2 f = SymmetricKernel2::from_raw(builder.kernel(s, t));
    out.lhs = fourth_moment_by_orders(order_tensors(f, tables), tables);
    if (direct_moments) {
        const std::size_t n = f.size();
        MPoly<double> J(n);
        const DMatrix a = f.a.values();
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                MPoly<double>::Exps e(n, 0);
                e[j] = static_cast<std::uint8_t>(e[j] + 1);
                e[k] = static_cast<std::uint8_t>(e[k] + 1);
                J.add_term(e, a[j][k]);
            }
        J.add_term(MPoly<double>::Exps(n, 0), -f.a.trace().get_d());
        const MPoly<double> J2 = J * J;
        std::vector<double> md;
        for (const Q& q : direct_moments->m) md.push_back(q.get_d());
        out.lhs_direct = (J2 * J2).expectation_iid(md);
    }
    const auto& C = tables.C_const;
    out.constant = Q(Q(7, 2) * C[1] + C[2] + C[3] + C[4] + 2).get_d();
    out.h1_norm_sq = h1.f.norm_sq();
    out.h2_cut_norm_sq = (h2.f * h2.f).integral(s, t);
    out.rhs = out.constant * std::pow(out.h1_norm_sq.get_d(), 2) * std::pow(out.h2_cut_norm_sq.get_d(), 2);
    out.bounded = out.lhs <= out.rhs;
    return out;
}

FourthMoment fourth_moment_check(const FunctionSpec& h1, const FunctionSpec& h2, const Q& s, const Q& t,
                                 const BasisSpec& basis, const MomentSequence& standardized, bool direct) {
    CutKernelBuilder builder(h1, h2, basis);
    return fourth_moment_check(builder, h1, h2, s, t, GammaTables::build(standardized), direct ? &standardized : nullptr);
}

FourthMomentGrid fourth_moment_grid(const FunctionSpec& h1, const FunctionSpec& h2, const BasisSpec& basis,
                                    const MomentSequence& standardized, const std::vector<Q>& starts,
                                    const std::vector<Q>& lengths) {
    CutKernelBuilder builder(h1, h2, basis);
    const GammaTables tables = GammaTables::build(standardized);
    FourthMomentGrid grid;
    grid.all_bounded = true;
    grid.min_slope = std::numeric_limits<double>::infinity();
    for (const Q& s : starts) {
        std::vector<double> lx, ly;
        for (const Q& tau : lengths) {
            FourthMoment fm = fourth_moment_check(builder, h1, h2, s, s + tau, tables);
            grid.all_bounded = grid.all_bounded && fm.bounded;
            if (fm.lhs > 0) {
                lx.push_back(std::log(tau.get_d()));
                ly.push_back(std::log(fm.lhs));
            }
            grid.points.push_back(fm);
        }
        const double slope = lx.size() >= 2 ? least_squares_slope(lx, ly) : std::nan("");
        grid.slopes.push_back({s, slope});
        grid.min_slope = std::min(grid.min_slope, slope);
    }
    return grid;
}

QuadraticVariation quadratic_variation(const FunctionSpec& h1, const FunctionSpec& h2, const Q& t,
                                       const BasisSpec& basis, const LawSpec& law, const std::vector<unsigned>& depths,
                                       const MCConfig& cfg) {
    if (depths.empty()) throw std::invalid_argument("quadratic variation needs at least one depth");
    const MomentSequence m = standardized_moments(law, 4);
    const unsigned finest = *std::max_element(depths.begin(), depths.end());
    const std::size_t N = basis.N;
    CutKernelBuilder builder(h1, h2, basis);

    QuadraticVariation out;
    out.t = t;
    const auto pts = dyadic_points(t, finest);
    std::vector<ScaledMatrix> fine;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) fine.push_back(builder.kernel(pts[k], pts[k + 1]));
    std::vector<DMatrix> fine_d;
    for (const auto& K : fine) fine_d.push_back(K.values());

    // Exact E[QV_d]: increments at depth d are sums of 2^(finest - d) consecutive fine kernels.
    for (unsigned d : depths) {
        QVRow row;
        row.depth = d;
        row.exact_mean = 0;
        const std::size_t block = std::size_t{1} << (finest - d);
        for (std::size_t b = 0; b < fine.size(); b += block) {
            ScaledMatrix K = fine[b];
            for (std::size_t i = 1; i < block; ++i) K += fine[b + i];
            row.exact_mean += quadratic_form_variance(K, m[4]);
        }
        out.rows.push_back(row);
    }
    const ScaledMatrix M = builder.qv_matrix(t);
    out.exact_rhs_mean = M.trace();
    const DMatrix Md = M.values();
    const double m3 = m[3].get_d();

    const std::size_t nd = depths.size();
    auto stats = monte_carlo(law, N, 1 + 2 * nd, cfg, [&](const Realization& xs, double* o) {
        std::vector<double> inc(fine_d.size());
        for (std::size_t k = 0; k < fine_d.size(); ++k) inc[k] = integral(fine_d[k], xs);
        double rhs = 0;
        for (std::size_t j = 0; j < N; ++j) {
            double row = 0;
            for (std::size_t k = 0; k < N; ++k) row += Md[j][k] * xs[k];
            rhs += xs[j] * row + m3 * Md[j][j] * xs[j];
        }
        o[0] = rhs;
        for (std::size_t i = 0; i < nd; ++i) {
            const std::size_t block = std::size_t{1} << (finest - depths[i]);
            double qv = 0;
            for (std::size_t b = 0; b < inc.size(); b += block) {
                double z = 0;
                for (std::size_t r = 0; r < block; ++r) z += inc[b + r];
                qv += z * z;
            }
            o[1 + 2 * i] = qv;
            o[2 + 2 * i] = (qv - rhs) * (qv - rhs);
        }
    });
    out.rhs = stats[0];
    for (std::size_t i = 0; i < nd; ++i) {
        out.rows[i].qv = stats[1 + 2 * i];
        out.rows[i].error_sq = stats[2 + 2 * i];
    }
    out.monotone = true;
    for (std::size_t i = 1; i < nd; ++i) {
        const auto& prev = out.rows[i - 1].error_sq;
        const auto& cur = out.rows[i].error_sq;
        const double tol = std::sqrt(prev.stderr_ * prev.stderr_ + cur.stderr_ * cur.stderr_);
        if (cur.mean > prev.mean + tol) out.monotone = false;
    }
    const auto it = std::max_element(out.rows.begin(), out.rows.end(),
                                     [](const QVRow& a, const QVRow& b) { return a.depth < b.depth; });
    out.mean_gap = std::abs(it->qv.mean - out.rhs.mean);
    out.mean_gap_stderr = std::sqrt(it->qv.stderr_ * it->qv.stderr_ + out.rhs.stderr_ * out.rhs.stderr_);
    out.mean_ok = out.mean_gap < 3 * out.mean_gap_stderr;
    return out;
}

}  // namespace wicklab::chaos

namespace wicklab::chaos {

namespace {

Q random_ratio(std::mt19937_64& rng, int range, int denom) {
    std::uniform_int_distribution<int> num(-range, range), den(1, denom);
    Q q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

}  // namespace

FunctionSpec random_function(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pieces_d(1, 3), deg_d(0, 2);
    const int pieces = pieces_d(rng);
    // Distinct interior breakpoints on the 1/8 grid.
    std::vector<int> cuts;
    std::uniform_int_distribution<int> cut_d(1, 7);
    while (static_cast<int>(cuts.size()) < pieces - 1) {
        int c = cut_d(rng);
        if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<Q> breaks{Q(0)};
    for (int c : cuts) breaks.push_back(Q(c, 8));
    breaks.push_back(Q(1));
    for (auto& b : breaks) b.canonicalize();
    std::vector<Poly> polys;
    nlohmann::json pj = nlohmann::json::array();
    for (int i = 0; i < pieces; ++i) {
        std::vector<Q> c;
        const int deg = deg_d(rng);
        for (int k = 0; k <= deg; ++k) c.push_back(random_ratio(rng, 3, 2));
        Poly p(c);
        nlohmann::json coeffs = nlohmann::json::array();
        for (const Q& q : p.coeffs()) coeffs.push_back(to_string(q));
        pj.push_back({{"from", to_string(breaks[i])}, {"to", to_string(breaks[i + 1])}, {"coeffs", coeffs}});
        polys.push_back(std::move(p));
    }
    nlohmann::json spec;
    spec["pieces"] = pj;
    return FunctionSpec{PiecewisePoly(breaks, polys), spec.dump()};
}

SymmetricKernel2 random_kernel(std::mt19937_64& rng, std::size_t N) {
    QMatrix a = zero_matrix(N, N);
    for (std::size_t j = 0; j < N; ++j)
        for (std::size_t k = 0; k <= j; ++k) a[j][k] = a[k][j] = random_ratio(rng, 5, 4);
    return SymmetricKernel2::from_matrix(a);
}

}  // namespace wicklab::chaos
