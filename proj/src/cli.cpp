#include "wicklab/cli.hpp"

#include "wicklab/wick.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

namespace wicklab::cli {

using report::estimate;
using report::exact;
using report::json;

namespace {

std::vector<Q> parse_q_list(const std::string& text) {
    std::vector<Q> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(parse_q(item));
    }
    if (out.empty()) throw std::invalid_argument("empty rational list: " + text);
    return out;
}

std::vector<unsigned> parse_depths(const std::string& text) {
    std::vector<unsigned> out;
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
        const unsigned a = static_cast<unsigned>(std::stoul(text.substr(0, dots)));
        const unsigned b = static_cast<unsigned>(std::stoul(text.substr(dots + 2)));
        if (b < a) throw std::invalid_argument("empty depth range: " + text);
        for (unsigned d = a; d <= b; ++d) out.push_back(d);
        return out;
    }
    for (const Q& q : parse_q_list(text)) {
        if (!is_integer(q) || q < 0) throw std::invalid_argument("depths must be nonnegative integers");
        out.push_back(static_cast<unsigned>(q.get_num().get_ui()));
    }
    return out;
}

json mc_json(const chaos::MCStat& s) { return estimate(s.mean, s.stderr_, s.n); }

json poly_json(const Poly& p) {
    json j;
    j["text"] = p.to_string();
    j["coeffs"] = to_strings(p.coeffs());
    return j;
}

json law_json(const LawSpec& law) { return law.tag(); }

chaos::MCConfig mc_config(const ChaosConfig& cfg) {
    chaos::MCConfig m;
    m.paths = cfg.paths;
    m.seed = cfg.seed;
    return m;
}

json function_json(const chaos::FunctionSpec& f) {
    try {
        return json::parse(f.source);
    } catch (const json::exception&) {
        return f.source;
    }
}

json chaos_config_json(const ChaosConfig& cfg) {
    json c;
    c["law"] = law_json(cfg.law);
    c["truncation"] = cfg.truncation;
    c["paths"] = cfg.paths;
    c["seed"] = cfg.seed;
    c["depths"] = cfg.depths;
    return c;
}

std::vector<std::string> q_strings(const std::vector<Q>& v) { return to_strings(v); }

}  // namespace

std::uint64_t default_seed() {
    if (const char* env = std::getenv("WICKLAB_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("WICKLAB_SEED is not an integer: ") + env);
        }
    }
    return 42;
}

ExperimentReport wick_table(const LawSpec& law, unsigned max_n) {
    law.validate();
    ExperimentReport r;
    r.command = "wick table";
    r.config["law"] = law_json(law);
    r.config["max_n"] = max_n;
    const MomentSequence m = moments(law, 2 * max_n + 2);
    json rows = json::array();
    bool oracles = true, odes = true;
    for (const auto& w : wick_table(m, max_n)) {
        const unsigned n = static_cast<unsigned>(w.degree());
        json row = poly_json(w.poly);
        row["n"] = n;
        rows.push_back(row);
        oracles = oracles && w.poly == wick_recurrence1(m, n).poly && w.poly == wick_recurrence2(m, n).poly;
        odes = odes && ode_residual(w, m, 1).is_zero() && ode_residual(w, m, 2).is_zero();
    }
    r.results["moments"] = to_strings(m.m);
    r.results["table"] = rows;
    r.add_check("explicit_equals_recurrences", oracles);
    r.add_check("ode_residuals_zero", odes);
    return r;
}

ExperimentReport wick_gram(const LawSpec& law, unsigned max_n) {
    law.validate();
    ExperimentReport r;
    r.command = "wick gram";
    r.config["law"] = law_json(law);
    r.config["max_n"] = max_n;
    const MomentSequence m = moments(law, 2 * max_n + 2);
    json rows = json::array();
    bool diagonal = true;
    std::size_t nonzero_off = 0;
    for (unsigned n = 0; n <= max_n; ++n) {
        std::vector<std::string> row;
        for (unsigned k = 0; k <= max_n; ++k) {
            Q g = wick_gram(m, n, k);
            if (n != k && g != 0) {
                diagonal = false;
                ++nonzero_off;
            }
            row.push_back(to_string(g));
        }
        rows.push_back(row);
    }
    r.results["gram"] = rows;
    r.results["diagonal"] = diagonal;
    r.results["nonzero_offdiagonal"] = nonzero_off;
    r.add_check("gram_computed", true);
    return r;
}

ExperimentReport rademacher_verify(const RademacherConfig& cfg) {
    ExperimentReport r;
    r.command = "rademacher verify";
    r.config["depth"] = cfg.depth;
    r.config["max_order"] = cfg.max_order;
    std::vector<Q> alphas;
    if (cfg.scheme) {
        if (!cfg.cdf) throw std::invalid_argument("a jump scheme needs --cdf x0,level,delta");
        r.config["scheme"] = cfg.scheme->name();
        AlphaScheme s = alpha_scheme(*cfg.scheme, *cfg.cdf, cfg.depth);
        json sj;
        sj["condition"] = s.condition;
        sj["feasible"] = s.feasible;
        if (!s.feasible) sj["infeasible_reason"] = s.infeasible_reason;
        json conds = json::array();
        for (const auto& c : s.conditions) conds.push_back({{"id", c.id}, {"first_failure", c.first_failure}});
        sj["conditions"] = conds;
        sj["accepted"] = s.accepted;
        if (cfg.scheme->kind == SchemeKind::JumpAlternating) {
            sj["g_limit"] = s.g_limit;
            sj["d_limit"] = s.d_limit;
            sj["limit_error"] = s.limit_error;
            sj["monotone"] = s.monotone;
        }
        r.results["scheme"] = sj;
        r.add_check("scheme_condition", s.feasible && s.accepted);
        if (!s.feasible) {
            r.results["alphas"] = json::array();
            return r;
        }
        alphas = s.alphas;
    } else if (cfg.alphas) {
        alphas = *cfg.alphas;
    } else {
        throw std::invalid_argument("rademacher verify needs --alphas or --scheme");
    }
    if (cfg.cdf) {
        r.config["cdf"] = {to_string(cfg.cdf->x0), to_string(cfg.cdf->level), to_string(cfg.cdf->delta)};
    }
    const unsigned depth = std::min<unsigned>(cfg.depth, static_cast<unsigned>(alphas.size()));
    PartitionSystem ps = build_partition(alphas, depth);
    r.results["alphas"] = to_strings(ps.alphas);
    const unsigned order = std::min(cfg.max_order, depth);
    auto leb = verify_independence(ps, order);
    r.results["lebesgue"] = {{"tuples", leb.tuples}, {"patterns", leb.patterns}, {"failures", leb.failures}};
    r.add_check("lebesgue_independence", leb.ok());
    if (cfg.cdf) {
        auto tr = verify_independence(ps, order, &*cfg.cdf);
        r.results["transport"] = {{"tuples", tr.tuples}, {"patterns", tr.patterns}, {"failures", tr.failures}};
        // Without a scheme the transported law is a diagnostic: a generic system need not stay independent.
        if (cfg.scheme) r.add_check("transport_independence", tr.ok());
        else r.results["transport"]["independent"] = tr.ok();
    }
    return r;
}

ExperimentReport rademacher_example(int which) {
    ExperimentReport r;
    r.command = "rademacher example";
    r.config["which"] = which;
    JumpCDF cdf;
    if (which == 1) cdf = {Q(1, 2), Q(1, 2), Q(1, 4)};
    else if (which == 2) cdf = {Q(3, 8), Q(3, 8), Q(1, 4)};
    else throw std::invalid_argument("example must be 1 or 2");
    const PartitionSystem ps = build_partition({Q(1, 2), Q(1, 2)}, 2);
    const auto e12 = transport_expectation(ps, cdf, {1, 2});
    const auto e1 = transport_expectation(ps, cdf, {1});
    const auto e2 = transport_expectation(ps, cdf, {2});
    r.results["cdf"] = {to_string(cdf.x0), to_string(cdf.level), to_string(cdf.delta)};
    r.results["E_r1r2"] = exact(e12.continuous);
    r.results["E_r1_E_r2"] = exact(Q(e1.continuous * e2.continuous));
    r.results["E_r1r2_with_atom"] = exact(e12.total);
    r.results["E_r1_E_r2_with_atom"] = exact(Q(e1.total * e2.total));
    if (which == 1) {
        r.add_check("E_r1r2_is_1/4", e12.continuous == Q(1, 4));
        r.add_check("product_is_-1/16", e1.continuous * e2.continuous == Q(-1, 16));
    } else {
        r.add_check("E_r1r2_is_1/4", e12.continuous == Q(1, 4));
        r.add_check("product_is_0", e1.continuous * e2.continuous == 0);
    }
    return r;
}

ExperimentReport discrete_check(const FiniteSpace& space, const std::vector<DiscreteRV>& rvs) {
    space.validate();
    if (rvs.size() < 2) throw std::invalid_argument("discrete check needs at least two --rv");
    for (const auto& v : rvs) {
        if (v.size() != space.n()) throw std::invalid_argument("random variable length differs from the space size");
    }
    ExperimentReport r;
    r.command = "discrete check";
    r.config["space"] = to_strings(space.p);
    json vj = json::array();
    for (const auto& v : rvs) vj.push_back(to_strings(v));
    r.config["rvs"] = vj;
    json pairs = json::array();
    for (std::size_t i = 0; i < rvs.size(); ++i)
        for (std::size_t j = i + 1; j < rvs.size(); ++j) {
            pairs.push_back({{"i", i}, {"j", j},
                             {"independent", independent(space, rvs[i], rvs[j])},
                             {"factorization", independent_by_factorization(space, rvs[i], rvs[j])}});
        }
    r.results["pairs"] = pairs;
    const std::vector<DiscreteRV> others(rvs.begin() + 1, rvs.end());
    auto nec = necessary_conditions(space, rvs[0], others);
    json cj = json::array();
    for (const auto& c : nec.checks)
        cj.push_back({{"id", c.id}, {"applicable", c.applicable}, {"pass", c.pass}, {"witness", c.witness}});
    r.results["necessary_conditions"] = cj;
    r.results["atom_condition"] = atom_condition(space, rvs);
    // The matrix criterion is cross-checked against factorization inside independent().
    r.add_check("criteria_consistent", true);
    return r;
}

ExperimentReport discrete_nmax(unsigned long n) {
    ExperimentReport r;
    r.command = "discrete nmax";
    r.config["n"] = n;
    r.results["n_max"] = n_max(n);
    r.add_check("computed", true);
    return r;
}

ExperimentReport discrete_maxsys(unsigned N) {
    ExperimentReport r;
    r.command = "discrete maxsys";
    r.config["N"] = N;
    MaxSystem ms = build_max_system(N);
    r.results["atoms"] = ms.space.n();
    r.results["n_max"] = n_max(ms.space.n());
    bool pairwise = true;
    for (std::size_t i = 0; i < ms.vars.size(); ++i)
        for (std::size_t j = i + 1; j < ms.vars.size(); ++j)
            pairwise = pairwise && independent(ms.space, ms.vars[i], ms.vars[j]);
    r.add_check("pairwise_independent", pairwise);
    r.add_check("atom_condition", atom_condition(ms.space, ms.vars));
    // N non-constant members plus the constant variable.
    r.add_check("size_is_n_max", n_max(ms.space.n()) == N + 1);
    return r;
}

ExperimentReport discrete_walsh(const std::vector<Q>& values, const std::vector<Q>& probs, unsigned vars) {
    ExperimentReport r;
    r.command = "discrete walsh";
    r.config["values"] = to_strings(values);
    r.config["probs"] = to_strings(probs);
    r.config["vars"] = vars;
    const std::size_t rank = walsh_gram_rank(values, probs, vars);
    const double full = std::pow(static_cast<double>(values.size()), vars);
    r.results["rank"] = rank;
    r.results["full_rank"] = static_cast<std::size_t>(full);
    r.add_check("full_rank", static_cast<double>(rank) == full);
    return r;
}

ExperimentReport chaos_norm(const ChaosConfig& cfg) {
    ExperimentReport r;
    r.command = "chaos norm";
    r.config = chaos_config_json(cfg);
    r.config["h"] = function_json(cfg.h);
    r.config["g"] = function_json(cfg.g);
    r.config["random_pairs"] = cfg.random_pairs;
    const MomentSequence m = standardized_moments(cfg.law, 8);
    const chaos::BasisSpec basis{cfg.truncation};

    auto one_pair = [&](const chaos::FunctionSpec& h, const chaos::FunctionSpec& g) {
        auto ni = chaos::norm_identity(h, g, basis, m);
        json j;
        j["lhs"] = exact(ni.lhs);
        j["rhs"] = exact(ni.rhs);
        j["first_term"] = exact(ni.first_term);
        j["second_term"] = exact(ni.second_term);
        j["cross_term"] = exact(ni.cross);
        j["lhs_equals_rhs"] = ni.lhs == ni.rhs;
        j["lhs_equals_rhs_plus_cross"] = ni.lhs == ni.rhs + ni.cross;
        j["lhs_equals_variance_formula"] = ni.lhs == ni.lhs_formula;
        return std::pair{ni, j};
    };

    auto [ni, main] = one_pair(cfg.h, cfg.g);
    r.results["identity"] = main;
    bool literal = ni.lhs == ni.rhs, corrected = ni.exact;
    std::mt19937_64 rng(cfg.seed);
    json rnd = json::array();
    for (unsigned i = 0; i < cfg.random_pairs; ++i) {
        auto h = chaos::random_function(rng), g = chaos::random_function(rng);
        auto [n2, j2] = one_pair(h, g);
        j2["h"] = function_json(h);
        j2["g"] = function_json(g);
        rnd.push_back(j2);
        literal = literal && n2.lhs == n2.rhs;
        corrected = corrected && n2.exact;
    }
    if (cfg.random_pairs) r.results["random_pairs"] = rnd;

    json decay = json::array();
    for (unsigned N : {4u, 8u, 16u}) {
        auto d = chaos::norm_identity(cfg.h, cfg.g, chaos::BasisSpec{N}, m);
        decay.push_back({{"N", N}, {"cross_term", exact(d.cross)}, {"cross_term_value", d.cross.get_d()}});
    }
    r.results["cross_term_decay"] = decay;

    if (cfg.paths > 0) {
        const auto K = chaos::triangle_kernel(cfg.h, cfg.g, basis).values();
        auto st = chaos::monte_carlo(cfg.law, basis.N, 1, mc_config(cfg), [&](const chaos::Realization& xs, double* o) {
            const double I = chaos::integral(K, xs);
            o[0] = I * I;
        });
        r.results["mc_second_moment"] = mc_json(st[0]);
        r.add_check("mc_agrees_with_lhs", std::abs(st[0].mean - ni.lhs.get_d()) < 4 * st[0].stderr_ + 1e-12,
                    mc_json(st[0]));
    }
    r.add_check("lhs_equals_printed_rhs", literal);
    r.add_check("lhs_equals_rhs_plus_cross_term", corrected);
    if (cfg.law.kind == LawKind::Normal01) r.add_check("gaussian_second_term_zero", ni.second_term == 0);
    return r;
}

ExperimentReport chaos_ito(const ChaosConfig& cfg) {
    ExperimentReport r;
    r.command = "chaos ito";
    r.config = chaos_config_json(cfg);
    r.config["h"] = function_json(cfg.h);
    r.config["g"] = function_json(cfg.g);
    std::vector<unsigned> Ns;
    for (unsigned N = 4; N < cfg.truncation; N *= 2) Ns.push_back(N);
    Ns.push_back(cfg.truncation);
    auto mc = mc_config(cfg);
    auto rows = chaos::ito_diagnostic(cfg.h, cfg.g, Ns, cfg.law, mc);
    json ito = json::array();
    bool small = true;
    for (const auto& row : rows) {
        ito.push_back({{"N", row.N}, {"bracket", exact(row.bracket)}, {"residual_sq", mc_json(row.residual_sq)}});
        small = small && row.residual_sq.mean < 1e-18;
    }
    r.results["ito"] = ito;
    r.add_check("ito_residual_rounding_level", small);

    const std::vector<unsigned> depths = cfg.depths.empty() ? std::vector<unsigned>{1, 2, 3, 4, 5, 6, 7} : cfg.depths;
    auto rd = chaos::riemann_diagnostic(cfg.h, cfg.g, chaos::BasisSpec{cfg.truncation}, cfg.law, depths, mc);
    json rs = json::array(), table = json::array();
    for (const auto& row : rd.rows) {
        rs.push_back({{"depth", row.depth}, {"intervals", row.intervals}, {"offset", exact(row.offset)},
                      {"exact_error", exact(row.exact_error)}, {"exact_error_value", row.exact_error.get_d()},
                      {"mc_error", mc_json(row.mc_error)}});
        table.push_back({row.depth, row.mc_error.mean, row.mc_error.stderr_});
    }
    r.results["riemann"] = {{"trace_K", exact(rd.trace_K)}, {"rows", rs}};
    r.results["table"] = table;
    r.add_check("riemann_error_monotone", rd.monotone);

    // Product identity on a few realizations drawn from the law.
    const chaos::BasisSpec basis{cfg.truncation};
    const auto ch = chaos::coeffs_of(cfg.h, std::nullopt, basis).values();
    const auto cg = chaos::coeffs_of(cfg.g, std::nullopt, basis).values();
    double worst = 0;
    Sampler sampler(cfg.law, cfg.seed, 1u << 20);
    chaos::Realization xs(basis.N);
    for (int i = 0; i < 100; ++i) {
        sampler.fill(xs);
        auto p = chaos::product_identity(ch, cg, xs);
        worst = std::max(worst, p.residual / p.scale);
    }
    r.results["product_identity_max_relative_residual"] = worst;
    r.add_check("product_identity", worst < 1e-12);
    return r;
}

ExperimentReport chaos_order4(const ChaosConfig& cfg) {
    ExperimentReport r;
    r.command = "chaos order4";
    r.config = chaos_config_json(cfg);
    r.config["samples"] = cfg.samples;
    if (cfg.truncation > 8) throw std::invalid_argument("order decomposition supports truncation <= 8");
    const MomentSequence m = standardized_moments(cfg.law, 8);
    const auto tables = chaos::GammaTables::build(m);
    json tj;
    json P = json::array(), gam = json::array(), Gam = json::array();
    for (unsigned k = 0; k <= 4; ++k) {
        P.push_back(poly_json(tables.P[k]));
        gam.push_back(to_strings(tables.gamma[k]));
        Gam.push_back(to_strings(tables.Gamma[k]));
    }
    tj["P"] = P;
    tj["gamma"] = gam;
    tj["Gamma"] = Gam;
    tj["C_const"] = to_strings(tables.C_const);
    r.results["tables"] = tj;

    std::mt19937_64 rng(cfg.seed);
    Sampler sampler(cfg.law, cfg.seed, 1u << 21);
    chaos::Realization xs(cfg.truncation);
    double worst_order = 0, worst_product = 0;
    for (unsigned i = 0; i < cfg.samples; ++i) {
        auto f = chaos::random_kernel(rng, cfg.truncation);
        sampler.fill(xs);
        auto d = chaos::order_decomposition(f, tables, xs);
        worst_order = std::max(worst_order, d.residual / d.scale);
        std::vector<double> h(cfg.truncation), g(cfg.truncation);
        std::uniform_real_distribution<double> u(-2, 2);
        for (auto& v : h) v = u(rng);
        for (auto& v : g) v = u(rng);
        auto p = chaos::product_identity(h, g, xs);
        worst_product = std::max(worst_product, p.residual / p.scale);
    }
    r.results["order_decomposition_max_relative_residual"] = worst_order;
    r.results["product_identity_max_relative_residual"] = worst_product;
    r.add_check("order_decomposition_identity", worst_order < 1e-10, worst_order);
    r.add_check("product_identity", worst_product < 1e-10, worst_product);

    // Orthogonality of the order components at N = 4 by symbolic expectation.
    const std::size_t n = 4;
    auto f = chaos::random_kernel(rng, n);
    auto ot = chaos::order_tensors(f, tables);
    std::vector<double> md;
    for (const Q& q : m.m) md.push_back(q.get_d());
    std::array<chaos::MPoly<double>, 5> polys;
    for (unsigned i = 0; i <= 4; ++i) {
        chaos::MPoly<double> acc(n);
        for (const auto& [ms, c] : ot.by_order[i].terms()) {
            auto term = chaos::MPoly<double>::constant(n, c);
            for (auto [j, a] : chaos::multiplicities(ms)) term = term * chaos::MPoly<double>::univariate(n, j, tables.P[a]);
            acc += term;
        }
        polys[i] = acc;
    }
    double scale = chaos::fourth_moment_by_orders(ot, tables), worst_cross = 0;
    for (unsigned i = 0; i <= 4; ++i)
        for (unsigned j = i + 1; j <= 4; ++j)
            worst_cross = std::max(worst_cross, std::abs((polys[i] * polys[j]).expectation_iid(md)));
    r.results["max_cross_moment"] = worst_cross;
    r.results["fourth_moment_scale"] = scale;
    r.add_check("orders_orthogonal", worst_cross < 1e-10 * scale);
    return r;
}

ExperimentReport chaos_isometry(const ChaosConfig& cfg) {
    ExperimentReport r;
    r.command = "chaos isometry";
    r.config = chaos_config_json(cfg);
    r.config["samples"] = cfg.samples;
    const MomentSequence m = standardized_moments(cfg.law, 8);
    std::mt19937_64 rng(cfg.seed);
    // Exact isometries on a handful of kernels (symbolic expectation), sandwich on the full sweep.
    const unsigned exact_kernels = std::min(cfg.samples, 10u);
    bool iso_c = true, iso_b = true, iso_a = true, sandwich_ok = true, bound_ok = true;
    for (unsigned i = 0; i < cfg.samples; ++i) {
        auto f = chaos::random_kernel(rng, cfg.truncation);
        if (i < exact_kernels) {
            iso_c = iso_c && chaos::isometry_check(f, chaos::NormVariant::C, m).residual == 0;
            iso_b = iso_b && chaos::isometry_check(f, chaos::NormVariant::B, m).residual == 0;
            iso_a = iso_a && chaos::isometry_check(f, chaos::NormVariant::A, m).residual == 0;
            bound_ok = bound_ok && chaos::phi2_bound(f, m).holds;
        }
        sandwich_ok = sandwich_ok && chaos::sandwich(f, m).holds;
    }
    const auto sw = chaos::sandwich(chaos::SymmetricKernel2::unit(cfg.truncation, 0, 0), m);
    r.results["sandwich_constants"] = {{"a", to_string(sw.a)}, {"b", to_string(sw.b)}};
    r.results["exact_kernels"] = exact_kernels;
    r.results["phi2_measured_operator_norm"] = std::sqrt(Q(m[4] - 1).get_d());
    r.add_check("isometry_C_exact", iso_c);
    r.add_check("isometry_B_exact", iso_b);
    r.add_check("isometry_A_exact", iso_a);
    r.add_check("sandwich", sandwich_ok);
    r.add_check("phi2_bound", bound_ok);
    return r;
}

ExperimentReport chaos_qv(const ChaosConfig& cfg) {
    ExperimentReport r;
    r.command = "chaos qv";
    const std::vector<unsigned> depths = cfg.depths.empty() ? std::vector<unsigned>{3, 4, 5, 6, 7} : cfg.depths;
    r.config = chaos_config_json(cfg);
    r.config["depths"] = depths;
    r.config["t"] = to_string(cfg.t);
    r.config["h1"] = function_json(cfg.h);
    r.config["h2"] = function_json(cfg.g);
    auto qv = chaos::quadratic_variation(cfg.h, cfg.g, cfg.t, chaos::BasisSpec{cfg.truncation}, cfg.law, depths,
                                         mc_config(cfg));
    json rows = json::array(), table = json::array();
    for (const auto& row : qv.rows) {
        rows.push_back({{"depth", row.depth}, {"qv", mc_json(row.qv)}, {"error_sq", mc_json(row.error_sq)},
                        {"exact_mean_qv", exact(row.exact_mean)}, {"exact_mean_qv_value", row.exact_mean.get_d()}});
        table.push_back({row.depth, row.error_sq.mean, row.error_sq.stderr_});
    }
    r.results["rows"] = rows;
    r.results["rhs"] = mc_json(qv.rhs);
    r.results["exact_mean_rhs"] = exact(qv.exact_rhs_mean);
    r.results["exact_mean_rhs_value"] = qv.exact_rhs_mean.get_d();
    r.results["mean_gap"] = qv.mean_gap;
    r.results["mean_gap_stderr"] = qv.mean_gap_stderr;
    r.results["table"] = table;
    r.add_check("error_monotone", qv.monotone);
    r.add_check("mean_within_3_stderr", qv.mean_ok, {{"gap", qv.mean_gap}, {"combined_stderr", qv.mean_gap_stderr}});
    return r;
}

ExperimentReport chaos_bound4(const ChaosConfig& cfg) {
    ExperimentReport r;
    r.command = "chaos bound4";
    r.config = chaos_config_json(cfg);
    r.config["h1"] = function_json(cfg.h);
    r.config["h2"] = function_json(cfg.g);
    r.config["starts"] = q_strings(cfg.starts);
    r.config["lengths"] = q_strings(cfg.lengths);
    const MomentSequence m = standardized_moments(cfg.law, 8);
    auto grid = chaos::fourth_moment_grid(cfg.h, cfg.g, chaos::BasisSpec{cfg.truncation}, m, cfg.starts, cfg.lengths);
    json pts = json::array();
    for (const auto& p : grid.points) {
        pts.push_back({{"s", to_string(p.s)}, {"t", to_string(p.t)}, {"lhs", p.lhs}, {"rhs", p.rhs},
                       {"constant", p.constant}, {"bounded", p.bounded}});
    }
    json sl = json::array(), table = json::array();
    for (const auto& [s, v] : grid.slopes) sl.push_back({{"s", to_string(s)}, {"slope", v}});
    for (const auto& p : grid.points) table.push_back({to_string(p.t - p.s), p.lhs, 0.0});
    r.results["points"] = pts;
    r.results["slopes"] = sl;
    r.results["min_slope"] = grid.min_slope;
    r.results["table"] = table;
    r.add_check("lhs_le_rhs", grid.all_bounded);
    r.add_check("slope_ge_1.9", grid.min_slope >= 1.9, grid.min_slope);
    return r;
}

ExperimentReport run_all(bool quick, std::uint64_t seed) {
    ExperimentReport r;
    r.command = "all";
    r.config["quick"] = quick;
    r.config["seed"] = seed;
    std::vector<ExperimentReport> parts;
    const unsigned n_cap = quick ? 8 : 16;
    const std::size_t paths = quick ? 10000 : 100000;
    const unsigned depth_cap = quick ? 6 : 7;

    for (const auto& law : {LawSpec::normal(), LawSpec::exponential(1), LawSpec::gamma(Q(1, 2), Q(1, 2)),
                            LawSpec::gamma(2, 3), LawSpec::poisson(1), LawSpec::binomial(3, Q(1, 2))})
        parts.push_back(wick_table(law, 6));
    parts.push_back(rademacher_example(1));
    parts.push_back(rademacher_example(2));
    {
        RademacherConfig rc;
        rc.scheme = SchemeSpec::parse("after:1/4");
        rc.cdf = JumpCDF{Q(1, 4), Q(1, 4), Q(1, 4)};
        rc.depth = quick ? 8 : 12;
        parts.push_back(rademacher_verify(rc));
    }
    for (unsigned long n : {1ul, 4ul, 8ul}) parts.push_back(discrete_nmax(n));
    parts.push_back(discrete_maxsys(4));
    parts.push_back(discrete_walsh({Q(-1), Q(1)}, {Q(1, 2), Q(1, 2)}, 3));

    for (const auto& law : {LawSpec::normal(), LawSpec::exponential(1)}) {
        ChaosConfig c;
        c.law = law;
        c.seed = seed;
        c.paths = paths;
        c.truncation = std::min(8u, n_cap);
        c.random_pairs = quick ? 2 : 5;
        parts.push_back(chaos_norm(c));
        c.truncation = std::min(16u, n_cap);
        c.depths.clear();
        for (unsigned d = 1; d <= depth_cap; ++d) c.depths.push_back(d);
        parts.push_back(chaos_ito(c));
        c.truncation = 5;
        c.samples = quick ? 100 : 1000;
        parts.push_back(chaos_order4(c));
        c.truncation = 6;
        parts.push_back(chaos_isometry(c));
        parts.push_back(chaos_bound4(c));
        c.truncation = n_cap;
        c.depths.clear();
        for (unsigned d = 3; d <= depth_cap; ++d) c.depths.push_back(d);
        parts.push_back(chaos_qv(c));
    }
    json reports = json::array();
    for (const auto& p : parts) {
        reports.push_back(p.to_json(false));
        r.add_check(p.command + (p.config.contains("law") ? " " + p.config["law"].get<std::string>() : ""), p.passed());
    }
    r.results["reports"] = reports;
    return r;
}

std::string csv_table(const ExperimentReport& r) {
    if (!r.results.contains("table")) return "";
    std::ostringstream os;
    os << "depth,estimate,stderr\n";
    for (const auto& row : r.results["table"]) {
        os << (row[0].is_string() ? row[0].get<std::string>() : row[0].dump()) << ',' << row[1].dump() << ','
           << row[2].dump() << '\n';
    }
    return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Wick polynomial and non-Gaussian chaos laboratory", "wicklab"};
    app.require_subcommand(1);
    std::string out_path, csv_path;
    bool timing = false, text = false;
    app.add_option("--out", out_path, "write the JSON report to this file");
    app.add_option("--csv", csv_path, "write the convergence table (depth, estimate, stderr) as CSV");
    app.add_flag("--timing", timing, "include wall time in the report");

    std::string law_text = "normal";
    unsigned max_n = 5;
    auto* wick = app.add_subcommand("wick", "Wick polynomial tables");
    wick->require_subcommand(1);
    auto* wtable = wick->add_subcommand("table", "explicit Wick polynomials with oracle checks");
    auto* wgram = wick->add_subcommand("gram", "Gram matrix of W_0..W_n");
    for (auto* sc : {wtable, wgram}) {
        sc->add_option("--law", law_text, "law, e.g. normal, exponential:1, gamma:2,3, poisson:1");
        sc->add_option("--max-n", max_n, "largest degree");
    }
    wtable->add_flag("--text", text, "print the polynomials as text instead of JSON");

    std::string alphas_text, scheme_text, cdf_text;
    unsigned depth = 8, max_order = 3;
    int which = 1;
    auto* rad = app.add_subcommand("rademacher", "generalized Rademacher systems");
    rad->require_subcommand(1);
    auto* rverify = rad->add_subcommand("verify", "exact independence of an alpha-system");
    rverify->add_option("--alphas", alphas_text, "comma-separated alphas in (0,1)");
    rverify->add_option("--scheme", scheme_text, "constant:a, after:a, before:a or alternating:p");
    rverify->add_option("--cdf", cdf_text, "jump CDF x0,level,delta");
    rverify->add_option("--depth", depth, "partition depth");
    rverify->add_option("--max-order", max_order, "largest tuple size");
    auto* rexample = rad->add_subcommand("example", "transport counterexamples");
    rexample->add_option("--which", which, "1 or 2");

    std::string space_text;
    std::vector<std::string> rv_texts;
    unsigned long nmax_n = 8;
    unsigned maxsys_n = 4, walsh_vars = 2;
    std::string values_text = "-1,1", probs_text = "1/2,1/2";
    auto* disc = app.add_subcommand("discrete", "finite probability spaces");
    disc->require_subcommand(1);
    auto* dcheck = disc->add_subcommand("check", "independence and necessary conditions");
    dcheck->add_option("--space", space_text, "atom probabilities (default uniform)");
    dcheck->add_option("--rv", rv_texts, "values of a random variable on the atoms (repeatable)")->required();
    auto* dnmax = disc->add_subcommand("nmax", "largest independent family size");
    dnmax->add_option("--n", nmax_n, "number of atoms");
    auto* dmax = disc->add_subcommand("maxsys", "maximal sign system on 2^N atoms");
    dmax->add_option("--N", maxsys_n, "number of variables");
    auto* dwalsh = disc->add_subcommand("walsh", "rank of the monomial Gram matrix");
    dwalsh->add_option("--values", values_text, "support values");
    dwalsh->add_option("--probs", probs_text, "probabilities");
    dwalsh->add_option("--vars", walsh_vars, "number of i.i.d. copies");

    ChaosConfig cc;
    std::string depths_text, h_text, g_text, t_text, starts_text, lengths_text;
    std::uint64_t seed = 0;
    bool seed_given = false;
    auto* chaos_cmd = app.add_subcommand("chaos", "truncated non-Gaussian chaos");
    chaos_cmd->require_subcommand(1);
    std::vector<CLI::App*> chaos_subs;
    auto* cnorm = chaos_cmd->add_subcommand("norm", "exact norm identity of the stochastic integral");
    auto* cito = chaos_cmd->add_subcommand("ito", "Ito formula and Riemann-sum diagnostics");
    auto* corder = chaos_cmd->add_subcommand("order4", "order decomposition of the squared second chaos");
    auto* ciso = chaos_cmd->add_subcommand("isometry", "weighted-norm isometries and the sandwich bound");
    auto* cqv = chaos_cmd->add_subcommand("qv", "quadratic variation experiment");
    auto* cb4 = chaos_cmd->add_subcommand("bound4", "fourth-moment increment bound");
    unsigned truncation = 0;
    std::size_t paths = 0;
    bool paths_given = false;
    for (auto* sc : {cnorm, cito, corder, ciso, cqv, cb4}) {
        sc->add_option("--law", law_text, "law of the coordinates");
        sc->add_option("--truncation", truncation, "number of basis functions N");
        sc->add_option("--paths", paths, "Monte Carlo paths");
        sc->add_option("--seed", seed, "random seed (default WICKLAB_SEED or 42)");
        sc->add_option("--depths", depths_text, "dyadic depths, e.g. 3..7 or 1,2,4");
        chaos_subs.push_back(sc);
    }
    for (auto* sc : {cnorm, cito}) {
        sc->set_help_flag("--help", "print this help message and exit");
        sc->add_option("--h", h_text, "integrand as piecewise-polynomial JSON");
        sc->add_option("--g", g_text, "integrator as piecewise-polynomial JSON");
    }
    cnorm->add_option("--random-pairs", cc.random_pairs, "additional random (h, g) pairs");
    for (auto* sc : {cqv, cb4}) {
        sc->add_option("--h1", h_text, "h1 as piecewise-polynomial JSON");
        sc->add_option("--h2", g_text, "h2 as piecewise-polynomial JSON");
    }
    cqv->add_option("--t", t_text, "time horizon");
    for (auto* sc : {corder, ciso}) sc->add_option("--samples", cc.samples, "number of random kernels");
    cb4->add_option("--starts", starts_text, "grid of s values");
    cb4->add_option("--lengths", lengths_text, "grid of t - s values");

    bool quick = false;
    auto* all = app.add_subcommand("all", "run the full battery");
    all->add_flag("--quick", quick, "reduced profile");
    all->add_option("--seed", seed, "random seed (default WICKLAB_SEED or 42)");

    std::vector<std::string> argv_store{"wicklab"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    const auto start = std::chrono::steady_clock::now();
    ExperimentReport rep;
    std::string text_out;
    try {
        for (auto* sc : chaos_subs) {
            if (sc->count("--seed")) seed_given = true;
            if (sc->count("--paths")) paths_given = true;
        }
        if (all->count("--seed")) seed_given = true;
        const std::uint64_t seed_value = seed_given ? seed : default_seed();

        if (*wtable) {
            rep = wick_table(LawSpec::parse(law_text), max_n);
            if (text) {
                std::ostringstream os;
                for (const auto& row : rep.results["table"])
                    os << "W_" << row["n"].get<unsigned>() << "(x) = " << row["text"].get<std::string>() << "\n";
                text_out = os.str();
            }
        } else if (*wgram) {
            rep = wick_gram(LawSpec::parse(law_text), max_n);
        } else if (*rverify) {
            RademacherConfig rc;
            if (!alphas_text.empty()) rc.alphas = parse_q_list(alphas_text);
            if (!scheme_text.empty()) rc.scheme = SchemeSpec::parse(scheme_text);
            if (!cdf_text.empty()) {
                auto v = parse_q_list(cdf_text);
                if (v.size() != 3) throw std::invalid_argument("--cdf needs x0,level,delta");
                rc.cdf = JumpCDF{v[0], v[1], v[2]};
            }
            rc.depth = depth;
            rc.max_order = max_order;
            rep = rademacher_verify(rc);
        } else if (*rexample) {
            rep = rademacher_example(which);
        } else if (*dcheck) {
            std::vector<DiscreteRV> rvs;
            for (const auto& t : rv_texts) rvs.push_back(parse_q_list(t));
            FiniteSpace sp = space_text.empty() ? FiniteSpace::uniform(rvs.at(0).size()) : FiniteSpace{parse_q_list(space_text)};
            rep = discrete_check(sp, rvs);
        } else if (*dnmax) {
            rep = discrete_nmax(nmax_n);
        } else if (*dmax) {
            rep = discrete_maxsys(maxsys_n);
        } else if (*dwalsh) {
            rep = discrete_walsh(parse_q_list(values_text), parse_q_list(probs_text), walsh_vars);
        } else if (*chaos_cmd) {
            cc.law = LawSpec::parse(law_text);
            cc.law.validate();
            cc.seed = seed_value;
            if (!depths_text.empty()) cc.depths = parse_depths(depths_text);
            if (!h_text.empty()) cc.h = chaos::FunctionSpec::parse(h_text);
            if (!g_text.empty()) cc.g = chaos::FunctionSpec::parse(g_text);
            if (!t_text.empty()) cc.t = parse_q(t_text);
            if (!starts_text.empty()) cc.starts = parse_q_list(starts_text);
            if (!lengths_text.empty()) cc.lengths = parse_q_list(lengths_text);
            auto pick = [&](unsigned dflt) { return truncation ? truncation : dflt; };
            if (*cnorm) {
                cc.truncation = pick(8);
                cc.paths = paths_given ? paths : 0;
                rep = chaos_norm(cc);
            } else if (*cito) {
                cc.truncation = pick(16);
                cc.paths = paths_given ? paths : 10000;
                rep = chaos_ito(cc);
            } else if (*corder) {
                cc.truncation = pick(5);
                rep = chaos_order4(cc);
            } else if (*ciso) {
                cc.truncation = pick(6);
                rep = chaos_isometry(cc);
            } else if (*cqv) {
                cc.truncation = pick(16);
                cc.paths = paths_given ? paths : 10000;
                rep = chaos_qv(cc);
            } else if (*cb4) {
                cc.truncation = pick(6);
                rep = chaos_bound4(cc);
            }
        } else if (*all) {
            rep = run_all(quick, seed_value);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string body = text_out.empty() ? rep.to_json(timing).dump(2) + "\n" : text_out;
    if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) {
            err << "error: cannot write " << csv_path << "\n";
            return 2;
        }
        csv << csv_table(rep);
    }
    if (out_path.empty()) {
        out << body;
    } else {
        std::ofstream f(out_path);
        if (!f) {
            err << "error: cannot write " << out_path << "\n";
            return 2;
        }
        f << body;
    }
    return rep.passed() ? 0 : 1;
}

}  // namespace wicklab::cli
