#pragma once

#include "wicklab/chaos/experiments.hpp"
#include "wicklab/discrete.hpp"
#include "wicklab/rademacher.hpp"
#include "wicklab/report.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wicklab::cli {

using report::ExperimentReport;

// Parses the arguments (without the program name), runs the command and writes the
// report to out (or to --out). Returns 0 iff every check passed, 1 when a check failed,
// 2 on invalid configuration (nothing is written to out in that case).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Default seed: WICKLAB_SEED when set, else 42.
std::uint64_t default_seed();

// Report builders shared by the CLI, the acceptance suite and the tests.
ExperimentReport wick_table(const LawSpec& law, unsigned max_n);
ExperimentReport wick_gram(const LawSpec& law, unsigned max_n);

struct RademacherConfig {
    std::optional<std::vector<Q>> alphas;
    std::optional<SchemeSpec> scheme;
    std::optional<JumpCDF> cdf;
    unsigned depth = 8;
    unsigned max_order = 3;
};
ExperimentReport rademacher_verify(const RademacherConfig& cfg);
ExperimentReport rademacher_example(int which);

ExperimentReport discrete_check(const FiniteSpace& space, const std::vector<DiscreteRV>& rvs);
ExperimentReport discrete_nmax(unsigned long n);
ExperimentReport discrete_maxsys(unsigned N);
ExperimentReport discrete_walsh(const std::vector<Q>& values, const std::vector<Q>& probs, unsigned vars);

struct ChaosConfig {
    LawSpec law = LawSpec::normal();
    unsigned truncation = 8;
    std::size_t paths = 10000;
    std::uint64_t seed = 42;
    std::vector<unsigned> depths;
    unsigned samples = 1000;
    Q t = 1;
    chaos::FunctionSpec h = chaos::FunctionSpec::constant(1);
    chaos::FunctionSpec g = chaos::FunctionSpec::constant(1);
    std::vector<Q> starts{Q(1, 8), Q(1, 4), Q(3, 8), Q(1, 2)};
    std::vector<Q> lengths{Q(1, 16), Q(1, 8), Q(1, 4), Q(1, 2)};
    unsigned random_pairs = 0;  // norm: additional random (h, g) pairs
};
ExperimentReport chaos_norm(const ChaosConfig& cfg);
ExperimentReport chaos_ito(const ChaosConfig& cfg);
ExperimentReport chaos_order4(const ChaosConfig& cfg);
ExperimentReport chaos_isometry(const ChaosConfig& cfg);
ExperimentReport chaos_qv(const ChaosConfig& cfg);
ExperimentReport chaos_bound4(const ChaosConfig& cfg);

// The full battery; quick caps truncation at 8, paths at 10^4 and depths at 6.
ExperimentReport run_all(bool quick, std::uint64_t seed);

// Convergence table rows (depth, estimate, stderr) as CSV, empty when the report has none.
std::string csv_table(const ExperimentReport& r);

}  // namespace wicklab::cli
