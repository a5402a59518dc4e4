#include "doctest.h"

#include "wicklab/cli.hpp"

#include <sstream>

using namespace wicklab;
using report::ExperimentReport;
using report::json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("report survives a JSON round trip") {
    ExperimentReport r;
    r.command = "demo";
    r.config["law"] = "normal";
    r.results["value"] = report::exact(Q(3, 7));
    r.results["estimate"] = report::estimate(0.5, 0.01, 100);
    r.add_check("ok", true);
    r.add_check("bad", false, 1.5);
    const json j = r.to_json();
    const ExperimentReport back = ExperimentReport::from_json(j);
    CHECK(back.to_json().dump() == j.dump());
    CHECK_FALSE(back.passed());
    CHECK(j["status"] == "fail");
    CHECK(j["results"]["value"]["exact"] == "3/7");
}

TEST_CASE("discrete nmax of 8 atoms is 4") {
    auto r = run({"discrete", "nmax", "--n", "8"});
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["results"]["n_max"] == 4);
}

TEST_CASE("wick table prints the Hermite polynomial of degree 5") {
    auto r = run({"wick", "table", "--law", "normal", "--max-n", "5", "--text"});
    CHECK(r.code == 0);
    CHECK(r.out.find("x^5 - 10x^3 + 15x") != std::string::npos);
    auto j = run({"wick", "table", "--law", "normal", "--max-n", "5"});
    CHECK(json::parse(j.out)["results"]["table"][5]["text"] == "x^5 - 10x^3 + 15x");
}

TEST_CASE("invalid configuration exits with code 2 and no output") {
    auto r = run({"wick", "table", "--law", "gamma:-1,2"});
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    auto u = run({"discrete", "unknown"});
    CHECK(u.code == 2);
    CHECK(u.out.empty());
    auto s = run({"rademacher", "verify", "--scheme", "after:1/4"});
    CHECK(s.code == 2);
}

TEST_CASE("rademacher examples reproduce the transport counterexamples") {
    auto e1 = json::parse(run({"rademacher", "example", "--which", "1"}).out);
    CHECK(e1["results"]["E_r1r2"]["exact"] == "1/4");
    CHECK(e1["results"]["E_r1_E_r2"]["exact"] == "-1/16");
    auto e2 = json::parse(run({"rademacher", "example", "--which", "2"}).out);
    CHECK(e2["results"]["E_r1_E_r2"]["exact"] == "0");
}

TEST_CASE("chaos bound4 and norm produce reports with the expected schema") {
    auto r = run({"chaos", "norm", "--law", "normal", "--truncation", "4"});
    auto j = json::parse(r.out);
    CHECK(j["command"] == "chaos norm");
    CHECK(j.contains("config"));
    CHECK(j.contains("results"));
    CHECK(j.contains("checks"));
    CHECK(j["results"]["identity"]["lhs_equals_rhs_plus_cross"] == true);
    CHECK(j["results"]["identity"]["second_term"]["exact"] == "0");
}

TEST_CASE("csv table has the convergence columns") {
    ExperimentReport r;
    r.results["table"] = json::array({json::array({3, 0.25, 0.01}), json::array({4, 0.125, 0.005})});
    CHECK(cli::csv_table(r) == "depth,estimate,stderr\n3,0.25,0.01\n4,0.125,0.005\n");
}

TEST_CASE("all --quick is deterministic for a fixed seed") {
    auto a = run({"all", "--quick", "--seed", "7"});
    auto b = run({"all", "--quick", "--seed", "7"});
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
}
