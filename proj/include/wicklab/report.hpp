#pragma once

#include "wicklab/rational.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace wicklab::report {

using json = nlohmann::ordered_json;

struct Check {
    std::string name;
    bool pass = false;
    json value;  // exact values as {"exact": "p/q"}, estimates as {"estimate", "stderr", "n"}
};

// Machine-readable result of one CLI command.
struct ExperimentReport {
    std::string command;
    json config = json::object();
    json results = json::object();
    std::vector<Check> checks;
    double wall_time = 0;

    bool passed() const;
    void add_check(std::string name, bool pass, json value = json());
    // Wall time is included only on request so that reports stay byte-reproducible.
    json to_json(bool include_wall_time = false) const;
    static ExperimentReport from_json(const json& j);
};

json exact(const Q& q);
json exact(const std::vector<Q>& v);
json estimate(double mean, double stderr_, std::size_t n);

}  // namespace wicklab::report
