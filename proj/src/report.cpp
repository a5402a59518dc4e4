#include "wicklab/report.hpp"

namespace wicklab::report {

bool ExperimentReport::passed() const {
    for (const auto& c : checks) {
        if (!c.pass) return false;
    }
    return true;
}

void ExperimentReport::add_check(std::string name, bool pass, json value) {
    checks.push_back(Check{std::move(name), pass, std::move(value)});
}

json ExperimentReport::to_json(bool include_wall_time) const {
    json j;
    j["command"] = command;
    j["config"] = config;
    j["results"] = results;
    json cs = json::array();
    for (const auto& c : checks) {
        json cj;
        cj["name"] = c.name;
        cj["pass"] = c.pass;
        if (!c.value.is_null()) cj["value"] = c.value;
        cs.push_back(cj);
    }
    j["checks"] = cs;
    j["status"] = passed() ? "pass" : "fail";
    if (include_wall_time) j["wall_time_s"] = wall_time;
    return j;
}

ExperimentReport ExperimentReport::from_json(const json& j) {
    ExperimentReport r;
    r.command = j.at("command").get<std::string>();
    r.config = j.at("config");
    r.results = j.at("results");
    for (const auto& cj : j.at("checks")) {
        r.checks.push_back(Check{cj.at("name").get<std::string>(), cj.at("pass").get<bool>(),
                                 cj.contains("value") ? cj.at("value") : json()});
    }
    if (j.contains("wall_time_s")) r.wall_time = j.at("wall_time_s").get<double>();
    return r;
}

json exact(const Q& q) {
    json j;
    j["exact"] = to_string(q);
    return j;
}

json exact(const std::vector<Q>& v) {
    json j;
    j["exact"] = to_strings(v);
    return j;
}

json estimate(double mean, double stderr_, std::size_t n) {
    json j;
    j["estimate"] = mean;
    j["stderr"] = stderr_;
    j["n"] = n;
    return j;
}

}  // namespace wicklab::report
