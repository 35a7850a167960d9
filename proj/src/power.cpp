#include "ponplace/power.hpp"

#include <map>
#include <stdexcept>

#include <json.hpp>

namespace ponplace {

double server_power(double util_ghz, double capacity_ghz, const PowerParams& p) {
    if (util_ghz < 0) throw std::invalid_argument("negative utilization");
    if (util_ghz > capacity_ghz)
        throw std::invalid_argument("utilization " + std::to_string(util_ghz) +
                                    " GHz exceeds capacity " +
                                    std::to_string(capacity_ghz) + " GHz");
    if (util_ghz == 0.0) return 0.0;
    return p.server_idle_w +
           (p.server_max_w - p.server_idle_w) * util_ghz / capacity_ghz;
}

EvalResult evaluate(const Instance& inst, const Placement& placement,
                    const RoutingMap& map) {
    for (const auto& [vm, server] : placement.host) {
        if (!inst.has_vm(vm))
            throw std::invalid_argument("placement references unknown vm " +
                                        std::to_string(vm));
        if (!inst.has_server(server))
            throw std::invalid_argument("placement references unknown server " +
                                        std::to_string(server));
    }
    for (const auto& v : inst.vms)
        if (!placement.host.count(v.id))
            throw std::invalid_argument("placement misses vm " + std::to_string(v.id));

    EvalResult res;
    const PowerParams& p = inst.power;

    std::map<ServerId, double> util;
    for (const auto& v : inst.vms) util[placement.host.at(v.id)] += v.requirement_ghz;

    for (const auto& s : inst.servers) {
        auto it = util.find(s.id);
        double u = it == util.end() ? 0.0 : it->second;
        if (u > 0) {
            res.power.active_servers++;
            // Same linear curve past capacity so infeasible placements still
            // get a diagnostic figure; the violation is reported below.
            res.power.pc_w +=
                p.server_idle_w + (p.server_max_w - p.server_idle_w) * u / s.capacity_ghz;
            if (u > s.capacity_ghz)
                res.feasibility.add(
                    "server_capacity",
                    "server " + std::to_string(s.id) + " load " + std::to_string(u) +
                        " GHz exceeds capacity " + std::to_string(s.capacity_ghz) + " GHz",
                    u - s.capacity_ghz);
        } else if (p.idle_when_unused) {
            res.power.pc_w += p.server_idle_w;
        }
    }

    res.load = derive_loads(inst, placement, map);
    for (const auto& s : inst.servers)
        if (res.load.egress(s.id) + res.load.ingress(s.id) > 0) res.power.active_onus++;
    res.power.pn_w = p.onu_power_w * res.power.active_onus;
    res.power.total_w = res.power.pc_w + res.power.pn_w;

    auto net = check_network_feasible(res.load, inst, map);
    for (auto& v : net.violations) res.feasibility.violations.push_back(std::move(v));

    if (inst.max_active_servers && res.power.active_servers > *inst.max_active_servers)
        res.feasibility.add(
            "max_active_servers",
            std::to_string(res.power.active_servers) + " active servers exceed the cap of " +
                std::to_string(*inst.max_active_servers),
            res.power.active_servers - *inst.max_active_servers);

    return res;
}

std::string report_to_json(const EvalResult& result) {
    nlohmann::json j;
    j["pc_w"] = result.power.pc_w;
    j["pn_w"] = result.power.pn_w;
    j["total_w"] = result.power.total_w;
    j["active_servers"] = result.power.active_servers;
    j["active_onus"] = result.power.active_onus;
    j["feasible"] = result.feasibility.feasible();
    j["violations"] = nlohmann::json::array();
    for (const auto& v : result.feasibility.violations)
        j["violations"].push_back(
            {{"code", v.code}, {"message", v.message}, {"excess", v.excess}});
    nlohmann::json loads;
    loads["egress"] = nlohmann::json::array();
    for (const auto& [s, g] : result.load.egress_gbps)
        loads["egress"].push_back({{"server", s}, {"gbps", g}});
    loads["ingress"] = nlohmann::json::array();
    for (const auto& [s, g] : result.load.ingress_gbps)
        loads["ingress"].push_back({{"server", s}, {"gbps", g}});
    loads["rack_demand"] = nlohmann::json::array();
    for (const auto& [pair, g] : result.load.rack_demand_gbps)
        loads["rack_demand"].push_back(
            {{"src_rack", pair.first}, {"dst_rack", pair.second}, {"gbps", g}});
    loads["channel_flow"] = nlohmann::json::array();
    for (const auto& [key, g] : result.load.channel_flow_gbps)
        loads["channel_flow"].push_back({{"src_rack", std::get<0>(key)},
                                         {"dst_rack", std::get<1>(key)},
                                         {"channel", std::get<2>(key)},
                                         {"gbps", g}});
    j["loads"] = loads;
    return j.dump(2) + "\n";
}

}  // namespace ponplace
