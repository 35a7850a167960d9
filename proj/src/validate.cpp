#include "ponplace/validate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

namespace ponplace {

namespace {

std::string fmt(double x) { return std::to_string(x); }

// Connected component of vm in the undirected traffic graph: the set of VMs
// that co-location reasoning about vm has to consider.
std::set<VmId> traffic_component(const Instance& inst, VmId start) {
    std::map<VmId, std::vector<VmId>> adj;
    for (const auto& [key, rate] : inst.traffic.demands) {
        (void)rate;
        adj[key.first].push_back(key.second);
        adj[key.second].push_back(key.first);
    }
    std::set<VmId> seen{start};
    std::vector<VmId> stack{start};
    while (!stack.empty()) {
        VmId v = stack.back();
        stack.pop_back();
        for (VmId w : adj[v])
            if (seen.insert(w).second) stack.push_back(w);
    }
    return seen;
}

}  // namespace

ValidationReport validate_instance(const Instance& inst) {
    ValidationReport rep;
    auto bad = [&](std::string code, std::string msg, double excess = 0.0) {
        rep.violations.push_back({std::move(code), std::move(msg), excess});
    };

    const Topology& t = inst.topology;
    if (t.num_racks < 1 || t.servers_per_rack < 1 || t.num_wavelengths < 1 ||
        t.num_awgrs < 1 || t.olt_paths_per_rack_pair < 1)
        bad("topology", "all topology counts must be >= 1");

    const PowerParams& p = inst.power;
    if (!(p.server_max_w > p.server_idle_w) || p.server_idle_w < 0)
        bad("power", "server_max_w must exceed server_idle_w >= 0");
    if (p.onu_power_w < 0) bad("power", "onu_power_w must be >= 0");
    if (!(p.onu_capacity_gbps > 0)) bad("power", "onu_capacity_gbps must be > 0");
    if (!(p.wavelength_capacity_gbps > 0))
        bad("power", "wavelength_capacity_gbps must be > 0");

    if ((int)inst.servers.size() != t.num_servers())
        bad("servers", "expected " + std::to_string(t.num_servers()) +
                           " servers, got " + std::to_string(inst.servers.size()));
    std::set<ServerId> server_ids;
    std::map<RackId, int> per_rack;
    for (const auto& s : inst.servers) {
        if (!server_ids.insert(s.id).second)
            bad("servers", "duplicate server id " + std::to_string(s.id));
        if (s.rack < 0 || s.rack >= t.num_racks)
            bad("servers", "server " + std::to_string(s.id) + " rack " +
                               std::to_string(s.rack) + " out of range");
        else
            per_rack[s.rack]++;
        if (!(s.capacity_ghz > 0))
            bad("servers", "server " + std::to_string(s.id) + " capacity must be > 0");
    }
    for (const auto& [rack, n] : per_rack)
        if (n != t.servers_per_rack)
            bad("servers", "rack " + std::to_string(rack) + " holds " +
                               std::to_string(n) + " servers, expected " +
                               std::to_string(t.servers_per_rack));

    std::set<VmId> vm_ids;
    for (const auto& v : inst.vms) {
        if (!vm_ids.insert(v.id).second)
            bad("vms", "duplicate vm id " + std::to_string(v.id));
        if (!(v.requirement_ghz > 0))
            bad("vms", "vm " + std::to_string(v.id) + " requirement must be > 0");
    }

    for (const auto& [key, rate] : inst.traffic.demands) {
        auto [src, dst] = key;
        if (src == dst)
            bad("traffic", "self-demand on vm " + std::to_string(src));
        if (!vm_ids.count(src))
            bad("traffic", "demand source vm " + std::to_string(src) + " not declared");
        if (!vm_ids.count(dst))
            bad("traffic", "demand destination vm " + std::to_string(dst) + " not declared");
        if (!(rate > 0) || !std::isfinite(rate))
            bad("traffic", "demand " + std::to_string(src) + "->" +
                               std::to_string(dst) + " rate must be finite and > 0");
    }

    if (inst.max_active_servers &&
        (*inst.max_active_servers < 1 ||
         *inst.max_active_servers > (int)inst.servers.size()))
        bad("max_active_servers", "must lie in [1, num servers]");

    if (!rep.valid()) return rep;

    // Structural infeasibility: a VM no server can host.
    double cap_max = inst.max_capacity_ghz();
    for (const auto& v : inst.vms)
        if (v.requirement_ghz > cap_max)
            bad("vm_too_large",
                "vm " + std::to_string(v.id) + " requirement " + fmt(v.requirement_ghz) +
                    " GHz exceeds every server capacity (max " + fmt(cap_max) + " GHz)",
                v.requirement_ghz - cap_max);

    // Necessary-condition warning: a VM whose total egress or ingress exceeds
    // the ONU cap must shed load through co-location, but its co-location
    // closure does not fit on any single server.
    for (const auto& v : inst.vms) {
        double out = 0.0, in = 0.0;
        for (const auto& [key, rate] : inst.traffic.demands) {
            if (key.first == v.id) out += rate;
            if (key.second == v.id) in += rate;
        }
        if (out <= inst.power.onu_capacity_gbps && in <= inst.power.onu_capacity_gbps)
            continue;
        auto closure = traffic_component(inst, v.id);
        double closure_req = 0.0;
        for (VmId w : closure) closure_req += inst.vm(w).requirement_ghz;
        if (closure_req > cap_max)
            rep.warnings.push_back(
                {"onu_pressure",
                 "vm " + std::to_string(v.id) + " demands " + fmt(std::max(out, in)) +
                     " Gbps through a " + fmt(inst.power.onu_capacity_gbps) +
                     " Gbps ONU and its co-location closure (" + fmt(closure_req) +
                     " GHz) fits no server",
                 std::max(out, in) - inst.power.onu_capacity_gbps});
    }

    return rep;
}

ValidationReport validate_config(const GenConfig& cfg) {
    ValidationReport rep;
    auto bad = [&](std::string msg) { rep.violations.push_back({"config", std::move(msg)}); };

    if (cfg.num_vms < 0) bad("num_vms must be >= 0");
    auto range_ok = [&](const std::pair<double, double>& r, const char* name,
                        bool positive) {
        if (r.first > r.second) bad(std::string(name) + ": lo must be <= hi");
        if (positive && !(r.first > 0)) bad(std::string(name) + ": lo must be > 0");
    };
    range_ok(cfg.req_range_ghz, "req_range_ghz", true);
    range_ok(cfg.cap_range_ghz, "cap_range_ghz", true);
    range_ok(cfg.traffic_range_gbps, "traffic_range_gbps", true);
    if (cfg.traffic_density < 0 || cfg.traffic_density > 1)
        bad("traffic_density must lie in [0, 1]");
    const Topology& t = cfg.topology;
    if (t.num_racks < 1 || t.servers_per_rack < 1 || t.num_wavelengths < 1 ||
        t.num_awgrs < 1 || t.olt_paths_per_rack_pair < 1)
        bad("all topology counts must be >= 1");
    return rep;
}

}  // namespace ponplace
