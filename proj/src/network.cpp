#include "ponplace/network.hpp"

#include <stdexcept>
#include <string>

namespace ponplace {

const std::vector<Channel>& RoutingMap::at(RackId src, RackId dst) const {
    auto it = channels.find({src, dst});
    if (it == channels.end())
        throw std::invalid_argument("no channels for rack pair " + std::to_string(src) +
                                    "->" + std::to_string(dst));
    return it->second;
}

double RoutingMap::pair_capacity_gbps(RackId src, RackId dst) const {
    double cap = 0.0;
    for (const auto& c : at(src, dst)) cap += c.capacity_gbps;
    return cap;
}

double NetworkLoad::egress(ServerId s) const {
    auto it = egress_gbps.find(s);
    return it == egress_gbps.end() ? 0.0 : it->second;
}

double NetworkLoad::ingress(ServerId s) const {
    auto it = ingress_gbps.find(s);
    return it == ingress_gbps.end() ? 0.0 : it->second;
}

double NetworkLoad::total_inter_server_gbps() const {
    double t = 0.0;
    for (const auto& [s, g] : egress_gbps) t += g;
    return t;
}

RoutingMap build_routing_map(const Topology& topology, const PowerParams& power) {
    RoutingMap map;
    for (RackId i = 0; i < topology.num_racks; ++i)
        for (RackId j = 0; j < topology.num_racks; ++j) {
            if (i == j) continue;
            std::vector<Channel> chans;
            // Cyclic AWGR wavelength rule: AWGR k serves (i, j) on
            // wavelength (i + j + k) mod W.
            for (int k = 0; k < topology.num_awgrs; ++k)
                chans.push_back({ChannelKind::awgr,
                                 (i + j + k) % topology.num_wavelengths,
                                 power.wavelength_capacity_gbps});
            for (int k = 0; k < topology.olt_paths_per_rack_pair; ++k)
                chans.push_back({ChannelKind::olt, -1, power.wavelength_capacity_gbps});
            map.channels[{i, j}] = std::move(chans);
        }
    return map;
}

NetworkLoad derive_loads(const Instance& inst, const Placement& placement,
                         const RoutingMap& map) {
    NetworkLoad load;
    for (const auto& v : inst.vms)
        if (!placement.host.count(v.id))
            throw std::invalid_argument("placement misses vm " + std::to_string(v.id));

    for (const auto& [key, rate] : inst.traffic.demands) {
        auto [u, v] = key;
        ServerId su = placement.host.at(u);
        ServerId sv = placement.host.at(v);
        if (su == sv) continue;  // co-location eliminates the demand
        load.egress_gbps[su] += rate;
        load.ingress_gbps[sv] += rate;
        RackId ru = inst.server(su).rack;
        RackId rv = inst.server(sv).rack;
        if (ru != rv) load.rack_demand_gbps[{ru, rv}] += rate;
    }

    for (const auto& [pair, demand] : load.rack_demand_gbps) {
        const auto& chans = map.at(pair.first, pair.second);
        double total_cap = 0.0;
        for (const auto& c : chans) total_cap += c.capacity_gbps;
        for (int c = 0; c < (int)chans.size(); ++c)
            load.channel_flow_gbps[{pair.first, pair.second, c}] =
                demand * chans[c].capacity_gbps / total_cap;
    }

    return load;
}

FeasibilityReport check_network_feasible(const NetworkLoad& load, const Instance& inst,
                                         const RoutingMap& map) {
    FeasibilityReport rep;
    double onu_cap = inst.power.onu_capacity_gbps;
    for (const auto& [s, g] : load.egress_gbps)
        if (g > onu_cap)
            rep.add("onu_egress",
                    "server " + std::to_string(s) + " egress " + std::to_string(g) +
                        " Gbps exceeds ONU capacity by " + std::to_string(g - onu_cap) +
                        " Gbps",
                    g - onu_cap);
    for (const auto& [s, g] : load.ingress_gbps)
        if (g > onu_cap)
            rep.add("onu_ingress",
                    "server " + std::to_string(s) + " ingress " + std::to_string(g) +
                        " Gbps exceeds ONU capacity by " + std::to_string(g - onu_cap) +
                        " Gbps",
                    g - onu_cap);
    // Fluid multipath: a proportional split overloads some channel iff the
    // aggregate demand exceeds the pair's total capacity.
    for (const auto& [pair, demand] : load.rack_demand_gbps) {
        double cap = map.pair_capacity_gbps(pair.first, pair.second);
        if (demand > cap)
            rep.add("rack_pair",
                    "rack pair " + std::to_string(pair.first) + "->" +
                        std::to_string(pair.second) + " demand " + std::to_string(demand) +
                        " Gbps exceeds channel capacity " + std::to_string(cap) + " Gbps",
                    demand - cap);
    }
    return rep;
}

}  // namespace ponplace
