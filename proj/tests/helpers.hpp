#ifndef PONPLACE_TEST_HELPERS_HPP
#define PONPLACE_TEST_HELPERS_HPP

#include <vector>

#include "ponplace/generate.hpp"
#include "ponplace/network.hpp"
#include "ponplace/types.hpp"

namespace ponplace::testing {

// Instance with uniform server capacity; topology defaults to 2 racks x 2
// servers so exhaustive enumeration stays cheap.
inline Instance make_instance(std::vector<double> vm_reqs,
                              std::vector<std::tuple<int, int, double>> demands,
                              double server_cap = 2.0, int racks = 2,
                              int servers_per_rack = 2) {
    Instance inst;
    inst.topology.num_racks = racks;
    inst.topology.servers_per_rack = servers_per_rack;
    for (int id = 0; id < racks * servers_per_rack; ++id)
        inst.servers.push_back({id, id / servers_per_rack, server_cap});
    for (int id = 0; id < (int)vm_reqs.size(); ++id)
        inst.vms.push_back({id, vm_reqs[id]});
    for (auto& [u, v, rate] : demands) inst.traffic.add(u, v, rate);
    return inst;
}

// Two 0.5 GHz VMs exchanging 1 Gbps each way over 2 racks x 2 servers of
// 2.0 GHz; co-locating them is optimal at 251 W under both objectives.
inline Instance tiny_colocate() {
    return make_instance({0.5, 0.5}, {{0, 1, 1.0}, {1, 0, 1.0}});
}

inline RoutingMap routing_of(const Instance& inst) {
    return build_routing_map(inst.topology, inst.power);
}

inline GenConfig small_gen_config(std::uint64_t seed, int num_vms = 4, int racks = 2,
                                  int servers_per_rack = 3) {
    GenConfig cfg;
    cfg.seed = seed;
    cfg.num_vms = num_vms;
    cfg.topology.num_racks = racks;
    cfg.topology.servers_per_rack = servers_per_rack;
    cfg.traffic_density = 0.3;
    return cfg;
}

}  // namespace ponplace::testing

#endif
