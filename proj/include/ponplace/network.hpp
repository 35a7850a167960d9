#ifndef PONPLACE_NETWORK_HPP
#define PONPLACE_NETWORK_HPP

#include <map>
#include <tuple>
#include <vector>

#include "ponplace/types.hpp"

namespace ponplace {

enum class ChannelKind { awgr, olt };

struct Channel {
    ChannelKind kind = ChannelKind::awgr;
    int wavelength_id = -1;  // AWGR channels only; -1 for OLT
    double capacity_gbps = 0.0;

    bool operator==(const Channel&) const = default;
};

/// Inter-rack channel table: every ordered rack pair (i, j), i != j, owns one
/// channel per AWGR plus the configured OLT paths.
struct RoutingMap {
    std::map<std::pair<RackId, RackId>, std::vector<Channel>> channels;

    const std::vector<Channel>& at(RackId src, RackId dst) const;
    double pair_capacity_gbps(RackId src, RackId dst) const;
};

/// Per-server ONU loads and per-channel rack-pair flows induced by a placement.
struct NetworkLoad {
    std::map<ServerId, double> egress_gbps;
    std::map<ServerId, double> ingress_gbps;
    std::map<std::tuple<RackId, RackId, int>, double> channel_flow_gbps;
    std::map<std::pair<RackId, RackId>, double> rack_demand_gbps;

    double egress(ServerId s) const;
    double ingress(ServerId s) const;
    double total_inter_server_gbps() const;
};

RoutingMap build_routing_map(const Topology& topology, const PowerParams& power);

/// Folds every demand through the placement: co-located pairs vanish, split
/// pairs load both ONUs, inter-rack pairs additionally load the rack pair's
/// channels (fluid split, proportional to channel capacity).
NetworkLoad derive_loads(const Instance& inst, const Placement& placement,
                         const RoutingMap& map);

FeasibilityReport check_network_feasible(const NetworkLoad& load, const Instance& inst,
                                         const RoutingMap& map);

}  // namespace ponplace

#endif
