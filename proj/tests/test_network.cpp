#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "ponplace/generate.hpp"
#include "ponplace/network.hpp"

using namespace ponplace;
using ponplace::testing::make_instance;

namespace {

Placement random_placement(const Instance& inst, std::mt19937_64& rng) {
    Placement p;
    for (const auto& v : inst.vms)
        p.host[v.id] = inst.servers[rng() % inst.servers.size()].id;
    return p;
}

}  // namespace

TEST_CASE("routing map: default topology has 2 AWGR + 1 OLT channel per pair") {
    Topology topo;  // 4 racks, 2 AWGRs, 4 wavelengths, 1 OLT path
    PowerParams power;
    RoutingMap map = build_routing_map(topo, power);
    CHECK(map.channels.size() == 4 * 3);
    for (const auto& [pair, chans] : map.channels) {
        REQUIRE(chans.size() == 3);
        int awgr = 0, olt = 0;
        for (const auto& c : chans) {
            if (c.kind == ChannelKind::awgr) {
                awgr++;
                CHECK(c.wavelength_id >= 0);
                CHECK(c.wavelength_id < topo.num_wavelengths);
            } else {
                olt++;
                CHECK(c.wavelength_id == -1);
            }
            CHECK(c.capacity_gbps == 10.0);
        }
        CHECK(awgr == 2);
        CHECK(olt == 1);
        // aggregate inter-rack capacity per ordered pair: 3 x 10 Gbps
        CHECK(map.pair_capacity_gbps(pair.first, pair.second) == 30.0);
    }
}

TEST_CASE("routing map: single rack has no channels") {
    Topology topo;
    topo.num_racks = 1;
    CHECK(build_routing_map(topo, PowerParams{}).channels.empty());
}

TEST_CASE("derive loads: co-location eliminates all load") {
    Instance inst = testing::tiny_colocate();
    Placement p;
    p.host[0] = 0;
    p.host[1] = 0;
    NetworkLoad load = derive_loads(inst, p, testing::routing_of(inst));
    CHECK(load.egress_gbps.empty());
    CHECK(load.ingress_gbps.empty());
    CHECK(load.channel_flow_gbps.empty());
    CHECK(load.rack_demand_gbps.empty());
}

TEST_CASE("derive loads: inter-rack demand splits evenly over equal channels") {
    Instance inst = make_instance({0.5, 0.5}, {{0, 1, 3.0}});
    Placement p;
    p.host[0] = 0;  // rack 0
    p.host[1] = 2;  // rack 1
    NetworkLoad load = derive_loads(inst, p, testing::routing_of(inst));
    CHECK(load.egress(0) == 3.0);
    CHECK(load.ingress(2) == 3.0);
    CHECK(load.rack_demand_gbps.at({0, 1}) == 3.0);
    for (int c = 0; c < 3; ++c)
        CHECK(load.channel_flow_gbps.at({0, 1, c}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("derive loads: intra-rack split loads ONUs but no channels") {
    Instance inst = make_instance({0.5, 0.5}, {{0, 1, 2.0}});
    Placement p;
    p.host[0] = 0;
    p.host[1] = 1;  // same rack
    NetworkLoad load = derive_loads(inst, p, testing::routing_of(inst));
    CHECK(load.egress(0) == 2.0);
    CHECK(load.ingress(1) == 2.0);
    CHECK(load.channel_flow_gbps.empty());
    CHECK(load.rack_demand_gbps.empty());
}

TEST_CASE("network feasibility: zero load is feasible") {
    Instance inst = testing::tiny_colocate();
    NetworkLoad load;
    CHECK(check_network_feasible(load, inst, testing::routing_of(inst)).feasible());
}

TEST_CASE("network feasibility: ONU overload names the server and excess") {
    Instance inst = testing::tiny_colocate();
    NetworkLoad load;
    load.egress_gbps[1] = 12.0;
    auto rep = check_network_feasible(load, inst, testing::routing_of(inst));
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].code == "onu_egress");
    CHECK(rep.violations[0].message.find("server 1") != std::string::npos);
    CHECK(rep.violations[0].excess == doctest::Approx(2.0));
}

TEST_CASE("network feasibility: rack pair demand beyond aggregate capacity") {
    Instance inst = testing::tiny_colocate();
    NetworkLoad load;
    load.rack_demand_gbps[{0, 1}] = 31.0;  // 3 channels x 10 Gbps
    auto rep = check_network_feasible(load, inst, testing::routing_of(inst));
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].code == "rack_pair");
    load.rack_demand_gbps[{0, 1}] = 30.0;
    CHECK(check_network_feasible(load, inst, testing::routing_of(inst)).feasible());
}

TEST_CASE("property: conservation of inter-server demand") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        Instance inst = generate_instance(testing::small_gen_config(trial, 6));
        RoutingMap map = testing::routing_of(inst);
        Placement p = random_placement(inst, rng);
        NetworkLoad load = derive_loads(inst, p, map);
        double eg = 0, in = 0, expected = 0;
        for (const auto& [s, g] : load.egress_gbps) eg += g;
        for (const auto& [s, g] : load.ingress_gbps) in += g;
        for (const auto& [key, rate] : inst.traffic.demands)
            if (p.host.at(key.first) != p.host.at(key.second)) expected += rate;
        CHECK(eg == doctest::Approx(expected).epsilon(1e-12));
        CHECK(in == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("property: channel flows sum to rack demand") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 50; ++trial) {
        auto cfg = testing::small_gen_config(trial, 8, 3, 2);
        cfg.traffic_density = 0.5;
        Instance inst = generate_instance(cfg);
        RoutingMap map = testing::routing_of(inst);
        NetworkLoad load = derive_loads(inst, random_placement(inst, rng), map);
        for (const auto& [pair, demand] : load.rack_demand_gbps) {
            double sum = 0;
            for (int c = 0; c < (int)map.at(pair.first, pair.second).size(); ++c) {
                auto it = load.channel_flow_gbps.find({pair.first, pair.second, c});
                if (it != load.channel_flow_gbps.end()) sum += it->second;
            }
            CHECK(std::abs(sum - demand) <= 1e-9 * std::max(1.0, demand));
        }
    }
}

TEST_CASE("property: co-locating a vm with all its partners never increases load") {
    // Gather every partner of vm 0 onto one server, then move vm 0 there too;
    // with no demands left crossing servers for vm 0, no load component may
    // grow.
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        auto cfg = testing::small_gen_config(trial, 6, 2, 3);
        cfg.traffic_density = 0.4;
        cfg.cap_range_ghz = {100.0, 100.0};  // capacity out of the way
        Instance inst = generate_instance(cfg);
        RoutingMap map = testing::routing_of(inst);
        Placement before = random_placement(inst, rng);
        ServerId target = inst.servers[1].id;
        for (const auto& [key, rate] : inst.traffic.demands) {
            (void)rate;
            if (key.first == 0) before.host[key.second] = target;
            if (key.second == 0) before.host[key.first] = target;
        }
        before.host[0] = inst.servers[0].id;
        Placement after = before;
        after.host[0] = target;

        NetworkLoad lb = derive_loads(inst, before, map);
        NetworkLoad la = derive_loads(inst, after, map);
        for (const auto& s : inst.servers) {
            CHECK(la.egress(s.id) <= lb.egress(s.id) + 1e-12);
            CHECK(la.ingress(s.id) <= lb.ingress(s.id) + 1e-12);
        }
        for (const auto& [pair, demand] : la.rack_demand_gbps) {
            auto it = lb.rack_demand_gbps.find(pair);
            double old_demand = it == lb.rack_demand_gbps.end() ? 0.0 : it->second;
            CHECK(demand <= old_demand + 1e-12);
        }
        for (const auto& [key, flow] : la.channel_flow_gbps) {
            auto it = lb.channel_flow_gbps.find(key);
            double old_flow = it == lb.channel_flow_gbps.end() ? 0.0 : it->second;
            CHECK(flow <= old_flow + 1e-12);
        }
    }
}

TEST_CASE("property: relabeling racks permutes loads correspondingly") {
    auto cfg = testing::small_gen_config(5, 6, 3, 2);
    cfg.traffic_density = 0.5;
    Instance inst = generate_instance(cfg);
    RoutingMap map = testing::routing_of(inst);
    std::mt19937_64 rng(11);
    Placement p = random_placement(inst, rng);

    // rotate rack labels: rack r -> (r + 1) mod 3
    auto perm = [&](RackId r) { return (r + 1) % inst.topology.num_racks; };
    Instance relabeled = inst;
    for (auto& s : relabeled.servers) s.rack = perm(s.rack);
    NetworkLoad base = derive_loads(inst, p, map);
    NetworkLoad moved = derive_loads(relabeled, p, testing::routing_of(relabeled));

    CHECK(moved.egress_gbps == base.egress_gbps);
    CHECK(moved.ingress_gbps == base.ingress_gbps);
    CHECK(moved.rack_demand_gbps.size() == base.rack_demand_gbps.size());
    for (const auto& [pair, demand] : base.rack_demand_gbps)
        CHECK(moved.rack_demand_gbps.at({perm(pair.first), perm(pair.second)}) == demand);
    for (const auto& [key, flow] : base.channel_flow_gbps)
        CHECK(moved.channel_flow_gbps.at({perm(std::get<0>(key)), perm(std::get<1>(key)),
                                          std::get<2>(key)}) == flow);
}
