#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "ponplace/generate.hpp"
#include "ponplace/power.hpp"
#include "ponplace/solve.hpp"

using namespace ponplace;
using ponplace::testing::make_instance;

TEST_CASE("server power: off, full, half") {
    PowerParams p;
    CHECK(server_power(0.0, 2.0, p) == 0.0);
    CHECK(server_power(2.0, 2.0, p) == doctest::Approx(301.0));
    CHECK(server_power(1.0, 2.0, p) == doctest::Approx(251.0));
    CHECK_THROWS_AS(server_power(2.1, 2.0, p), std::invalid_argument);
}

TEST_CASE("evaluate: co-located pair costs 251 W and is optimal") {
    Instance inst = testing::tiny_colocate();
    RoutingMap map = testing::routing_of(inst);
    Placement together;
    together.host[0] = 0;
    together.host[1] = 0;
    EvalResult ev = evaluate(inst, together, map);
    CHECK(ev.feasibility.feasible());
    CHECK(ev.power.pc_w == doctest::Approx(251.0));
    CHECK(ev.power.pn_w == 0.0);
    CHECK(ev.power.total_w == doctest::Approx(251.0));
    CHECK(ev.power.active_servers == 1);
    CHECK(ev.power.active_onus == 0);

    // the exhaustive oracle confirms this is the optimum under both objectives
    for (Objective obj : {Objective::pc_only, Objective::pc_plus_pn}) {
        SolveResult oracle = solve_exhaustive(inst, obj, map);
        REQUIRE(oracle.status == SolveStatus::optimal);
        CHECK(oracle.breakdown.total_w == doctest::Approx(251.0));
        CHECK(oracle.placement->host.at(0) == oracle.placement->host.at(1));
    }
}

TEST_CASE("evaluate: split pair costs 452 + 5 W") {
    Instance inst = testing::tiny_colocate();
    Placement split;
    split.host[0] = 0;
    split.host[1] = 1;
    EvalResult ev = evaluate(inst, split, testing::routing_of(inst));
    CHECK(ev.feasibility.feasible());
    CHECK(ev.power.pc_w == doctest::Approx(452.0));  // 2 x (201 + 100 * 0.25)
    CHECK(ev.power.pn_w == doctest::Approx(5.0));    // two active ONUs
    CHECK(ev.power.total_w == doctest::Approx(457.0));
}

TEST_CASE("evaluate: empty vm set consumes nothing") {
    Instance inst = make_instance({}, {});
    EvalResult ev = evaluate(inst, Placement{}, testing::routing_of(inst));
    CHECK(ev.power.pc_w == 0.0);
    CHECK(ev.power.pn_w == 0.0);
    CHECK(ev.power.active_servers == 0);
    CHECK(ev.feasibility.feasible());
}

TEST_CASE("evaluate: errors on unknown or missing vms") {
    Instance inst = testing::tiny_colocate();
    RoutingMap map = testing::routing_of(inst);
    Placement p;
    p.host[0] = 0;
    CHECK_THROWS_AS(evaluate(inst, p, map), std::invalid_argument);  // vm 1 missing
    p.host[1] = 0;
    p.host[7] = 0;  // unknown vm
    CHECK_THROWS_AS(evaluate(inst, p, map), std::invalid_argument);
    Placement q;
    q.host[0] = 99;  // unknown server
    q.host[1] = 0;
    CHECK_THROWS_AS(evaluate(inst, q, map), std::invalid_argument);
}

TEST_CASE("evaluate: breakdown still reported for infeasible placements") {
    Instance inst = make_instance({1.5, 1.5}, {});
    Placement p;
    p.host[0] = 0;
    p.host[1] = 0;  // 3.0 GHz on a 2.0 GHz server
    EvalResult ev = evaluate(inst, p, testing::routing_of(inst));
    CHECK_FALSE(ev.feasibility.feasible());
    CHECK(ev.feasibility.violations[0].code == "server_capacity");
    CHECK(ev.power.pc_w > 301.0);  // linear curve extended past capacity
}

TEST_CASE("evaluate: max_active_servers cap is enforced") {
    Instance inst = make_instance({0.5, 0.5}, {});
    inst.max_active_servers = 1;
    Placement split;
    split.host[0] = 0;
    split.host[1] = 1;
    EvalResult ev = evaluate(inst, split, testing::routing_of(inst));
    CHECK_FALSE(ev.feasibility.feasible());
    CHECK(ev.feasibility.violations[0].code == "max_active_servers");
}

TEST_CASE("evaluate: idle_when_unused keeps empty servers burning idle power") {
    Instance inst = testing::tiny_colocate();
    inst.power.idle_when_unused = true;
    Placement together;
    together.host[0] = 0;
    together.host[1] = 0;
    EvalResult ev = evaluate(inst, together, testing::routing_of(inst));
    CHECK(ev.power.pc_w == doctest::Approx(251.0 + 3 * 201.0));
    CHECK(ev.power.active_servers == 1);
}

TEST_CASE("property: Pn equals onu power times traffic-active servers") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        auto cfg = testing::small_gen_config(trial, 6);
        cfg.traffic_density = 0.4;
        Instance inst = generate_instance(cfg);
        RoutingMap map = testing::routing_of(inst);
        Placement p;
        for (const auto& v : inst.vms)
            p.host[v.id] = inst.servers[rng() % inst.servers.size()].id;
        EvalResult ev = evaluate(inst, p, map);
        NetworkLoad load = derive_loads(inst, p, map);
        int active = 0;
        for (const auto& s : inst.servers)
            if (load.egress(s.id) + load.ingress(s.id) > 0) active++;
        CHECK(ev.power.active_onus == active);
        CHECK(ev.power.pn_w == inst.power.onu_power_w * active);
        CHECK(ev.power.total_w == ev.power.pc_w + ev.power.pn_w);
    }
}

TEST_CASE("property: Pc lower bounds hold for feasible placements") {
    for (int trial = 0; trial < 40; ++trial) {
        Instance inst = generate_instance(testing::small_gen_config(trial, 5));
        RoutingMap map = testing::routing_of(inst);
        SolveResult bfd = solve_bfd(inst, Objective::pc_only, map);
        if (bfd.status != SolveStatus::feasible) continue;
        double idle = inst.power.server_idle_w;
        double span = inst.power.server_max_w - idle;
        double cap_max = inst.max_capacity_ghz();
        double bound1 = idle * std::ceil(inst.total_requirement_ghz() / cap_max - 1e-12);
        double bound2 = 0;
        for (const auto& v : inst.vms) bound2 += span * v.requirement_ghz / cap_max;
        CHECK(bfd.breakdown.pc_w >= bound1 - 1e-9);
        CHECK(bfd.breakdown.pc_w >= bound2 - 1e-9);
    }
}

TEST_CASE("property: full consolidation kills all networking power") {
    for (int trial = 0; trial < 30; ++trial) {
        auto cfg = testing::small_gen_config(trial, 4);
        cfg.traffic_density = 0.6;
        Instance inst = generate_instance(cfg);
        ServerId biggest = 0;
        double cap = 0;
        for (const auto& s : inst.servers)
            if (s.capacity_ghz > cap) {
                cap = s.capacity_ghz;
                biggest = s.id;
            }
        if (inst.total_requirement_ghz() > cap) continue;
        Placement merged;
        for (const auto& v : inst.vms) merged.host[v.id] = biggest;
        EvalResult ev = evaluate(inst, merged, testing::routing_of(inst));
        CHECK(ev.feasibility.feasible());
        CHECK(ev.power.pn_w == 0.0);
        CHECK(ev.power.active_onus == 0);
    }
}

TEST_CASE("property: scaling traffic never changes Pc or active ONUs") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        auto cfg = testing::small_gen_config(trial, 5);
        cfg.traffic_density = 0.5;
        Instance inst = generate_instance(cfg);
        Placement p;
        for (const auto& v : inst.vms)
            p.host[v.id] = inst.servers[rng() % inst.servers.size()].id;
        EvalResult base = evaluate(inst, p, testing::routing_of(inst));
        for (double scale : {0.25, 1.5}) {
            Instance scaled = inst;
            for (auto& [key, rate] : scaled.traffic.demands) rate *= scale;
            EvalResult ev = evaluate(scaled, p, testing::routing_of(scaled));
            CHECK(ev.power.pc_w == base.power.pc_w);
            CHECK(ev.power.active_onus == base.power.active_onus);
        }
    }
}
