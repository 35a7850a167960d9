#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "ponplace/generate.hpp"
#include "ponplace/milp.hpp"
#include "ponplace/power.hpp"
#include "ponplace/solve.hpp"

using namespace ponplace;
using ponplace::testing::make_instance;

namespace {

// Counting oracle derived from the documented variable families.
struct VarCount {
    std::size_t x, a, o, w, z, f;
    std::size_t total() const { return x + a + o + w + z + f; }
};

VarCount count_vars(const Instance& inst, const RoutingMap& map) {
    std::size_t V = inst.vms.size(), S = inst.servers.size(), T = inst.traffic.size();
    std::size_t P = map.channels.size();
    std::size_t C = 0;
    for (const auto& [pr, chans] : map.channels) C += chans.size();
    bool traffic = T > 0;
    return {V * S, S, traffic ? S : 0, T * S, T * P, traffic ? C : 0};
}

std::size_t count_prefix(const MilpModel& m, const char* prefix) {
    std::size_t n = 0;
    for (const auto& v : m.variables)
        if (v.name.rfind(prefix, 0) == 0) n++;
    return n;
}

Instance two_vm_instance() {
    // 2 VMs, 4 servers (2 racks x 2), traffic both ways: the documented
    // counting example.
    return testing::tiny_colocate();
}

}  // namespace

TEST_CASE("build model: variable counts follow the documented formulas") {
    Instance inst = two_vm_instance();
    RoutingMap map = testing::routing_of(inst);
    MilpModel m = build_model(inst, Objective::pc_plus_pn, map);
    VarCount c = count_vars(inst, map);
    CHECK(c.x == 8);
    CHECK(c.a == 4);
    CHECK(c.o == 4);
    CHECK(c.w == 8);  // both directed pairs x 4 servers
    CHECK(c.z == 4);  // 2 pairs x 2 ordered rack pairs
    CHECK(c.f == 6);  // 2 ordered rack pairs x 3 channels
    CHECK(count_prefix(m, "x_") == c.x);
    CHECK(count_prefix(m, "a_") == c.a);
    CHECK(count_prefix(m, "o_") == c.o);
    CHECK(count_prefix(m, "w_") == c.w);
    CHECK(count_prefix(m, "z_") == c.z);
    CHECK(count_prefix(m, "f_") == c.f);
    CHECK(m.variables.size() == c.total());

    // binary x/a/o/w/z, continuous f
    for (const auto& v : m.variables) {
        if (v.name[0] == 'f')
            CHECK(v.kind == VarKind::continuous);
        else
            CHECK(v.kind == VarKind::binary);
    }

    // formulas hold across other shapes too
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto cfg = testing::small_gen_config(seed, 3 + (int)(seed % 3), 3, 2);
        Instance rnd = generate_instance(cfg);
        RoutingMap rnd_map = testing::routing_of(rnd);
        MilpModel rm = build_model(rnd, Objective::pc_only, rnd_map);
        CHECK(rm.variables.size() == count_vars(rnd, rnd_map).total());
    }
}

TEST_CASE("build model: optimal placement of the tiny instance scores 251") {
    Instance inst = two_vm_instance();
    RoutingMap map = testing::routing_of(inst);
    SolveResult oracle = solve_exhaustive(inst, Objective::pc_only, map);
    REQUIRE(oracle.status == SolveStatus::optimal);

    MilpModel m = build_model(inst, Objective::pc_only, map);
    auto vals = placement_values(inst, map, *oracle.placement);
    MilpCheckReport rep = check_solution(m, vals, 1e-6);
    CHECK(rep.ok());
    CHECK(rep.objective_value == doctest::Approx(251.0).epsilon(1e-9));
}

TEST_CASE("build model: no traffic means no w/z/f/o variables and no Pn term") {
    Instance inst = make_instance({0.5, 0.3}, {});
    RoutingMap map = testing::routing_of(inst);
    MilpModel m = build_model(inst, Objective::pc_plus_pn, map);
    CHECK(count_prefix(m, "w_") == 0);
    CHECK(count_prefix(m, "z_") == 0);
    CHECK(count_prefix(m, "f_") == 0);
    CHECK(count_prefix(m, "o_") == 0);
    for (const auto& t : m.objective)
        CHECK(m.variables[t.var].name[0] != 'o');
    MilpModel pc = build_model(inst, Objective::pc_only, map);
    CHECK(models_equal(m, pc));  // Pn term is the constant 0
}

TEST_CASE("build model: rejects a structurally infeasible instance") {
    Instance inst = make_instance({3.0}, {}, 2.75);
    CHECK_THROWS_AS(build_model(inst, Objective::pc_only, testing::routing_of(inst)),
                    std::invalid_argument);
}

TEST_CASE("build model: pc+pn objective carries 2.5 W per ONU variable") {
    Instance inst = two_vm_instance();
    RoutingMap map = testing::routing_of(inst);
    MilpModel m = build_model(inst, Objective::pc_plus_pn, map);
    std::size_t o_terms = 0;
    for (const auto& t : m.objective)
        if (m.variables[t.var].name[0] == 'o') {
            CHECK(t.coeff == 2.5);
            o_terms++;
        }
    CHECK(o_terms == 4);

    MilpModel pc = build_model(inst, Objective::pc_only, map);
    for (const auto& t : pc.objective) CHECK(pc.variables[t.var].name[0] != 'o');
}

TEST_CASE("lp export: re-parse gives the identical model") {
    for (Objective obj : {Objective::pc_only, Objective::pc_plus_pn}) {
        Instance inst = generate_instance(testing::small_gen_config(4, 4, 2, 2));
        inst.max_active_servers = 3;
        RoutingMap map = testing::routing_of(inst);
        MilpModel m = build_model(inst, obj, map);
        MilpModel back = parse_lp(export_lp(m));
        CHECK(models_equal(m, back));
    }
}

TEST_CASE("mps export: re-parse gives the identical model") {
    Instance inst = generate_instance(testing::small_gen_config(11, 4, 2, 2));
    RoutingMap map = testing::routing_of(inst);
    MilpModel m = build_model(inst, Objective::pc_plus_pn, map);
    MilpModel back = parse_mps(export_mps(m));
    CHECK(models_equal(m, back));
}

TEST_CASE("mps export: one ROWS entry per emitted constraint") {
    Instance inst = two_vm_instance();
    MilpModel m = build_model(inst, Objective::pc_plus_pn, testing::routing_of(inst));
    std::string text = export_mps(m);
    std::istringstream in(text);
    std::string line;
    std::size_t rows = 0;
    bool in_rows = false;
    while (std::getline(in, line)) {
        if (line == "ROWS") {
            in_rows = true;
            continue;
        }
        if (in_rows && !line.empty() && !isspace((unsigned char)line[0])) break;
        if (in_rows) rows++;
    }
    CHECK(rows == m.constraints.size() + 1);  // + the objective N row
}

TEST_CASE("mps export: strict fixed format rejects or mangles long names") {
    Instance inst = two_vm_instance();
    MilpModel m = build_model(inst, Objective::pc_plus_pn, testing::routing_of(inst));
    MpsOptions strict;
    strict.strict_fixed = true;
    CHECK_THROWS_AS(export_mps(m, strict), std::runtime_error);
    strict.mangle_long_names = true;
    std::string text = export_mps(m, strict);
    CHECK(text.find("* LONGNAME") != std::string::npos);
    MilpModel back = parse_mps(text);  // still well-formed MPS
    CHECK(back.variables.size() == m.variables.size());
    CHECK(back.constraints.size() == m.constraints.size());
}

TEST_CASE("check solution: internal solver output satisfies every constraint") {
    Instance inst = generate_instance(testing::small_gen_config(21, 4, 2, 2));
    RoutingMap map = testing::routing_of(inst);
    SolveResult res = solve_branch_and_bound(inst, Objective::pc_plus_pn, map);
    REQUIRE(res.status == SolveStatus::optimal);
    MilpModel m = build_model(inst, Objective::pc_plus_pn, map);
    auto vals = placement_values(inst, map, *res.placement);
    MilpCheckReport rep = check_solution(m, vals, 1e-6);
    CHECK(rep.ok());
    CHECK(rep.objective_value == doctest::Approx(res.breakdown.total_w).epsilon(1e-9));
}

TEST_CASE("check solution: perturbing an assignment variable trips C1") {
    Instance inst = two_vm_instance();
    RoutingMap map = testing::routing_of(inst);
    MilpModel m = build_model(inst, Objective::pc_only, map);
    SolveResult res = solve_exhaustive(inst, Objective::pc_only, map);
    auto vals = placement_values(inst, map, *res.placement);
    vals["x_v0_s0"] += 0.5;
    MilpCheckReport rep = check_solution(m, vals, 1e-6);
    CHECK_FALSE(rep.ok());
    bool c1 = false;
    for (const auto& v : rep.violations)
        if (v.message.find("c1_v0") != std::string::npos) c1 = true;
    CHECK(c1);
}

TEST_CASE("check solution: missing variable values throw") {
    Instance inst = two_vm_instance();
    RoutingMap map = testing::routing_of(inst);
    MilpModel m = build_model(inst, Objective::pc_only, map);
    std::map<std::string, double> vals;
    CHECK_THROWS_AS(check_solution(m, vals, 1e-6), std::invalid_argument);
}

TEST_CASE("extract placement: inverse of placement_values") {
    Instance inst = generate_instance(testing::small_gen_config(31, 4, 2, 2));
    RoutingMap map = testing::routing_of(inst);
    SolveResult res = solve_branch_and_bound(inst, Objective::pc_only, map);
    REQUIRE(res.placement.has_value());
    MilpModel m = build_model(inst, Objective::pc_only, map);
    auto vals = placement_values(inst, map, *res.placement);
    Placement p = extract_placement(m, vals);
    CHECK(p == *res.placement);

    EvalResult ev = evaluate(inst, p, map);
    CHECK(ev.power.pc_w == doctest::Approx(res.breakdown.pc_w).epsilon(1e-12));
}

TEST_CASE("extract placement: non-integral and non-unique assignments throw") {
    Instance inst = two_vm_instance();
    RoutingMap map = testing::routing_of(inst);
    MilpModel m = build_model(inst, Objective::pc_only, map);
    SolveResult res = solve_exhaustive(inst, Objective::pc_only, map);
    auto vals = placement_values(inst, map, *res.placement);

    auto fractional = vals;
    fractional["x_v0_s1"] = 0.5;
    CHECK_THROWS_AS(extract_placement(m, fractional), std::invalid_argument);

    auto doubled = vals;
    doubled["x_v0_s1"] = 1.0;  // vm 0 on two servers
    CHECK_THROWS_AS(extract_placement(m, doubled), std::invalid_argument);
}

TEST_CASE("property: model and evaluator agree on feasibility and objective") {
    std::mt19937_64 rng(202);
    int feasible_seen = 0, infeasible_seen = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto cfg = testing::small_gen_config(trial, 4, 2, 2);
        cfg.traffic_density = 0.5;
        cfg.traffic_range_gbps = {2.0, 9.0};  // ONU violations become possible
        Instance inst = generate_instance(cfg);
        if (trial % 3 == 0) inst.max_active_servers = 2;
        RoutingMap map = testing::routing_of(inst);
        for (Objective obj : {Objective::pc_only, Objective::pc_plus_pn}) {
            MilpModel m = build_model(inst, obj, map);
            Placement p;
            for (const auto& v : inst.vms)
                p.host[v.id] = inst.servers[rng() % inst.servers.size()].id;
            EvalResult ev = evaluate(inst, p, map);
            auto vals = placement_values(inst, map, p);
            MilpCheckReport rep = check_solution(m, vals, 1e-6);
            CHECK(rep.ok() == ev.feasibility.feasible());
            (ev.feasibility.feasible() ? feasible_seen : infeasible_seen)++;
            double expected = obj == Objective::pc_only ? ev.power.pc_w : ev.power.total_w;
            CHECK(std::abs(rep.objective_value - expected) <= 1e-6);
        }
    }
    // the sample must exercise both outcomes to mean anything
    CHECK(feasible_seen > 10);
    CHECK(infeasible_seen > 10);
}
