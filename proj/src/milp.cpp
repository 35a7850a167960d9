#include "ponplace/milp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace ponplace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Accumulates coefficients so repeated variables merge into one term, in
// first-touch order.
struct TermBuilder {
    std::vector<MilpTerm> terms;
    std::map<int, std::size_t> slot;

    void add(int var, double coeff) {
        auto it = slot.find(var);
        if (it == slot.end()) {
            slot[var] = terms.size();
            terms.push_back({var, coeff});
        } else {
            terms[it->second].coeff += coeff;
        }
    }
};

std::string id(const char* prefix, int a) { return std::string(prefix) + std::to_string(a); }

}  // namespace

int MilpModel::var_index(const std::string& name) const {
    for (int i = 0; i < (int)variables.size(); ++i)
        if (variables[i].name == name) return i;
    return -1;
}

bool models_equal(const MilpModel& a, const MilpModel& b) {
    if (a.variables.size() != b.variables.size()) return false;
    std::map<std::string, const MilpVar*> va, vb;
    for (const auto& v : a.variables) va[v.name] = &v;
    for (const auto& v : b.variables) vb[v.name] = &v;
    if (va.size() != a.variables.size() || vb.size() != b.variables.size()) return false;
    for (const auto& [name, v] : va) {
        auto it = vb.find(name);
        if (it == vb.end()) return false;
        if (v->kind != it->second->kind || v->lower != it->second->lower ||
            v->upper != it->second->upper)
            return false;
    }
    // Term order is representation detail (an MPS round trip reorders terms
    // column-major); compare as name -> coefficient maps.
    auto terms_equal = [&](const std::vector<MilpTerm>& ta, const std::vector<MilpTerm>& tb) {
        if (ta.size() != tb.size()) return false;
        std::map<std::string, double> ma, mb;
        for (const auto& t : ta) ma[a.variables[t.var].name] = t.coeff;
        for (const auto& t : tb) mb[b.variables[t.var].name] = t.coeff;
        return ma == mb;
    };
    if (a.constraints.size() != b.constraints.size()) return false;
    for (std::size_t i = 0; i < a.constraints.size(); ++i) {
        const auto& ca = a.constraints[i];
        const auto& cb = b.constraints[i];
        if (ca.name != cb.name || ca.sense != cb.sense || ca.rhs != cb.rhs) return false;
        if (!terms_equal(ca.terms, cb.terms)) return false;
    }
    return terms_equal(a.objective, b.objective);
}

MilpModel build_model(const Instance& inst, Objective objective, const RoutingMap& map) {
    double cap_max = inst.max_capacity_ghz();
    for (const auto& v : inst.vms)
        if (v.requirement_ghz > cap_max)
            throw std::invalid_argument("structurally infeasible: vm " +
                                        std::to_string(v.id) +
                                        " exceeds every server capacity");

    auto vms = inst.vms;
    std::sort(vms.begin(), vms.end(),
              [](const VmSpec& a, const VmSpec& b) { return a.id < b.id; });
    auto servers = inst.servers;
    std::sort(servers.begin(), servers.end(),
              [](const ServerSpec& a, const ServerSpec& b) { return a.id < b.id; });
    const bool with_traffic = !inst.traffic.empty();

    std::vector<std::pair<RackId, RackId>> rack_pairs;
    for (const auto& [pr, chans] : map.channels) {
        (void)chans;
        rack_pairs.push_back(pr);
    }

    MilpModel m;
    auto add_var = [&](std::string name, VarKind kind, double lo, double hi) {
        m.variables.push_back({std::move(name), kind, lo, hi});
        return (int)m.variables.size() - 1;
    };

    std::map<std::pair<VmId, ServerId>, int> x;
    for (const auto& v : vms)
        for (const auto& s : servers)
            x[{v.id, s.id}] = add_var("x_" + id("v", v.id) + "_" + id("s", s.id),
                                      VarKind::binary, 0, 1);
    std::map<ServerId, int> a;
    for (const auto& s : servers)
        a[s.id] = add_var("a_" + id("s", s.id), VarKind::binary, 0, 1);
    std::map<ServerId, int> o;
    if (with_traffic)
        for (const auto& s : servers)
            o[s.id] = add_var("o_" + id("s", s.id), VarKind::binary, 0, 1);

    std::map<std::pair<VmId, VmId>, std::map<ServerId, int>> w;
    std::map<std::pair<VmId, VmId>, std::map<std::pair<RackId, RackId>, int>> z;
    for (const auto& [pair, rate] : inst.traffic.demands) {
        (void)rate;
        std::string base = id("u", pair.first) + "_" + id("v", pair.second);
        for (const auto& s : servers)
            w[pair][s.id] = add_var("w_" + base + "_" + id("s", s.id), VarKind::binary, 0, 1);
    }
    for (const auto& [pair, rate] : inst.traffic.demands) {
        (void)rate;
        std::string base = id("u", pair.first) + "_" + id("v", pair.second);
        for (const auto& pr : rack_pairs)
            z[pair][pr] = add_var(
                "z_" + base + "_" + id("r", pr.first) + "_" + id("r", pr.second),
                VarKind::binary, 0, 1);
    }
    std::map<std::pair<RackId, RackId>, std::vector<int>> f;
    if (with_traffic)
        for (const auto& pr : rack_pairs) {
            const auto& chans = map.at(pr.first, pr.second);
            for (int ci = 0; ci < (int)chans.size(); ++ci)
                f[pr].push_back(add_var("f_" + id("r", pr.first) + "_" +
                                            id("r", pr.second) + "_" + id("c", ci),
                                        VarKind::continuous, 0, kInf));
        }

    auto add_con = [&](std::string name, TermBuilder& tb, ConstraintSense sense,
                       double rhs) {
        m.constraints.push_back({std::move(name), std::move(tb.terms), sense, rhs});
    };

    // C1: every vm on exactly one server.
    for (const auto& v : vms) {
        TermBuilder tb;
        for (const auto& s : servers) tb.add(x[{v.id, s.id}], 1.0);
        add_con("c1_" + id("v", v.id), tb, ConstraintSense::eq, 1.0);
    }

    // C2: capacity ties x to a, activity forces a from any x.
    for (const auto& s : servers) {
        TermBuilder tb;
        for (const auto& v : vms) tb.add(x[{v.id, s.id}], v.requirement_ghz);
        tb.add(a[s.id], -s.capacity_ghz);
        add_con("c2cap_" + id("s", s.id), tb, ConstraintSense::le, 0.0);
    }
    for (const auto& v : vms)
        for (const auto& s : servers) {
            TermBuilder tb;
            tb.add(x[{v.id, s.id}], 1.0);
            tb.add(a[s.id], -1.0);
            add_con("c2act_" + id("v", v.id) + "_" + id("s", s.id), tb,
                    ConstraintSense::le, 0.0);
        }

    // C3: w[u,v,s] = x[u,s] * x[v,s], linearized.
    for (const auto& [pair, rate] : inst.traffic.demands) {
        (void)rate;
        std::string base = id("u", pair.first) + "_" + id("v", pair.second);
        for (const auto& s : servers) {
            int wv = w[pair][s.id];
            int xu = x[{pair.first, s.id}];
            int xv = x[{pair.second, s.id}];
            TermBuilder ta;
            ta.add(wv, 1.0);
            ta.add(xu, -1.0);
            add_con("c3a_" + base + "_" + id("s", s.id), ta, ConstraintSense::le, 0.0);
            TermBuilder tb;
            tb.add(wv, 1.0);
            tb.add(xv, -1.0);
            add_con("c3b_" + base + "_" + id("s", s.id), tb, ConstraintSense::le, 0.0);
            TermBuilder tc;
            tc.add(xu, 1.0);
            tc.add(xv, 1.0);
            tc.add(wv, -1.0);
            add_con("c3c_" + base + "_" + id("s", s.id), tc, ConstraintSense::le, 1.0);
        }
    }

    // C4: inter-server traffic through each ONU, per direction.
    if (with_traffic)
        for (const auto& s : servers) {
            TermBuilder teg;
            for (const auto& [pair, rate] : inst.traffic.demands) {
                teg.add(x[{pair.first, s.id}], rate);
                teg.add(w[pair][s.id], -rate);
            }
            teg.add(o[s.id], -inst.power.onu_capacity_gbps);
            add_con("c4eg_" + id("s", s.id), teg, ConstraintSense::le, 0.0);

            TermBuilder tin;
            for (const auto& [pair, rate] : inst.traffic.demands) {
                tin.add(x[{pair.second, s.id}], rate);
                tin.add(w[pair][s.id], -rate);
            }
            tin.add(o[s.id], -inst.power.onu_capacity_gbps);
            add_con("c4in_" + id("s", s.id), tin, ConstraintSense::le, 0.0);
        }

    // C5: z[u,v,i,j] = (u in rack i) * (v in rack j), with the rack indicator
    // substituted inline as the sum of x over the rack's servers.
    for (const auto& [pair, rate] : inst.traffic.demands) {
        (void)rate;
        std::string base = id("u", pair.first) + "_" + id("v", pair.second);
        for (const auto& pr : rack_pairs) {
            std::string suffix = "_" + id("r", pr.first) + "_" + id("r", pr.second);
            int zv = z[pair][pr];
            TermBuilder ta;
            ta.add(zv, 1.0);
            for (const auto& s : servers) {
                if (s.rack == pr.first) ta.add(x[{pair.first, s.id}], -1.0);
                if (s.rack == pr.second) ta.add(x[{pair.second, s.id}], -1.0);
            }
            add_con("c5a_" + base + suffix, ta, ConstraintSense::ge, -1.0);
            TermBuilder tb;
            tb.add(zv, 1.0);
            for (const auto& s : servers)
                if (s.rack == pr.first) tb.add(x[{pair.first, s.id}], -1.0);
            add_con("c5b_" + base + suffix, tb, ConstraintSense::le, 0.0);
            TermBuilder tc;
            tc.add(zv, 1.0);
            for (const auto& s : servers)
                if (s.rack == pr.second) tc.add(x[{pair.second, s.id}], -1.0);
            add_con("c5c_" + base + suffix, tc, ConstraintSense::le, 0.0);
        }
    }

    // C6: per rack pair, channel flows carry exactly the crossing demand and
    // respect each channel's capacity.
    if (with_traffic)
        for (const auto& pr : rack_pairs) {
            std::string suffix = id("r", pr.first) + "_" + id("r", pr.second);
            TermBuilder tb;
            for (int fv : f[pr]) tb.add(fv, 1.0);
            for (const auto& [pair, rate] : inst.traffic.demands)
                tb.add(z[pair][pr], -rate);
            add_con("c6bal_" + suffix, tb, ConstraintSense::eq, 0.0);
            const auto& chans = map.at(pr.first, pr.second);
            for (int ci = 0; ci < (int)chans.size(); ++ci) {
                TermBuilder tc;
                tc.add(f[pr][ci], 1.0);
                add_con("c6cap_" + suffix + "_" + id("c", ci), tc, ConstraintSense::le,
                        chans[ci].capacity_gbps);
            }
        }

    // C7: optional cap on the number of active servers.
    if (inst.max_active_servers) {
        TermBuilder tb;
        for (const auto& s : servers) tb.add(a[s.id], 1.0);
        add_con("c7", tb, ConstraintSense::le, (double)*inst.max_active_servers);
    }

    // Objective: idle power per active server, utilization-proportional
    // dynamic power per assignment, and under pc+pn the ONU power.
    double span = inst.power.server_max_w - inst.power.server_idle_w;
    TermBuilder obj;
    for (const auto& s : servers) obj.add(a[s.id], inst.power.server_idle_w);
    for (const auto& v : vms)
        for (const auto& s : servers)
            obj.add(x[{v.id, s.id}], span * v.requirement_ghz / s.capacity_ghz);
    if (objective == Objective::pc_plus_pn && with_traffic)
        for (const auto& s : servers) obj.add(o[s.id], inst.power.onu_power_w);
    m.objective = std::move(obj.terms);

    return m;
}

MilpCheckReport check_solution(const MilpModel& m,
                               const std::map<std::string, double>& values,
                               double tol) {
    std::vector<double> val(m.variables.size());
    for (std::size_t i = 0; i < m.variables.size(); ++i) {
        auto it = values.find(m.variables[i].name);
        if (it == values.end())
            throw std::invalid_argument("missing value for variable " +
                                        m.variables[i].name);
        val[i] = it->second;
    }

    MilpCheckReport rep;
    for (std::size_t i = 0; i < m.variables.size(); ++i) {
        const MilpVar& v = m.variables[i];
        if (val[i] < v.lower - tol || val[i] > v.upper + tol)
            rep.violations.push_back({"bounds", v.name + " = " + std::to_string(val[i]) +
                                                    " outside bounds",
                                      0.0});
        if (v.kind == VarKind::binary && std::abs(val[i] - std::round(val[i])) > tol)
            rep.violations.push_back(
                {"integrality", v.name + " = " + std::to_string(val[i]) + " not integral",
                 std::abs(val[i] - std::round(val[i]))});
    }
    for (const auto& con : m.constraints) {
        double lhs = 0;
        for (const auto& t : con.terms) lhs += t.coeff * val[t.var];
        double excess = 0;
        switch (con.sense) {
            case ConstraintSense::le: excess = lhs - con.rhs; break;
            case ConstraintSense::ge: excess = con.rhs - lhs; break;
            case ConstraintSense::eq: excess = std::abs(lhs - con.rhs); break;
        }
        if (excess > tol)
            rep.violations.push_back(
                {"constraint", con.name + " violated by " + std::to_string(excess),
                 excess});
    }
    for (const auto& t : m.objective) rep.objective_value += t.coeff * val[t.var];
    return rep;
}

Placement extract_placement(const MilpModel& m,
                            const std::map<std::string, double>& values, double tol) {
    Placement p;
    std::set<VmId> seen;
    for (const auto& v : m.variables) {
        if (v.name.rfind("x_v", 0) != 0) continue;
        auto sep = v.name.find("_s");
        if (sep == std::string::npos) continue;
        VmId vm = std::stoi(v.name.substr(3, sep - 3));
        ServerId server = std::stoi(v.name.substr(sep + 2));
        auto it = values.find(v.name);
        if (it == values.end())
            throw std::invalid_argument("missing value for variable " + v.name);
        double x = it->second;
        seen.insert(vm);
        if (std::abs(x - 1.0) <= tol) {
            if (p.host.count(vm))
                throw std::invalid_argument("vm " + std::to_string(vm) +
                                            " assigned to multiple servers");
            p.host[vm] = server;
        } else if (std::abs(x) > tol) {
            throw std::invalid_argument("non-integral assignment " + v.name + " = " +
                                        std::to_string(x));
        }
    }
    for (VmId vm : seen)
        if (!p.host.count(vm))
            throw std::invalid_argument("vm " + std::to_string(vm) +
                                        " assigned to no server");
    return p;
}

std::map<std::string, double> placement_values(const Instance& inst,
                                               const RoutingMap& map,
                                               const Placement& placement) {
    NetworkLoad load = derive_loads(inst, placement, map);
    std::map<std::string, double> vals;

    std::map<ServerId, int> hosted;
    for (const auto& v : inst.vms) {
        ServerId hs = placement.host.at(v.id);
        hosted[hs]++;
        for (const auto& s : inst.servers)
            vals["x_" + id("v", v.id) + "_" + id("s", s.id)] = s.id == hs ? 1.0 : 0.0;
    }
    for (const auto& s : inst.servers) {
        vals["a_" + id("s", s.id)] = hosted.count(s.id) ? 1.0 : 0.0;
        if (!inst.traffic.empty())
            vals["o_" + id("s", s.id)] =
                load.egress(s.id) + load.ingress(s.id) > 0 ? 1.0 : 0.0;
    }
    for (const auto& [pair, rate] : inst.traffic.demands) {
        (void)rate;
        std::string base = id("u", pair.first) + "_" + id("v", pair.second);
        ServerId su = placement.host.at(pair.first);
        ServerId sv = placement.host.at(pair.second);
        for (const auto& s : inst.servers)
            vals["w_" + base + "_" + id("s", s.id)] =
                (su == s.id && sv == s.id) ? 1.0 : 0.0;
        RackId ru = inst.server(su).rack;
        RackId rv = inst.server(sv).rack;
        for (const auto& [pr, chans] : map.channels) {
            (void)chans;
            vals["z_" + base + "_" + id("r", pr.first) + "_" + id("r", pr.second)] =
                (ru == pr.first && rv == pr.second) ? 1.0 : 0.0;
        }
    }
    if (!inst.traffic.empty())
        for (const auto& [pr, chans] : map.channels)
            for (int ci = 0; ci < (int)chans.size(); ++ci) {
                auto it = load.channel_flow_gbps.find({pr.first, pr.second, ci});
                vals["f_" + id("r", pr.first) + "_" + id("r", pr.second) + "_" +
                     id("c", ci)] = it == load.channel_flow_gbps.end() ? 0.0 : it->second;
            }
    return vals;
}

}  // namespace ponplace
