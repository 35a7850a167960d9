#include "ponplace/solve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace ponplace {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double objective_value(const PowerBreakdown& b, Objective obj) {
    return obj == Objective::pc_only ? b.pc_w : b.total_w;
}

// Slack used when pruning on partially-derived quantities; keeps float drift
// between the search's running sums and evaluate()'s from cutting subtrees
// whose leaves evaluate() would accept.
constexpr double kPruneMargin = 1e-9;

int min_server_count(double total_req, double cap_max) {
    if (total_req <= 0) return 0;
    return std::max(1, (int)std::ceil(total_req / cap_max - 1e-12));
}

// Shared positional view of an instance: VMs in branching order (decreasing
// requirement, ties by ascending id), servers in ascending id order.
struct Ctx {
    const Instance* inst = nullptr;
    const RoutingMap* map = nullptr;
    Objective objective = Objective::pc_only;

    int n = 0, m = 0, nracks = 0;
    std::vector<VmId> vm_ids;       // by position
    std::vector<double> req;        // by position
    std::vector<ServerId> server_ids;
    std::vector<double> cap;        // by server index
    std::vector<int> rack;          // by server index
    std::vector<int> rate_order;    // server indices by decreasing capacity
    double cap_max = 0, total_req = 0;
    int k_min_total = 0;
    double idle = 0, span = 0, onu_w = 0, onu_cap = 0;

    struct Demand {
        int u, v;  // positions
        double rate;
    };
    std::vector<Demand> demands;
    std::vector<std::vector<int>> touching;  // per position, demand indices
    std::vector<double> pair_cap;            // nracks*nracks
    std::optional<int> max_active;

    Ctx(const Instance& instance, Objective obj, const RoutingMap& routing)
        : inst(&instance), map(&routing), objective(obj) {
        n = (int)instance.vms.size();
        m = (int)instance.servers.size();
        nracks = instance.topology.num_racks;
        idle = instance.power.server_idle_w;
        span = instance.power.server_max_w - instance.power.server_idle_w;
        onu_w = instance.power.onu_power_w;
        onu_cap = instance.power.onu_capacity_gbps;
        max_active = instance.max_active_servers;

        std::vector<VmSpec> vms = instance.vms;
        std::sort(vms.begin(), vms.end(), [](const VmSpec& a, const VmSpec& b) {
            if (a.requirement_ghz != b.requirement_ghz)
                return a.requirement_ghz > b.requirement_ghz;
            return a.id < b.id;
        });
        std::map<VmId, int> pos_of;
        for (int p = 0; p < n; ++p) {
            vm_ids.push_back(vms[p].id);
            req.push_back(vms[p].requirement_ghz);
            pos_of[vms[p].id] = p;
            total_req += vms[p].requirement_ghz;
        }

        std::vector<ServerSpec> servers = instance.servers;
        std::sort(servers.begin(), servers.end(),
                  [](const ServerSpec& a, const ServerSpec& b) { return a.id < b.id; });
        for (const auto& s : servers) {
            server_ids.push_back(s.id);
            cap.push_back(s.capacity_ghz);
            rack.push_back(s.rack);
            cap_max = std::max(cap_max, s.capacity_ghz);
        }
        rate_order.resize(m);
        for (int i = 0; i < m; ++i) rate_order[i] = i;
        std::sort(rate_order.begin(), rate_order.end(), [&](int a, int b) {
            if (cap[a] != cap[b]) return cap[a] > cap[b];
            return a < b;
        });
        k_min_total = min_server_count(total_req, cap_max);

        touching.resize(n);
        for (const auto& [key, rate] : instance.traffic.demands) {
            Demand d{pos_of.at(key.first), pos_of.at(key.second), rate};
            touching[d.u].push_back((int)demands.size());
            touching[d.v].push_back((int)demands.size());
            demands.push_back(d);
        }

        pair_cap.assign((std::size_t)nracks * nracks, 0.0);
        for (const auto& [pr, chans] : routing.channels) {
            double c = 0;
            for (const auto& ch : chans) c += ch.capacity_gbps;
            pair_cap[(std::size_t)pr.first * nracks + pr.second] = c;
        }
    }

    Placement to_placement(const std::vector<int>& assign) const {
        Placement p;
        for (int pos = 0; pos < n; ++pos) p.host[vm_ids[pos]] = server_ids[assign[pos]];
        return p;
    }

    // Host vector in ascending vm-id order, the tie-break key.
    std::vector<ServerId> host_vector(const Placement& p) const {
        std::vector<ServerId> v;
        v.reserve(p.host.size());
        for (const auto& [vm, server] : p.host) v.push_back(server);
        return v;
    }
};

// Node state recomputed from scratch at every expanded node so values are a
// pure function of the partial assignment, independent of the search path.
struct NodeState {
    std::vector<double> load, eg, in, rd;
    std::vector<char> active;
    int active_count = 0;
    double assigned_req = 0, committed_dyn = 0;
    int onus_forced = 0;

    void resize(const Ctx& c) {
        load.assign(c.m, 0.0);
        eg.assign(c.m, 0.0);
        in.assign(c.m, 0.0);
        rd.assign((std::size_t)c.nracks * c.nracks, 0.0);
        active.assign(c.m, 0);
    }
};

void recompute(const Ctx& c, const std::vector<int>& assign, int depth, NodeState& st) {
    st.resize(c);
    st.active_count = 0;
    st.assigned_req = 0;
    st.committed_dyn = 0;
    st.onus_forced = 0;
    for (int pos = 0; pos < depth; ++pos) {
        int s = assign[pos];
        st.load[s] += c.req[pos];
        st.assigned_req += c.req[pos];
        st.committed_dyn += c.span * c.req[pos] / c.cap[s];
    }
    for (int s = 0; s < c.m; ++s)
        if (st.load[s] > 0) {
            st.active[s] = 1;
            st.active_count++;
        }
    for (const auto& d : c.demands) {
        if (d.u >= depth || d.v >= depth) continue;
        int su = assign[d.u], sv = assign[d.v];
        if (su == sv) continue;
        st.eg[su] += d.rate;
        st.in[sv] += d.rate;
        if (c.rack[su] != c.rack[sv])
            st.rd[(std::size_t)c.rack[su] * c.nracks + c.rack[sv]] += d.rate;
    }
    for (int s = 0; s < c.m; ++s)
        if (st.eg[s] + st.in[s] > 1e-9) st.onus_forced++;
}

// Capacity, ONU, channel, server-cap and reachability checks on the traffic
// among assigned VMs only; all of these only grow under extension, so a
// violation here rules out every completion.
bool partial_feasible(const Ctx& c, const NodeState& st) {
    for (int s = 0; s < c.m; ++s) {
        if (st.load[s] > c.cap[s] + kPruneMargin) return false;
        if (st.eg[s] > c.onu_cap + kPruneMargin) return false;
        if (st.in[s] > c.onu_cap + kPruneMargin) return false;
    }
    if (c.max_active && st.active_count > *c.max_active) return false;
    for (int i = 0; i < c.nracks; ++i)
        for (int j = 0; j < c.nracks; ++j) {
            std::size_t k = (std::size_t)i * c.nracks + j;
            if (st.rd[k] > c.pair_cap[k] + kPruneMargin) return false;
        }
    double rest = c.total_req - st.assigned_req;
    double reach = 0;
    int extra_allowed =
        c.max_active ? *c.max_active - st.active_count : c.m - st.active_count;
    int extra_used = 0;
    for (int s : c.rate_order) {
        if (st.active[s]) {
            reach += c.cap[s] - st.load[s];
        } else if (extra_used < extra_allowed) {
            reach += c.cap[s];
            extra_used++;
        }
    }
    return reach >= rest - kPruneMargin;
}

// Admissible completion bound: max of the documented bound and a
// fractional-fill relaxation (remaining requirement poured into residual
// capacities cheapest-rate-first, new servers charged idle power, server
// count floored at the packing minimum), plus, under pc+pn, the ONUs already
// forced active by traffic among assigned VMs. A virtual extra assignment
// (vs, vreq) evaluates a child without mutating the state.
double internal_bound(const Ctx& c, const NodeState& st, int vs = -1, double vreq = 0,
                      int onus_override = -1) {
    double assigned = st.assigned_req + (vs >= 0 ? vreq : 0);
    double committed =
        st.committed_dyn + (vs >= 0 ? c.span * vreq / c.cap[vs] : 0);
    int active = st.active_count + (vs >= 0 && !st.active[vs] ? 1 : 0);
    double rest = c.total_req - assigned;
    if (rest < 0) rest = 0;

    double lb1 = c.idle * std::max(active, c.k_min_total) + committed +
                 (c.cap_max > 0 ? rest * c.span / c.cap_max : 0.0);

    double lb2 = std::numeric_limits<double>::infinity();
    if (rest <= kPruneMargin) {
        lb2 = c.idle * std::max(active, c.k_min_total) + committed;
    } else {
        int k_lo = std::max(0, c.k_min_total - active);
        int k_hi = c.max_active ? *c.max_active - active : c.m - active;
        double prev_cost = std::numeric_limits<double>::infinity();
        for (int k = k_lo; k <= k_hi; ++k) {
            double left = rest, fill = 0;
            int unused_seen = 0;
            for (int s : c.rate_order) {
                double size;
                bool is_active = st.active[s] || s == vs;
                if (is_active) {
                    size = c.cap[s] - st.load[s] - (s == vs ? vreq : 0);
                } else {
                    if (unused_seen >= k) continue;
                    unused_seen++;
                    size = c.cap[s];
                }
                if (size <= 0) continue;
                double take = std::min(left, size);
                fill += take * c.span / c.cap[s];
                left -= take;
                if (left <= 1e-12) break;
            }
            if (left > 1e-12) continue;  // k new servers cannot hold the rest
            double cost = c.idle * (active + k) + committed + fill;
            lb2 = std::min(lb2, cost);
            if (cost > prev_cost) break;  // convex in k past the minimum
            prev_cost = cost;
        }
        if (!std::isfinite(lb2)) return lb2;  // no completion fits: prune
    }

    double bound = std::max(lb1, lb2);
    if (c.objective == Objective::pc_plus_pn)
        bound += c.onu_w * (onus_override >= 0 ? onus_override : st.onus_forced);
    return bound;
}

// Feasibility and cost delta of assigning the VM at `pos` to server `s` on
// top of `st`. Returns false if the child is clearly infeasible; otherwise
// fills the incremental objective (child ordering key), the child bound
// (candidate filter) and the forced-ONU count after the assignment.
bool child_delta(const Ctx& c, const NodeState& st, const std::vector<int>& assign,
                 int depth, int pos, int s, double& incr_obj, double& child_bound) {
    if (st.load[s] + c.req[pos] > c.cap[s] + kPruneMargin) return false;
    bool opens = !st.active[s];
    if (opens && c.max_active && st.active_count + 1 > *c.max_active) return false;

    // New external demands: pairs between `pos` and already-assigned VMs.
    double d_eg_s = 0, d_in_s = 0;
    int onu_transitions = 0;
    bool s_was_quiet = st.eg[s] + st.in[s] <= 1e-9;
    // Collect per-partner and per-rack-pair deltas (degrees are small).
    std::vector<std::pair<int, double>> partner_eg, partner_in;
    std::vector<std::pair<std::size_t, double>> rack_delta;
    for (int di : c.touching[pos]) {
        const auto& d = c.demands[di];
        int other_pos = d.u == pos ? d.v : d.u;
        if (other_pos >= depth || other_pos == pos) continue;
        int so = assign[other_pos];
        if (so == s) continue;  // co-located, no load
        bool outgoing = d.u == pos;
        if (outgoing) {
            d_eg_s += d.rate;
            partner_in.emplace_back(so, d.rate);
        } else {
            d_in_s += d.rate;
            partner_eg.emplace_back(so, d.rate);
        }
        int ra = outgoing ? c.rack[s] : c.rack[so];
        int rb = outgoing ? c.rack[so] : c.rack[s];
        if (ra != rb) {
            std::size_t key = (std::size_t)ra * c.nracks + rb;
            bool merged = false;
            for (auto& [k, v] : rack_delta)
                if (k == key) {
                    v += d.rate;
                    merged = true;
                    break;
                }
            if (!merged) rack_delta.emplace_back(key, d.rate);
        }
    }
    if (st.eg[s] + d_eg_s > c.onu_cap + kPruneMargin) return false;
    if (st.in[s] + d_in_s > c.onu_cap + kPruneMargin) return false;
    for (auto& [so, r] : partner_eg)
        if (st.eg[so] + r > c.onu_cap + kPruneMargin) return false;
    for (auto& [so, r] : partner_in)
        if (st.in[so] + r > c.onu_cap + kPruneMargin) return false;
    for (auto& [k, v] : rack_delta)
        if (st.rd[k] + v > c.pair_cap[k] + kPruneMargin) return false;

    if (s_was_quiet && d_eg_s + d_in_s > 1e-9) onu_transitions++;
    // Partners can have their ONU woken by the new demand too.
    std::vector<int> woken;
    for (auto& lst : {partner_eg, partner_in})
        for (auto& [so, r] : lst) {
            (void)r;
            if (st.eg[so] + st.in[so] <= 1e-9 &&
                std::find(woken.begin(), woken.end(), so) == woken.end())
                woken.push_back(so);
        }
    onu_transitions += (int)woken.size();

    incr_obj = (opens ? c.idle : 0) + c.span * c.req[pos] / c.cap[s];
    if (c.objective == Objective::pc_plus_pn) incr_obj += c.onu_w * onu_transitions;

    child_bound = internal_bound(c, st, s, c.req[pos], st.onus_forced + onu_transitions);
    return std::isfinite(child_bound);
}

struct Incumbent {
    bool found = false;
    double obj = std::numeric_limits<double>::infinity();
    Placement placement;
    std::vector<ServerId> host_vec;
    PowerBreakdown breakdown;
};

class BnbSearcher {
  public:
    BnbSearcher(const Ctx& c, const BnbOptions& opts)
        : c_(c), opts_(opts), t0_(Clock::now()) {
        assign_.assign(c_.n, -1);
    }

    void seed_incumbent(const Placement& p, const PowerBreakdown& b) {
        inc_.found = true;
        inc_.obj = objective_value(b, c_.objective);
        inc_.placement = p;
        inc_.host_vec = c_.host_vector(p);
        inc_.breakdown = b;
    }

    SolveResult run() {
        NodeState root;
        recompute(c_, assign_, 0, root);
        root_bound_ = partial_feasible(c_, root)
                          ? internal_bound(c_, root)
                          : std::numeric_limits<double>::infinity();
        if (std::isfinite(root_bound_)) expand(0);

        SolveResult res;
        res.objective = c_.objective;
        res.nodes_explored = nodes_;
        if (stopped_) {
            res.status = SolveStatus::timeout;
            res.lower_bound_w = stop_lb_;
            if (inc_.found) {
                res.placement = inc_.placement;
                res.breakdown = inc_.breakdown;
            }
        } else if (inc_.found) {
            res.status = SolveStatus::optimal;
            res.placement = inc_.placement;
            res.breakdown = inc_.breakdown;
            res.lower_bound_w = inc_.obj;
        } else {
            res.status = SolveStatus::infeasible;
            res.lower_bound_w = 0;
        }
        return res;
    }

  private:
    double current_lb() const {
        double lb = open_.empty() ? root_bound_ : *open_.begin();
        if (inc_.found) lb = std::min(lb, inc_.obj);
        return lb;
    }

    bool budget_exceeded() {
        if (nodes_ >= opts_.budget.node_limit) return true;
        if ((nodes_ & 1023) == 0 &&
            elapsed_ms(t0_) / 1000.0 > opts_.budget.time_limit_s)
            return true;
        return false;
    }

    void expand(int depth) {
        if (stopped_) return;
        if (budget_exceeded()) {
            stopped_ = true;
            stop_lb_ = current_lb();
            return;
        }
        nodes_++;

        NodeState st;
        recompute(c_, assign_, depth, st);
        if (!partial_feasible(c_, st)) return;
        double bound = internal_bound(c_, st);
        if (inc_.found && bound > inc_.obj + kPruneMargin) return;

        if (depth == c_.n) {
            Placement p = c_.to_placement(assign_);
            EvalResult ev = evaluate(*c_.inst, p, *c_.map);
            if (!ev.feasibility.feasible()) return;
            double obj = objective_value(ev.power, c_.objective);
            std::vector<ServerId> hv = c_.host_vector(p);
            if (!inc_.found || obj < inc_.obj ||
                (obj == inc_.obj && hv < inc_.host_vec)) {
                inc_ = {true, obj, std::move(p), std::move(hv), ev.power};
                if (opts_.on_progress) opts_.on_progress(inc_.obj, current_lb(), nodes_);
            }
            return;
        }

        struct Cand {
            int server;
            double incr, bound;
        };
        std::vector<Cand> cands;
        cands.reserve(c_.m);
        for (int s = 0; s < c_.m; ++s) {
            double incr, cb;
            if (!child_delta(c_, st, assign_, depth, depth, s, incr, cb)) continue;
            if (inc_.found && cb > inc_.obj + kPruneMargin) continue;
            cands.push_back({s, incr, cb});
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            if (a.incr != b.incr) return a.incr < b.incr;
            return a.server < b.server;
        });

        // Every open child is represented in open_ (valued at this node's
        // bound, a valid underestimate of the child's) until its subtree is
        // fully resolved; min(open_) is then a true global lower bound at any
        // moment, including mid-stop.
        std::vector<std::multiset<double>::iterator> its;
        its.reserve(cands.size());
        for (std::size_t i = 0; i < cands.size(); ++i) its.push_back(open_.insert(bound));
        for (std::size_t i = 0; i < cands.size(); ++i) {
            if (!stopped_ && (!inc_.found || cands[i].bound <= inc_.obj + kPruneMargin)) {
                assign_[depth] = cands[i].server;
                expand(depth + 1);
                assign_[depth] = -1;
            }
            if (stopped_) {
                // leave unexplored entries in place; stop_lb_ already captured
                return;
            }
            open_.erase(its[i]);
        }
    }

    const Ctx& c_;
    BnbOptions opts_;
    Clock::time_point t0_;
    std::vector<int> assign_;
    Incumbent inc_;
    std::multiset<double> open_;
    double root_bound_ = 0;
    double stop_lb_ = 0;
    bool stopped_ = false;
    std::uint64_t nodes_ = 0;
};

}  // namespace

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::feasible: return "feasible";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::timeout: return "timeout";
    }
    return "unknown";
}

SolveResult solve_exhaustive(const Instance& inst, Objective objective,
                             const RoutingMap& map, std::uint64_t enumeration_cap) {
    auto t0 = Clock::now();
    Ctx c(inst, objective, map);

    if (c.n > 0) {
        double count = std::pow((double)c.m, (double)c.n);
        if (!(count <= (double)enumeration_cap))
            throw std::invalid_argument(
                "enumeration cap exceeded: " + std::to_string(c.m) + "^" +
                std::to_string(c.n) + " assignments > " +
                std::to_string(enumeration_cap));
    }

    SolveResult res;
    res.objective = objective;

    // Odometer over host vectors in ascending vm-id order; lexicographic
    // enumeration plus strict improvement gives the documented tie-break.
    std::vector<VmId> vm_order;
    for (const auto& v : inst.vms) vm_order.push_back(v.id);
    std::sort(vm_order.begin(), vm_order.end());

    Incumbent inc;
    std::vector<int> digits(vm_order.size(), 0);
    bool done = false;
    while (!done) {
        res.nodes_explored++;
        Placement p;
        for (std::size_t i = 0; i < vm_order.size(); ++i)
            p.host[vm_order[i]] = c.server_ids[digits[i]];
        EvalResult ev = evaluate(inst, p, map);
        if (ev.feasibility.feasible()) {
            double obj = objective_value(ev.power, objective);
            if (!inc.found || obj < inc.obj) {
                inc.found = true;
                inc.obj = obj;
                inc.placement = p;
                inc.breakdown = ev.power;
            }
        }
        if (digits.empty()) break;
        int i = (int)digits.size() - 1;
        while (i >= 0 && ++digits[i] == c.m) digits[i--] = 0;
        done = i < 0;
    }

    if (inc.found) {
        res.status = SolveStatus::optimal;
        res.placement = inc.placement;
        res.breakdown = inc.breakdown;
        res.lower_bound_w = inc.obj;
    } else {
        res.status = SolveStatus::infeasible;
    }
    res.runtime_ms = elapsed_ms(t0);
    return res;
}

double lower_bound(const Instance& inst, Objective objective, const Placement& partial) {
    (void)objective;  // the networking term of the bound is 0 either way
    double cap_max = inst.max_capacity_ghz();
    double idle = inst.power.server_idle_w;
    double span = inst.power.server_max_w - inst.power.server_idle_w;

    std::set<ServerId> active;
    double assigned_dyn = 0;
    for (const auto& [vm, server] : partial.host) {
        const ServerSpec& s = inst.server(server);
        active.insert(server);
        assigned_dyn += span * inst.vm(vm).requirement_ghz / s.capacity_ghz;
    }
    double unassigned_dyn = 0;
    for (const auto& v : inst.vms)
        if (!partial.host.count(v.id))
            unassigned_dyn += span * v.requirement_ghz / cap_max;

    int k_min = min_server_count(inst.total_requirement_ghz(), cap_max);
    return idle * std::max((int)active.size(), k_min) + assigned_dyn + unassigned_dyn;
}

SolveResult solve_branch_and_bound(const Instance& inst, Objective objective,
                                   const RoutingMap& map, const BnbOptions& opts) {
    auto t0 = Clock::now();
    Ctx c(inst, objective, map);
    BnbSearcher searcher(c, opts);

    if (opts.warm_start && c.n > 0) {
        SolveResult bfd = solve_bfd(inst, objective, map);
        if (bfd.status == SolveStatus::feasible) {
            SolveBudget ls_budget;
            ls_budget.node_limit = 20000;
            Placement improved =
                local_search_improve(inst, objective, map, *bfd.placement, ls_budget, 0);
            EvalResult ev = evaluate(inst, improved, map);
            searcher.seed_incumbent(improved, ev.power);
        }
    }

    SolveResult res = searcher.run();
    res.runtime_ms = elapsed_ms(t0);
    return res;
}

SolveResult solve_bfd(const Instance& inst, Objective objective, const RoutingMap& map) {
    auto t0 = Clock::now();
    Ctx c(inst, objective, map);

    SolveResult res;
    res.objective = objective;
    res.lower_bound_w = lower_bound(inst, objective, Placement{});

    std::vector<int> assign(c.n, -1);
    NodeState st;
    for (int pos = 0; pos < c.n; ++pos) {
        recompute(c, assign, pos, st);
        int best_s = -1;
        double best_incr = 0, best_resid = 0;
        for (int s = 0; s < c.m; ++s) {
            res.nodes_explored++;
            if (st.load[s] + c.req[pos] > c.cap[s]) continue;
            bool opens = !st.active[s];
            if (opens && c.max_active && st.active_count + 1 > *c.max_active) continue;
            double incr, cb;
            if (!child_delta(c, st, assign, pos, pos, s, incr, cb)) continue;
            double resid = c.cap[s] - st.load[s] - c.req[pos];
            if (best_s < 0 || incr < best_incr ||
                (incr == best_incr && resid < best_resid)) {
                best_s = s;
                best_incr = incr;
                best_resid = resid;
            }
        }
        if (best_s < 0) {
            res.status = SolveStatus::infeasible;
            res.runtime_ms = elapsed_ms(t0);
            return res;
        }
        assign[pos] = best_s;
    }

    Placement p = c.to_placement(assign);
    EvalResult ev = evaluate(inst, p, map);
    if (!ev.feasibility.feasible()) {
        res.status = SolveStatus::infeasible;
    } else {
        res.status = SolveStatus::feasible;
        res.placement = std::move(p);
        res.breakdown = ev.power;
    }
    res.runtime_ms = elapsed_ms(t0);
    return res;
}

Placement local_search_improve(const Instance& inst, Objective objective,
                               const RoutingMap& map, const Placement& start,
                               const SolveBudget& budget, std::uint64_t seed) {
    auto t0 = Clock::now();
    EvalResult ev = evaluate(inst, start, map);
    if (!ev.feasibility.feasible())
        throw std::invalid_argument("local search requires a feasible start placement");

    double cur_obj = objective_value(ev.power, objective);
    Placement cur = start;

    std::vector<VmId> vm_ids;
    for (const auto& v : inst.vms) vm_ids.push_back(v.id);
    std::sort(vm_ids.begin(), vm_ids.end());
    std::vector<ServerId> server_ids;
    for (const auto& s : inst.servers) server_ids.push_back(s.id);
    std::sort(server_ids.begin(), server_ids.end());

    struct Cand {
        bool is_swap;
        VmId a, b;      // swap
        ServerId dest;  // move
    };
    std::vector<Cand> all;
    for (VmId v : vm_ids)
        for (ServerId s : server_ids) all.push_back({false, v, v, s});
    for (std::size_t i = 0; i < vm_ids.size(); ++i)
        for (std::size_t j = i + 1; j < vm_ids.size(); ++j)
            all.push_back({true, vm_ids[i], vm_ids[j], 0});

    std::mt19937_64 rng(seed);
    std::uint64_t evals = 0;
    bool improved = true;
    while (improved) {
        improved = false;
        // Fisher-Yates with explicit draws keeps the order a pure function of
        // the seed.
        std::vector<Cand> order = all;
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng() % i]);

        for (const auto& cand : order) {
            if (evals >= budget.node_limit) return cur;
            if (elapsed_ms(t0) / 1000.0 > budget.time_limit_s) return cur;
            Placement trial = cur;
            if (cand.is_swap) {
                ServerId sa = trial.host.at(cand.a), sb = trial.host.at(cand.b);
                if (sa == sb) continue;
                trial.host[cand.a] = sb;
                trial.host[cand.b] = sa;
            } else {
                if (trial.host.at(cand.a) == cand.dest) continue;
                trial.host[cand.a] = cand.dest;
            }
            evals++;
            EvalResult tev = evaluate(inst, trial, map);
            if (!tev.feasibility.feasible()) continue;
            double obj = objective_value(tev.power, objective);
            if (obj < cur_obj) {  // first improvement
                cur = std::move(trial);
                cur_obj = obj;
                improved = true;
                break;
            }
        }
    }
    return cur;
}

std::string result_to_json(const SolveResult& r, bool stable_output) {
    nlohmann::json j;
    j["status"] = to_string(r.status);
    j["objective"] = to_string(r.objective);
    if (r.placement) {
        j["pc_w"] = r.breakdown.pc_w;
        j["pn_w"] = r.breakdown.pn_w;
        j["total_w"] = r.breakdown.total_w;
        nlohmann::json host = nlohmann::json::array();
        for (const auto& [vm, server] : r.placement->host)
            host.push_back({{"vm", vm}, {"server", server}});
        j["placement"] = {{"host", host}};
    } else {
        j["pc_w"] = nullptr;
        j["pn_w"] = nullptr;
        j["total_w"] = nullptr;
        j["placement"] = nullptr;
    }
    j["lower_bound_w"] = r.lower_bound_w;
    j["nodes"] = r.nodes_explored;
    j["runtime_ms"] = stable_output ? 0.0 : r.runtime_ms;
    return j.dump(2) + "\n";
}

}  // namespace ponplace
