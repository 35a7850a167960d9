#ifndef PONPLACE_SOLVE_HPP
#define PONPLACE_SOLVE_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "ponplace/power.hpp"
#include "ponplace/types.hpp"

namespace ponplace {

enum class SolveStatus { optimal, feasible, infeasible, timeout };

const char* to_string(SolveStatus s);

struct SolveBudget {
    double time_limit_s = std::numeric_limits<double>::infinity();
    std::uint64_t node_limit = std::numeric_limits<std::uint64_t>::max();
};

struct SolveResult {
    Objective objective = Objective::pc_only;
    SolveStatus status = SolveStatus::infeasible;
    std::optional<Placement> placement;
    PowerBreakdown breakdown;
    double lower_bound_w = 0.0;
    std::uint64_t nodes_explored = 0;
    double runtime_ms = 0.0;

    double objective_w() const {
        return objective == Objective::pc_only ? breakdown.pc_w : breakdown.total_w;
    }
};

/// SolveResult document; stable_output writes runtime_ms as 0 so reruns are
/// byte-identical.
std::string result_to_json(const SolveResult& r, bool stable_output = false);

/// Enumerates every assignment (|servers|^|vms| must stay within
/// enumeration_cap), keeping the best feasible one. Ties go to the
/// lexicographically smallest host vector ordered by vm id. This is the
/// reference oracle the other solvers are tested against.
SolveResult solve_exhaustive(const Instance& inst, Objective objective,
                             const RoutingMap& map,
                             std::uint64_t enumeration_cap = 10'000'000);

/// Admissible completion bound for a partial placement:
///   idle * max(active_servers, ceil(total_req / cap_max))
/// + sum over assigned vms of (max-idle) * req / cap_host
/// + sum over unassigned vms of (max-idle) * req / cap_max
/// with no networking term. Never exceeds the objective of any feasible
/// completion, under either objective.
double lower_bound(const Instance& inst, Objective objective, const Placement& partial);

struct BnbOptions {
    SolveBudget budget;
    // Seed the incumbent with BFD + local search before the tree search.
    bool warm_start = true;
    // Invoked on every incumbent update with the current global lower bound.
    std::function<void(double incumbent_w, double lower_bound_w, std::uint64_t nodes)>
        on_progress;
};

/// Depth-first search assigning VMs in decreasing-requirement order,
/// children ordered by increasing incremental objective. Exact: on
/// completion the result equals solve_exhaustive, including the tie-break.
/// On budget exhaustion reports the incumbent and a global lower bound.
SolveResult solve_branch_and_bound(const Instance& inst, Objective objective,
                                   const RoutingMap& map, const BnbOptions& opts = {});

/// Best-fit-decreasing construction: VMs in decreasing requirement order,
/// each placed on the feasible server with the smallest incremental
/// objective (ties: smallest residual capacity, then smallest id).
SolveResult solve_bfd(const Instance& inst, Objective objective, const RoutingMap& map);

/// First-improvement local search over move-one-vm and swap-two-vms
/// neighborhoods, scanned in seeded random order. Start must be feasible.
Placement local_search_improve(const Instance& inst, Objective objective,
                               const RoutingMap& map, const Placement& start,
                               const SolveBudget& budget = {}, std::uint64_t seed = 0);

}  // namespace ponplace

#endif
