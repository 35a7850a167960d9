#ifndef PONPLACE_POWER_HPP
#define PONPLACE_POWER_HPP

#include <string>

#include "ponplace/network.hpp"
#include "ponplace/types.hpp"

namespace ponplace {

struct PowerBreakdown {
    double pc_w = 0.0;
    double pn_w = 0.0;
    double total_w = 0.0;
    int active_servers = 0;
    int active_onus = 0;
};

/// Linear utilization curve: 0 W when switched off (util = 0), otherwise
/// idle + (max - idle) * util / capacity. Throws when util exceeds capacity.
double server_power(double util_ghz, double capacity_ghz, const PowerParams& p);

struct EvalResult {
    PowerBreakdown power;
    FeasibilityReport feasibility;
    NetworkLoad load;
};

/// Full placement evaluation: Pc over hosting servers, Pn over
/// traffic-active ONUs, and the combined feasibility report (server
/// capacity, ONU and channel capacities, active-server cap). The breakdown
/// is produced even for infeasible placements.
EvalResult evaluate(const Instance& inst, const Placement& placement,
                    const RoutingMap& map);

/// Evaluation report document {pc_w, pn_w, ..., feasible, violations[], loads{...}}.
std::string report_to_json(const EvalResult& result);

}  // namespace ponplace

#endif
