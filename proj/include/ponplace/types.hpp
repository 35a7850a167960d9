#ifndef PONPLACE_TYPES_HPP
#define PONPLACE_TYPES_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ponplace {

using VmId = int;
using ServerId = int;
using RackId = int;

/// Objective variants: processing power only, or processing plus networking.
enum class Objective { pc_only, pc_plus_pn };

inline const char* to_string(Objective o) {
    return o == Objective::pc_only ? "pc" : "pc+pn";
}

/// Cell layout: racks of servers interconnected through AWGRs and an OLT path.
struct Topology {
    int num_racks = 4;
    int servers_per_rack = 7;
    int num_wavelengths = 4;
    int num_awgrs = 2;
    int olt_paths_per_rack_pair = 1;

    int num_servers() const { return num_racks * servers_per_rack; }
    bool operator==(const Topology&) const = default;
};

/// Electrical model parameters. ONU capacity applies independently to the
/// upload and the download direction of each server.
struct PowerParams {
    double server_max_w = 301.0;
    double server_idle_w = 201.0;
    double onu_power_w = 2.5;
    double onu_capacity_gbps = 10.0;
    double wavelength_capacity_gbps = 10.0;
    // When true, servers hosting nothing still burn idle power instead of 0 W.
    bool idle_when_unused = false;

    bool operator==(const PowerParams&) const = default;
};

struct ServerSpec {
    ServerId id = 0;
    RackId rack = 0;
    double capacity_ghz = 0.0;

    bool operator==(const ServerSpec&) const = default;
};

struct VmSpec {
    VmId id = 0;
    double requirement_ghz = 0.0;

    bool operator==(const VmSpec&) const = default;
};

/// Sparse directed demand matrix: (src vm, dst vm) -> Gbps, src != dst.
struct TrafficMatrix {
    std::map<std::pair<VmId, VmId>, double> demands;

    void add(VmId src, VmId dst, double gbps) { demands[{src, dst}] = gbps; }
    double at(VmId src, VmId dst) const {
        auto it = demands.find({src, dst});
        return it == demands.end() ? 0.0 : it->second;
    }
    bool empty() const { return demands.empty(); }
    std::size_t size() const { return demands.size(); }
    double total() const {
        double t = 0.0;
        for (const auto& [k, v] : demands) t += v;
        return t;
    }

    bool operator==(const TrafficMatrix&) const = default;
};

/// A full problem statement.
struct Instance {
    Topology topology;
    std::vector<ServerSpec> servers;
    std::vector<VmSpec> vms;
    TrafficMatrix traffic;
    PowerParams power;
    std::optional<int> max_active_servers;

    bool operator==(const Instance&) const = default;

    const ServerSpec& server(ServerId id) const {
        for (const auto& s : servers)
            if (s.id == id) return s;
        throw std::invalid_argument("unknown server id " + std::to_string(id));
    }
    const VmSpec& vm(VmId id) const {
        for (const auto& v : vms)
            if (v.id == id) return v;
        throw std::invalid_argument("unknown vm id " + std::to_string(id));
    }
    bool has_server(ServerId id) const {
        for (const auto& s : servers)
            if (s.id == id) return true;
        return false;
    }
    bool has_vm(VmId id) const {
        for (const auto& v : vms)
            if (v.id == id) return true;
        return false;
    }
    double max_capacity_ghz() const {
        double m = 0.0;
        for (const auto& s : servers)
            if (s.capacity_ghz > m) m = s.capacity_ghz;
        return m;
    }
    double total_requirement_ghz() const {
        double t = 0.0;
        for (const auto& v : vms) t += v.requirement_ghz;
        return t;
    }
};

/// Total map vm -> hosting server. Map ordering doubles as the canonical
/// host-vector order (ascending vm id) used for lexicographic tie-breaks.
struct Placement {
    std::map<VmId, ServerId> host;

    bool operator==(const Placement&) const = default;
    // Lexicographic on (vm, server) pairs; for equal vm sets this is the
    // host-vector order by ascending vm id.
    bool operator<(const Placement& o) const { return host < o.host; }
};

/// Seeded scenario generator configuration.
struct GenConfig {
    int num_vms = 10;
    std::pair<double, double> req_range_ghz{0.1, 0.5};
    std::pair<double, double> cap_range_ghz{1.8, 2.75};
    std::pair<double, double> traffic_range_gbps{0.1, 4.0};
    double traffic_density = 0.2;  // probability per ordered vm pair
    Topology topology;
    std::uint64_t seed = 0;
};

struct Violation {
    std::string code;
    std::string message;
    double excess = 0.0;
};

struct FeasibilityReport {
    std::vector<Violation> violations;

    bool feasible() const { return violations.empty(); }
    void add(std::string code, std::string message, double excess = 0.0) {
        violations.push_back({std::move(code), std::move(message), excess});
    }
};

struct ValidationReport {
    std::vector<Violation> violations;
    std::vector<Violation> warnings;

    bool valid() const { return violations.empty(); }
};

}  // namespace ponplace

#endif
