#include "ponplace/generate.hpp"

#include <random>
#include <stdexcept>

#include "ponplace/validate.hpp"

namespace ponplace {

namespace {

// 53-bit uniform in [0, 1); independent of the library's distribution
// internals so streams are stable.
double next_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double next_in(std::mt19937_64& rng, const std::pair<double, double>& range) {
    return range.first + next_unit(rng) * (range.second - range.first);
}

}  // namespace

Instance generate_instance(const GenConfig& cfg) {
    auto rep = validate_config(cfg);
    if (!rep.valid())
        throw std::invalid_argument("invalid generator config: " +
                                    rep.violations.front().message);

    std::mt19937_64 rng(cfg.seed);
    Instance inst;
    inst.topology = cfg.topology;

    const int n_servers = cfg.topology.num_servers();
    inst.servers.reserve(n_servers);
    for (int id = 0; id < n_servers; ++id)
        inst.servers.push_back({id, id / cfg.topology.servers_per_rack,
                                next_in(rng, cfg.cap_range_ghz)});

    inst.vms.reserve(cfg.num_vms);
    for (int id = 0; id < cfg.num_vms; ++id)
        inst.vms.push_back({id, next_in(rng, cfg.req_range_ghz)});

    for (int u = 0; u < cfg.num_vms; ++u)
        for (int v = 0; v < cfg.num_vms; ++v) {
            if (u == v) continue;
            if (next_unit(rng) < cfg.traffic_density)
                inst.traffic.add(u, v, next_in(rng, cfg.traffic_range_gbps));
        }

    return inst;
}

}  // namespace ponplace
