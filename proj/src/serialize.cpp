#include "ponplace/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ponplace {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key, const char* where) {
    auto it = j.find(key);
    if (it == j.end())
        throw ParseError(std::string("schema violation: missing \"") + key +
                         "\" in " + where);
    return *it;
}

double require_number(const json& j, const char* key, const char* where) {
    const json& v = require(j, key, where);
    if (!v.is_number())
        throw ParseError(std::string("schema violation: \"") + key + "\" in " +
                         where + " must be a number");
    return v.get<double>();
}

int require_int(const json& j, const char* key, const char* where) {
    const json& v = require(j, key, where);
    if (!v.is_number_integer())
        throw ParseError(std::string("schema violation: \"") + key + "\" in " +
                         where + " must be an integer");
    return v.get<int>();
}

int require_id(const json& j, const char* key, const char* where) {
    int id = require_int(j, key, where);
    if (id < 0)
        throw ParseError(std::string("schema violation: \"") + key + "\" in " +
                         where + " must be a non-negative integer");
    return id;
}

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("parse error: ") + e.what());
    }
}

}  // namespace

std::string save_instance(const Instance& inst) {
    json j;
    j["topology"] = {{"num_racks", inst.topology.num_racks},
                     {"servers_per_rack", inst.topology.servers_per_rack},
                     {"num_wavelengths", inst.topology.num_wavelengths},
                     {"num_awgrs", inst.topology.num_awgrs},
                     {"olt_paths_per_rack_pair", inst.topology.olt_paths_per_rack_pair}};

    auto servers = inst.servers;
    std::sort(servers.begin(), servers.end(),
              [](const ServerSpec& a, const ServerSpec& b) { return a.id < b.id; });
    j["servers"] = json::array();
    for (const auto& s : servers)
        j["servers"].push_back(
            {{"id", s.id}, {"rack", s.rack}, {"capacity_ghz", s.capacity_ghz}});

    auto vms = inst.vms;
    std::sort(vms.begin(), vms.end(),
              [](const VmSpec& a, const VmSpec& b) { return a.id < b.id; });
    j["vms"] = json::array();
    for (const auto& v : vms)
        j["vms"].push_back({{"id", v.id}, {"requirement_ghz", v.requirement_ghz}});

    j["traffic"] = json::array();
    for (const auto& [key, rate] : inst.traffic.demands)
        j["traffic"].push_back({{"src", key.first}, {"dst", key.second}, {"gbps", rate}});

    j["power"] = {{"server_max_w", inst.power.server_max_w},
                  {"server_idle_w", inst.power.server_idle_w},
                  {"onu_power_w", inst.power.onu_power_w},
                  {"onu_capacity_gbps", inst.power.onu_capacity_gbps},
                  {"wavelength_capacity_gbps", inst.power.wavelength_capacity_gbps}};
    if (inst.power.idle_when_unused) j["power"]["idle_when_unused"] = true;

    if (inst.max_active_servers) j["max_active_servers"] = *inst.max_active_servers;

    return j.dump(2) + "\n";
}

Instance load_instance(const std::string& text) {
    json j = parse(text);
    if (!j.is_object()) throw ParseError("schema violation: document must be an object");

    Instance inst;

    const json& jt = require(j, "topology", "document");
    inst.topology.num_racks = require_int(jt, "num_racks", "topology");
    inst.topology.servers_per_rack = require_int(jt, "servers_per_rack", "topology");
    inst.topology.num_wavelengths = require_int(jt, "num_wavelengths", "topology");
    inst.topology.num_awgrs = require_int(jt, "num_awgrs", "topology");
    inst.topology.olt_paths_per_rack_pair =
        require_int(jt, "olt_paths_per_rack_pair", "topology");

    const json& js = require(j, "servers", "document");
    if (!js.is_array()) throw ParseError("schema violation: \"servers\" must be an array");
    for (const auto& e : js) {
        ServerSpec s;
        s.id = require_id(e, "id", "servers[]");
        s.rack = require_id(e, "rack", "servers[]");
        s.capacity_ghz = require_number(e, "capacity_ghz", "servers[]");
        if (!(s.capacity_ghz > 0) || !std::isfinite(s.capacity_ghz))
            throw ParseError("validation error: server " + std::to_string(s.id) +
                             " capacity_ghz must be finite and > 0");
        inst.servers.push_back(s);
    }

    const json& jv = require(j, "vms", "document");
    if (!jv.is_array()) throw ParseError("schema violation: \"vms\" must be an array");
    for (const auto& e : jv) {
        VmSpec v;
        v.id = require_id(e, "id", "vms[]");
        v.requirement_ghz = require_number(e, "requirement_ghz", "vms[]");
        if (!(v.requirement_ghz > 0) || !std::isfinite(v.requirement_ghz))
            throw ParseError("validation error: vm " + std::to_string(v.id) +
                             " requirement_ghz must be finite and > 0");
        inst.vms.push_back(v);
    }

    const json& jd = require(j, "traffic", "document");
    if (!jd.is_array()) throw ParseError("schema violation: \"traffic\" must be an array");
    for (const auto& e : jd) {
        int src = require_id(e, "src", "traffic[]");
        int dst = require_id(e, "dst", "traffic[]");
        double rate = require_number(e, "gbps", "traffic[]");
        if (!(rate > 0) || !std::isfinite(rate))
            throw ParseError("validation error: traffic " + std::to_string(src) + "->" +
                             std::to_string(dst) + " gbps must be finite and > 0");
        if (src == dst)
            throw ParseError("validation error: traffic self-demand on vm " +
                             std::to_string(src));
        inst.traffic.add(src, dst, rate);
    }

    const json& jp = require(j, "power", "document");
    inst.power.server_max_w = require_number(jp, "server_max_w", "power");
    inst.power.server_idle_w = require_number(jp, "server_idle_w", "power");
    inst.power.onu_power_w = require_number(jp, "onu_power_w", "power");
    inst.power.onu_capacity_gbps = require_number(jp, "onu_capacity_gbps", "power");
    inst.power.wavelength_capacity_gbps =
        require_number(jp, "wavelength_capacity_gbps", "power");
    if (jp.contains("idle_when_unused")) {
        if (!jp["idle_when_unused"].is_boolean())
            throw ParseError(
                "schema violation: \"idle_when_unused\" in power must be a boolean");
        inst.power.idle_when_unused = jp["idle_when_unused"].get<bool>();
    }

    if (j.contains("max_active_servers"))
        inst.max_active_servers = require_int(j, "max_active_servers", "document");

    return inst;
}

std::string save_placement(const Placement& p) {
    json j;
    j["host"] = json::array();
    for (const auto& [vm, server] : p.host)
        j["host"].push_back({{"vm", vm}, {"server", server}});
    return j.dump(2) + "\n";
}

Placement load_placement(const std::string& text) {
    json j = parse(text);
    const json& jh = require(j, "host", "document");
    if (!jh.is_array()) throw ParseError("schema violation: \"host\" must be an array");
    Placement p;
    for (const auto& e : jh) {
        int vm = require_id(e, "vm", "host[]");
        int server = require_id(e, "server", "host[]");
        if (p.host.count(vm))
            throw ParseError("validation error: vm " + std::to_string(vm) +
                             " mapped twice");
        p.host[vm] = server;
    }
    return p;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace ponplace
