#include "ponplace/corpus.hpp"

#include <algorithm>
#include <filesystem>

#include <json.hpp>

#include "ponplace/serialize.hpp"
#include "ponplace/solve.hpp"

namespace ponplace {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json result_entry(const SolveResult& r) {
    json e;
    e["status"] = to_string(r.status);
    if (r.placement) {
        e["objective_w"] = r.objective_w();
        e["pc_w"] = r.breakdown.pc_w;
        e["pn_w"] = r.breakdown.pn_w;
        e["total_w"] = r.breakdown.total_w;
        json host = json::array();
        for (const auto& [vm, server] : r.placement->host)
            host.push_back({{"vm", vm}, {"server", server}});
        e["host"] = host;
    }
    return e;
}

}  // namespace

std::string regenerate_expected(const Instance& inst, std::uint64_t enumeration_cap) {
    RoutingMap map = build_routing_map(inst.topology, inst.power);
    json j;
    j["pc"] = result_entry(solve_exhaustive(inst, Objective::pc_only, map, enumeration_cap));
    j["pc+pn"] =
        result_entry(solve_exhaustive(inst, Objective::pc_plus_pn, map, enumeration_cap));
    return j.dump(2) + "\n";
}

std::vector<CorpusResult> run_corpus(const std::string& corpus_dir,
                                     std::uint64_t enumeration_cap) {
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(corpus_dir))
        if (entry.is_directory() && fs::exists(entry.path() / "instance.json"))
            names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());

    std::vector<CorpusResult> results;
    for (const auto& name : names) {
        CorpusResult res;
        res.name = name;
        fs::path dir = fs::path(corpus_dir) / name;
        try {
            Instance inst = load_instance(read_file((dir / "instance.json").string()));
            std::string expected = read_file((dir / "expected.json").string());
            std::string regen = regenerate_expected(inst, enumeration_cap);
            if (regen != expected) {
                res.diff = "oracle output differs from expected.json";
            } else {
                // branch-and-bound must reproduce the oracle exactly
                RoutingMap map = build_routing_map(inst.topology, inst.power);
                json exp = json::parse(expected);
                for (Objective obj : {Objective::pc_only, Objective::pc_plus_pn}) {
                    const json& e = exp.at(obj == Objective::pc_only ? "pc" : "pc+pn");
                    SolveResult bnb = solve_branch_and_bound(inst, obj, map);
                    json got = result_entry(bnb);
                    // statuses differ by proof style only: the oracle reports
                    // optimal, and so must a completed search
                    if (got != e) {
                        res.diff = std::string("branch-and-bound mismatch under ") +
                                   to_string(obj);
                        break;
                    }
                }
            }
        } catch (const std::exception& e) {
            res.diff = e.what();
        }
        res.pass = res.diff.empty();
        results.push_back(std::move(res));
    }
    return results;
}

}  // namespace ponplace
