#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ponplace/experiment.hpp"
#include "ponplace/generate.hpp"
#include "ponplace/milp.hpp"
#include "ponplace/num_text.hpp"
#include "ponplace/serialize.hpp"
#include "ponplace/solve.hpp"
#include "ponplace/validate.hpp"

namespace {

using namespace ponplace;

Objective parse_objective(const std::string& s) {
    if (s == "pc") return Objective::pc_only;
    if (s == "pc+pn" || s == "pcpn") return Objective::pc_plus_pn;
    throw CLI::ValidationError("--objective must be pc or pc+pn");
}

SolverKind parse_solver(const std::string& s) {
    if (s == "bnb") return SolverKind::bnb;
    if (s == "bfd") return SolverKind::bfd;
    if (s == "local") return SolverKind::local;
    throw CLI::ValidationError("--solver must be bnb, bfd or local");
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        write_file(out_path, content);
}

int exit_code_for(const SolveResult& r) {
    switch (r.status) {
        case SolveStatus::optimal:
        case SolveStatus::feasible: return 0;
        case SolveStatus::infeasible: return 2;
        case SolveStatus::timeout: return r.placement ? 0 : 3;
    }
    return 1;
}

void print_breakdown(const PowerBreakdown& b) {
    std::cout << "  pc_w: " << num_text(b.pc_w) << "\n  pn_w: " << num_text(b.pn_w)
              << "\n  total_w: " << num_text(b.total_w)
              << "\n  active_servers: " << b.active_servers
              << "\n  active_onus: " << b.active_onus << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"VM placement optimizer for a WDM-TDM AWGR PON data-centre cell"};
    app.require_subcommand(1);

    // ---- generate ----
    auto* gen = app.add_subcommand("generate", "generate a random instance");
    GenConfig gen_cfg;
    std::vector<double> req_range{0.1, 0.5}, cap_range{1.8, 2.75}, traf_range{0.1, 4.0};
    int gen_max_active = 0;
    std::string gen_out;
    gen->add_option("--vms", gen_cfg.num_vms, "number of VMs")->required();
    gen->add_option("--seed", gen_cfg.seed, "generator seed");
    gen->add_option("--density", gen_cfg.traffic_density,
                    "probability of a demand per ordered VM pair");
    gen->add_option("--req", req_range, "VM requirement range (GHz)")->expected(2);
    gen->add_option("--cap", cap_range, "server capacity range (GHz)")->expected(2);
    gen->add_option("--traffic", traf_range, "demand rate range (Gbps)")->expected(2);
    gen->add_option("--racks", gen_cfg.topology.num_racks, "racks in the cell");
    gen->add_option("--servers-per-rack", gen_cfg.topology.servers_per_rack,
                    "servers per rack");
    gen->add_option("--wavelengths", gen_cfg.topology.num_wavelengths, "wavelengths");
    gen->add_option("--awgrs", gen_cfg.topology.num_awgrs, "intermediate AWGRs");
    gen->add_option("--olt-paths", gen_cfg.topology.olt_paths_per_rack_pair,
                    "OLT paths per rack pair");
    gen->add_option("--max-active-servers", gen_max_active,
                    "cap on simultaneously active servers");
    gen->add_option("--out", gen_out, "instance file (stdout when omitted)");

    // ---- solve ----
    auto* solve = app.add_subcommand("solve", "minimize power for an instance");
    std::string solve_instance, solve_objective = "pc+pn", solve_solver = "bnb", solve_out;
    double solve_time_limit = 60.0;
    std::uint64_t solve_node_limit = 0, solve_seed = 0;
    bool solve_stable = false;
    solve->add_option("--instance", solve_instance, "instance file")->required();
    solve->add_option("--objective", solve_objective, "pc or pc+pn");
    solve->add_option("--solver", solve_solver, "bnb, bfd or local");
    solve->add_option("--time-limit", solve_time_limit, "seconds per solve");
    solve->add_option("--node-limit", solve_node_limit, "search node cap (0 = unlimited)");
    solve->add_option("--seed", solve_seed, "local-search seed");
    solve->add_option("--out", solve_out, "result file (stdout when omitted)");
    solve->add_flag("--stable-output", solve_stable, "write runtime fields as 0");

    // ---- evaluate ----
    auto* eval = app.add_subcommand("evaluate", "evaluate a placement");
    std::string eval_instance, eval_placement, eval_out;
    eval->add_option("--instance", eval_instance, "instance file")->required();
    eval->add_option("--placement", eval_placement, "placement file")->required();
    eval->add_option("--out", eval_out, "report file (stdout when omitted)");

    // ---- export ----
    auto* exp = app.add_subcommand("export", "export the MILP model");
    std::string exp_instance, exp_objective = "pc+pn", exp_format = "lp", exp_out;
    exp->add_option("--instance", exp_instance, "instance file")->required();
    exp->add_option("--objective", exp_objective, "pc or pc+pn");
    exp->add_option("--format", exp_format, "lp or mps");
    exp->add_option("--out", exp_out, "model file (stdout when omitted)");

    // ---- experiment ----
    auto* ex = app.add_subcommand("experiment", "run the power-trend sweeps");
    std::string ex_figure = "both", ex_objective = "both", ex_solver = "bnb";
    std::string ex_out_dir = "experiment_out";
    std::vector<int> ex_vm_counts;
    std::vector<double> ex_req_sweep;
    std::vector<std::uint64_t> ex_seed_list;
    int ex_seeds = 10, ex_threads = 0;
    double ex_time_limit = 60.0, ex_density = 0.2;
    bool ex_stable = false;
    ex->add_option("--figure", ex_figure, "fig2, fig3 or both");
    ex->add_option("--vm-counts", ex_vm_counts, "fig2 VM counts");
    ex->add_option("--req-sweep", ex_req_sweep, "fig3 mean requirements (GHz)");
    ex->add_option("--seeds", ex_seeds, "number of seeds (0..N-1)");
    ex->add_option("--seed-list", ex_seed_list, "explicit seeds");
    ex->add_option("--objective", ex_objective, "pc, pc+pn or both");
    ex->add_option("--solver", ex_solver, "bnb, bfd or local");
    ex->add_option("--time-limit", ex_time_limit, "seconds per solve");
    ex->add_option("--density", ex_density, "traffic density");
    ex->add_option("--threads", ex_threads, "worker cap (default PONPLACE_THREADS)");
    ex->add_option("--out-dir", ex_out_dir, "output directory");
    ex->add_flag("--stable-output", ex_stable, "write runtime fields as 0");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            gen_cfg.req_range_ghz = {req_range[0], req_range[1]};
            gen_cfg.cap_range_ghz = {cap_range[0], cap_range[1]};
            gen_cfg.traffic_range_gbps = {traf_range[0], traf_range[1]};
            Instance inst = generate_instance(gen_cfg);
            if (gen_max_active > 0) inst.max_active_servers = gen_max_active;
            auto rep = validate_instance(inst);
            emit(gen_out, save_instance(inst));
            std::cerr << "instance: " << inst.servers.size() << " servers / "
                      << inst.topology.num_racks << " racks, " << inst.vms.size()
                      << " VMs, " << inst.traffic.size() << " demands, total req "
                      << num_text(inst.total_requirement_ghz()) << " GHz";
            if (!rep.warnings.empty())
                std::cerr << ", " << rep.warnings.size() << " warning(s)";
            std::cerr << "\n";
            return 0;
        }

        if (*solve) {
            Instance inst = load_instance(read_file(solve_instance));
            RoutingMap map = build_routing_map(inst.topology, inst.power);
            SolveBudget budget;
            budget.time_limit_s = solve_time_limit;
            if (solve_node_limit > 0) budget.node_limit = solve_node_limit;
            SolveResult res = run_solver(inst, parse_objective(solve_objective), map,
                                         parse_solver(solve_solver), budget, solve_seed);
            emit(solve_out, result_to_json(res, solve_stable));
            std::cerr << "status: " << to_string(res.status);
            if (res.placement)
                std::cerr << ", objective " << num_text(res.objective_w()) << " W";
            std::cerr << "\n";
            return exit_code_for(res);
        }

        if (*eval) {
            Instance inst = load_instance(read_file(eval_instance));
            Placement p = load_placement(read_file(eval_placement));
            RoutingMap map = build_routing_map(inst.topology, inst.power);
            EvalResult res = evaluate(inst, p, map);
            emit(eval_out, report_to_json(res));
            print_breakdown(res.power);
            if (res.feasibility.feasible()) {
                std::cout << "  feasible\n";
            } else {
                for (const auto& v : res.feasibility.violations)
                    std::cout << "  violation[" << v.code << "]: " << v.message << "\n";
            }
            return res.feasibility.feasible() ? 0 : 2;
        }

        if (*exp) {
            Instance inst = load_instance(read_file(exp_instance));
            RoutingMap map = build_routing_map(inst.topology, inst.power);
            MilpModel model = build_model(inst, parse_objective(exp_objective), map);
            if (exp_format == "lp")
                emit(exp_out, export_lp(model));
            else if (exp_format == "mps")
                emit(exp_out, export_mps(model));
            else
                throw CLI::ValidationError("--format must be lp or mps");
            std::cerr << "model: " << model.variables.size() << " variables, "
                      << model.constraints.size() << " constraints\n";
            return 0;
        }

        if (*ex) {
            ExperimentConfig cfg;
            if (ex_figure == "fig2")
                cfg.figures = {Figure::fig2};
            else if (ex_figure == "fig3")
                cfg.figures = {Figure::fig3};
            else if (ex_figure == "both")
                cfg.figures = {Figure::fig2, Figure::fig3};
            else
                throw CLI::ValidationError("--figure must be fig2, fig3 or both");
            if (!ex_vm_counts.empty()) cfg.vm_counts = ex_vm_counts;
            if (!ex_req_sweep.empty()) cfg.avg_req_sweep_ghz = ex_req_sweep;
            if (!ex_seed_list.empty()) {
                cfg.seeds = ex_seed_list;
            } else {
                cfg.seeds.clear();
                for (int i = 0; i < ex_seeds; ++i) cfg.seeds.push_back(i);
            }
            if (ex_objective == "both")
                cfg.objectives = {Objective::pc_only, Objective::pc_plus_pn};
            else
                cfg.objectives = {parse_objective(ex_objective)};
            cfg.solver = parse_solver(ex_solver);
            cfg.time_limit_s = ex_time_limit;
            cfg.traffic_density = ex_density;
            cfg.threads = ex_threads;
            cfg.stable_output = ex_stable;
            ExperimentOutput out = run_experiment(cfg);
            write_experiment(out, cfg, ex_out_dir);
            std::cout << out.summary_text;
            std::cerr << "wrote " << ex_out_dir << "/results.csv (" << out.rows.size()
                      << " rows), means.csv, plots.gp, summary.txt\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
