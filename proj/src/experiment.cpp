#include "ponplace/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sstream>
#include <thread>

#include "ponplace/generate.hpp"
#include "ponplace/num_text.hpp"
#include "ponplace/serialize.hpp"

namespace ponplace {

const char* to_string(Figure f) { return f == Figure::fig2 ? "fig2" : "fig3"; }

const char* to_string(SolverKind s) {
    switch (s) {
        case SolverKind::bnb: return "bnb";
        case SolverKind::bfd: return "bfd";
        case SolverKind::local: return "local";
    }
    return "unknown";
}

std::pair<double, double> req_band_ghz(double mean_ghz) {
    auto snap = [](double x) { return std::round(x * 1e9) / 1e9; };
    return {snap(mean_ghz - 0.2), snap(mean_ghz + 0.2)};
}

SolveResult run_solver(const Instance& inst, Objective objective, const RoutingMap& map,
                       SolverKind solver, const SolveBudget& budget, std::uint64_t seed) {
    switch (solver) {
        case SolverKind::bnb: {
            BnbOptions opts;
            opts.budget = budget;
            return solve_branch_and_bound(inst, objective, map, opts);
        }
        case SolverKind::bfd: return solve_bfd(inst, objective, map);
        case SolverKind::local: {
            SolveResult res = solve_bfd(inst, objective, map);
            if (res.status != SolveStatus::feasible) return res;
            Placement improved =
                local_search_improve(inst, objective, map, *res.placement, budget, seed);
            EvalResult ev = evaluate(inst, improved, map);
            res.placement = std::move(improved);
            res.breakdown = ev.power;
            return res;
        }
    }
    throw std::logic_error("unknown solver");
}

ExperimentConfig::ExperimentConfig() {
    for (int i = 3; i <= 25; i += 2) avg_req_sweep_ghz.push_back(i / 10.0);
}

namespace {

int worker_count(int configured, std::size_t tasks) {
    int n = configured;
    if (n <= 0) {
        if (const char* env = std::getenv("PONPLACE_THREADS")) n = std::atoi(env);
    }
    if (n <= 0) n = (int)std::thread::hardware_concurrency();
    if (n <= 0) n = 1;
    return (int)std::min<std::size_t>(n, std::max<std::size_t>(tasks, 1));
}

GenConfig row_gen_config(const ExperimentConfig& cfg, Figure fig, double point,
                         std::uint64_t seed) {
    GenConfig g;
    g.topology = cfg.topology;
    g.traffic_density = cfg.traffic_density;
    g.seed = seed;
    if (fig == Figure::fig2) {
        g.num_vms = (int)point;
        g.req_range_ghz = req_band_ghz(cfg.fig2_avg_req_ghz);
    } else {
        g.num_vms = cfg.fig3_num_vms;
        g.req_range_ghz = req_band_ghz(point);
    }
    return g;
}

bool row_usable(const ExperimentRow& r) {
    return r.result.placement.has_value() &&
           (r.result.status == SolveStatus::optimal ||
            r.result.status == SolveStatus::feasible);
}

std::string csv_cell(double v) { return num_text(v); }

void append_row_csv(std::string& csv, const ExperimentRow& r, bool stable) {
    const SolveResult& res = r.result;
    csv += to_string(r.figure);
    csv += ',';
    csv += num_text(r.point);
    csv += ',';
    csv += std::to_string(r.seed);
    csv += ',';
    csv += to_string(r.objective);
    csv += ',';
    csv += to_string(r.solver);
    csv += ',';
    csv += to_string(res.status);
    csv += ',';
    csv += std::to_string(r.n_vms);
    csv += ',';
    csv += num_text(r.avg_req_ghz);
    csv += ',';
    if (res.placement) {
        csv += csv_cell(res.breakdown.pc_w);
        csv += ',';
        csv += csv_cell(res.breakdown.pn_w);
        csv += ',';
        csv += csv_cell(res.breakdown.total_w);
        csv += ',';
        csv += std::to_string(res.breakdown.active_servers);
        csv += ',';
        csv += std::to_string(res.breakdown.active_onus);
        csv += ',';
    } else {
        csv += ",,,,,";
    }
    csv += csv_cell(res.lower_bound_w);
    csv += ',';
    if (res.placement && res.objective_w() > 0) {
        double gap = (res.objective_w() - res.lower_bound_w) / res.objective_w();
        csv += csv_cell(std::max(0.0, gap));
    }
    csv += ',';
    csv += csv_cell(stable ? 0.0 : res.runtime_ms);
    csv += '\n';
}

struct PointKey {
    Figure fig;
    double point;
    bool operator<(const PointKey& o) const {
        if (fig != o.fig) return (int)fig < (int)o.fig;
        return point < o.point;
    }
};

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
    if (cfg.seeds.empty()) throw std::invalid_argument("experiment needs seeds");
    if (cfg.objectives.empty()) throw std::invalid_argument("experiment needs objectives");
    if (cfg.figures.empty()) throw std::invalid_argument("experiment needs a sweep");

    ExperimentOutput out;
    for (Figure fig : cfg.figures) {
        const bool fig2 = fig == Figure::fig2;
        std::vector<double> points;
        if (fig2)
            for (int n : cfg.vm_counts) points.push_back((double)n);
        else
            points = cfg.avg_req_sweep_ghz;
        if (points.empty())
            throw std::invalid_argument(std::string("empty sweep for ") + to_string(fig));
        for (double point : points)
            for (std::uint64_t seed : cfg.seeds)
                for (Objective obj : cfg.objectives) {
                    ExperimentRow row;
                    row.figure = fig;
                    row.point = point;
                    row.seed = seed;
                    row.objective = obj;
                    row.solver = cfg.solver;
                    row.gen = row_gen_config(cfg, fig, point, seed);
                    row.n_vms = row.gen.num_vms;
                    row.avg_req_ghz =
                        fig2 ? cfg.fig2_avg_req_ghz
                             : (row.gen.req_range_ghz.first + row.gen.req_range_ghz.second) / 2;
                    out.rows.push_back(std::move(row));
                }
    }

    // Solve rows in parallel; each task writes only its own slot, so the
    // output order never depends on scheduling.
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= out.rows.size()) return;
            ExperimentRow& row = out.rows[i];
            Instance inst = generate_instance(row.gen);
            RoutingMap map = build_routing_map(inst.topology, inst.power);
            SolveBudget budget;
            budget.time_limit_s = cfg.time_limit_s;
            row.result = run_solver(inst, row.objective, map, cfg.solver, budget, row.seed);
        }
    };
    int n_workers = worker_count(cfg.threads, out.rows.size());
    if (n_workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_workers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    for (const auto& r : out.rows) {
        if (r.result.status == SolveStatus::timeout) out.timeout_rows++;
        if (r.result.status == SolveStatus::infeasible) out.infeasible_rows++;
    }

    out.results_csv =
        "figure,point,seed,objective,solver,status,n_vms,avg_req_ghz,pc_w,pn_w,total_w,"
        "active_servers,active_onus,lower_bound_w,gap,runtime_ms\n";
    for (const auto& r : out.rows) append_row_csv(out.results_csv, r, cfg.stable_output);

    // Means over usable rows (TIMEOUT and INFEASIBLE rows are excluded).
    struct Acc {
        int n = 0;
        double pc = 0, pn = 0, total = 0;
    };
    std::map<PointKey, std::map<Objective, Acc>> acc;
    std::map<PointKey, std::map<std::uint64_t, std::map<Objective, double>>> pn_by_seed;
    for (const auto& r : out.rows) {
        if (!row_usable(r)) continue;
        Acc& a = acc[{r.figure, r.point}][r.objective];
        a.n++;
        a.pc += r.result.breakdown.pc_w;
        a.pn += r.result.breakdown.pn_w;
        a.total += r.result.breakdown.total_w;
        pn_by_seed[{r.figure, r.point}][r.seed][r.objective] = r.result.breakdown.pn_w;
    }

    out.means_csv = "figure,point,objective,n,mean_pc_w,mean_pn_w,mean_total_w\n";
    for (Figure fig : cfg.figures) {
        for (const auto& [key, per_obj] : acc) {
            if (key.fig != fig) continue;
            for (Objective obj : cfg.objectives) {
                auto it = per_obj.find(obj);
                if (it == per_obj.end() || it->second.n == 0) continue;
                const Acc& a = it->second;
                out.means_csv += std::string(to_string(fig)) + "," + num_text(key.point) +
                                 "," + to_string(obj) + "," + std::to_string(a.n) + "," +
                                 num_text(a.pc / a.n) + "," + num_text(a.pn / a.n) + "," +
                                 num_text(a.total / a.n) + "\n";
            }
        }
    }

    const bool both = std::count(cfg.objectives.begin(), cfg.objectives.end(),
                                 Objective::pc_only) &&
                      std::count(cfg.objectives.begin(), cfg.objectives.end(),
                                 Objective::pc_plus_pn);
    for (Figure fig : cfg.figures) {
        FigureSummary sum;
        sum.figure = fig;
        if (both) {
            for (const auto& [key, per_obj] : acc) {
                if (key.fig != fig) continue;
                auto it1 = per_obj.find(Objective::pc_only);
                auto it2 = per_obj.find(Objective::pc_plus_pn);
                if (it1 == per_obj.end() || it2 == per_obj.end()) continue;
                if (it1->second.n == 0 || it1->second.pn <= 0) continue;
                double red = 1.0 - (it2->second.pn / it2->second.n) /
                                       (it1->second.pn / it1->second.n);
                if (!sum.has_reduction || red > sum.max_mean_reduction) {
                    sum.has_reduction = true;
                    sum.max_mean_reduction = red;
                    sum.max_mean_reduction_point = key.point;
                }
            }
            for (const auto& [key, per_seed] : pn_by_seed) {
                if (key.fig != fig) continue;
                for (const auto& [seed, per_obj] : per_seed) {
                    auto it1 = per_obj.find(Objective::pc_only);
                    auto it2 = per_obj.find(Objective::pc_plus_pn);
                    if (it1 == per_obj.end() || it2 == per_obj.end()) continue;
                    if (it1->second <= 0) continue;
                    double red = 1.0 - it2->second / it1->second;
                    if (!sum.has_single || red > sum.max_single_reduction) {
                        sum.has_single = true;
                        sum.max_single_reduction = red;
                        sum.max_single_reduction_point = key.point;
                        sum.max_single_reduction_seed = seed;
                    }
                }
            }
        }
        out.summaries.push_back(sum);
    }

    std::ostringstream st;
    st << "rows: " << out.rows.size() << " (timeout: " << out.timeout_rows
       << ", infeasible: " << out.infeasible_rows << ")\n";
    for (const auto& sum : out.summaries) {
        const char* axis = sum.figure == Figure::fig2 ? "n_vms" : "avg_req_ghz";
        if (sum.has_reduction)
            st << to_string(sum.figure) << " max mean Pn reduction (pc+pn vs pc): "
               << num_text(std::round(sum.max_mean_reduction * 1000) / 10) << "% at "
               << axis << " " << num_text(sum.max_mean_reduction_point) << "\n";
        if (sum.has_single)
            st << to_string(sum.figure) << " max single-run Pn reduction: "
               << num_text(std::round(sum.max_single_reduction * 1000) / 10) << "% at "
               << axis << " " << num_text(sum.max_single_reduction_point) << " seed "
               << sum.max_single_reduction_seed << "\n";
    }
    out.summary_text = st.str();

    // gnuplot script: one panel per (figure, metric), series = objectives,
    // mean lines from means.csv plus per-seed scatter from results.csv.
    std::ostringstream gp;
    gp << "set datafile separator ','\n"
       << "set term pngcairo size 900,600\n"
       << "set key left top\n";
    for (Figure fig : cfg.figures) {
        const char* fname = to_string(fig);
        const char* xlabel = fig == Figure::fig2 ? "number of VMs" : "mean VM requirement (GHz)";
        struct Panel {
            const char* metric;
            int mean_col;
            int row_col;
            const char* ylabel;
        } panels[] = {{"total", 7, 11, "total power (W)"},
                      {"pn", 6, 10, "networking power (W)"}};
        for (const auto& p : panels) {
            gp << "set output '" << fname << "_" << p.metric << ".png'\n"
               << "set xlabel '" << xlabel << "'\nset ylabel '" << p.ylabel << "'\n"
               << "plot \\\n";
            bool first = true;
            for (Objective obj : cfg.objectives) {
                if (!first) gp << ", \\\n";
                first = false;
                gp << "  'means.csv' using (strcol(1) eq '" << fname
                   << "' && strcol(3) eq '" << to_string(obj)
                   << "' ? column(2) : NaN):(column(" << p.mean_col
                   << ")) with linespoints lw 2 title '" << to_string(obj) << " (mean)'"
                   << ", \\\n  'results.csv' using (strcol(1) eq '" << fname
                   << "' && strcol(4) eq '" << to_string(obj)
                   << "' ? column(2) : NaN):(column(" << p.row_col
                   << ")) with points pt 7 ps 0.4 title '" << to_string(obj) << " (runs)'";
            }
            gp << "\n";
        }
    }
    out.plot_script = gp.str();

    return out;
}

void write_experiment(const ExperimentOutput& out, const ExperimentConfig& cfg,
                      const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(out_dir) / "results");
    write_file((fs::path(out_dir) / "results.csv").string(), out.results_csv);
    write_file((fs::path(out_dir) / "means.csv").string(), out.means_csv);
    write_file((fs::path(out_dir) / "plots.gp").string(), out.plot_script);
    write_file((fs::path(out_dir) / "summary.txt").string(), out.summary_text);
    for (const auto& r : out.rows) {
        std::string name = std::string(to_string(r.figure)) + "_p" + num_text(r.point) +
                           "_s" + std::to_string(r.seed) + "_" +
                           (r.objective == Objective::pc_only ? "pc" : "pcpn") + ".json";
        write_file((fs::path(out_dir) / "results" / name).string(),
                   result_to_json(r.result, cfg.stable_output));
    }
}

}  // namespace ponplace
