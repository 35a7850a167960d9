#ifndef PONPLACE_EXPERIMENT_HPP
#define PONPLACE_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ponplace/solve.hpp"
#include "ponplace/types.hpp"

namespace ponplace {

enum class Figure { fig2, fig3 };
enum class SolverKind { bnb, bfd, local };

const char* to_string(Figure f);
const char* to_string(SolverKind s);

/// Requirement band with the configured mean: [mean-0.2, mean+0.2] GHz,
/// matching the default 0.1-0.5 band at mean 0.3.
std::pair<double, double> req_band_ghz(double mean_ghz);

/// One solver invocation; `local` is BFD followed by local-search improvement.
SolveResult run_solver(const Instance& inst, Objective objective, const RoutingMap& map,
                       SolverKind solver, const SolveBudget& budget,
                       std::uint64_t seed = 0);

struct ExperimentConfig {
    std::vector<Figure> figures{Figure::fig2, Figure::fig3};
    std::vector<int> vm_counts{5, 10, 15, 20};      // fig2 sweep
    double fig2_avg_req_ghz = 0.3;
    std::vector<double> avg_req_sweep_ghz;          // fig3 sweep; default 0.3..2.5 step 0.2
    int fig3_num_vms = 10;
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::vector<Objective> objectives{Objective::pc_only, Objective::pc_plus_pn};
    SolverKind solver = SolverKind::bnb;
    double time_limit_s = 60.0;
    double traffic_density = 0.2;
    Topology topology;
    bool stable_output = false;  // zero runtime fields in emitted files
    int threads = 0;             // 0: PONPLACE_THREADS or hardware

    ExperimentConfig();
};

struct ExperimentRow {
    Figure figure = Figure::fig2;
    double point = 0;  // vm count (fig2) or mean requirement (fig3)
    std::uint64_t seed = 0;
    Objective objective = Objective::pc_only;
    SolverKind solver = SolverKind::bnb;
    int n_vms = 0;
    double avg_req_ghz = 0;
    GenConfig gen;  // regenerates the row's instance
    SolveResult result;
};

struct FigureSummary {
    Figure figure = Figure::fig2;
    bool has_reduction = false;
    double max_mean_reduction = 0;  // over points: 1 - meanPn(pc+pn)/meanPn(pc)
    double max_mean_reduction_point = 0;
    bool has_single = false;
    double max_single_reduction = 0;  // over (point, seed) pairs with Pn(pc) > 0
    double max_single_reduction_point = 0;
    std::uint64_t max_single_reduction_seed = 0;
};

struct ExperimentOutput {
    std::vector<ExperimentRow> rows;
    std::vector<FigureSummary> summaries;
    int timeout_rows = 0;
    int infeasible_rows = 0;
    std::string results_csv;
    std::string means_csv;
    std::string plot_script;
    std::string summary_text;
};

/// Runs the configured sweeps. Tasks may execute in parallel; rows and all
/// emitted text are in deterministic sweep order regardless of scheduling.
ExperimentOutput run_experiment(const ExperimentConfig& cfg);

/// Writes results.csv, means.csv, plots.gp, summary.txt and per-row result
/// documents under <out_dir>/results/.
void write_experiment(const ExperimentOutput& out, const ExperimentConfig& cfg,
                      const std::string& out_dir);

}  // namespace ponplace

#endif
