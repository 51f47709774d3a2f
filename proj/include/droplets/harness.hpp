#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "droplets/anisotropy.hpp"
#include "droplets/flow.hpp"
#include "droplets/shapes.hpp"

namespace droplets {

// Matched deterministic/stochastic comparison under diffusive rescaling:
// the lattice runs to microscopic time t * L^2 and its droplet is compared
// against the flow domain D_t eroded/dilated by eta.
struct ExperimentPlan {
    ShapeSpec shape;
    AnisotropyKind profile_kind = AnisotropyKind::Exact;
    double omega = 0.0;    // 0: solver default
    double constant = 1.0; // Constant mode speed
    std::vector<int> Ls;
    int seeds = 8;
    uint64_t base_seed = 1;
    double eta = 0.05;
    std::vector<double> checkpoints; // diffusive times, sorted
    std::size_t flow_samples = 1024;
    double whp_threshold = 7.0 / 8.0;
    int window_margin = 8;

    void validate() const; // throws std::invalid_argument
    AnisotropyProfile profile() const;
    std::string canonical() const; // deterministic key=value dump
};

struct CheckpointRow {
    int L = 0;
    int seed_index = 0;
    double t = 0.0;
    double hausdorff = -1.0; // -1 when the droplet is already empty
    bool inner_ok = false;   // eroded D_t inside the droplet
    bool outer_ok = false;   // droplet inside dilated D_t
    bool droplet_empty = false;
    double death_time_diffusive = 0.0; // per (L, seed), repeated on each row
};

struct LAggregate {
    int L = 0;
    double seed_pass_fraction = 0.0; // seeds whose every checkpoint passed
    double row_pass_fraction = 0.0;
    double mean_hausdorff = 0.0; // over nonempty-droplet rows
    double mean_death_time = 0.0;
    double death_time_error = 0.0; // |mean death - T_observed|
};

struct ComparisonReport {
    ExperimentPlan plan;
    double t_expected = 0.0; // flow T_observed
    std::vector<CheckpointRow> rows;
    std::vector<LAggregate> aggregates; // sorted by L
    std::string hash;                   // of plan.canonical()

    std::string to_csv() const;
    std::string to_json() const; // aggregates + config echo
};

// flow computed once per shape, then replica fan-out across (L, seed)
ComparisonReport run_experiment(const ExperimentPlan& plan);

// recompute aggregates from raw rows (the `report` CLI subcommand)
std::vector<LAggregate> aggregate_rows(const std::vector<CheckpointRow>& rows,
                                       double t_expected);
std::vector<CheckpointRow> rows_from_csv(const std::string& csv);

struct ConvergenceRow {
    int L = 0;
    double mean_max_hausdorff = 0.0; // mean over seeds of max over checkpoints
    double death_time_error = 0.0;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows; // sorted by L
    bool hausdorff_monotone = false;  // distances trend down in L
};

// needs at least two L values
ConvergenceTable convergence_table(const ComparisonReport& report);

} // namespace droplets
