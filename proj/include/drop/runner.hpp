#pragma once

#include <string>
#include <vector>

#include "drop/ball_oracle.hpp"
#include "drop/run_config.hpp"
#include "drop/shape_metrics.hpp"

namespace drop {

/// One minimization run: artifacts (trace.csv, final.pfld, final.pgm,
/// shape_report.csv, config.resolved.txt, checkpoints) land in out_dir.
struct RunSummary {
    double final_energy = 0.0;
    EnergyBreakdown breakdown;
    ShapeReport shape;
    std::string out_dir;
    std::size_t best_run = 0;
    std::string stop_reason;
};
RunSummary run_experiment(RunConfig config, const std::string& out_dir);

/// Relative spectral-vs-oracle error table for the disk indicator.
struct TTableRow {
    double T;
    int N;
    double relative_error;  // signed: (V_T - V_oracle)/V_oracle
};
std::vector<TTableRow> t_table(const RunConfig& config, const std::string& out_dir);

/// c_m (or mass) sweep; per-point artifacts in out_dir/point_<i>.
struct SweepPoint {
    double value = 0.0;  // cm or mass
    int component_count = 0;
    double energy = 0.0;
    ShapeReport shape;
};
struct SweepResult {
    std::vector<SweepPoint> points;
    bool swept_mass = false;
    int transition_index = -1;  // first i with count[i] != count[i+1]
};
SweepResult sweep(RunConfig config, const std::string& out_dir);

/// Stability atlas artifacts: atlas.csv, report.txt, optional mstar_vs_A.csv.
StabilityReport stability_run(const RunConfig& config, const std::string& out_dir);

/// Ball-oracle tables: ball_energy.csv and critical_mass.csv (k, m_k, c_m).
void ball_energy_table(RunConfig config, const std::string& out_dir);
void critical_mass_table(RunConfig config, const std::string& out_dir);

/// Resolves the output directory (explicit, else $DROPSIM_OUTPUT_ROOT or
/// ./dropsim_out, plus the subcommand name) and creates it.
std::string prepare_out_dir(const RunConfig& config, const std::string& subcommand);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace drop
