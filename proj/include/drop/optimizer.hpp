#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "drop/energy.hpp"
#include "drop/grid.hpp"

namespace drop {

enum class InitMode { uniform_noise, ball_seed, file };

struct OptimizerConfig {
    int max_iters = 3000;
    double grad_tol = 1e-7;       // infinity norm of the projected gradient step
    double vol_tol = 1e-10;       // relative volume-constraint tolerance
    double step0 = 1.0;
    double backtrack_factor = 0.5;
    double armijo_c = 1e-4;
    std::uint64_t seed = 0;
    InitMode init_mode = InitMode::uniform_noise;
    std::vector<double> ball_center;  // ball_seed mode; empty = origin
    std::string init_file;            // file mode: PFLD path
    int restarts = 1;                 // multi-start count (distinct seeds)
    int checkpoint_every = 0;         // 0 disables periodic PFLD checkpoints
    std::string checkpoint_prefix;

    void validate() const;
};

struct TraceRecord {
    int iter = 0;
    EnergyBreakdown energy;
    double volume_error = 0.0;  // |h^n sum u - m| / m
    double step = 0.0;
    double projected_grad_norm = 0.0;
    long wall_ms = 0;
};

struct OptimizeResult {
    Field field;
    std::vector<TraceRecord> trace;
    std::string stop_reason;  // "stationary" | "max_iters" | "step_collapse"
};

struct infeasible_mass_error : std::runtime_error {
    double attainable_min, attainable_max;
    infeasible_mass_error(double m, double lo, double hi);
};

struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Euclidean projection of v onto {0 <= u <= 1 on unmasked nodes, u = 0 on
/// masked nodes, h^n sum u = m}: u_j = clip(v_j - tau, 0, 1) with tau found
/// by bisection on the (non-increasing, piecewise linear) volume.
Field project_feasible(const Field& v, double m, double vol_tol = 1e-10);

/// Feasible starting field per config.init_mode.
Field initialize(const GridSpec& grid, const std::vector<std::uint8_t>& mask,
                 const EnergyParams& params, const OptimizerConfig& config);

/// Projected gradient descent with Armijo backtracking on total_energy.
OptimizeResult optimize(const Field& initial, const EnergyParams& params,
                        const OptimizerConfig& config);

/// Runs config.restarts descents from distinct noise seeds (or the configured
/// init mode for the first start) and returns all results; `best` indexes the
/// lowest final energy.
struct MultistartResult {
    std::vector<OptimizeResult> runs;
    std::size_t best = 0;
};
MultistartResult optimize_multistart(const GridSpec& grid, const std::vector<std::uint8_t>& mask,
                                     const EnergyParams& params, const OptimizerConfig& config);

/// Deterministic uniform double in [0, 1) from a splitmix64 stream;
/// used instead of std::uniform_real_distribution for cross-platform
/// reproducibility of seeds.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9E3779B97f4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
};

}  // namespace drop
