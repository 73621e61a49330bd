#include "drop/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "drop/pfld.hpp"

namespace drop {

namespace {

double pow_int(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

double volume(const Field& u) {
    double s = 0.0;
    for (double v : u.values) s += v;
    return s * pow_int(u.grid.h(), u.grid.n);
}

double clipped_volume(const Field& v, double tau, double hn) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        if (!v.masked_in(i)) continue;
        s += std::clamp(v.values[i] - tau, 0.0, 1.0);
    }
    return s * hn;
}

}  // namespace

void OptimizerConfig::validate() const {
    if (max_iters < 1) throw structural_error("OptimizerConfig: max_iters must be >= 1");
    if (!(grad_tol > 0.0) || !(vol_tol > 0.0) || !(step0 > 0.0))
        throw structural_error("OptimizerConfig: tolerances and step0 must be positive");
    if (!(backtrack_factor > 0.0) || !(backtrack_factor < 1.0))
        throw structural_error("OptimizerConfig: backtrack_factor must lie in (0,1)");
    if (!(armijo_c > 0.0) || !(armijo_c < 1.0))
        throw structural_error("OptimizerConfig: armijo_c must lie in (0,1)");
    if (restarts < 1) throw structural_error("OptimizerConfig: restarts must be >= 1");
}

infeasible_mass_error::infeasible_mass_error(double m, double lo, double hi)
    : std::runtime_error("infeasible mass " + std::to_string(m) + ": attainable volume range is [" +
                         std::to_string(lo) + ", " + std::to_string(hi) + "]"),
      attainable_min(lo),
      attainable_max(hi) {}

Field project_feasible(const Field& v, double m, double vol_tol) {
    v.validate();
    const double hn = pow_int(v.grid.h(), v.grid.n);
    const std::size_t free_nodes = v.unmasked_count();
    const double max_vol = hn * static_cast<double>(free_nodes);
    if (m < 0.0 || m > max_vol) throw infeasible_mass_error(m, 0.0, max_vol);

    Field u = v;
    if (m == 0.0 || free_nodes == 0) {
        std::fill(u.values.begin(), u.values.end(), 0.0);
        return u;
    }

    double lo = v.values[0], hi = v.values[0];
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        if (!v.masked_in(i)) continue;
        lo = std::min(lo, v.values[i]);
        hi = std::max(hi, v.values[i]);
    }
    lo -= 1.0;  // clipped volume is max_vol at lo and 0 at hi

    // Bisection on the non-increasing volume g(tau); keep the best bracket.
    double tau = 0.0;
    for (int it = 0; it < 200; ++it) {
        tau = 0.5 * (lo + hi);
        const double g = clipped_volume(v, tau, hn);
        if (std::abs(g - m) <= vol_tol * m) break;
        if (g > m)
            lo = tau;
        else
            hi = tau;
        if (hi - lo < 1e-15 * (1.0 + std::abs(tau))) break;
    }
    for (std::size_t i = 0; i < u.values.size(); ++i)
        u.values[i] = u.masked_in(i) ? std::clamp(v.values[i] - tau, 0.0, 1.0) : 0.0;
    return u;
}

Field initialize(const GridSpec& grid, const std::vector<std::uint8_t>& mask,
                 const EnergyParams& params, const OptimizerConfig& config) {
    grid.validate();
    params.validate(grid.n);
    Field f;
    f.grid = grid;
    f.mask = mask;
    f.values.assign(grid.num_nodes(), 0.0);

    switch (config.init_mode) {
        case InitMode::uniform_noise: {
            const double hn = pow_int(grid.h(), grid.n);
            const std::size_t free_nodes = f.unmasked_count();
            if (free_nodes == 0) throw infeasible_mass_error(params.mass, 0.0, 0.0);
            const double base = params.mass / (hn * static_cast<double>(free_nodes));
            SplitMix64 rng(config.seed);
            for (std::size_t i = 0; i < f.values.size(); ++i) {
                const double noise = 0.05 * (2.0 * rng.next_unit() - 1.0);
                f.values[i] = f.masked_in(i) ? base + noise : 0.0;
            }
            break;
        }
        case InitMode::ball_seed: {
            // smoothed indicator of the volume-m ball, tanh profile
            const int n = grid.n;
            const double unit_ball = std::pow(3.14159265358979323846, 0.5 * n) /
                                     std::tgamma(0.5 * n + 1.0);
            const double r = std::pow(params.mass / unit_ball, 1.0 / n);
            const double width = std::max(params.epsilon, 2.0 * grid.h());
            std::vector<double> c(grid.n, 0.0);
            for (std::size_t d = 0; d < config.ball_center.size() && d < c.size(); ++d)
                c[d] = config.ball_center[d];
            fill_nodes(grid, f.values, [&](const std::vector<double>& x) {
                double d2 = 0.0;
                for (int d = 0; d < n; ++d) d2 += (x[d] - c[d]) * (x[d] - c[d]);
                return 0.5 * (1.0 - std::tanh((std::sqrt(d2) - r) / width));
            });
            for (std::size_t i = 0; i < f.values.size(); ++i)
                if (!f.masked_in(i)) f.values[i] = 0.0;
            break;
        }
        case InitMode::file: {
            Field loaded = read_pfld(config.init_file);
            if (!(loaded.grid == grid))
                throw structural_error("init file grid does not match run grid: " + config.init_file);
            f.values = std::move(loaded.values);
            for (std::size_t i = 0; i < f.values.size(); ++i)
                if (!f.masked_in(i)) f.values[i] = 0.0;
            break;
        }
    }
    return project_feasible(f, params.mass, config.vol_tol);
}

OptimizeResult optimize(const Field& initial, const EnergyParams& params,
                        const OptimizerConfig& config) {
    config.validate();
    params.validate(initial.grid.n);
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed_ms = [&]() {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    };

    SpectralKernel kernel = SpectralKernel::make(initial.grid, params.alpha);
    Field u = project_feasible(initial, params.mass, config.vol_tol);

    auto eval = [&](const Field& f) { return total_energy_and_gradient(f, params, kernel); };
    auto check_finite = [&](const EnergyBreakdown& bk, const Field& g, int iter) {
        if (!std::isfinite(bk.total))
            throw numerical_error("non-finite energy at iterate " + std::to_string(iter));
        for (double v : g.values)
            if (!std::isfinite(v))
                throw numerical_error("non-finite gradient at iterate " + std::to_string(iter));
    };

    auto [bk, grad] = eval(u);
    check_finite(bk, grad, 0);

    OptimizeResult out;
    out.stop_reason = "max_iters";
    double step = config.step0;

    auto projected_grad_norm = [&](const Field& f, const Field& g) {
        Field trial = f;
        for (std::size_t i = 0; i < trial.values.size(); ++i) trial.values[i] -= g.values[i];
        Field p = project_feasible(trial, params.mass, config.vol_tol);
        double nrm = 0.0;
        for (std::size_t i = 0; i < p.values.size(); ++i)
            nrm = std::max(nrm, std::abs(p.values[i] - f.values[i]));
        return nrm;
    };

    for (int iter = 1; iter <= config.max_iters; ++iter) {
        double s = step;
        bool accepted = false;
        Field u_new;
        EnergyBreakdown bk_new;
        Field grad_new;
        while (true) {
            Field trial = u;
            for (std::size_t i = 0; i < trial.values.size(); ++i)
                trial.values[i] -= s * grad.values[i];
            u_new = project_feasible(trial, params.mass, config.vol_tol);
            auto [bkc, gc] = eval(u_new);
            check_finite(bkc, gc, iter);
            double decrease = 0.0;
            for (std::size_t i = 0; i < u.values.size(); ++i)
                decrease += grad.values[i] * (u.values[i] - u_new.values[i]);
            if (bkc.total <= bk.total - config.armijo_c * decrease) {
                bk_new = bkc;
                grad_new = std::move(gc);
                accepted = true;
                break;
            }
            s *= config.backtrack_factor;
            if (s < 1e-18 * config.step0) break;
        }
        if (!accepted) {
            out.stop_reason = "step_collapse";
            break;
        }

        u = std::move(u_new);
        bk = bk_new;
        grad = std::move(grad_new);
        step = std::min(config.step0, 2.0 * s);

        TraceRecord rec;
        rec.iter = iter;
        rec.energy = bk;
        rec.volume_error = std::abs(volume(u) - params.mass) / params.mass;
        rec.step = s;
        rec.projected_grad_norm = projected_grad_norm(u, grad);
        rec.wall_ms = elapsed_ms();
        out.trace.push_back(rec);

        if (config.checkpoint_every > 0 && !config.checkpoint_prefix.empty() &&
            iter % config.checkpoint_every == 0)
            write_pfld(u, config.checkpoint_prefix + std::to_string(iter) + ".pfld");

        if (rec.projected_grad_norm <= config.grad_tol) {
            out.stop_reason = "stationary";
            break;
        }
    }

    out.field = std::move(u);
    return out;
}

MultistartResult optimize_multistart(const GridSpec& grid, const std::vector<std::uint8_t>& mask,
                                     const EnergyParams& params, const OptimizerConfig& config) {
    config.validate();
    MultistartResult out;
    for (int r = 0; r < config.restarts; ++r) {
        OptimizerConfig c = config;
        c.seed = config.seed + static_cast<std::uint64_t>(r);
        if (r > 0) c.init_mode = InitMode::uniform_noise;  // restarts vary the noise seed
        Field start = initialize(grid, mask, params, c);
        out.runs.push_back(optimize(start, params, c));
    }
    for (std::size_t i = 1; i < out.runs.size(); ++i) {
        if (out.runs[i].trace.empty()) continue;
        const double ei = out.runs[i].trace.back().energy.total;
        const double eb = out.runs[out.best].trace.empty()
                              ? std::numeric_limits<double>::infinity()
                              : out.runs[out.best].trace.back().energy.total;
        if (ei < eb) out.best = i;
    }
    return out;
}

}  // namespace drop
