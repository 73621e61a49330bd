#include "drop/energy.hpp"

#include <algorithm>
#include <cmath>

namespace drop {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
    if (!(a == b)) throw structural_error(std::string(what) + ": grid mismatch");
}

double pow_int(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

// |k|^2 over storage order, k in {-N/2+1,...,N/2}^n.
void fill_freq_sq(const GridSpec& g, std::vector<double>& out) {
    const std::size_t total = g.num_nodes();
    out.resize(total);
    std::vector<int> slot(g.n, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        double k2 = 0.0;
        for (int d = 0; d < g.n; ++d) {
            double k = axis_frequency(g, slot[d]);
            k2 += k * k;
        }
        out[idx] = k2;
        for (int d = g.n - 1; d >= 0; --d) {
            if (++slot[d] < g.N) break;
            slot[d] = 0;
        }
    }
}

// Nodal |x_j|^beta in storage order.
void fill_radius_pow(const GridSpec& g, double beta, std::vector<double>& out) {
    const std::size_t total = g.num_nodes();
    out.resize(total);
    std::vector<int> slot(g.n, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        double r2 = 0.0;
        for (int d = 0; d < g.n; ++d) {
            double x = axis_coordinate(g, slot[d]);
            r2 += x * x;
        }
        out[idx] = (r2 == 0.0) ? 0.0 : std::pow(r2, 0.5 * beta);
        for (int d = g.n - 1; d >= 0; --d) {
            if (++slot[d] < g.N) break;
            slot[d] = 0;
        }
    }
}

// Gradient of a pure spectral quadratic form (1/T^n) sum_k m_k |c_k|^2
// w.r.t. nodal values: 2 h^n * synthesize(m .* c). The caller folds any
// leading constants into m.
Field spectral_quadratic_gradient(const Spectrum& c, const std::vector<double>& multiplier) {
    Spectrum d;
    d.grid = c.grid;
    d.coeffs.resize(c.coeffs.size());
    for (std::size_t i = 0; i < c.coeffs.size(); ++i) d.coeffs[i] = multiplier[i] * c.coeffs[i];
    Field s = synthesize(d);
    double hn = pow_int(c.grid.h(), c.grid.n);
    for (auto& v : s.values) v *= 2.0 * hn;
    return s;
}

}  // namespace

void EnergyParams::validate(int n) const {
    if (!(alpha > 0.0) || !(alpha < n))
        throw structural_error("EnergyParams: alpha must lie in (0, n)");
    if (!(beta > 0.0)) throw structural_error("EnergyParams: beta must be positive");
    if (A < 0.0) throw structural_error("EnergyParams: A must be >= 0");
    if (!(epsilon > 0.0)) throw structural_error("EnergyParams: epsilon must be positive");
    if (repulsion_multiplier < 0.0)
        throw structural_error("EnergyParams: repulsion multiplier must be >= 0");
    if (!(kappa_w > 0.0)) throw structural_error("EnergyParams: kappa_w must be positive");
    if (!(mass > 0.0)) throw structural_error("EnergyParams: mass must be positive");
}

double riesz_coupling_constant(int n, double alpha) {
    return std::pow(2.0, alpha) * std::pow(kPi, 0.5 * n) * std::tgamma(0.5 * alpha) /
           std::tgamma(0.5 * (n - alpha));
}

SpectralKernel SpectralKernel::make(const GridSpec& grid, double alpha) {
    grid.validate();
    if (!(alpha > 0.0) || !(alpha < grid.n))
        throw structural_error("SpectralKernel: alpha must lie in (0, n)");
    SpectralKernel k;
    k.grid = grid;
    k.alpha = alpha;
    k.riesz_constant = riesz_coupling_constant(grid.n, alpha);
    fill_freq_sq(grid, k.weights);
    for (auto& w : k.weights) {
        if (w == 0.0) continue;  // k = 0 excluded from the lattice sum
        w = std::pow(2.0 * kPi * std::sqrt(w) / grid.T, -alpha);
    }
    return k;
}

double riesz_energy(const Field& field, const SpectralKernel& kernel) {
    require_same_grid(field.grid, kernel.grid, "riesz_energy");
    Spectrum c = analyze(field);
    double s = 0.0;
    for (std::size_t i = 0; i < c.coeffs.size(); ++i) s += kernel.weights[i] * std::norm(c.coeffs[i]);
    double Tn = pow_int(field.grid.T, field.grid.n);
    return kernel.riesz_constant / Tn * s;
}

Field riesz_gradient(const Field& field, const SpectralKernel& kernel) {
    require_same_grid(field.grid, kernel.grid, "riesz_gradient");
    Spectrum c = analyze(field);
    std::vector<double> m(kernel.weights);
    for (auto& w : m) w *= kernel.riesz_constant;
    return spectral_quadratic_gradient(c, m);
}

double dirichlet_energy(const Field& field) {
    Spectrum c = analyze(field);
    std::vector<double> k2;
    fill_freq_sq(field.grid, k2);
    const double f = 2.0 * kPi / field.grid.T;
    double s = 0.0;
    for (std::size_t i = 0; i < c.coeffs.size(); ++i) s += f * f * k2[i] * std::norm(c.coeffs[i]);
    return s / pow_int(field.grid.T, field.grid.n);
}

Field dirichlet_gradient(const Field& field) {
    Spectrum c = analyze(field);
    std::vector<double> k2;
    fill_freq_sq(field.grid, k2);
    const double f = 2.0 * kPi / field.grid.T;
    for (auto& v : k2) v *= f * f;
    return spectral_quadratic_gradient(c, k2);
}

double double_well_energy(const Field& field) {
    double hn = pow_int(field.grid.h(), field.grid.n);
    double s = 0.0;
    for (double u : field.values) s += u * (1.0 - u);
    return hn * s;
}

Field double_well_gradient(const Field& field) {
    double hn = pow_int(field.grid.h(), field.grid.n);
    Field g = field;
    for (auto& v : g.values) v = hn * (1.0 - 2.0 * v);
    return g;
}

double potential_energy(const Field& field, const EnergyParams& params) {
    if (params.A == 0.0) return 0.0;
    std::vector<double> rb;
    fill_radius_pow(field.grid, params.beta, rb);
    double s = 0.0;
    for (std::size_t i = 0; i < rb.size(); ++i) s += field.values[i] * rb[i];
    return params.A * pow_int(field.grid.h(), field.grid.n) * s;
}

Field potential_gradient(const Field& field, const EnergyParams& params) {
    Field g = field;
    if (params.A == 0.0) {
        std::fill(g.values.begin(), g.values.end(), 0.0);
        return g;
    }
    std::vector<double> rb;
    fill_radius_pow(field.grid, params.beta, rb);
    const double c = params.A * pow_int(field.grid.h(), field.grid.n);
    for (std::size_t i = 0; i < rb.size(); ++i) g.values[i] = c * rb[i];
    return g;
}

std::pair<EnergyBreakdown, Field> total_energy_and_gradient(const Field& field,
                                                            const EnergyParams& params,
                                                            const SpectralKernel& kernel) {
    require_same_grid(field.grid, kernel.grid, "total_energy");
    params.validate(field.grid.n);
    const GridSpec& g = field.grid;
    const double hn = pow_int(g.h(), g.n);
    const double Tn = pow_int(g.T, g.n);

    Spectrum c = analyze(field);
    std::vector<double> k2;
    fill_freq_sq(g, k2);
    const double lapf = (2.0 * kPi / g.T) * (2.0 * kPi / g.T);

    double dir_raw = 0.0, riesz_raw = 0.0;
    std::vector<double> combined(c.coeffs.size());
    for (std::size_t i = 0; i < c.coeffs.size(); ++i) {
        const double p = std::norm(c.coeffs[i]);
        const double lam = lapf * k2[i];
        dir_raw += lam * p;
        riesz_raw += kernel.weights[i] * p;
        combined[i] = params.kappa_w * params.epsilon * lam +
                      params.repulsion_multiplier * kernel.riesz_constant * kernel.weights[i];
    }
    dir_raw /= Tn;
    riesz_raw *= kernel.riesz_constant / Tn;

    double well = 0.0;
    for (double u : field.values) well += u * (1.0 - u);
    well *= hn;

    std::vector<double> rb;
    double pot = 0.0;
    if (params.A > 0.0) {
        fill_radius_pow(g, params.beta, rb);
        for (std::size_t i = 0; i < rb.size(); ++i) pot += field.values[i] * rb[i];
        pot *= params.A * hn;
    }

    EnergyBreakdown bk;
    bk.dirichlet = params.epsilon * dir_raw;
    bk.double_well = well / params.epsilon;
    bk.riesz = riesz_raw;
    bk.potential = pot;
    bk.total = params.kappa_w * (bk.dirichlet + bk.double_well) +
               params.repulsion_multiplier * bk.riesz + bk.potential;

    Field grad = spectral_quadratic_gradient(c, combined);
    const double wellc = params.kappa_w / params.epsilon * hn;
    for (std::size_t i = 0; i < grad.values.size(); ++i) {
        grad.values[i] += wellc * (1.0 - 2.0 * field.values[i]);
        if (!rb.empty()) grad.values[i] += params.A * hn * rb[i];
    }
    grad.mask = field.mask;
    return {bk, grad};
}

EnergyBreakdown total_energy(const Field& field, const EnergyParams& params,
                             const SpectralKernel& kernel) {
    require_same_grid(field.grid, kernel.grid, "total_energy");
    params.validate(field.grid.n);
    EnergyBreakdown bk;
    bk.dirichlet = params.epsilon * dirichlet_energy(field);
    bk.double_well = double_well_energy(field) / params.epsilon;
    bk.riesz = riesz_energy(field, kernel);
    bk.potential = potential_energy(field, params);
    bk.total = params.kappa_w * (bk.dirichlet + bk.double_well) +
               params.repulsion_multiplier * bk.riesz + bk.potential;
    return bk;
}

Field total_gradient(const Field& field, const EnergyParams& params,
                     const SpectralKernel& kernel) {
    return total_energy_and_gradient(field, params, kernel).second;
}

}  // namespace drop
