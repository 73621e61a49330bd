#pragma once

#include "drop/grid.hpp"

namespace drop {

/// Parameters of the discretized functional
///   F(u) = kappa_w * (epsilon * int |grad u|^2 + (1/epsilon) * W_N(u))
///          + repulsion_multiplier * V_{alpha,T}(u) + U_{beta,A,N}(u),
/// with W(x) = x(1-x). Working at unit mass with repulsion_multiplier
/// c_m = m^{(1+alpha)/n} is equivalent to working at physical mass m.
struct EnergyParams {
    double alpha = 1.0;                 // Riesz exponent, in (0, n)
    double beta = 1.0;                  // confining potential exponent, > 0
    double A = 0.0;                     // potential amplitude, >= 0
    double epsilon = 0.1;               // interface width, > 0
    double repulsion_multiplier = 1.0;  // c_m, >= 0 (1 at physical mass)
    double kappa_w = 4.0 / 3.14159265358979323846;  // perimeter calibration
    double mass = 1.0;                  // target for h^n * sum(u)

    void validate(int n) const;
};

/// Per-term decomposition. `dirichlet` and `double_well` carry their
/// epsilon weights, so total = kappa_w*(dirichlet + double_well)
/// + repulsion_multiplier*riesz + potential.
struct EnergyBreakdown {
    double dirichlet = 0.0;    // epsilon * int |grad u|^2
    double double_well = 0.0;  // (1/epsilon) * W_N(u)
    double riesz = 0.0;        // V_{alpha,T}(u)
    double potential = 0.0;    // U_{beta,A,N}(u)
    double total = 0.0;
};

/// Fourier weights of the torus Riesz energy
///   V_{alpha,T}(u) = (C(n,alpha)/T^n) sum_{k != 0} w_k |c_k(u)|^2,
/// w_k = |2 k pi / T|^{-alpha}, w_0 = 0,
/// C(n,alpha) = 2^alpha pi^{n/2} Gamma(alpha/2) / Gamma((n-alpha)/2).
struct SpectralKernel {
    GridSpec grid;
    double alpha = 1.0;
    std::vector<double> weights;  // storage order matching Spectrum
    double riesz_constant = 0.0;  // C(n, alpha)

    static SpectralKernel make(const GridSpec& grid, double alpha);
};

double riesz_coupling_constant(int n, double alpha);  // C(n, alpha)

double riesz_energy(const Field& field, const SpectralKernel& kernel);
Field riesz_gradient(const Field& field, const SpectralKernel& kernel);

/// Spectral Dirichlet energy int |grad u|^2 = (1/T^n) sum_k |2 k pi/T|^2 |c_k|^2
/// (exact on E_N) and its nodal gradient.
double dirichlet_energy(const Field& field);
Field dirichlet_gradient(const Field& field);

double double_well_energy(const Field& field);  // h^n sum u(1-u)
Field double_well_gradient(const Field& field);

double potential_energy(const Field& field, const EnergyParams& params);
Field potential_gradient(const Field& field, const EnergyParams& params);

EnergyBreakdown total_energy(const Field& field, const EnergyParams& params,
                             const SpectralKernel& kernel);
Field total_gradient(const Field& field, const EnergyParams& params,
                     const SpectralKernel& kernel);

/// Energy and gradient in one pass (single forward/backward transform pair);
/// same values as total_energy / total_gradient.
std::pair<EnergyBreakdown, Field> total_energy_and_gradient(const Field& field,
                                                            const EnergyParams& params,
                                                            const SpectralKernel& kernel);

}  // namespace drop
