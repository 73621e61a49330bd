#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace drop {

/// Controls for the regularized Riesz quadrature of Appendix-style integrals
/// V_{alpha,eps}(B_R) = int_{B_R x B_R} dx dy / (|x-y|^{n-alpha} + eps).
struct QuadratureSpec {
    double epsilon = 1e-6;   // regularization, > 0
    double abs_tol = 1e-8;   // absolute quadrature tolerance
    std::size_t max_evals = 200'000'000;  // integrand evaluation budget
};

struct unsupported_dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct quadrature_budget_error : std::runtime_error {
    double value;           // best value computed
    double error_estimate;  // achieved error estimate
    quadrature_budget_error(double v, double e)
        : std::runtime_error("quadrature evaluation budget exhausted; achieved error estimate " +
                             std::to_string(e)),
          value(v),
          error_estimate(e) {}
};

/// Regularized Riesz self-energy of the disk of the given radius (n = 2 only),
/// reduced to a 3D polar integral by rotational symmetry.
double ball_riesz_regularized(int n, double alpha, double radius, const QuadratureSpec& spec);

/// Closed-form bound on V_alpha(B[1]) - V_{alpha,eps}(B[1]) for n = 2:
///   (2 pi/alpha) (2/(2-alpha)) ((2-alpha)/alpha)^{alpha/2} (eps/pi^{alpha/2})^{alpha/2};
/// equals 4 pi^{3/4} sqrt(eps) at alpha = 1.
double regularization_error_bound(int n, double alpha, double epsilon);

/// Richardson-extrapolated V_alpha(B_radius) assuming the proven
/// O(eps^{alpha/2}) leading order, with the conservative bound attached.
struct BallRieszOracle {
    double value = 0.0;  // extrapolated V_alpha(B_radius)
    double bound = 0.0;  // regularization bound at the smallest eps used
    std::vector<std::pair<double, double>> samples;  // (eps, V_eps)
};
BallRieszOracle ball_riesz_extrapolated(int n, double alpha, double radius,
                                        double abs_tol = 1e-7);

/// f(m) = P(B[m]) + V(B[m]) = P(B) lambda^{n-1} + V_unit lambda^{n+alpha},
/// lambda = (m/|B|)^{1/n}; V_unit is the unit-radius ball energy.
double ball_energy_f(double m, int n, double alpha, double V_unit);

/// Mass at which k far-apart equal balls tie with k+1 of them.
double critical_mass(int k, int n, double alpha, double V_unit);

double cm_from_mass(double m, int n, double alpha);  // c_m = m^{(1+alpha)/n}
double mass_from_cm(double cm, int n, double alpha);

double unit_ball_volume(int n);     // |B| = pi^{n/2} / Gamma(n/2 + 1)
double unit_ball_perimeter(int n);  // P(B) = n |B|

}  // namespace drop
