#include "drop/ball_oracle.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>

namespace drop {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct WorkspaceDeleter {
    void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};
using Workspace = std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter>;

Workspace make_workspace(std::size_t limit) {
    return Workspace(gsl_integration_workspace_alloc(limit));
}

void disable_gsl_abort() {
    static const auto once = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)once;
}

struct QuadContext {
    double alpha, eps, R;
    double r1 = 0.0, r2 = 0.0;
    std::size_t evals = 0;
    std::size_t max_evals = 0;
    bool budget_exceeded = false;
    Workspace ws_theta = make_workspace(4096);
    Workspace ws_r2 = make_workspace(4096);
    Workspace ws_r1 = make_workspace(4096);
};

double theta_integrand(double theta, void* p) {
    auto* c = static_cast<QuadContext*>(p);
    ++c->evals;
    const double d2 = c->r1 * c->r1 + c->r2 * c->r2 - 2.0 * c->r1 * c->r2 * std::cos(theta);
    const double d = std::sqrt(std::max(d2, 0.0));
    return 1.0 / (std::pow(d, 2.0 - c->alpha) + c->eps);
}

double r2_integrand(double r2, void* p) {
    auto* c = static_cast<QuadContext*>(p);
    if (c->evals > c->max_evals) c->budget_exceeded = true;
    c->r2 = r2;
    gsl_function f{&theta_integrand, p};
    double result = 0.0, abserr = 0.0;
    // integrand is symmetric about theta = pi; integrate the half range
    gsl_integration_qag(&f, 0.0, kPi, 0.0, 1e-10, 4096, GSL_INTEG_GAUSS61,
                        c->ws_theta.get(), &result, &abserr);
    return 2.0 * r2 * result;
}

double r1_integrand(double r1, void* p) {
    auto* c = static_cast<QuadContext*>(p);
    c->r1 = r1;
    gsl_function f{&r2_integrand, p};
    double result = 0.0, abserr = 0.0;
    gsl_integration_qag(&f, 0.0, c->R, 0.0, 1e-9, 4096, GSL_INTEG_GAUSS61,
                        c->ws_r2.get(), &result, &abserr);
    return r1 * result;
}

}  // namespace

double ball_riesz_regularized(int n, double alpha, double radius, const QuadratureSpec& spec) {
    if (n != 2)
        throw unsupported_dimension_error(
            "ball_riesz_regularized: the polar reduction is n = 2 only (got n = " +
            std::to_string(n) + ")");
    if (!(alpha > 0.0) || !(alpha < 2.0))
        throw std::invalid_argument("ball_riesz_regularized: alpha must lie in (0, 2)");
    if (!(spec.epsilon > 0.0))
        throw std::invalid_argument("ball_riesz_regularized: epsilon must be positive");
    if (radius < 0.0) throw std::invalid_argument("ball_riesz_regularized: negative radius");
    if (radius == 0.0) return 0.0;

    disable_gsl_abort();
    QuadContext ctx;
    ctx.alpha = alpha;
    ctx.eps = spec.epsilon;
    ctx.R = radius;
    ctx.max_evals = spec.max_evals;

    gsl_function f{&r1_integrand, &ctx};
    double result = 0.0, abserr = 0.0;
    gsl_integration_qag(&f, 0.0, radius, spec.abs_tol / (2.0 * kPi), 1e-8, 4096,
                        GSL_INTEG_GAUSS61, ctx.ws_r1.get(), &result, &abserr);
    result *= 2.0 * kPi;  // the first point's angle integrates out
    abserr *= 2.0 * kPi;
    if (ctx.budget_exceeded || ctx.evals > ctx.max_evals)
        throw quadrature_budget_error(result, abserr);
    return result;
}

double regularization_error_bound(int n, double alpha, double epsilon) {
    if (n != 2)
        throw unsupported_dimension_error("regularization_error_bound: n = 2 only");
    if (!(alpha > 0.0) || !(alpha < 2.0))
        throw std::invalid_argument("regularization_error_bound: alpha must lie in (0, 2)");
    if (epsilon < 0.0) throw std::invalid_argument("regularization_error_bound: negative epsilon");
    if (epsilon == 0.0) return 0.0;
    return (2.0 * kPi / alpha) * (2.0 / (2.0 - alpha)) *
           std::pow((2.0 - alpha) / alpha, 0.5 * alpha) *
           std::pow(epsilon / std::pow(kPi, 0.5 * alpha), 0.5 * alpha);
}

BallRieszOracle ball_riesz_extrapolated(int n, double alpha, double radius, double abs_tol) {
    BallRieszOracle out;
    const double eps_list[3] = {1e-4, 1e-5, 1e-6};
    QuadratureSpec spec;
    spec.abs_tol = abs_tol;
    for (double e : eps_list) {
        spec.epsilon = e;
        out.samples.emplace_back(e, ball_riesz_regularized(n, alpha, radius, spec));
    }
    // one Richardson step on the two smallest eps, assuming error ~ eps^{alpha/2}
    const double rho = std::pow(eps_list[2] / eps_list[1], 0.5 * alpha);
    out.value = (out.samples[2].second - rho * out.samples[1].second) / (1.0 - rho);
    out.bound = regularization_error_bound(n, alpha, eps_list[2]);
    return out;
}

double unit_ball_volume(int n) {
    return std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double unit_ball_perimeter(int n) { return n * unit_ball_volume(n); }

double ball_energy_f(double m, int n, double alpha, double V_unit) {
    if (!(m > 0.0)) throw std::invalid_argument("ball_energy_f: mass must be positive");
    const double lambda = std::pow(m / unit_ball_volume(n), 1.0 / n);
    return unit_ball_perimeter(n) * std::pow(lambda, n - 1) +
           V_unit * std::pow(lambda, n + alpha);
}

double critical_mass(int k, int n, double alpha, double V_unit) {
    if (k < 1) throw std::invalid_argument("critical_mass: k must be >= 1");
    const double kk = static_cast<double>(k);
    const double num = std::pow(kk + 1.0, 1.0 / n) - std::pow(kk, 1.0 / n);
    const double den = std::pow(kk, -alpha / n) - std::pow(kk + 1.0, -alpha / n);
    const double ratio = unit_ball_perimeter(n) / V_unit;
    return unit_ball_volume(n) * std::pow(num / den * ratio, n / (1.0 + alpha));
}

double cm_from_mass(double m, int n, double alpha) {
    if (!(m > 0.0)) throw std::invalid_argument("cm_from_mass: mass must be positive");
    return std::pow(m, (1.0 + alpha) / n);
}

double mass_from_cm(double cm, int n, double alpha) {
    if (!(cm > 0.0)) throw std::invalid_argument("mass_from_cm: c_m must be positive");
    return std::pow(cm, n / (1.0 + alpha));
}

}  // namespace drop
