#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace drop {

/// Linear-stability study of the ball under the rescaled functional
/// P + gamma^{1+alpha} V_alpha + gamma^{1+beta} U_{beta,A},
/// gamma = (m/|B|)^{1/n}. Per-mode functions (k >= 2):
///   f_k(gamma) = 1 - gamma^{1+alpha} (mu_k - mu_1)/(lambda_k - lambda_1)
///                  + gamma^{1+beta} A beta / (lambda_k - lambda_1).
struct StabilityParams {
    int n = 2;
    double alpha = 1.0;
    double beta = 1.0;
    double A = 1.0;
    int k_max = 200;
    double gamma_max = 0.0;  // 0 = choose automatically from the k = 2 scale

    void validate() const;
};

enum class Regime {
    bounded_threshold,          // (i)  alpha > beta
    all_or_bounded,             // (ii) alpha = beta
    stable_above_mstar,         // (iii) alpha < beta, beta > 1
    unstable_above_mstar,       // (iv) alpha < beta, beta < 1
    a_dependent,                // (v)  alpha < beta, beta = 1
};

std::string regime_name(Regime r);

struct KEvidence {
    int k = 0;
    double gamma_k = 0.0;  // argmin of f_k when alpha < beta, else 0
    double min_fk = 0.0;   // f_k(gamma_k), or inf over the scan window otherwise
};

struct StabilityReport {
    Regime regime;
    std::optional<double> gamma_star;
    std::optional<double> m_star;  // |B| gamma_star^n
    std::vector<KEvidence> evidence;
    std::string truncation_certificate;
    bool truncation_uncertain = false;
    std::string notes;  // sub-conclusions (case (ii) branch, case (v) sign, ...)
};

/// lambda_k = k (n + k - 2), k-th sphere-Laplacian eigenvalue.
double lambda_k(int n, int k);

/// k-th eigenvalue of the Riesz boundary operator; three Gamma/digamma
/// branches for alpha < 1, alpha = 1, alpha > 1. Strictly increasing in k.
double mu_k(int n, double alpha, int k);

/// sup_k mu_k for alpha in (1, n), where the sequence is bounded.
double mu_sup(int n, double alpha);

double f_k_eval(double gamma, int k, const StabilityParams& p);

/// argmin of f_k, requires alpha < beta:
/// gamma_k = [ (1+alpha)(mu_k - mu_1) / (A beta (1+beta)) ]^{1/(beta-alpha)}.
double gamma_star_k(int k, const StabilityParams& p);

/// Closed form of min f_k = f_k(gamma_k), requires alpha < beta.
double f_k_min_closed_form(int k, const StabilityParams& p);

/// Sign-certified description of S~* (strict) and S* (weak) over (0, gamma_max].
struct StabilitySets {
    std::vector<std::pair<double, double>> positive_intervals;  // where min_k f_k > 0
    int k_max_used = 0;
    double gamma_max_used = 0.0;
    std::string tail_certificate;
    bool truncation_uncertain = false;
};
StabilitySets stability_sets(const StabilityParams& p);

StabilityReport classify_regime(const StabilityParams& p);

}  // namespace drop
