#include "drop/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace drop {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Gamma-function ratio g(k) = Gamma(k + a) / Gamma(k + b) via the exact
// recurrence g(k) = g(k-1) (k-1+a)/(k-1+b), seeded from k = 0. Avoids
// catastrophic cancellation of lgamma differences at large k.
double gamma_ratio(double a, double b, int k) {
    double g = std::tgamma(a) / std::tgamma(b);
    for (int j = 1; j <= k; ++j) g *= (j - 1 + a) / (j - 1 + b);
    return g;
}

// psi(k + c) - psi(c) = sum_{i=0}^{k-1} 1/(i + c), exact for integer k.
double digamma_delta(double c, int k) {
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += 1.0 / (c + i);
    return s;
}

}  // namespace

void StabilityParams::validate() const {
    if (n < 2) throw std::invalid_argument("StabilityParams: n must be >= 2");
    if (!(alpha > 0.0) || !(alpha < n))
        throw std::invalid_argument("StabilityParams: alpha must lie in (0, n)");
    if (!(beta > 0.0)) throw std::invalid_argument("StabilityParams: beta must be positive");
    if (!(A > 0.0)) throw std::invalid_argument("StabilityParams: A must be positive");
    if (k_max < 2) throw std::invalid_argument("StabilityParams: k_max must be >= 2");
}

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::bounded_threshold: return "bounded-threshold";
        case Regime::all_or_bounded: return "all-masses-stable-or-bounded-threshold";
        case Regime::stable_above_mstar: return "stable-above-m*";
        case Regime::unstable_above_mstar: return "unstable-above-m*";
        case Regime::a_dependent: return "A-dependent";
    }
    return "?";
}

double lambda_k(int n, int k) {
    if (k < 0) throw std::invalid_argument("lambda_k: k must be >= 0");
    return static_cast<double>(k) * (n + k - 2);
}

double mu_k(int n, double alpha, int k) {
    if (k < 1) throw std::invalid_argument("mu_k: k must be >= 1");
    if (!(alpha > 0.0) || !(alpha < n))
        throw std::invalid_argument("mu_k: alpha must lie in (0, n)");
    const double a = 0.5 * (n - alpha);
    const double b = 0.5 * (n - 2 + alpha);
    if (alpha == 1.0) {
        const double c = 0.5 * (n - 1);
        return 4.0 * std::pow(kPi, 0.5 * (n - 1)) / std::tgamma(c) * digamma_delta(c, k);
    }
    if (alpha < 1.0) {
        const double pref = std::pow(2.0, 1.0 + alpha) * std::pow(kPi, 0.5 * (n - 1)) /
                            (1.0 - alpha) * std::tgamma(0.5 * (1.0 + alpha)) / std::tgamma(a);
        return pref * (gamma_ratio(a, b, k) - gamma_ratio(a, b, 0));
    }
    const double pref = std::pow(2.0, alpha) * std::pow(kPi, 0.5 * (n - 1)) *
                        std::tgamma(0.5 * (alpha - 1.0)) / std::tgamma(a);
    return pref * (gamma_ratio(a, b, 0) - gamma_ratio(a, b, k));
}

double mu_sup(int n, double alpha) {
    if (!(alpha > 1.0) || !(alpha < n))
        throw std::invalid_argument("mu_sup: requires alpha in (1, n)");
    const double a = 0.5 * (n - alpha);
    const double b = 0.5 * (n - 2 + alpha);
    // Gamma(k+a)/Gamma(k+b) ~ k^{1-alpha} -> 0, so sup mu_k = pref * g(0).
    return std::pow(2.0, alpha) * std::pow(kPi, 0.5 * (n - 1)) *
           std::tgamma(0.5 * (alpha - 1.0)) / std::tgamma(a) * gamma_ratio(a, b, 0);
}

double f_k_eval(double gamma, int k, const StabilityParams& p) {
    p.validate();
    if (k < 2) throw std::invalid_argument("f_k is defined for k >= 2");
    if (!(gamma > 0.0)) throw std::invalid_argument("f_k: gamma must be positive");
    const double dl = lambda_k(p.n, k) - lambda_k(p.n, 1);
    const double dm = mu_k(p.n, p.alpha, k) - mu_k(p.n, p.alpha, 1);
    return 1.0 - std::pow(gamma, 1.0 + p.alpha) * dm / dl +
           std::pow(gamma, 1.0 + p.beta) * p.A * p.beta / dl;
}

double gamma_star_k(int k, const StabilityParams& p) {
    p.validate();
    if (k < 2) throw std::invalid_argument("gamma_star_k: k must be >= 2");
    if (!(p.alpha < p.beta))
        throw std::domain_error("gamma_star_k: requires alpha < beta");
    const double dm = mu_k(p.n, p.alpha, k) - mu_k(p.n, p.alpha, 1);
    return std::pow((1.0 + p.alpha) * dm / (p.A * p.beta * (1.0 + p.beta)),
                    1.0 / (p.beta - p.alpha));
}

double f_k_min_closed_form(int k, const StabilityParams& p) {
    p.validate();
    if (!(p.alpha < p.beta))
        throw std::domain_error("f_k_min_closed_form: requires alpha < beta");
    const double dl = lambda_k(p.n, k) - lambda_k(p.n, 1);
    const double dm = mu_k(p.n, p.alpha, k) - mu_k(p.n, p.alpha, 1);
    const double e = (p.beta - p.alpha);
    return 1.0 - std::pow((1.0 + p.alpha) / (p.A * p.beta * (1.0 + p.beta)), (1.0 + p.alpha) / e) *
                     e / (1.0 + p.beta) * std::pow(dm, (1.0 + p.beta) / e) / dl;
}

namespace {

// Precomputed per-k coefficients of f_k(gamma) = 1 - gamma^{1+alpha} c1[k]
// + gamma^{1+beta} c2[k], built with one pass of the Gamma recurrence.
struct FkTable {
    double alpha, beta;
    std::vector<double> c1, c2;  // index k, valid for k in [2, k_max]

    explicit FkTable(const StabilityParams& p) : alpha(p.alpha), beta(p.beta) {
        c1.assign(p.k_max + 1, 0.0);
        c2.assign(p.k_max + 1, 0.0);
        std::vector<double> mu(p.k_max + 1, 0.0);
        const double a = 0.5 * (p.n - p.alpha);
        const double b = 0.5 * (p.n - 2 + p.alpha);
        if (p.alpha == 1.0) {
            const double c = 0.5 * (p.n - 1);
            const double pref = 4.0 * std::pow(kPi, 0.5 * (p.n - 1)) / std::tgamma(c);
            double acc = 0.0;
            for (int k = 1; k <= p.k_max; ++k) {
                acc += 1.0 / (c + k - 1);
                mu[k] = pref * acc;
            }
        } else {
            const double sign = (p.alpha < 1.0) ? 1.0 : -1.0;
            const double pref =
                (p.alpha < 1.0)
                    ? std::pow(2.0, 1.0 + p.alpha) * std::pow(kPi, 0.5 * (p.n - 1)) /
                          (1.0 - p.alpha) * std::tgamma(0.5 * (1.0 + p.alpha)) / std::tgamma(a)
                    : std::pow(2.0, p.alpha) * std::pow(kPi, 0.5 * (p.n - 1)) *
                          std::tgamma(0.5 * (p.alpha - 1.0)) / std::tgamma(a);
            const double g0 = std::tgamma(a) / std::tgamma(b);
            double g = g0;
            for (int k = 1; k <= p.k_max; ++k) {
                g *= (k - 1 + a) / (k - 1 + b);
                mu[k] = sign * pref * (g - g0);
            }
        }
        for (int k = 2; k <= p.k_max; ++k) {
            const double dl = lambda_k(p.n, k) - lambda_k(p.n, 1);
            c1[k] = (mu[k] - mu[1]) / dl;
            c2[k] = p.A * p.beta / dl;
        }
    }

    double min_fk(double gamma) const {
        const double ga = std::pow(gamma, 1.0 + alpha);
        const double gb = std::pow(gamma, 1.0 + beta);
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t k = 2; k < c1.size(); ++k)
            m = std::min(m, 1.0 - ga * c1[k] + gb * c2[k]);
        return m;
    }
};

double bisect_zero(double lo, double hi, const FkTable& t) {
    // assumes min_fk(lo) and min_fk(hi) have opposite signs
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo < 1e-8 * (1.0 + mid)) return mid;
        if (t.min_fk(lo) * t.min_fk(mid) <= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

double auto_gamma_max(const StabilityParams& p) {
    if (p.gamma_max > 0.0) return p.gamma_max;
    if (p.alpha < p.beta) return 10.0 * gamma_star_k(2, p);
    // alpha >= beta: scale from the zero of f_2 (each f_k eventually negative)
    double g = 1.0;
    while (f_k_eval(g, 2, p) > 0.0 && g < 1e12) g *= 2.0;
    return 2.0 * g;
}

// Upper bound on (mu_k - mu_1)/(lambda_k - lambda_1) valid for all k > k_max,
// used to certify that truncating the mode sum cannot hide a sign change on
// (0, gamma_max]. Returns the bound together with a description.
std::pair<double, std::string> tail_ratio_bound(const StabilityParams& p) {
    const int n = p.n;
    const double alpha = p.alpha;
    const double mu1 = mu_k(n, alpha, 1);
    std::ostringstream desc;
    auto ratio_at = [&](int k, double mu_upper) {
        return (mu_upper - mu1) / (lambda_k(n, k) - lambda_k(n, 1));
    };
    double bound = 0.0;
    if (alpha > 1.0) {
        const double sup = mu_sup(n, alpha);
        bound = ratio_at(p.k_max + 1, sup);
        desc << "alpha>1 tail: mu_k bounded by mu_sup=" << sup
             << " (Stirling), ratio at k_max+1 = " << bound;
    } else if (alpha == 1.0) {
        // mu_k = pref (psi(k+c) - psi(c)) <= pref (1/c + ln((k+c)/c)); the
        // bound over k > k_max of bound_mu(k)/(lambda_k - lambda_1) decreases
        // once k exceeds e^2-ish, so evaluate on a window and keep the max.
        const double c = 0.5 * (n - 1);
        const double pref = 4.0 * std::pow(kPi, 0.5 * (n - 1)) / std::tgamma(c);
        for (int k = p.k_max + 1; k <= 4 * p.k_max + 64; ++k)
            bound = std::max(bound, ratio_at(k, pref * (1.0 / c + std::log((k + c) / c))));
        desc << "alpha=1 tail: mu_k <= pref(1/c + ln((k+c)/c)) (digamma log growth), "
             << "max ratio over (k_max, 4 k_max] = " << bound;
    } else {
        // log-convexity: Gamma(x+s) <= Gamma(x) x^s with s = 1-alpha, so
        // mu_k <= pref (k+b)^{1-alpha}.
        const double a = 0.5 * (n - alpha);
        const double b = 0.5 * (n - 2 + alpha);
        const double pref = std::pow(2.0, 1.0 + alpha) * std::pow(kPi, 0.5 * (n - 1)) /
                            (1.0 - alpha) * std::tgamma(0.5 * (1.0 + alpha)) / std::tgamma(a);
        for (int k = p.k_max + 1; k <= 4 * p.k_max + 64; ++k)
            bound = std::max(bound, ratio_at(k, pref * std::pow(k + b, 1.0 - alpha)));
        desc << "alpha<1 tail: mu_k <= pref (k+b)^{1-alpha} (log-convexity), "
             << "max ratio over (k_max, 4 k_max] = " << bound;
    }
    return {bound, desc.str()};
}

}  // namespace

StabilitySets stability_sets(const StabilityParams& p) {
    p.validate();
    StabilitySets out;
    out.k_max_used = p.k_max;
    out.gamma_max_used = auto_gamma_max(p);

    // scan min_k f_k on a fine grid, then refine interval boundaries
    const FkTable table(p);
    const int samples = 4000;
    std::vector<double> gs(samples), fs(samples);
    for (int i = 0; i < samples; ++i) {
        gs[i] = out.gamma_max_used * (i + 1) / samples;
        fs[i] = table.min_fk(gs[i]);
    }
    bool inside = fs[0] > 0.0;
    double start = inside ? 0.0 : -1.0;  // f_k(0+) = 1 > 0 always
    if (!inside) {
        // positive near 0 but first sample negative: boundary below gs[0]
        out.positive_intervals.push_back(
            {0.0, bisect_zero(1e-12 * out.gamma_max_used, gs[0], table)});
    }
    for (int i = 1; i < samples; ++i) {
        if (fs[i] > 0.0 && !inside) {
            start = bisect_zero(gs[i - 1], gs[i], table);
            inside = true;
        } else if (fs[i] <= 0.0 && inside) {
            out.positive_intervals.push_back({start, bisect_zero(gs[i - 1], gs[i], table)});
            inside = false;
        }
    }
    if (inside) out.positive_intervals.push_back({start, out.gamma_max_used});

    // tail certificate: for k > k_max, dropping the positive A-term,
    // f_k(gamma) >= 1 - gamma^{1+alpha} * tail_bound on (0, gamma_max].
    auto [bound, desc] = tail_ratio_bound(p);
    const double worst = 1.0 - std::pow(out.gamma_max_used, 1.0 + p.alpha) * bound;
    std::ostringstream cert;
    cert << desc << "; min over (0,gamma_max] of the tail lower bound = " << worst;
    if (worst > 0.0) {
        cert << " > 0: modes k > k_max cannot change the sets on this window";
        out.truncation_uncertain = false;
    } else {
        cert << " <= 0: truncation-uncertain on part of the window";
        out.truncation_uncertain = true;
    }
    out.tail_certificate = cert.str();
    return out;
}

StabilityReport classify_regime(const StabilityParams& p) {
    p.validate();
    StabilityReport rep;
    const double ball_vol = std::pow(kPi, 0.5 * p.n) / std::tgamma(0.5 * p.n + 1.0);

    // per-k evidence (gamma_k and min f_k where defined)
    const int k_report = std::min(p.k_max, 16);
    for (int k = 2; k <= k_report; ++k) {
        KEvidence ev;
        ev.k = k;
        if (p.alpha < p.beta) {
            ev.gamma_k = gamma_star_k(k, p);
            ev.min_fk = f_k_min_closed_form(k, p);
        } else {
            ev.gamma_k = 0.0;
            ev.min_fk = std::numeric_limits<double>::quiet_NaN();
        }
        rep.evidence.push_back(ev);
    }

    StabilitySets sets = stability_sets(p);
    rep.truncation_certificate = sets.tail_certificate;
    rep.truncation_uncertain = sets.truncation_uncertain;

    auto first_boundary = [&]() -> std::optional<double> {
        if (sets.positive_intervals.empty()) return std::nullopt;
        const auto& first = sets.positive_intervals.front();
        if (first.first == 0.0 && first.second < sets.gamma_max_used) return first.second;
        if (first.first > 0.0) return first.first;
        return std::nullopt;
    };

    if (p.alpha > p.beta) {
        rep.regime = Regime::bounded_threshold;
        rep.gamma_star = first_boundary();
        rep.notes = "alpha > beta: each f_k has exactly one zero; stable below gamma*, unstable above";
    } else if (p.alpha == p.beta) {
        rep.regime = Regime::all_or_bounded;
        // all f_k non-decreasing iff A beta >= sup_k (mu_k - mu_1)
        if (p.alpha > 1.0) {
            const double needed = (mu_sup(p.n, p.alpha) - mu_k(p.n, p.alpha, 1)) / p.beta;
            if (p.A >= needed) {
                rep.notes = "alpha = beta, A >= (mu_sup - mu_1)/beta = " + std::to_string(needed) +
                            ": every f_k >= 1, ball stable at all masses";
            } else {
                rep.gamma_star = first_boundary();
                rep.notes = "alpha = beta with A < (mu_sup - mu_1)/beta = " + std::to_string(needed) +
                            ": bounded threshold";
            }
        } else {
            rep.gamma_star = first_boundary();
            rep.notes = "alpha = beta <= 1: mu_k unbounded, some f_k decreasing; bounded threshold";
        }
    } else if (p.beta > 1.0) {
        rep.regime = Regime::stable_above_mstar;
        // stable for gamma beyond the last sign change
        if (!sets.positive_intervals.empty() &&
            sets.positive_intervals.back().second >= sets.gamma_max_used) {
            const double last_lo = sets.positive_intervals.back().first;
            rep.gamma_star = last_lo;  // 0 when min f_k never dips negative
        }
        rep.notes = "alpha < beta, beta > 1: min f_k -> 1, stable above m*";
    } else if (p.beta < 1.0) {
        rep.regime = Regime::unstable_above_mstar;
        rep.gamma_star = first_boundary();
        rep.notes = "alpha < beta < 1: min f_k -> -infinity and the gaps [gamma_k, gamma_{k+1}] "
                    "eventually leave the stable set; unstable above m*";
    } else {
        rep.regime = Regime::a_dependent;
        // beta = 1: min f_k tends to 1 - C_alpha / A^{(1+alpha)/(1-alpha)};
        // estimate the limit from the closed form at large k.
        const int k_lim = 20000;
        const double tail1 = f_k_min_closed_form(k_lim, p);
        const double tail2 = f_k_min_closed_form(k_lim / 2, p);
        const double limit = tail1 + (tail1 - tail2);  // crude linear extrapolation
        std::ostringstream note;
        note << "alpha < beta = 1: lim min f_k estimated " << limit
             << " (k=" << k_lim << "); ";
        const double tol = 5e-3;
        if (limit > tol)
            note << "A above critical C_alpha scale: behaves like stable-above-m* (iii)";
        else if (limit < -tol)
            note << "A below critical C_alpha scale: behaves like unstable-above-m* (iv)";
        else
            note << "indeterminate at tolerance (A near the critical C_alpha)";
        note << "; both candidate conclusions: (iii) stable above m*, (iv) unstable above m*";
        rep.notes = note.str();
        rep.gamma_star = first_boundary();
    }

    if (rep.gamma_star) rep.m_star = ball_vol * std::pow(*rep.gamma_star, p.n);
    return rep;
}

}  // namespace drop
