#include "iwal/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "iwal/error.hpp"
#include "iwal/threshold.hpp"

namespace iwal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const ThresholdConfig& proof_cfg() {
    static const ThresholdConfig cfg = ThresholdConfig::standard(2.0, 0.05);
    return cfg;
}

} // namespace

// --- deviation envelope --------------------------------------------------------

double deviation_bound(const DeviationParams& p) {
    if (!(p.t >= 0.0) || !std::isfinite(p.t)) throw ConfigError("tail parameter must be >= 0");
    if (p.n == 0) throw ConfigError("deviation bound needs n >= 1");
    if (!(p.r_max >= 1.0)) throw ConfigError("weight cap must be >= 1");
    if (!(p.r_n >= 1.0 && p.r_n <= p.r_max))
        throw ConfigError("realized max weight must lie in [1, r_max]");
    double n = static_cast<double>(p.n);
    return std::sqrt(2.0 * p.r_n * p.t / n) + std::sqrt(2.0 * p.t / n) +
           p.r_n * p.t / (3.0 * n);
}

double deviation_failure_prob(double t, double r_max) {
    if (!(t >= 0.0)) throw ConfigError("tail parameter must be >= 0");
    if (!(r_max >= 1.0)) throw ConfigError("weight cap must be >= 1");
    return 2.0 * (3.0 + std::log2(r_max)) * std::exp(-t / 2.0);
}

// --- per-hypothesis uniform bound ------------------------------------------------

double pmin_for(const Hypothesis& h, const Hypothesis& hstar,
                const std::vector<InteractionRecord>& records) {
    double pmin = 1.0;
    for (const InteractionRecord& r : records)
        if (h(r.x) != hstar(r.x)) pmin = std::min(pmin, r.p);
    return pmin;
}

double lemma1_bound(double eps_n, double pmin) {
    if (!(eps_n >= 0.0)) throw ConfigError("eps must be >= 0");
    if (!(pmin > 0.0 && pmin <= 1.0)) throw ConfigError("pmin must lie in (0, 1]");
    double ratio = eps_n / pmin;
    return std::sqrt(ratio) + ratio;
}

double lemma1_lhs(const Hypothesis& h, const Hypothesis& hstar,
                  const std::vector<InteractionRecord>& records,
                  double true_err_h, double true_err_hstar) {
    double sample_gap = weighted_mean(
        [&](const Point& x, Label y) {
            return static_cast<double>(h(x) != y) - static_cast<double>(hstar(x) != y);
        },
        records);
    return std::abs(sample_gap - (true_err_h - true_err_hstar));
}

// --- excess-error envelopes ------------------------------------------------------

double consistency_bound(double c0, std::uint64_t n) {
    if (!(c0 > 0.0) || !std::isfinite(c0)) throw ConfigError("c0 must be positive");
    if (n == 0) throw ConfigError("rounds are 1-based");
    if (n == 1) return kInf;
    double x = 2.0 * c0 * std::log(static_cast<double>(n)) / static_cast<double>(n - 1);
    return std::sqrt(x) + x;
}

double lownoise_consistency_bound(double kappa_const, double c1_const,
                                  std::uint64_t n, double alpha) {
    if (!(kappa_const > 0.0)) throw ConfigError("leading constant must be positive");
    if (!(c1_const > 0.0)) throw ConfigError("inner constant must be positive");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
    if (n == 0) throw ConfigError("rounds are 1-based");
    if (n == 1) return kInf;
    double base = c1_const * std::log(static_cast<double>(n)) / static_cast<double>(n - 1);
    return kappa_const * std::pow(base, 1.0 / (2.0 - alpha));
}

// --- disagreement coefficient ----------------------------------------------------

DisagreementProfile disagreement_coefficient(const HypothesisClass& cls,
                                             const DataDistribution& dist,
                                             std::size_t hstar_id,
                                             const std::vector<double>& grid) {
    if (grid.empty()) throw ConfigError("radius grid must be non-empty");
    if (hstar_id >= cls.size()) throw ConfigError("hstar id out of range");
    const Hypothesis& hstar = cls.at(hstar_id);

    std::vector<double> dist_to_star(cls.size());
    std::set<double> radii(grid.begin(), grid.end());
    for (std::size_t id = 0; id < cls.size(); ++id) {
        dist_to_star[id] = disagreement_mass(cls.at(id), hstar, dist);
        // the ratio sup of a finite class peaks exactly at its step radii
        if (dist_to_star[id] > 0.0) radii.insert(dist_to_star[id]);
    }
    for (double r : radii)
        if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("radii must be positive and finite");

    DisagreementProfile out;
    out.radius_grid.assign(radii.begin(), radii.end());
    out.dis_mass.reserve(out.radius_grid.size());
    out.degenerate = true;
    for (std::size_t id = 0; id < cls.size(); ++id)
        if (id != hstar_id && dist_to_star[id] > 0.0) out.degenerate = false;

    const auto* pool = std::get_if<PoolMarginal>(&dist.marginal);
    for (double r : out.radius_grid) {
        double mass = 0.0;
        if (pool != nullptr) {
            const auto& points = pool->pool->points();
            std::size_t hit = 0;
            for (const Point& x : points) {
                Label star = hstar(x);
                for (std::size_t id = 0; id < cls.size(); ++id) {
                    if (dist_to_star[id] <= 0.0 || dist_to_star[id] > r) continue;
                    if (cls.at(id)(x) != star) {
                        ++hit;
                        break;
                    }
                }
            }
            mass = static_cast<double>(hit) / static_cast<double>(points.size());
        } else {
            std::vector<Intervals> regions;
            Intervals star_plus = plus_region(hstar);
            for (std::size_t id = 0; id < cls.size(); ++id) {
                if (dist_to_star[id] <= 0.0 || dist_to_star[id] > r) continue;
                regions.push_back(
                    interval_symmetric_difference(plus_region(cls.at(id)), star_plus));
            }
            mass = interval_length(interval_union(regions));
        }
        out.dis_mass.push_back(mass);
        out.theta = std::max(out.theta, mass / r);
    }
    return out;
}

double theta_above(const DisagreementProfile& profile, double min_r) {
    double theta = 0.0;
    for (std::size_t i = 0; i < profile.radius_grid.size(); ++i)
        if (profile.radius_grid[i] > min_r)
            theta = std::max(theta, profile.dis_mass[i] / profile.radius_grid[i]);
    return theta;
}

// --- label complexity ---------------------------------------------------------

double lemma4_rate_bound(double theta, double err_star, double c0, std::uint64_t k) {
    if (!(theta >= 0.0)) throw ConfigError("theta must be >= 0");
    if (!(err_star >= 0.0 && err_star <= 1.0)) throw ConfigError("err_star must lie in [0, 1]");
    if (!(c0 > 0.0)) throw ConfigError("c0 must be positive");
    if (k == 0) throw ConfigError("rounds are 1-based");
    if (k == 1) return 1.0;
    double c4 = proof_cfg().c4();
    double c5 = proof_cfg().c5();
    double eps = c0 * std::log(static_cast<double>(k)) / static_cast<double>(k - 1);
    double log_factor = std::max(0.0, std::log(1.0 / (1.5 * c4 * eps)));
    double rate = 2.0 * theta * err_star + theta * std::sqrt(6.0 * c4 * eps) +
                  theta * (3.0 * c5 / 4.0) * eps * log_factor +
                  1.5 * (c4 + c5) * eps;
    return std::min(1.0, rate);
}

double thm3_query_bound_sum(double theta, double err_star, double c0, std::uint64_t n) {
    if (n == 0) throw ConfigError("rounds are 1-based");
    double total = 1.0;
    for (std::uint64_t k = 2; k <= n; ++k)
        total += lemma4_rate_bound(theta, err_star, c0, k);
    return total;
}

Thm3Constants Thm3Constants::strict() {
    double c4 = proof_cfg().c4();
    double c5 = proof_cfg().c5();
    return {2.0 * std::sqrt(6.0 * c4), 3.0 * c5 / 8.0, 3.0 * (c4 + c5) / 4.0};
}

double thm3_query_bound(const Thm3Constants& c, double theta, double err_star,
                        double c0, std::uint64_t n) {
    if (!(theta >= 0.0)) throw ConfigError("theta must be >= 0");
    if (!(err_star >= 0.0 && err_star <= 1.0)) throw ConfigError("err_star must lie in [0, 1]");
    if (!(c0 > 0.0)) throw ConfigError("c0 must be positive");
    if (n == 0) throw ConfigError("rounds are 1-based");
    double nn = static_cast<double>(n);
    double ln = std::log(nn);
    return 1.0 + 2.0 * theta * err_star * (nn - 1.0) +
           c.sqrt_term * theta * std::sqrt(c0 * nn * ln) +
           c.log3_term * theta * c0 * ln * ln * ln + c.log2_term * c0 * ln * ln;
}

double thm4_query_bound(double theta, double kappa, double alpha, double c0,
                        std::uint64_t n, double c_alpha) {
    if (!(theta >= 0.0)) throw ConfigError("theta must be >= 0");
    if (!(kappa > 0.0)) throw ConfigError("kappa must be positive");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
    if (!(c0 > 0.0)) throw ConfigError("c0 must be positive");
    if (!(c_alpha > 0.0)) throw ConfigError("c_alpha must be positive");
    if (n == 0) throw ConfigError("rounds are 1-based");
    double nn = static_cast<double>(n);
    return theta * kappa * c_alpha * std::pow(c0 * std::log(nn), alpha / 2.0) *
           std::pow(nn, 1.0 - alpha / 2.0);
}

// --- calibrated query curve -----------------------------------------------------

namespace {

std::pair<double, double> curve_basis(std::uint64_t n) {
    double nn = static_cast<double>(n);
    double ln = std::log(nn);
    return {std::sqrt(nn * ln), ln * ln * ln};
}

} // namespace

QueryCurveFit fit_query_curve(const std::vector<std::pair<std::uint64_t, double>>& points) {
    if (points.empty()) throw ConfigError("curve fit needs at least one point");
    double s11 = 0.0, s12 = 0.0, s22 = 0.0, b1 = 0.0, b2 = 0.0;
    for (const auto& [n, y] : points) {
        if (n < 2) throw ConfigError("curve fit needs n >= 2");
        if (!(y >= 0.0) || !std::isfinite(y)) throw ConfigError("query counts must be >= 0");
        auto [f1, f2] = curve_basis(n);
        s11 += f1 * f1;
        s12 += f1 * f2;
        s22 += f2 * f2;
        b1 += y * f1;
        b2 += y * f2;
    }
    QueryCurveFit fit;
    double det = s11 * s22 - s12 * s12;
    if (std::abs(det) > 1e-9 * s11 * s22) {
        fit.sqrt_coeff = (b1 * s22 - b2 * s12) / det;
        fit.log3_coeff = (b2 * s11 - b1 * s12) / det;
    } else {
        fit.sqrt_coeff = b1 / s11;
        fit.log3_coeff = 0.0;
    }
    // negative coefficients are meaningless for counts: clamp and refit the survivor
    if (fit.log3_coeff < 0.0) {
        fit.log3_coeff = 0.0;
        fit.sqrt_coeff = std::max(0.0, b1 / s11);
    } else if (fit.sqrt_coeff < 0.0) {
        fit.sqrt_coeff = 0.0;
        fit.log3_coeff = std::max(0.0, b2 / s22);
    }
    return fit;
}

double query_curve_eval(const QueryCurveFit& fit, std::uint64_t n) {
    if (n == 0) throw ConfigError("rounds are 1-based");
    if (n == 1) return 0.0;
    auto [f1, f2] = curve_basis(n);
    return fit.sqrt_coeff * f1 + fit.log3_coeff * f2;
}

// --- noise-condition fit ---------------------------------------------------------

std::vector<double> default_alpha_grid() {
    std::vector<double> grid;
    for (int i = 1; i <= 20; ++i) grid.push_back(0.05 * i);
    return grid;
}

TsybakovFit fit_tsybakov(const HypothesisClass& cls, const DataDistribution& dist,
                         std::size_t hstar_id, const std::vector<double>& alpha_grid) {
    if (hstar_id >= cls.size()) throw ConfigError("hstar id out of range");
    if (alpha_grid.empty()) throw ConfigError("alpha grid must be non-empty");
    for (double a : alpha_grid)
        if (!(a > 0.0 && a <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");

    const Hypothesis& hstar = cls.at(hstar_id);
    double err_star = true_error(hstar, dist);
    constexpr double tol = 1e-12;

    std::vector<std::pair<double, double>> pairs; // (excess, disagreement), d > 0
    for (std::size_t id = 0; id < cls.size(); ++id) {
        double d = disagreement_mass(cls.at(id), hstar, dist);
        double excess = true_error(cls.at(id), dist) - err_star;
        if (excess < -tol)
            throw ConfigError("hstar must minimize the true error");
        if (d <= 0.0) continue;
        if (excess <= tol)
            throw Error("noise condition fails: a hypothesis has zero excess error "
                        "but positive disagreement with hstar");
        pairs.emplace_back(excess, d);
    }

    TsybakovFit fit;
    fit.alpha_grid = alpha_grid;
    fit.kappa_at.reserve(alpha_grid.size());
    for (double a : alpha_grid) {
        double kappa = 0.0;
        for (const auto& [excess, d] : pairs)
            kappa = std::max(kappa, d / std::pow(excess, a));
        fit.kappa_at.push_back(kappa);
    }

    if (pairs.size() >= 2) {
        // exponent from the near-hstar regime: closer half by disagreement
        std::vector<std::pair<double, double>> sorted = pairs;
        std::sort(sorted.begin(), sorted.end(),
                  [](const auto& a, const auto& b) { return a.second < b.second; });
        std::size_t half = std::max<std::size_t>(2, (sorted.size() + 1) / 2);
        sorted.resize(std::min(half, sorted.size()));
        fit.alpha_hat = std::clamp(loglog_slope(sorted), 0.01, 1.0);
    }
    for (const auto& [excess, d] : pairs)
        fit.kappa_hat = std::max(fit.kappa_hat, d / std::pow(excess, fit.alpha_hat));
    return fit;
}

// --- small numerics ---------------------------------------------------------------

double median(std::vector<double> values) {
    if (values.empty()) throw ConfigError("median of an empty set");
    std::sort(values.begin(), values.end());
    std::size_t m = values.size() / 2;
    if (values.size() % 2 == 1) return values[m];
    return 0.5 * (values[m - 1] + values[m]);
}

double loglog_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw ConfigError("slope needs at least two points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    double m = static_cast<double>(points.size());
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0)) throw ConfigError("log-log slope needs positive points");
        double lx = std::log(x);
        double ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double var = sxx - sx * sx / m;
    if (!(var > 0.0)) throw ConfigError("slope undefined: no spread in x");
    return (sxy - sx * sy / m) / var;
}

} // namespace iwal
