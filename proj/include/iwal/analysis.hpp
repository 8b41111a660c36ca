#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "iwal/hypothesis.hpp"
#include "iwal/stream.hpp"
#include "iwal/weighted_sample.hpp"

namespace iwal {

// --- martingale deviation envelope -----------------------------------------
//
// For weighted means of a [0,1] function with weights 1/P_i <= r_max and
// realized max weight R_n on rounds that matter.

struct DeviationParams {
    double t = 0.0;     // tail parameter, >= 0
    std::uint64_t n = 0;
    double r_max = 1.0; // a-priori weight cap
    double r_n = 1.0;   // realized max weight, 1 <= r_n <= r_max
};

double deviation_bound(const DeviationParams& p);
double deviation_failure_prob(double t, double r_max);

// --- per-hypothesis uniform bound -------------------------------------------

// Smallest query probability on rounds where h and hstar disagree; 1 when
// they never do.
double pmin_for(const Hypothesis& h, const Hypothesis& hstar,
                const std::vector<InteractionRecord>& records);

double lemma1_bound(double eps_n, double pmin);

// Realized |(err(h,Z) - err(hstar,Z)) - (err(h) - err(hstar))|.
double lemma1_lhs(const Hypothesis& h, const Hypothesis& hstar,
                  const std::vector<InteractionRecord>& records,
                  double true_err_h, double true_err_hstar);

// --- excess-error envelopes ---------------------------------------------------

// sqrt(2*c0*ln n/(n-1)) + 2*c0*ln n/(n-1); n = 1 gives +infinity.
double consistency_bound(double c0, std::uint64_t n);

// kappa_const * (c1_const*ln n/(n-1))^(1/(2-alpha)); the low-noise sharpening
// of the consistency envelope. Both leading constants are caller-supplied.
double lownoise_consistency_bound(double kappa_const, double c1_const,
                                  std::uint64_t n, double alpha);

// --- disagreement coefficient ----------------------------------------------

struct DisagreementProfile {
    double theta = 0.0;
    std::vector<double> radius_grid; // probed radii, ascending; includes the
                                     // step radii Pr(h != hstar) of the class
    std::vector<double> dis_mass;    // Pr(X in DIS(hstar, r)) per radius
    bool degenerate = false;         // nothing ever disagrees with hstar
};

// theta = max over probed radii of dis_mass/r. DIS(hstar, r) is the set of
// points where some hypothesis within disagreement radius r of hstar differs
// from it; on a finite class the sup over continuous r is attained at the
// step radii, which are probed in addition to the caller's grid.
DisagreementProfile disagreement_coefficient(const HypothesisClass& cls,
                                             const DataDistribution& dist,
                                             std::size_t hstar_id,
                                             const std::vector<double>& grid);

// Sup restricted to radii strictly above min_r.
double theta_above(const DisagreementProfile& profile, double min_r);

// --- label complexity -------------------------------------------------------

// Per-round query-rate envelope at round k (clamped to 1): the expected query
// probability of a consistent run is at most
//   2*theta*err_star + theta*sqrt(6*c4*eps) + theta*(3*c5/4)*eps*ln(1/(1.5*c4*eps))
//   + (3/2)*(c4+c5)*eps,   eps = c0*ln k/(k-1),
// with the ln factor clamped at 0 once eps is large enough to make it negative.
double lemma4_rate_bound(double theta, double err_star, double c0, std::uint64_t k);

// 1 + sum of the per-round envelope over rounds 2..n.
double thm3_query_bound_sum(double theta, double err_star, double c0, std::uint64_t n);

// Closed-form aggregate: 1 + 2*theta*err_star*(n-1)
//   + sqrt_term*theta*sqrt(c0*n*ln n) + log3_term*theta*c0*ln^3 n
//   + log2_term*c0*ln^2 n.
struct Thm3Constants {
    double sqrt_term = 0.0;
    double log3_term = 0.0;
    double log2_term = 0.0;

    // Constants assembled from the proof chain: 2*sqrt(6*c4), 3*c5/8,
    // 3*(c4+c5)/4. The log^3 coefficient is a reconstruction from summing
    // the per-round envelope, not a stated constant.
    static Thm3Constants strict();
};

double thm3_query_bound(const Thm3Constants& c, double theta, double err_star,
                        double c0, std::uint64_t n);

// theta*kappa*c_alpha*(c0*ln n)^(alpha/2)*n^(1-alpha/2); c_alpha is
// caller-supplied (calibrated, the statement leaves it abstract).
double thm4_query_bound(double theta, double kappa, double alpha, double c0,
                        std::uint64_t n, double c_alpha);

// Calibrated query curve a*sqrt(n*ln n) + b*ln^3 n with a, b >= 0, least
// squares on (n, median queries) points with negative coefficients clamped
// and the survivor refit.
struct QueryCurveFit {
    double sqrt_coeff = 0.0;
    double log3_coeff = 0.0;
};

QueryCurveFit fit_query_curve(const std::vector<std::pair<std::uint64_t, double>>& points);
double query_curve_eval(const QueryCurveFit& fit, std::uint64_t n);

// --- noise-condition fit ------------------------------------------------------

// Smallest kappa per probed alpha such that every hypothesis satisfies
// Pr(h != hstar) <= kappa*(err(h) - err(hstar))^alpha, plus a recovered
// exponent: the log-log slope of disagreement vs excess over the closer half
// of the class, clamped into (0, 1].
struct TsybakovFit {
    std::vector<double> alpha_grid;
    std::vector<double> kappa_at; // envelope constant per alpha
    double alpha_hat = 1.0;
    double kappa_hat = 0.0;
};

// Throws Error when some hypothesis has zero excess error but positive
// disagreement: no (kappa, alpha) can cover it.
TsybakovFit fit_tsybakov(const HypothesisClass& cls, const DataDistribution& dist,
                         std::size_t hstar_id, const std::vector<double>& alpha_grid);

std::vector<double> default_alpha_grid(); // 0.05 steps over (0, 1]

// --- small numerics -----------------------------------------------------------

double median(std::vector<double> values);
// Least-squares slope of ln y against ln x; needs >= 2 positive points.
double loglog_slope(const std::vector<std::pair<double, double>>& points);

} // namespace iwal
