#include "iwal/validators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "iwal/erm.hpp"
#include "iwal/error.hpp"
#include "iwal/rng.hpp"
#include "iwal/threshold.hpp"

namespace iwal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

DataDistribution study_distribution(const StudyParams& p) {
    if (p.margin_profile)
        return {Uniform01{},
                tsybakov_labeler(p.margin_alpha, p.base_boundary, p.margin_width, p.eta)};
    return {Uniform01{}, FlipLabeler{ThresholdRule{p.base_boundary, +1}, p.eta}};
}

std::vector<double> class_true_errors(const HypothesisClass& cls,
                                      const DataDistribution& dist) {
    std::vector<double> errs(cls.size());
    for (std::size_t id = 0; id < cls.size(); ++id)
        errs[id] = true_error(cls.at(id), dist);
    return errs;
}

std::vector<double> queries_at_checkpoint(const Study& study, std::size_t cp_index) {
    std::vector<double> queries;
    queries.reserve(study.seeds.size());
    for (const SeedOutcome& s : study.seeds)
        queries.push_back(static_cast<double>(s.checkpoints.at(cp_index).queries));
    return queries;
}

// consistency acceptance: every checkpoint excess within the envelope
bool seed_consistent(const Study& study, const SeedOutcome& s) {
    for (std::size_t i = 0; i < s.checkpoints.size(); ++i)
        if (s.checkpoint_excess[i] >
            consistency_bound(study.c0_used, s.checkpoints[i].n))
            return false;
    return true;
}

std::vector<double> theta_grid() {
    std::vector<double> grid;
    for (int i = 1; i <= 100; ++i) grid.push_back(0.01 * i);
    return grid;
}

} // namespace

// --- study runner ------------------------------------------------------------------

Study run_study(const StudyParams& params) {
    if (params.checkpoints.empty() || params.checkpoints.back() != params.rounds)
        throw ConfigError("study checkpoints must end at the round horizon");
    if (params.seed_count == 0) throw ConfigError("study needs at least one seed");

    Study study;
    study.params = params;
    study.cls = std::make_shared<const HypothesisClass>(
        threshold_grid(params.class_size, params.grid_lo, params.grid_hi));
    study.dist = study_distribution(params);
    study.truth = ground_truth(*study.cls, study.dist);
    study.c0_used = params.auto_c0
                        ? default_c0(params.class_size, params.delta, params.rounds)
                        : params.c0;

    ThresholdConfig cfg =
        params.experimental
            ? ThresholdConfig::experimental_mode(study.c0_used, params.delta, 1.0, 1.0)
            : ThresholdConfig::standard(study.c0_used, params.delta);

    std::vector<double> errs = class_true_errors(*study.cls, study.dist);
    const Hypothesis& hstar = study.cls->at(study.truth.hstar_id);

    EngineOptions opts;
    opts.checkpoints = params.checkpoints;
    opts.keep_rounds = params.keep_rounds;

    study.seeds.reserve(params.seed_count);
    for (std::uint64_t i = 0; i < params.seed_count; ++i) {
        std::uint64_t stream_seed = substream_seed(params.master_seed, 2 * i);
        std::uint64_t coin_seed = substream_seed(params.master_seed, 2 * i + 1);
        LabeledStream stream(study.dist, stream_seed);
        IwalEngine engine(study.cls, cfg, coin_seed);
        RunResult r = engine.run(stream, params.rounds, opts);

        SeedOutcome out;
        out.checkpoints = r.checkpoints;
        out.checkpoint_excess.reserve(r.checkpoints.size());
        for (const Checkpoint& cp : r.checkpoints)
            out.checkpoint_excess.push_back(errs[cp.erm_id] - study.truth.err_star);
        out.final_excess_active = out.checkpoint_excess.back();

        if (params.keep_rounds) {
            const Hypothesis& h_final = study.cls->at(r.final_erm_id);
            for (const RoundRecord& rec : r.round_log)
                if (h_final(rec.x) != hstar(rec.x))
                    out.floor_min_p = std::min(out.floor_min_p, rec.p);
        }
        if (params.with_passive) {
            LabeledStream replay(study.dist, stream_seed);
            RunResult base = passive_baseline(study.cls, replay, params.rounds);
            out.final_excess_passive = errs[base.final_erm_id] - study.truth.err_star;
        }
        study.seeds.push_back(std::move(out));
    }
    return study;
}

StudyParams consistency_study_params() {
    StudyParams p;
    p.auto_c0 = true;
    p.with_passive = true;
    p.keep_rounds = true;
    return p;
}

StudyParams separable_study_params() {
    StudyParams p;
    p.base_boundary = p.grid_lo; // realizable target at the grid edge
    p.eta = 0.0;
    p.experimental = true;
    p.checkpoints = {500, 1000, 10000};
    return p;
}

StudyParams noisy_study_params() {
    StudyParams p;
    p.base_boundary = p.grid_lo;
    p.eta = 0.1;
    p.experimental = true;
    return p;
}

StudyParams tsybakov_study_params() {
    StudyParams p;
    p.base_boundary = p.grid_lo;
    p.eta = 0.1;
    p.margin_profile = true; // alpha 1: flip rate constant away from the boundary
    p.margin_alpha = 1.0;
    p.experimental = true;
    p.rounds = 100000;
    p.checkpoints = {1000, 10000, 100000};
    p.seed_count = 51;
    return p;
}

// --- checks over a study -------------------------------------------------------------

CheckReport check_consistency(const Study& study) {
    CheckReport rep;
    rep.name = "consistency";
    std::size_t ok = 0;
    std::vector<double> gaps;
    gaps.reserve(study.seeds.size());
    for (const SeedOutcome& s : study.seeds) {
        if (seed_consistent(study, s)) ++ok;
        if (study.params.with_passive)
            gaps.push_back(std::abs(s.final_excess_active - s.final_excess_passive));
    }
    double coverage = static_cast<double>(ok) / static_cast<double>(study.seeds.size());
    double med_gap = study.params.with_passive ? median(gaps) : 0.0;
    bool cover_ok = coverage >= 0.93;
    bool gap_ok = !study.params.with_passive || med_gap < 0.02;
    rep.passed = cover_ok && gap_ok;
    rep.metrics = {{"coverage", coverage},
                   {"median_active_passive_gap", med_gap},
                   {"c0", study.c0_used},
                   {"final_bound", consistency_bound(study.c0_used, study.params.rounds)}};
    rep.detail = "envelope held in " + fmt(100.0 * coverage) +
                 "% of seeds; median active-passive gap " + fmt(med_gap);
    return rep;
}

CheckReport check_query_floor(const Study& study) {
    if (!study.params.keep_rounds)
        throw ConfigError("query-floor check needs per-round logs");
    CheckReport rep;
    rep.name = "query-floor";
    double worst = 1.0;
    std::size_t accepted = 0;
    for (const SeedOutcome& s : study.seeds) {
        if (!seed_consistent(study, s)) continue;
        ++accepted;
        worst = std::min(worst, s.floor_min_p);
    }
    rep.passed = accepted > 0 && worst >= 0.5;
    rep.metrics = {{"min_disagreement_p", worst},
                   {"accepted_seeds", static_cast<double>(accepted)}};
    rep.detail = "lowest query probability on rounds disagreeing with the target: " +
                 fmt(worst) + " over " + fmt(static_cast<double>(accepted)) +
                 " accepted seeds";
    return rep;
}

CheckReport check_separable_complexity(const Study& study) {
    if (study.seeds.front().checkpoints.size() < 3)
        throw ConfigError("separable complexity check needs three checkpoints");
    CheckReport rep;
    rep.name = "separable-complexity";
    std::vector<std::pair<std::uint64_t, double>> fit_pts;
    std::vector<double> meds;
    for (std::size_t i = 0; i < study.params.checkpoints.size(); ++i) {
        double med = median(queries_at_checkpoint(study, i));
        meds.push_back(med);
        if (i + 1 < study.params.checkpoints.size())
            fit_pts.push_back({study.params.checkpoints[i], med});
    }
    QueryCurveFit fit = fit_query_curve(fit_pts);
    std::uint64_t n_final = study.params.checkpoints.back();
    double fitted = query_curve_eval(fit, n_final);
    double med_final = meds.back();
    double ratio = fitted > 0.0 ? med_final / fitted : kInf;
    double rate = med_final / static_cast<double>(n_final);
    rep.passed = ratio <= 1.5 && rate <= 0.25;
    rep.metrics = {{"median_final", med_final},
                   {"fitted_final", fitted},
                   {"ratio", ratio},
                   {"rate_final", rate},
                   {"sqrt_coeff", fit.sqrt_coeff},
                   {"log3_coeff", fit.log3_coeff}};
    rep.detail = "median queries " + fmt(med_final) + " vs extrapolated " + fmt(fitted) +
                 " (ratio " + fmt(ratio) + "), rate " + fmt(rate);
    return rep;
}

CheckReport check_noisy_complexity(const Study& study) {
    CheckReport rep;
    rep.name = "noisy-complexity";
    DisagreementProfile prof = disagreement_coefficient(
        *study.cls, study.dist, study.truth.hstar_id, theta_grid());
    bool ok = true;
    double rate_final = 0.0, bound_final = 0.0;
    for (std::size_t i = 0; i < study.params.checkpoints.size(); ++i) {
        std::uint64_t n = study.params.checkpoints[i];
        double mean_q = 0.0;
        for (const SeedOutcome& s : study.seeds)
            mean_q += static_cast<double>(s.checkpoints[i].queries);
        mean_q /= static_cast<double>(study.seeds.size());
        double bound =
            thm3_query_bound_sum(prof.theta, study.truth.err_star, study.c0_used, n);
        if (mean_q > bound) ok = false;
        if (i + 1 == study.params.checkpoints.size()) {
            rate_final = mean_q / static_cast<double>(n);
            bound_final = bound / static_cast<double>(n);
        }
    }
    rep.passed = ok;
    rep.metrics = {{"theta", prof.theta},
                   {"err_star", study.truth.err_star},
                   {"rate_floor", 2.0 * prof.theta * study.truth.err_star},
                   {"rate_final", rate_final},
                   {"bound_rate_final", bound_final}};
    rep.detail = "final rate " + fmt(rate_final) + " vs per-round envelope " +
                 fmt(bound_final) + " (floor " +
                 fmt(2.0 * prof.theta * study.truth.err_star) + ")";
    return rep;
}

CheckReport check_excess_decay(const Study& study) {
    if (study.params.checkpoints.size() < 2)
        throw ConfigError("excess decay check needs two checkpoints");
    CheckReport rep;
    rep.name = "excess-decay";
    std::size_t last = study.params.checkpoints.size() - 1;
    auto mean_excess = [&](std::size_t i) {
        double sum = 0.0;
        for (const SeedOutcome& s : study.seeds) sum += s.checkpoint_excess[i];
        return sum / static_cast<double>(study.seeds.size());
    };
    double e_a = mean_excess(last - 1);
    double e_b = mean_excess(last);
    double n_a = static_cast<double>(study.params.checkpoints[last - 1]);
    double n_b = static_cast<double>(study.params.checkpoints[last]);
    double slope;
    if (e_b <= 0.0) {
        slope = -kInf; // the final minimizer is exact in every seed
        rep.passed = true;
    } else if (e_a <= 0.0) {
        slope = kInf;
        rep.passed = false;
    } else {
        slope = (std::log(e_b) - std::log(e_a)) / (std::log(n_b) - std::log(n_a));
        rep.passed = slope <= -0.7;
    }
    rep.metrics = {{"mean_excess_a", e_a}, {"mean_excess_b", e_b}, {"slope", slope}};
    rep.detail = "mean excess " + fmt(e_a) + " -> " + fmt(e_b) + ", log-log slope " +
                 fmt(slope);
    return rep;
}

CheckReport check_tsybakov_slope(const Study& study) {
    if (study.params.checkpoints.size() < 2)
        throw ConfigError("slope check needs at least two checkpoints");
    CheckReport rep;
    rep.name = "tsybakov-slope";
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < study.params.checkpoints.size(); ++i)
        pts.push_back({static_cast<double>(study.params.checkpoints[i]),
                       median(queries_at_checkpoint(study, i))});
    double slope = loglog_slope(pts);
    rep.passed = slope >= 0.35 && slope <= 0.65;
    rep.metrics = {{"slope", slope}};
    for (const auto& [n, q] : pts)
        rep.metrics.push_back({"median_at_" + fmt(n), q});
    rep.detail = "median-query growth exponent " + fmt(slope) + " (target 0.5 +- 0.15)";
    return rep;
}

// --- self-contained checks -----------------------------------------------------------

CheckReport check_unbiasedness(const UnbiasednessParams& p) {
    if (p.points == 0 || p.trials < 2) throw ConfigError("degenerate unbiasedness setup");
    if (!(p.query_p > 0.0 && p.query_p <= 1.0))
        throw ConfigError("query probability must lie in (0, 1]");
    CheckReport rep;
    rep.name = "unbiasedness";

    CounterRng xs(substream_seed(p.seed, 1));
    CounterRng flips(substream_seed(p.seed, 2));
    CounterRng coins(substream_seed(p.seed, 3));

    const double boundary = 0.5, eta = 0.1;
    std::vector<double> hs = {0.1, 0.3, 0.5, 0.7, 0.9};
    std::vector<std::vector<double>> mism(hs.size(), std::vector<double>(p.points));
    std::vector<double> full(hs.size(), 0.0);
    for (std::uint64_t i = 0; i < p.points; ++i) {
        double x = xs.uniform(i + 1);
        bool base_pos = x >= boundary;
        bool pos = flips.uniform(i + 1) < eta ? !base_pos : base_pos;
        for (std::size_t h = 0; h < hs.size(); ++h) {
            bool pred = x >= hs[h];
            mism[h][i] = (pred != pos) ? 1.0 : 0.0;
            full[h] += mism[h][i];
        }
    }
    for (double& f : full) f /= static_cast<double>(p.points);

    std::vector<double> sum(hs.size(), 0.0), sumsq(hs.size(), 0.0);
    std::vector<char> queried(p.points);
    double w = 1.0 / p.query_p;
    for (std::uint64_t t = 0; t < p.trials; ++t) {
        // one shared query realization per trial, read by every hypothesis
        for (std::uint64_t i = 0; i < p.points; ++i)
            queried[i] = coins.uniform(t * p.points + i + 1) < p.query_p ? 1 : 0;
        for (std::size_t h = 0; h < hs.size(); ++h) {
            double est = 0.0;
            for (std::uint64_t i = 0; i < p.points; ++i)
                if (queried[i]) est += w * mism[h][i];
            est /= static_cast<double>(p.points);
            sum[h] += est;
            sumsq[h] += est * est;
        }
    }

    double max_z = 0.0;
    double trials = static_cast<double>(p.trials);
    for (std::size_t h = 0; h < hs.size(); ++h) {
        double mean = sum[h] / trials;
        double var = (sumsq[h] - trials * mean * mean) / (trials - 1.0);
        double se = std::sqrt(std::max(var, 0.0) / trials);
        double diff = std::abs(mean - full[h]);
        double z = diff == 0.0 ? 0.0 : (se > 0.0 ? diff / se : kInf);
        max_z = std::max(max_z, z);
    }
    rep.passed = max_z <= 3.0;
    rep.metrics = {{"max_z", max_z}, {"trials", trials}};
    rep.detail = "worst standardized bias " + fmt(max_z) + " over " +
                 fmt(static_cast<double>(hs.size())) + " hypotheses";
    return rep;
}

CheckReport check_root_properties(const RootCheckParams& p) {
    if (p.draws == 0) throw ConfigError("root check needs draws");
    CheckReport rep;
    rep.name = "root-solver";
    CounterRng rng(substream_seed(p.seed, 1));

    std::uint64_t failures = 0;
    double max_residual = 0.0, min_s = 1.0;
    for (std::uint64_t d = 0; d < p.draws; ++d) {
        std::uint64_t cell = 8 * d;
        double c0 = 2.0 * std::exp(rng.uniform(cell + 1) * std::log(150.0));
        bool small_k = d % 2 == 0;
        std::uint64_t k;
        if (small_k) {
            k = 2 + static_cast<std::uint64_t>(rng.uniform(cell + 2) * 49.0);
        } else {
            double lk = std::log(2.0) +
                        rng.uniform(cell + 2) * (std::log(1e6) - std::log(2.0));
            k = std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::exp(lk)));
        }

        ThresholdConfig cfg = ThresholdConfig::standard(c0, 0.05);
        double tau = trigger_boundary(cfg, k);
        // the recursion keeps weights at round i below i^i, so the gap at
        // round k can never exceed the average of those caps
        double g_attain = 0.0;
        if (small_k) {
            for (std::uint64_t i = 1; i < k; ++i)
                g_attain += std::pow(static_cast<double>(i), static_cast<double>(i));
            g_attain /= static_cast<double>(k - 1);
        }
        double g_hi = small_k ? std::max(g_attain, tau * 1.01) : 100.0 * tau;
        // log-uniform in (tau, g_hi]; the 0.01 exponent floor keeps g far
        // enough above the trigger that the root stays strictly below 1
        double g = tau * std::exp((0.01 + 0.99 * rng.uniform(cell + 3)) *
                                  std::log(g_hi / tau));

        double s = query_probability(cfg, {k, g});
        bool ok = s > 0.0 && s < 1.0;
        if (ok) {
            double rhs = (cfg.c1 / std::sqrt(s) - cfg.c1 + 1.0) *
                             std::sqrt(epsilon_budget(cfg, k)) +
                         (cfg.c2 / s - cfg.c2 + 1.0) * epsilon_budget(cfg, k);
            double residual = std::abs(rhs - g);
            max_residual = std::max(max_residual, residual / std::max(1.0, g));
            ok = residual <= 1e-9 * std::max(1.0, g);
        }
        if (ok) ok = query_probability(cfg, {k, g * 1.05}) <= s + 1e-12;
        if (ok && small_k && g <= g_attain) {
            double floor = std::exp(-static_cast<double>(k) *
                                    std::log(static_cast<double>(k)));
            ok = s >= floor;
        }
        min_s = std::min(min_s, s);
        if (!ok) ++failures;
    }
    rep.passed = failures == 0;
    rep.metrics = {{"failures", static_cast<double>(failures)},
                   {"max_rel_residual", max_residual},
                   {"min_root", min_s}};
    rep.detail = fmt(static_cast<double>(p.draws)) + " draws, max relative residual " +
                 fmt(max_residual) + ", smallest root " + fmt(min_s);
    return rep;
}

CheckReport check_deviation_coverage(const CoverageParams& p) {
    if (p.n == 0 || p.trials == 0 || p.tails.empty())
        throw ConfigError("degenerate coverage setup");
    CheckReport rep;
    rep.name = "deviation-coverage";

    DataDistribution dist{Uniform01{}, FlipLabeler{ThresholdRule{0.5, +1}, 0.1}};
    Hypothesis h(0, ThresholdRule{0.3, +1});
    double truth = true_error(h, dist);

    struct Policy {
        const char* tag;
        double r_max;
    };
    // policy 0: p(x) = 1 - 0.75x, point-dependent; policy 1: constant 1/2
    std::vector<Policy> policies = {{"pointwise", 4.0}, {"constant", 2.0}};

    CounterRng xs(substream_seed(p.seed, 1));
    CounterRng flips(substream_seed(p.seed, 2));
    CounterRng coins(substream_seed(p.seed, 3));

    bool all_ok = true;
    double worst_margin = kInf; // slackest pass margin, for the report
    for (std::size_t pol = 0; pol < policies.size(); ++pol) {
        std::vector<std::uint64_t> exceed(p.tails.size(), 0);
        for (std::uint64_t t = 0; t < p.trials; ++t) {
            double est = 0.0, r_n = 1.0;
            for (std::uint64_t i = 0; i < p.n; ++i) {
                std::uint64_t cell = (pol * p.trials + t) * p.n + i + 1;
                double x = xs.uniform(cell);
                bool base_pos = x >= 0.5;
                bool pos = flips.uniform(cell) < 0.1 ? !base_pos : base_pos;
                double q = pol == 0 ? 1.0 - 0.75 * x : 0.5;
                if (coins.uniform(cell) < q) {
                    bool pred = x >= 0.3;
                    if (pred != pos) est += 1.0 / q;
                    r_n = std::max(r_n, 1.0 / q);
                }
            }
            est /= static_cast<double>(p.n);
            double dev = std::abs(est - truth);
            for (std::size_t j = 0; j < p.tails.size(); ++j)
                if (dev > deviation_bound({p.tails[j], p.n, policies[pol].r_max, r_n}))
                    ++exceed[j];
        }
        for (std::size_t j = 0; j < p.tails.size(); ++j) {
            double fp = deviation_failure_prob(p.tails[j], policies[pol].r_max);
            if (fp >= 1.0) continue; // vacuous tail, nothing to test
            double freq =
                static_cast<double>(exceed[j]) / static_cast<double>(p.trials);
            double slack =
                3.0 * std::sqrt(fp * (1.0 - fp) / static_cast<double>(p.trials));
            if (freq > fp + slack) all_ok = false;
            worst_margin = std::min(worst_margin, fp + slack - freq);
            rep.metrics.push_back(
                {std::string(policies[pol].tag) + "_t" + fmt(p.tails[j]), freq});
        }
    }
    rep.passed = all_ok;
    rep.metrics.push_back({"worst_margin", worst_margin});
    rep.detail = "exceedance frequencies under both query policies; slackest margin " +
                 fmt(worst_margin);
    return rep;
}

CheckReport check_erm_equivalence(const ErmCheckParams& p) {
    if (p.instances == 0 || p.max_class < 2) throw ConfigError("degenerate erm setup");
    CheckReport rep;
    rep.name = "erm-oracle";
    CounterRng rng(substream_seed(p.seed, 1));
    std::uint64_t cell = 0;
    auto u = [&]() { return rng.uniform(++cell); };

    std::uint64_t mismatches = 0;
    for (std::uint64_t inst = 0; inst < p.instances; ++inst) {
        std::size_t m = 2 + static_cast<std::size_t>(u() * (p.max_class - 1));
        std::vector<HypothesisRule> rules;
        rules.reserve(m);
        for (std::size_t j = 0; j < m; ++j)
            rules.push_back(ThresholdRule{u(), u() < 0.5 ? +1 : -1});
        HypothesisClass cls(std::move(rules));

        WeightedSample s;
        std::uint64_t rounds = 1 + static_cast<std::uint64_t>(u() * (p.max_rounds - 1));
        for (std::uint64_t r = 1; r <= rounds; ++r) {
            s.advance_round();
            if (u() < 0.7)
                s.append({r, point1(u()),
                          u() < 0.5 ? Label::positive : Label::negative, 1.0 + 9.0 * u()});
        }

        // independent scan in storage order, the arithmetic erm must reproduce
        std::size_t scan_id = 0;
        double scan_total = kInf;
        for (std::size_t id = 0; id < cls.size(); ++id) {
            double tot = 0.0;
            for (const WeightedExample& ex : s.examples())
                if (cls.at(id)(ex.x) != ex.y) tot += ex.weight;
            if (tot < scan_total) {
                scan_total = tot;
                scan_id = id;
            }
        }
        ErmResult got = erm(cls, s);
        if (got.id != scan_id || got.total != scan_total) ++mismatches;

        Point xq = point1(u());
        Label forbidden = u() < 0.5 ? Label::positive : Label::negative;
        std::size_t c_id = 0;
        double c_total = kInf;
        bool c_any = false;
        for (std::size_t id = 0; id < cls.size(); ++id) {
            if (cls.at(id)(xq) == forbidden) continue;
            double tot = 0.0;
            for (const WeightedExample& ex : s.examples())
                if (cls.at(id)(ex.x) != ex.y) tot += ex.weight;
            if (!c_any || tot < c_total) {
                c_total = tot;
                c_id = id;
                c_any = true;
            }
        }
        auto got_c = erm_with_disagreement(cls, s, xq, forbidden);
        bool match = c_any ? (got_c.has_value() && got_c->id == c_id &&
                              got_c->total == c_total)
                           : !got_c.has_value();
        if (!match) ++mismatches;
    }
    rep.passed = mismatches == 0;
    rep.metrics = {{"instances", static_cast<double>(p.instances)},
                   {"mismatches", static_cast<double>(mismatches)}};
    rep.detail = fmt(static_cast<double>(p.instances)) +
                 " random instances, mismatches: " +
                 fmt(static_cast<double>(mismatches));
    return rep;
}

CheckReport check_theta_oracle() {
    CheckReport rep;
    rep.name = "theta-oracle";
    HypothesisClass cls(threshold_grid(101, 0.0, 1.0));
    DataDistribution dist{Uniform01{}, FlipLabeler{ThresholdRule{0.5, +1}, 0.1}};
    GroundTruth truth = ground_truth(cls, dist);
    DisagreementProfile prof =
        disagreement_coefficient(cls, dist, truth.hstar_id, theta_grid());
    rep.passed = std::abs(prof.theta - 2.0) <= 0.1 && !prof.degenerate;
    rep.metrics = {{"theta", prof.theta},
                   {"hstar_id", static_cast<double>(truth.hstar_id)}};
    rep.detail = "scanned coefficient " + fmt(prof.theta) + " vs closed form 2";
    return rep;
}

CheckReport check_hypothesis_deviation(const HypothesisDeviationParams& p) {
    if (p.rounds < 2 || p.runs == 0) throw ConfigError("degenerate deviation setup");
    CheckReport rep;
    rep.name = "hypothesis-deviation";

    auto cls = std::make_shared<const HypothesisClass>(threshold_grid(100, 0.005, 0.995));
    DataDistribution dist{Uniform01{}, FlipLabeler{ThresholdRule{0.5, +1}, 0.1}};
    GroundTruth truth = ground_truth(*cls, dist);
    const Hypothesis& hstar = cls->at(truth.hstar_id);
    std::vector<double> errs = class_true_errors(*cls, dist);
    double eps = epsilon_lemma1(p.rounds, cls->size(), 0.05);
    ThresholdConfig cfg = ThresholdConfig::experimental_mode(2.0, 0.05, 1.0, 1.0);

    EngineOptions opts;
    opts.keep_rounds = true;
    std::size_t ok_runs = 0;
    for (std::uint64_t i = 0; i < p.runs; ++i) {
        LabeledStream stream(dist, substream_seed(p.master_seed, 2 * i));
        IwalEngine engine(cls, cfg, substream_seed(p.master_seed, 2 * i + 1));
        RunResult r = engine.run(stream, p.rounds, opts);
        auto records = records_from_rounds(r.round_log);
        bool ok = true;
        for (std::size_t id = 0; id < cls->size() && ok; ++id) {
            const Hypothesis& h = cls->at(id);
            double lhs = lemma1_lhs(h, hstar, records, errs[id], truth.err_star);
            double bound = lemma1_bound(eps, pmin_for(h, hstar, records));
            ok = lhs <= bound;
        }
        if (ok) ++ok_runs;
    }
    double frac = static_cast<double>(ok_runs) / static_cast<double>(p.runs);
    rep.passed = frac >= 0.93;
    rep.metrics = {{"fraction", frac}, {"eps", eps}};
    rep.detail = "simultaneous per-hypothesis bound held in " + fmt(100.0 * frac) +
                 "% of runs (radius " + fmt(eps) + ")";
    return rep;
}

// --- registry ------------------------------------------------------------------------

std::vector<std::string> suite_names() {
    return {"unbiasedness",       "root-solver",       "deviation-coverage",
            "consistency",        "separable-complexity", "noisy-complexity",
            "tsybakov-slope",     "theta-oracle",      "erm-oracle",
            "hypothesis-deviation"};
}

std::vector<CheckReport> run_suite(const std::string& name) {
    if (name == "unbiasedness") return {check_unbiasedness()};
    if (name == "root-solver" || name == "lemma3-floor") return {check_root_properties()};
    if (name == "deviation-coverage" || name == "theorem1-coverage")
        return {check_deviation_coverage()};
    if (name == "consistency") {
        Study study = run_study(consistency_study_params());
        return {check_consistency(study), check_query_floor(study)};
    }
    if (name == "separable-complexity") {
        Study study = run_study(separable_study_params());
        return {check_separable_complexity(study)};
    }
    if (name == "noisy-complexity") {
        Study study = run_study(noisy_study_params());
        return {check_noisy_complexity(study), check_excess_decay(study)};
    }
    if (name == "tsybakov-slope") {
        Study study = run_study(tsybakov_study_params());
        return {check_tsybakov_slope(study)};
    }
    if (name == "theta-oracle") return {check_theta_oracle()};
    if (name == "erm-oracle") return {check_erm_equivalence()};
    if (name == "hypothesis-deviation") return {check_hypothesis_deviation()};
    throw ConfigError("unknown validation suite: " + name);
}

} // namespace iwal
