#include "iwal/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace iwal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_common(const ThresholdConfig& cfg) {
    if (!std::isfinite(cfg.c0) || cfg.c0 <= 0.0)
        throw ConfigError("c0 must be positive and finite");
    if (!(cfg.delta > 0.0) || cfg.delta > 1.0)
        throw ConfigError("delta must lie in (0, 1]");
    if (!(cfg.c1 > 0.0) || !(cfg.c2 > 0.0))
        throw ConfigError("c1 and c2 must be positive");
    if (!(cfg.degenerate_p > 0.0) || cfg.degenerate_p > 1.0)
        throw ConfigError("degenerate probability must lie in (0, 1]");
}

} // namespace

double standard_c1() { return 5.0 + 2.0 * std::sqrt(2.0); }
double standard_c2() { return 5.0; }

double ThresholdConfig::c3() const {
    const double r = (c1 + std::sqrt(2.0)) / (c1 - 2.0);
    return r * r;
}

double ThresholdConfig::c4() const {
    const double r = c1 + std::sqrt(c3());
    return r * r;
}

double ThresholdConfig::c5() const { return c2 + c3(); }

ThresholdConfig ThresholdConfig::standard(double c0, double delta) {
    ThresholdConfig cfg;
    cfg.c0 = c0;
    cfg.delta = delta;
    cfg.c1 = standard_c1();
    cfg.c2 = standard_c2();
    cfg.experimental = false;
    validate_common(cfg);
    if (cfg.c0 < 2.0) throw ConfigError("c0 must be at least 2");
    return cfg;
}

ThresholdConfig ThresholdConfig::experimental_mode(double c0, double delta,
                                                   double c1, double c2,
                                                   double degenerate_p) {
    ThresholdConfig cfg;
    cfg.c0 = c0;
    cfg.delta = delta;
    cfg.c1 = c1;
    cfg.c2 = c2;
    cfg.degenerate_p = degenerate_p;
    cfg.experimental = true;
    validate_common(cfg);
    return cfg;
}

double epsilon_lemma1(std::uint64_t n, std::uint64_t class_size, double delta) {
    if (n == 0) throw ConfigError("epsilon_lemma1 requires n >= 1");
    if (class_size == 0) throw ConfigError("epsilon_lemma1 requires a nonempty class");
    if (!(delta > 0.0) || delta > 1.0) throw ConfigError("delta must lie in (0, 1]");
    const double nd = static_cast<double>(n);
    // log of the product, term by term, to dodge overflow at large n * m.
    const double log_arg = std::log(2.0) + std::log(3.0 + nd * std::log2(nd)) +
                           std::log(nd) + std::log(nd + 1.0) +
                           std::log(static_cast<double>(class_size)) -
                           std::log(delta);
    return 16.0 * log_arg / nd;
}

double default_c0(std::uint64_t class_size, double delta, std::uint64_t horizon) {
    if (horizon == 0) throw ConfigError("default_c0 requires a horizon of at least 1");
    double best = 2.0;
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        const double nd = static_cast<double>(n);
        const double ratio = nd * epsilon_lemma1(n, class_size, delta) / std::log(nd + 1.0);
        best = std::max(best, ratio);
    }
    return best;
}

double epsilon_budget(const ThresholdConfig& cfg, std::uint64_t k) {
    validate_common(cfg);
    if (k == 0) throw ConfigError("rounds are 1-based");
    if (k == 1) return kInf;
    return cfg.c0 * std::log(static_cast<double>(k)) / static_cast<double>(k - 1);
}

double trigger_boundary(const ThresholdConfig& cfg, std::uint64_t k) {
    const double eps = epsilon_budget(cfg, k);
    if (std::isinf(eps)) return kInf;
    return std::sqrt(eps) + eps;
}

double query_probability(const ThresholdConfig& cfg, const ThresholdInputs& in) {
    const double eps = epsilon_budget(cfg, in.k);
    if (std::isnan(in.gap)) throw Error("gap is NaN");
    if (in.gap < 0.0) throw Error("gap must be nonnegative");
    if (std::isinf(in.gap) && !std::isinf(eps)) return cfg.degenerate_p;
    const double root_eps = std::sqrt(eps);
    if (std::isinf(eps) || in.gap <= root_eps + eps) return 1.0;
    const double d = in.gap + (cfg.c1 - 1.0) * root_eps + (cfg.c2 - 1.0) * eps;
    const double disc = cfg.c1 * cfg.c1 * eps + 4.0 * d * cfg.c2 * eps;
    const double root_s = (cfg.c1 * root_eps + std::sqrt(disc)) / (2.0 * d);
    const double s = root_s * root_s;
    if (!(s > 0.0))
        throw Error("query probability underflowed at round " + std::to_string(in.k));
    return std::min(s, 1.0);
}

} // namespace iwal
