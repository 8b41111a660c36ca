#pragma once

#include <cstdint>

#include "iwal/error.hpp"

namespace iwal {

// Slope constants of the query-probability equation. Standard values are
// c1 = 5 + 2*sqrt(2) and c2 = 5; experimental mode admits overrides (the
// classic practical choice is c1 = c2 = 1) at the price of the deviation
// guarantees. c3..c5 are the derived analysis constants; they are only
// meaningful at the standard c1, c2.
struct ThresholdConfig {
    double c0 = 2.0;          // budget scale, >= 2 outside experimental mode
    double delta = 0.05;      // confidence parameter in (0, 1]
    double c1 = 0.0;
    double c2 = 0.0;
    double degenerate_p = 1.0; // used when no hypothesis disagrees at x
    bool experimental = false;

    double c3() const;
    double c4() const;
    double c5() const;

    static ThresholdConfig standard(double c0, double delta);
    static ThresholdConfig experimental_mode(double c0, double delta, double c1,
                                             double c2, double degenerate_p = 1.0);
};

double standard_c1();
double standard_c2();

// Sample-complexity radius for a finite class:
//   eps_n = 16 * ln(2 * (3 + n*log2(n)) * n * (n+1) * m / delta) / n.
// Natural log outside, binary log inside. n >= 1, m >= 1.
double epsilon_lemma1(std::uint64_t n, std::uint64_t class_size, double delta);

// Smallest budget scale that dominates the radius over the horizon:
//   max(2, max_{1<=n<=horizon} n * eps_n / ln(n+1)),
// so eps_n <= c0 * ln(n+1) / n for every probed n.
double default_c0(std::uint64_t class_size, double delta, std::uint64_t horizon);

// Per-round budget eps = c0 * ln(k) / (k - 1). Round 1 has an infinite
// budget (ln(1)/0 reads as infinity), so the first round always queries.
double epsilon_budget(const ThresholdConfig& cfg, std::uint64_t k);

// Gap value at which the query probability leaves 1: sqrt(eps) + eps.
double trigger_boundary(const ThresholdConfig& cfg, std::uint64_t k);

struct ThresholdInputs {
    std::uint64_t k = 1; // round index, 1-based
    double gap = 0.0;    // empirical error gap G_k; +inf marks a degenerate round
};

// Query probability for round k.
//   G <= sqrt(eps) + eps          -> 1
//   otherwise the positive root s of
//     G = (c1/sqrt(s) - c1 + 1)*sqrt(eps) + (c2/s - c2 + 1)*eps,
// evaluated in closed form: with D = G + (c1-1)*sqrt(eps) + (c2-1)*eps,
//     sqrt(s) = (c1*sqrt(eps) + sqrt(c1^2*eps + 4*D*c2*eps)) / (2*D).
// G = +inf returns the configured degenerate-round probability. The root is
// strictly inside (0, 1) and never falls below k^-k while G stays within the
// reachable range of importance-weighted gaps.
double query_probability(const ThresholdConfig& cfg, const ThresholdInputs& in);

} // namespace iwal
