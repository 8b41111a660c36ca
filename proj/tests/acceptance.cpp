// End-to-end acceptance gates: one line per criterion, exit 0 only when all
// ten hold. Studies shared by two criteria run once.
#include <chrono>
#include <cstdio>
#include <vector>

#include "iwal/validators.hpp"

namespace {

struct Gate {
    int number;
    const char* label;
    iwal::CheckReport report;
    double seconds;
};

double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main() {
    using namespace iwal;
    std::vector<Gate> gates;

    auto timed = [&](int number, const char* label, auto&& make) {
        auto t0 = std::chrono::steady_clock::now();
        CheckReport rep = make();
        gates.push_back({number, label, std::move(rep), elapsed(t0)});
    };

    timed(1, "importance-weighted estimator is unbiased",
          [] { return check_unbiasedness(); });
    timed(2, "query probability solves its defining equation",
          [] { return check_root_properties(); });
    timed(3, "deviation bound covers importance-weighted estimates",
          [] { return check_deviation_coverage(); });

    auto t0 = std::chrono::steady_clock::now();
    Study consistency = run_study(consistency_study_params());
    double consistency_secs = elapsed(t0);
    gates.push_back({4, "active learning is consistent vs the passive baseline",
                     check_consistency(consistency), consistency_secs});

    timed(5, "separable streams query sublinearly", [] {
        return check_separable_complexity(run_study(separable_study_params()));
    });
    timed(6, "noisy streams respect the strict query envelope", [] {
        return check_noisy_complexity(run_study(noisy_study_params()));
    });
    timed(7, "margin-noise query growth has the predicted exponent", [] {
        return check_tsybakov_slope(run_study(tsybakov_study_params()));
    });
    timed(8, "disagreement coefficient oracle matches the closed form",
          [] { return check_theta_oracle(); });
    timed(9, "incremental erm equals the exhaustive scan",
          [] { return check_erm_equivalence(); });
    gates.push_back({10, "accepted runs keep query probability above one half",
                     check_query_floor(consistency), consistency_secs});

    bool all_passed = true;
    for (const Gate& g : gates) {
        std::printf("[%s] %2d. %s (%.1fs): %s\n", g.report.passed ? "PASS" : "FAIL",
                    g.number, g.label, g.seconds, g.report.detail.c_str());
        if (!g.report.passed) {
            for (const auto& [key, value] : g.report.metrics)
                std::printf("          %s = %.10g\n", key.c_str(), value);
            all_passed = false;
        }
    }
    std::printf("%s\n", all_passed ? "all acceptance gates hold"
                                   : "one or more acceptance gates failed");
    return all_passed ? 0 : 1;
}
