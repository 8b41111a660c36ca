#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "iwal/analysis.hpp"
#include "iwal/config.hpp"
#include "iwal/engine.hpp"
#include "iwal/error.hpp"
#include "iwal/rng.hpp"
#include "iwal/validators.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct Overrides {
    std::uint64_t rounds = 0;
    std::string c0;
    double delta = 0.0;
    std::string seeds;
    std::string checkpoints;
    std::string output_dir;
    bool has_rounds = false, has_c0 = false, has_delta = false;
    bool has_seeds = false, has_checkpoints = false, has_output_dir = false;
};

void add_override_options(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--rounds", ov.rounds, "override rounds")
        ->each([&](const std::string&) { ov.has_rounds = true; });
    cmd->add_option("--c0", ov.c0, "override threshold.c0 (number or 'auto')")
        ->each([&](const std::string&) { ov.has_c0 = true; });
    cmd->add_option("--delta", ov.delta, "override threshold.delta")
        ->each([&](const std::string&) { ov.has_delta = true; });
    cmd->add_option("--seeds", ov.seeds, "override seed list, e.g. 1,2,3")
        ->each([&](const std::string&) { ov.has_seeds = true; });
    cmd->add_option("--checkpoints", ov.checkpoints, "override checkpoints, e.g. 100,1000")
        ->each([&](const std::string&) { ov.has_checkpoints = true; });
    cmd->add_option("--output-dir", ov.output_dir, "override output directory")
        ->each([&](const std::string&) { ov.has_output_dir = true; });
}

std::vector<std::uint64_t> parse_u64_list(const std::string& text, const char* what) {
    std::vector<std::uint64_t> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        try {
            std::size_t pos = 0;
            unsigned long long v = std::stoull(item, &pos);
            if (pos != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw iwal::ConfigError(std::string(what) + " list has a bad entry: " + item);
        }
    }
    if (out.empty()) throw iwal::ConfigError(std::string(what) + " list is empty");
    return out;
}

iwal::ExperimentConfig load_with_overrides(const std::string& path, const Overrides& ov) {
    std::ifstream in(path);
    if (!in) throw iwal::ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw iwal::ConfigError("config file " + path + " is not valid json: " + e.what());
    }
    if (!j.is_object()) throw iwal::ConfigError("config root must be a json object");
    if (ov.has_rounds) j["rounds"] = ov.rounds;
    if (ov.has_delta) j["threshold"]["delta"] = ov.delta;
    if (ov.has_c0) {
        if (ov.c0 == "auto") {
            j["threshold"]["c0"] = "auto";
        } else {
            try {
                std::size_t pos = 0;
                double v = std::stod(ov.c0, &pos);
                if (pos != ov.c0.size()) throw std::invalid_argument(ov.c0);
                j["threshold"]["c0"] = v;
            } catch (const std::exception&) {
                throw iwal::ConfigError("--c0 must be a number or 'auto'");
            }
        }
    }
    if (ov.has_seeds) j["seeds"] = parse_u64_list(ov.seeds, "seed");
    if (ov.has_checkpoints)
        j["checkpoints"] = parse_u64_list(ov.checkpoints, "checkpoint");
    if (ov.has_output_dir) j["output_dir"] = ov.output_dir;
    return iwal::config_from_json(j);
}

void warn_if_beyond_horizon(const iwal::ExperimentConfig& cfg) {
    if (cfg.threshold.auto_c0 && cfg.threshold.horizon != 0 &&
        cfg.rounds > cfg.threshold.horizon)
        std::fprintf(stderr,
                     "warning: rounds %llu exceed the auto-c0 probe horizon %llu; "
                     "the covering budget may be too small at late rounds\n",
                     static_cast<unsigned long long>(cfg.rounds),
                     static_cast<unsigned long long>(cfg.threshold.horizon));
}

// True error with a deterministic Monte Carlo fallback for distributions the
// closed forms do not cover.
double hypothesis_error(const iwal::Hypothesis& h, const iwal::DataDistribution& dist,
                        std::map<std::size_t, double>& cache) {
    auto it = cache.find(h.id());
    if (it != cache.end()) return it->second;
    double err;
    try {
        err = iwal::true_error(h, dist);
    } catch (const iwal::UnsupportedError&) {
        err = iwal::true_error_mc(h, dist, 100000, 9001);
    }
    cache.emplace(h.id(), err);
    return err;
}

struct SeedRun {
    std::uint64_t seed = 0;
    iwal::RunResult result;
};

std::vector<SeedRun> run_seed_grid(const iwal::ExperimentConfig& cfg, bool keep_rounds) {
    iwal::ThresholdConfig tcfg = iwal::make_threshold_config(cfg);
    iwal::EngineOptions opts;
    opts.checkpoints = cfg.checkpoints;
    opts.keep_rounds = keep_rounds;
    std::vector<SeedRun> runs;
    runs.reserve(cfg.seeds.size());
    for (std::uint64_t seed : cfg.seeds) {
        iwal::LabeledStream stream(cfg.dist, seed);
        iwal::IwalEngine engine(cfg.cls, tcfg, iwal::substream_seed(seed, 3));
        runs.push_back({seed, engine.run(stream, cfg.rounds, opts)});
    }
    return runs;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw iwal::Error("cannot write " + path.string());
    out << text;
}

int cmd_run(const std::string& config_path, const Overrides& ov) {
    iwal::ExperimentConfig cfg = load_with_overrides(config_path, ov);
    warn_if_beyond_horizon(cfg);
    std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);

    write_text_file(dir / "effective_config.json",
                    iwal::config_to_json(cfg).dump(2) + "\n");

    std::vector<SeedRun> runs = run_seed_grid(cfg, true);
    std::map<std::size_t, double> err_cache;

    nlohmann::json per_seed = nlohmann::json::array();
    std::vector<double> query_counts, final_errors;
    std::vector<std::vector<double>> cp_errors(cfg.checkpoints.size());
    std::vector<std::vector<double>> cp_queries(cfg.checkpoints.size());
    for (const SeedRun& r : runs) {
        std::string tag = std::to_string(r.seed);
        iwal::write_trace_jsonl((dir / ("trace_" + tag + ".jsonl")).string(), r.result);
        std::ofstream csv(dir / ("sample_" + tag + ".csv"), std::ios::binary);
        iwal::write_sample_csv(iwal::sample_from_rounds(r.result.round_log), csv);

        nlohmann::json cps = nlohmann::json::array();
        for (std::size_t i = 0; i < r.result.checkpoints.size(); ++i) {
            const iwal::Checkpoint& cp = r.result.checkpoints[i];
            double err = hypothesis_error(cfg.cls->at(cp.erm_id), cfg.dist, err_cache);
            cps.push_back({{"n", cp.n},
                           {"erm_id", cp.erm_id},
                           {"queries", cp.queries},
                           {"true_error", err}});
            cp_errors[i].push_back(err);
            cp_queries[i].push_back(static_cast<double>(cp.queries));
        }
        double final_err =
            hypothesis_error(cfg.cls->at(r.result.final_erm_id), cfg.dist, err_cache);
        per_seed.push_back({{"seed", r.seed},
                            {"rounds", r.result.rounds},
                            {"queries", r.result.queries},
                            {"labels_opened", r.result.labels_opened},
                            {"final_erm_id", r.result.final_erm_id},
                            {"final_true_error", final_err},
                            {"checkpoints", cps}});
        query_counts.push_back(static_cast<double>(r.result.queries));
        final_errors.push_back(final_err);
    }

    double mean_q = 0.0;
    for (double q : query_counts) mean_q += q;
    mean_q /= static_cast<double>(query_counts.size());

    nlohmann::json cp_agg = nlohmann::json::array();
    for (std::size_t i = 0; i < cfg.checkpoints.size(); ++i)
        cp_agg.push_back({{"n", cfg.checkpoints[i]},
                          {"median_queries", iwal::median(cp_queries[i])},
                          {"median_true_error", iwal::median(cp_errors[i])}});

    nlohmann::json summary;
    summary["resolved_c0"] = iwal::resolve_c0(cfg);
    summary["rounds"] = cfg.rounds;
    summary["seed_count"] = cfg.seeds.size();
    summary["median_queries"] = iwal::median(query_counts);
    summary["mean_queries"] = mean_q;
    summary["median_final_true_error"] = iwal::median(final_errors);
    summary["checkpoints"] = cp_agg;
    summary["per_seed"] = per_seed;
    write_text_file(dir / "summary.json", summary.dump(2) + "\n");

    std::printf("ran %zu seed(s) x %llu rounds, median queries %g\n", runs.size(),
                static_cast<unsigned long long>(cfg.rounds),
                iwal::median(query_counts));
    std::printf("outputs in %s\n", dir.string().c_str());
    return kExitPass;
}

int cmd_bounds(const std::string& config_path, const Overrides& ov) {
    iwal::ExperimentConfig cfg = load_with_overrides(config_path, ov);
    warn_if_beyond_horizon(cfg);
    std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);

    std::vector<SeedRun> runs = run_seed_grid(cfg, false);
    double c0 = iwal::resolve_c0(cfg);

    // disagreement geometry when the distribution has closed forms; the
    // envelope columns go empty otherwise
    bool have_theta = true;
    double theta = 0.0, err_star = 0.0;
    try {
        iwal::GroundTruth truth = iwal::ground_truth(*cfg.cls, cfg.dist);
        std::vector<double> grid;
        for (int i = 1; i <= 100; ++i) grid.push_back(0.01 * i);
        theta = iwal::disagreement_coefficient(*cfg.cls, cfg.dist, truth.hstar_id, grid)
                    .theta;
        err_star = truth.err_star;
    } catch (const iwal::UnsupportedError&) {
        have_theta = false;
    }

    std::vector<std::pair<std::uint64_t, double>> med;
    for (std::size_t i = 0; i < cfg.checkpoints.size(); ++i) {
        std::vector<double> qs;
        for (const SeedRun& r : runs)
            qs.push_back(static_cast<double>(r.result.checkpoints[i].queries));
        med.push_back({cfg.checkpoints[i], iwal::median(qs)});
    }
    bool have_fit = med.size() >= 2;
    iwal::QueryCurveFit fit;
    if (have_fit)
        fit = iwal::fit_query_curve({med.begin(), med.begin() + 2});

    std::ostringstream csv;
    csv << "n,median_queries,mean_queries,consistency_bound,thm3_strict,thm3_fitted\n";
    char buf[256];
    for (std::size_t i = 0; i < cfg.checkpoints.size(); ++i) {
        std::uint64_t n = cfg.checkpoints[i];
        double mean_q = 0.0;
        for (const SeedRun& r : runs)
            mean_q += static_cast<double>(r.result.checkpoints[i].queries);
        mean_q /= static_cast<double>(runs.size());
        std::string strict = "";
        if (have_theta) {
            std::snprintf(buf, sizeof(buf), "%.10g",
                          iwal::thm3_query_bound(iwal::Thm3Constants::strict(), theta,
                                                 err_star, c0, n));
            strict = buf;
        }
        std::string fitted = "";
        if (have_fit) {
            std::snprintf(buf, sizeof(buf), "%.10g", iwal::query_curve_eval(fit, n));
            fitted = buf;
        }
        std::snprintf(buf, sizeof(buf), "%llu,%.10g,%.10g,%.10g,",
                      static_cast<unsigned long long>(n), med[i].second, mean_q,
                      iwal::consistency_bound(c0, n));
        csv << buf << strict << "," << fitted << "\n";
    }
    write_text_file(dir / "bounds.csv", csv.str());
    std::printf("%s", csv.str().c_str());
    std::printf("wrote %s\n", (dir / "bounds.csv").string().c_str());
    return kExitPass;
}

int cmd_validate(const std::vector<std::string>& names, bool list_only) {
    if (list_only) {
        for (const std::string& n : iwal::suite_names()) std::printf("%s\n", n.c_str());
        return kExitPass;
    }
    std::vector<std::string> selected = names.empty() ? iwal::suite_names() : names;
    bool all_passed = true;
    for (const std::string& name : selected) {
        std::vector<iwal::CheckReport> reports = iwal::run_suite(name);
        for (const iwal::CheckReport& r : reports) {
            std::printf("[%s] %s: %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                        r.detail.c_str());
            for (const auto& [key, value] : r.metrics)
                std::printf("    %s = %.10g\n", key.c_str(), value);
            if (!r.passed) all_passed = false;
        }
        std::fflush(stdout);
    }
    return all_passed ? kExitPass : kExitFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"importance-weighted active learning experiments"};
    app.require_subcommand(1);

    std::string run_config;
    Overrides run_ov;
    CLI::App* run = app.add_subcommand(
        "run", "run the active learner over a seed grid, write traces and a summary");
    run->add_option("--config", run_config, "experiment config json")->required();
    add_override_options(run, run_ov);

    std::string bounds_config;
    Overrides bounds_ov;
    CLI::App* bounds = app.add_subcommand(
        "bounds", "tabulate measured query counts against the guarantee curves");
    bounds->add_option("--config", bounds_config, "experiment config json")->required();
    add_override_options(bounds, bounds_ov);

    std::vector<std::string> suite_args;
    bool list_suites = false;
    CLI::App* validate =
        app.add_subcommand("validate", "run named validation suites (default: all)");
    validate->add_option("suites", suite_args, "suite names");
    validate->add_flag("--list", list_suites, "list available suites and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitPass : kExitConfig;
    }

    try {
        if (run->parsed()) return cmd_run(run_config, run_ov);
        if (bounds->parsed()) return cmd_bounds(bounds_config, bounds_ov);
        return cmd_validate(suite_args, list_suites);
    } catch (const iwal::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFailure;
    }
}
