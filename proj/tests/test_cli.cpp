#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "iwal/analysis.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

// run the installed binary with stderr folded in, capture stdout
CliResult run_cli(const std::string& args) {
    std::string cmd = std::string(IWAL_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult r;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe)) r.out.append(buf, n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path fresh_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("iwal_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

json small_config(const fs::path& output_dir) {
    json j;
    j["class"] = {{"form", "threshold_grid"}, {"count", 50}, {"lo", 0.005}, {"hi", 0.995}};
    j["stream"]["marginal"] = {{"kind", "uniform01"}};
    j["stream"]["labeler"] =
        json::parse(R"({"kind": "flip",
                        "base": {"form": "threshold", "t": 0.005, "orientation": 1},
                        "eta": 0.0})");
    j["threshold"] = {{"c0", 2.0}, {"delta", 0.05}, {"mode", "experimental"},
                      {"c1", 1.0}, {"c2", 1.0}};
    j["rounds"] = 400;
    j["checkpoints"] = {200, 400};
    j["seeds"] = {11, 12};
    j["output_dir"] = output_dir.string();
    return j;
}

fs::path write_config(const fs::path& dir, const json& j) {
    fs::path path = dir / "config.json";
    std::ofstream out(path);
    out << j.dump(2);
    return path;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> row;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) row.push_back(cell);
        if (line.size() && line.back() == ',') row.push_back("");
        rows.push_back(row);
    }
    return rows;
}

} // namespace

TEST_CASE("run emits a reproducible bundle per seed") {
    fs::path work = fresh_dir("run");
    fs::path out_a = work / "a";
    fs::path out_b = work / "b";
    fs::path cfg_a = write_config(work, small_config(out_a));

    CliResult first = run_cli("run --config " + cfg_a.string());
    CHECK(first.exit_code == 0);
    for (const char* name : {"effective_config.json", "summary.json", "trace_11.jsonl",
                             "trace_12.jsonl", "sample_11.csv", "sample_12.csv"})
        CHECK(fs::exists(out_a / name));

    // identical config rerun into a different directory: every data file equal
    CliResult second =
        run_cli("run --config " + cfg_a.string() + " --output-dir " + out_b.string());
    CHECK(second.exit_code == 0);
    for (const char* name :
         {"summary.json", "trace_11.jsonl", "trace_12.jsonl", "sample_11.csv"})
        CHECK(read_file(out_a / name) == read_file(out_b / name));

    json echo_a = json::parse(read_file(out_a / "effective_config.json"));
    json echo_b = json::parse(read_file(out_b / "effective_config.json"));
    echo_a.erase("output_dir");
    echo_b.erase("output_dir");
    CHECK(echo_a == echo_b);

    json summary = json::parse(read_file(out_a / "summary.json"));
    CHECK(summary["seed_count"] == 2);
    CHECK(summary["per_seed"].size() == 2);
    for (const auto& seed : summary["per_seed"]) {
        CHECK(seed["queries"] == seed["labels_opened"]);
        CHECK(seed["checkpoints"].size() == 2);
    }

    fs::remove_all(work);
}

TEST_CASE("a one-round run queries exactly once per seed") {
    fs::path work = fresh_dir("one_round");
    json cfg = small_config(work / "out");
    cfg["rounds"] = 1;
    cfg["checkpoints"] = {1};
    cfg["seeds"] = {3, 4, 5};
    CliResult r = run_cli("run --config " + write_config(work, cfg).string());
    CHECK(r.exit_code == 0);
    json summary = json::parse(read_file(work / "out" / "summary.json"));
    for (const auto& seed : summary["per_seed"]) {
        CHECK(seed["queries"] == 1);
        CHECK(seed["labels_opened"] == 1);
    }
    fs::remove_all(work);
}

TEST_CASE("bounds tabulates measured queries against the guarantee curves") {
    fs::path work = fresh_dir("bounds");
    fs::path out = work / "out";
    fs::path cfg = write_config(work, small_config(out));

    CliResult ran = run_cli("run --config " + cfg.string());
    REQUIRE(ran.exit_code == 0);
    json summary = json::parse(read_file(out / "summary.json"));

    CliResult r = run_cli("bounds --config " + cfg.string());
    CHECK(r.exit_code == 0);
    auto rows = read_csv(out / "bounds.csv");
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"n", "median_queries", "mean_queries",
                                              "consistency_bound", "thm3_strict",
                                              "thm3_fitted"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 6);
        std::uint64_t n = std::stoull(rows[i][0]);
        CHECK(n == summary["checkpoints"][i - 1]["n"]);
        // measured column matches the run summary for the identical config
        CHECK(std::stod(rows[i][1]) ==
              doctest::Approx(summary["checkpoints"][i - 1]["median_queries"]
                                  .get<double>())
                  .epsilon(1e-9));
        CHECK(std::stod(rows[i][3]) ==
              doctest::Approx(iwal::consistency_bound(2.0, n)).epsilon(1e-9));
        CHECK_FALSE(rows[i][4].empty()); // strict envelope present
        CHECK_FALSE(rows[i][5].empty()); // fitted envelope present
    }
    fs::remove_all(work);
}

TEST_CASE("validate runs named suites and reflects outcomes in the exit code") {
    CliResult list = run_cli("validate --list");
    CHECK(list.exit_code == 0);
    CHECK(list.out.find("unbiasedness") != std::string::npos);
    CHECK(list.out.find("erm-oracle") != std::string::npos);

    CliResult ok = run_cli("validate unbiasedness");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("[PASS] unbiasedness") != std::string::npos);

    CliResult unknown = run_cli("validate no-such-suite");
    CHECK(unknown.exit_code == 2);
    CHECK(unknown.out.find("no-such-suite") != std::string::npos);
}

TEST_CASE("configuration problems exit with the dedicated code") {
    fs::path work = fresh_dir("bad");
    json cfg = small_config(work / "out");
    cfg["mystery"] = true;
    CliResult unknown_key = run_cli("run --config " + write_config(work, cfg).string());
    CHECK(unknown_key.exit_code == 2);
    CHECK(unknown_key.out.find("mystery") != std::string::npos);

    CliResult missing = run_cli("run --config " + (work / "absent.json").string());
    CHECK(missing.exit_code == 2);

    CliResult no_option = run_cli("run");
    CHECK(no_option.exit_code == 2);

    json bad_override = small_config(work / "out");
    CliResult bad_c0 = run_cli("run --config " +
                               write_config(work, bad_override).string() + " --c0 fast");
    CHECK(bad_c0.exit_code == 2);
    fs::remove_all(work);
}
