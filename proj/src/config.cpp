#include "iwal/config.hpp"

#include <fstream>
#include <set>

#include "iwal/error.hpp"

namespace iwal {

namespace {

// exact-key validation with an optional tail: extras always reject,
// omissions reject only for required keys
void check_keys(const nlohmann::json& j, const std::string& where,
                std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional = {}) {
    if (!j.is_object()) throw ConfigError(where + " must be a json object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : required)
            if (item.key() == k) { known = true; break; }
        for (const char* k : optional)
            if (item.key() == k) { known = true; break; }
        if (!known)
            throw ConfigError("unknown key in " + where + ": " + item.key());
    }
    for (const char* k : required)
        if (!j.contains(k))
            throw ConfigError(where + " missing key: " + std::string(k));
}

double number_at(const nlohmann::json& j, const char* key, const std::string& where) {
    const auto& v = j.at(key);
    if (!v.is_number())
        throw ConfigError(where + "." + key + " must be a number");
    return v.get<double>();
}

bool is_count(const nlohmann::json& v) {
    if (v.is_number_unsigned()) return true;
    return v.is_number_integer() && v.get<std::int64_t>() >= 0;
}

std::uint64_t count_at(const nlohmann::json& j, const char* key,
                       const std::string& where) {
    const auto& v = j.at(key);
    if (!is_count(v))
        throw ConfigError(where + "." + key + " must be a non-negative integer");
    return v.get<std::uint64_t>();
}

} // namespace

Marginal marginal_from_json(const nlohmann::json& j) {
    check_keys(j, "stream.marginal", {"kind"}, {"dim", "points"});
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "uniform01") {
        check_keys(j, "stream.marginal", {"kind"});
        return Uniform01{};
    }
    if (kind == "product_uniform") {
        check_keys(j, "stream.marginal", {"kind", "dim"});
        std::uint64_t dim = count_at(j, "dim", "stream.marginal");
        if (dim == 0) throw ConfigError("stream.marginal.dim must be positive");
        return ProductUniform{static_cast<std::size_t>(dim)};
    }
    if (kind == "pool") {
        check_keys(j, "stream.marginal", {"kind", "points"});
        std::vector<Point> pts;
        for (const auto& row : j.at("points"))
            pts.push_back(Point{row.get<std::vector<double>>()});
        return PoolMarginal{std::make_shared<const PointPool>(std::move(pts))};
    }
    throw ConfigError("unknown marginal kind: " + kind);
}

nlohmann::json marginal_to_json(const Marginal& m) {
    nlohmann::json j;
    if (std::holds_alternative<Uniform01>(m)) {
        j["kind"] = "uniform01";
    } else if (const auto* pu = std::get_if<ProductUniform>(&m)) {
        j["kind"] = "product_uniform";
        j["dim"] = pu->dim;
    } else {
        const auto& pool = *std::get<PoolMarginal>(m).pool;
        j["kind"] = "pool";
        nlohmann::json pts = nlohmann::json::array();
        for (const Point& p : pool.points()) pts.push_back(p.coords);
        j["points"] = pts;
    }
    return j;
}

Labeler labeler_from_json(const nlohmann::json& j) {
    check_keys(j, "stream.labeler", {"kind"},
               {"base", "eta", "boundary", "alpha", "width", "eta_far"});
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "flip") {
        check_keys(j, "stream.labeler", {"kind", "base", "eta"});
        FlipLabeler l;
        l.base = rule_from_json(j.at("base"));
        l.eta = number_at(j, "eta", "stream.labeler");
        return l;
    }
    if (kind == "margin") {
        check_keys(j, "stream.labeler",
                   {"kind", "boundary", "alpha", "width", "eta_far"});
        MarginLabeler l;
        l.boundary = number_at(j, "boundary", "stream.labeler");
        l.alpha = number_at(j, "alpha", "stream.labeler");
        l.width = number_at(j, "width", "stream.labeler");
        l.eta_far = number_at(j, "eta_far", "stream.labeler");
        return l;
    }
    throw ConfigError("unknown labeler kind: " + kind);
}

nlohmann::json labeler_to_json(const Labeler& l) {
    nlohmann::json j;
    if (const auto* f = std::get_if<FlipLabeler>(&l)) {
        j["kind"] = "flip";
        j["base"] = rule_to_json(f->base);
        j["eta"] = f->eta;
    } else {
        const auto& m = std::get<MarginLabeler>(l);
        j["kind"] = "margin";
        j["boundary"] = m.boundary;
        j["alpha"] = m.alpha;
        j["width"] = m.width;
        j["eta_far"] = m.eta_far;
    }
    return j;
}

DataDistribution distribution_from_json(const nlohmann::json& j) {
    check_keys(j, "stream", {"marginal", "labeler"});
    DataDistribution d{marginal_from_json(j.at("marginal")),
                       labeler_from_json(j.at("labeler"))};
    validate_distribution(d);
    return d;
}

nlohmann::json distribution_to_json(const DataDistribution& d) {
    nlohmann::json j;
    j["marginal"] = marginal_to_json(d.marginal);
    j["labeler"] = labeler_to_json(d.labeler);
    return j;
}

std::shared_ptr<const HypothesisClass> class_spec_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("class spec must be a json object");
    if (j.contains("form")) {
        if (j.at("form").get<std::string>() != "threshold_grid")
            throw ConfigError("class spec form must be threshold_grid or an explicit hypotheses list");
        check_keys(j, "class", {"form", "count", "lo", "hi"}, {"orientation"});
        std::uint64_t count = count_at(j, "count", "class");
        int orientation = j.contains("orientation")
                              ? j.at("orientation").get<int>()
                              : +1;
        return std::make_shared<const HypothesisClass>(
            threshold_grid(static_cast<std::size_t>(count),
                           number_at(j, "lo", "class"), number_at(j, "hi", "class"),
                           orientation));
    }
    try {
        return std::make_shared<const HypothesisClass>(class_from_json(j));
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what()); // malformed document is a config problem
    }
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    check_keys(j, "config",
               {"class", "stream", "threshold", "rounds", "seeds", "output_dir"},
               {"checkpoints"});

    ExperimentConfig cfg;
    cfg.class_json = j.at("class");
    cfg.stream_json = j.at("stream");
    cfg.cls = class_spec_from_json(cfg.class_json);
    cfg.dist = distribution_from_json(cfg.stream_json);

    const nlohmann::json& t = j.at("threshold");
    check_keys(t, "threshold", {"c0", "delta"},
               {"horizon", "mode", "c1", "c2", "degenerate_p"});
    if (t.at("c0").is_string()) {
        if (t.at("c0").get<std::string>() != "auto")
            throw ConfigError("threshold.c0 must be a number or \"auto\"");
        cfg.threshold.auto_c0 = true;
    } else {
        cfg.threshold.c0 = number_at(t, "c0", "threshold");
    }
    cfg.threshold.delta = number_at(t, "delta", "threshold");
    if (t.contains("horizon")) cfg.threshold.horizon = count_at(t, "horizon", "threshold");
    std::string mode = t.contains("mode") ? t.at("mode").get<std::string>() : "standard";
    if (mode == "experimental") {
        cfg.threshold.experimental = true;
        if (t.contains("c1")) cfg.threshold.c1 = number_at(t, "c1", "threshold");
        if (t.contains("c2")) cfg.threshold.c2 = number_at(t, "c2", "threshold");
        if (t.contains("degenerate_p"))
            cfg.threshold.degenerate_p = number_at(t, "degenerate_p", "threshold");
    } else if (mode == "standard") {
        if (t.contains("c1") || t.contains("c2") || t.contains("degenerate_p"))
            throw ConfigError("threshold constants are fixed in standard mode");
    } else {
        throw ConfigError("threshold.mode must be standard or experimental");
    }

    cfg.rounds = count_at(j, "rounds", "config");
    if (cfg.rounds == 0) throw ConfigError("rounds must be positive");

    if (j.contains("checkpoints")) {
        for (const auto& v : j.at("checkpoints")) {
            if (!is_count(v))
                throw ConfigError("checkpoints must be non-negative integers");
            cfg.checkpoints.push_back(v.get<std::uint64_t>());
        }
    } else {
        cfg.checkpoints = {cfg.rounds};
    }
    for (std::size_t i = 0; i < cfg.checkpoints.size(); ++i) {
        if (cfg.checkpoints[i] == 0 || cfg.checkpoints[i] > cfg.rounds)
            throw ConfigError("checkpoints must lie in [1, rounds]");
        if (i > 0 && cfg.checkpoints[i] <= cfg.checkpoints[i - 1])
            throw ConfigError("checkpoints must be strictly increasing");
    }

    std::set<std::uint64_t> seen;
    for (const auto& v : j.at("seeds")) {
        if (!is_count(v))
            throw ConfigError("seeds must be non-negative integers");
        std::uint64_t s = v.get<std::uint64_t>();
        if (!seen.insert(s).second) throw ConfigError("duplicate seed in seed list");
        cfg.seeds.push_back(s);
    }
    if (cfg.seeds.empty()) throw ConfigError("seed list must be non-empty");

    cfg.output_dir = j.at("output_dir").get<std::string>();
    if (cfg.output_dir.empty()) throw ConfigError("output_dir must be non-empty");
    return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["class"] = cfg.class_json;
    j["stream"] = cfg.stream_json;
    nlohmann::json t;
    if (cfg.threshold.auto_c0)
        t["c0"] = "auto";
    else
        t["c0"] = cfg.threshold.c0;
    t["delta"] = cfg.threshold.delta;
    if (cfg.threshold.horizon != 0) t["horizon"] = cfg.threshold.horizon;
    t["mode"] = cfg.threshold.experimental ? "experimental" : "standard";
    if (cfg.threshold.experimental) {
        t["c1"] = cfg.threshold.c1;
        t["c2"] = cfg.threshold.c2;
        t["degenerate_p"] = cfg.threshold.degenerate_p;
    }
    j["threshold"] = t;
    j["rounds"] = cfg.rounds;
    j["checkpoints"] = cfg.checkpoints;
    j["seeds"] = cfg.seeds;
    j["output_dir"] = cfg.output_dir;
    return j;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file " + path + " is not valid json: " + e.what());
    }
    return config_from_json(j);
}

double resolve_c0(const ExperimentConfig& cfg) {
    if (!cfg.threshold.auto_c0) return cfg.threshold.c0;
    std::uint64_t horizon =
        cfg.threshold.horizon != 0 ? cfg.threshold.horizon : cfg.rounds;
    return default_c0(cfg.cls->size(), cfg.threshold.delta, horizon);
}

ThresholdConfig make_threshold_config(const ExperimentConfig& cfg) {
    double c0 = resolve_c0(cfg);
    if (cfg.threshold.experimental)
        return ThresholdConfig::experimental_mode(c0, cfg.threshold.delta,
                                                  cfg.threshold.c1, cfg.threshold.c2,
                                                  cfg.threshold.degenerate_p);
    return ThresholdConfig::standard(c0, cfg.threshold.delta);
}

} // namespace iwal
