#include "iwal/engine.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <utility>

#include <json.hpp>

#include "iwal/error.hpp"
#include "iwal/rng.hpp"

namespace iwal {

namespace {

void validate_checkpoints(const std::vector<std::uint64_t>& cps, std::uint64_t rounds) {
    std::uint64_t prev = 0;
    for (std::uint64_t n : cps) {
        if (n == 0 || n <= prev)
            throw ConfigError("checkpoints must be strictly increasing and positive");
        if (n > rounds) throw ConfigError("checkpoint beyond the round horizon");
        prev = n;
    }
}

} // namespace

IwalEngine::IwalEngine(std::shared_ptr<const HypothesisClass> cls, ThresholdConfig cfg,
                       std::uint64_t coin_seed)
    : cls_(std::move(cls)), cfg_(std::move(cfg)), coin_seed_(coin_seed) {
    if (cls_ == nullptr) throw ConfigError("engine needs a hypothesis class");
    if (cls_->size() < 2)
        throw ConfigError("active learning needs at least two hypotheses");
    query_probability(cfg_, {2, 0.0}); // surface config errors at construction
}

RunResult IwalEngine::run(const LabeledStream& stream, std::uint64_t rounds,
                          const EngineOptions& opts) const {
    FiniteClassOracle oracle(*cls_);
    return run(stream, rounds, opts, oracle);
}

RunResult IwalEngine::run(const LabeledStream& stream, std::uint64_t rounds,
                          const EngineOptions& opts, ErmOracle& oracle) const {
    if (rounds == 0) throw ConfigError("need at least one round");
    validate_checkpoints(opts.checkpoints, rounds);

    CounterRng coin(substream_seed(coin_seed_, 3));
    RunResult out;
    out.rounds = rounds;
    out.checkpoints.reserve(opts.checkpoints.size());
    if (opts.keep_rounds) out.round_log.reserve(rounds);

    std::uint64_t opens_before = stream.labels_opened();
    std::size_t next_cp = 0;

    for (std::uint64_t k = 1; k <= rounds; ++k) {
        Point x = stream.point(k);
        ErmOracle::Choice lead = oracle.best();
        Label predicted = cls_->at(lead.id)(x);
        auto alt = oracle.best_disagreeing(x, predicted);

        // Weighted-error gap between the best disagreeing hypothesis and the
        // leader; rounds so far is k-1, floored at 1 while both totals are 0.
        double gap = std::numeric_limits<double>::infinity();
        if (alt.has_value()) {
            double denom = static_cast<double>(k > 1 ? k - 1 : 1);
            gap = (alt->total - lead.total) / denom;
        }

        double p = query_probability(cfg_, {k, gap});
        bool queried = coin.uniform(k) < p;
        std::optional<Label> y;
        if (queried) {
            y = stream.label(k);
            WeightedExample ex{k, x, *y, 1.0 / p};
            oracle.observe(ex);
            ++out.queries;
        }

        if (opts.keep_rounds)
            out.round_log.push_back({k, std::move(x), gap, p, queried, y, out.queries});
        if (next_cp < opts.checkpoints.size() && opts.checkpoints[next_cp] == k) {
            out.checkpoints.push_back({k, oracle.best().id, out.queries});
            ++next_cp;
        }
    }

    out.final_erm_id = oracle.best().id;
    out.labels_opened = stream.labels_opened() - opens_before;
    return out;
}

RunResult passive_baseline(const std::shared_ptr<const HypothesisClass>& cls,
                           const LabeledStream& stream, std::uint64_t rounds,
                           const std::vector<std::uint64_t>& checkpoints) {
    if (cls == nullptr) throw ConfigError("baseline needs a hypothesis class");
    if (rounds == 0) throw ConfigError("need at least one round");
    validate_checkpoints(checkpoints, rounds);

    FiniteClassOracle oracle(*cls);
    RunResult out;
    out.rounds = rounds;
    std::uint64_t opens_before = stream.labels_opened();
    std::size_t next_cp = 0;

    for (std::uint64_t k = 1; k <= rounds; ++k) {
        WeightedExample ex{k, stream.point(k), stream.label(k), 1.0};
        oracle.observe(ex);
        ++out.queries;
        if (next_cp < checkpoints.size() && checkpoints[next_cp] == k) {
            out.checkpoints.push_back({k, oracle.best().id, out.queries});
            ++next_cp;
        }
    }

    out.final_erm_id = oracle.best().id;
    out.labels_opened = stream.labels_opened() - opens_before;
    return out;
}

WeightedSample sample_from_rounds(const std::vector<RoundRecord>& log) {
    WeightedSample s;
    for (const RoundRecord& r : log) {
        if (r.queried) s.append({r.k, r.x, *r.y, 1.0 / r.p});
        s.advance_round();
    }
    return s;
}

std::vector<InteractionRecord> records_from_rounds(const std::vector<RoundRecord>& log) {
    std::vector<InteractionRecord> out;
    out.reserve(log.size());
    for (const RoundRecord& r : log) out.push_back({r.x, r.p, r.queried, r.y});
    return out;
}

void write_trace_jsonl(const std::string& path, const RunResult& result) {
    if (result.round_log.empty() && result.rounds > 0)
        throw Error("trace export needs a run made with keep_rounds");
    std::ofstream f(path);
    if (!f) throw Error("cannot open trace file: " + path);
    for (const RoundRecord& r : result.round_log) {
        nlohmann::json j{{"k", r.k},
                         {"p", r.p},
                         {"queried", r.queried},
                         {"queries", r.queries_so_far}};
        if (std::isfinite(r.gap))
            j["gap"] = r.gap;
        else
            j["gap"] = nullptr;
        f << j.dump() << '\n';
    }
    if (!f) throw Error("failed writing trace file: " + path);
}

} // namespace iwal
