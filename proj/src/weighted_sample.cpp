#include "iwal/weighted_sample.hpp"

#include <charconv>
#include <cmath>

namespace iwal {

void WeightedSample::append(WeightedExample ex) {
    validate_point(ex.x);
    if (!std::isfinite(ex.weight) || ex.weight < 1.0)
        throw Error("example weight must be finite and >= 1 (it is 1/P with P <= 1)");
    if (ex.round == 0 || ex.round > round_count_ + 1)
        throw Error("example round is outside the protocol so far");
    if (!examples_.empty() && ex.round <= examples_.back().round)
        throw Error("example rounds must be strictly increasing");
    if (examples_.size() + 1 > round_count_ + 1)
        throw Error("more examples than rounds");
    examples_.push_back(std::move(ex));
}

double weighted_error_total(const Hypothesis& h, const WeightedSample& s) {
    double total = 0.0;
    for (const auto& ex : s.examples())
        if (h(ex.x) != ex.y) total += ex.weight;
    return total;
}

double weighted_error(const Hypothesis& h, const WeightedSample& s) {
    if (s.round_count() == 0) return 0.0;
    return weighted_error_total(h, s) / static_cast<double>(s.round_count());
}

void validate_record(const InteractionRecord& r) {
    if (!(r.p > 0.0) || r.p > 1.0)
        throw Error("record probability must lie in (0, 1]");
    if (r.queried != r.y.has_value())
        throw Error("record label must be present exactly when queried");
}

namespace {

void append_double(std::string& line, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    line.append(buf, res.ptr);
}

} // namespace

void write_sample_csv(const WeightedSample& s, std::ostream& out) {
    const std::size_t dim =
        s.examples().empty() ? 1 : s.examples().front().x.coords.size();
    std::string line = "round";
    for (std::size_t d = 0; d < dim; ++d) line += ",x" + std::to_string(d);
    line += ",y,weight\n";
    out << line;
    for (const auto& ex : s.examples()) {
        if (ex.x.coords.size() != dim)
            throw DimensionError("sample rows have mixed dimensions");
        line = std::to_string(ex.round);
        for (double c : ex.x.coords) {
            line += ',';
            append_double(line, c);
        }
        line += ',';
        line += std::to_string(to_int(ex.y));
        line += ',';
        append_double(line, ex.weight);
        line += '\n';
        out << line;
    }
}

} // namespace iwal
