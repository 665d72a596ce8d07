#include "hmo/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "hmo/rng.hpp"

namespace hmo {

TargetSet make_targets(double ref_hv) {
    if (!(ref_hv > 0.0)) throw std::invalid_argument("make_targets: ref_hv must be positive");
    TargetSet t;
    t.ref_hv = ref_hv;
    int i = 0;
    for (double e : {-4.0, -4.2, -4.4, -4.6, -4.8, -5.0}) {
        t.factors[i++] = -std::pow(10.0, e);
    }
    t.factors[i++] = 0.0;
    for (int j = 0; j <= 50; ++j) {
        t.factors[i++] = std::pow(10.0, -5.0 + 0.1 * j);
    }
    for (int j = 0; j < kTargetCount; ++j) t.thresholds[j] = t.factors[j] * ref_hv;
    return t;
}

std::vector<std::pair<std::int64_t, double>> anytime_trace(const RunRecord& rec) {
    if (!rec.has_ref) throw std::invalid_argument("anytime_trace: record has no reference");
    std::vector<std::pair<std::int64_t, double>> out;
    out.reserve(rec.trace.size());
    for (const auto& t : rec.trace) out.emplace_back(t.eval_index, rec.ref_hv - t.hv);
    return out;
}

std::array<std::optional<std::int64_t>, kTargetCount> target_hits(const RunRecord& rec,
                                                                  const TargetSet& targets) {
    std::array<std::optional<std::int64_t>, kTargetCount> hits;
    for (int j = 0; j < kTargetCount; ++j) {
        const double thr = targets.thresholds[j];
        for (const auto& t : rec.trace) {
            if (targets.ref_hv - t.hv <= thr) {
                hits[j] = t.eval_index;
                break;
            }
        }
    }
    return hits;
}

double fraction_reached(const RunRecord& rec, const TargetSet& targets, std::int64_t at_evals) {
    auto hits = target_hits(rec, targets);
    int reached = 0;
    for (const auto& h : hits) {
        if (h && *h <= at_evals) ++reached;
    }
    return static_cast<double>(reached) / kTargetCount;
}

std::vector<double> ecdf_budget_grid() {
    std::vector<double> grid;
    grid.reserve(61);
    for (int j = 0; j <= 60; ++j) grid.push_back(std::pow(10.0, 0.1 * j));
    return grid;
}

EcdfCurve ecdf(const std::vector<RunRecord>& records, const std::vector<double>& budgets,
               std::uint64_t bootstrap_seed, int samples) {
    EcdfCurve curve;
    curve.budgets = budgets;
    curve.proportion.assign(budgets.size(), 0.0);
    if (records.empty()) return curve;

    const int n = records.front().n;
    for (const auto& r : records) {
        if (r.n != n) throw std::invalid_argument("ecdf: records mix dimensions");
    }

    // Pool runs of the same problem; each (pool, target) cell contributes
    // `samples` simulated-restart runtimes.
    std::map<std::pair<int, int>, std::vector<const RunRecord*>> pools;
    for (const auto& r : records) pools[{r.k, r.instance}].push_back(&r);

    std::vector<double> runtimes;  // finite simulated runtimes only
    std::int64_t cells = 0;
    for (const auto& [key, pool] : pools) {
        if (!pool.front()->has_ref) {
            cells += kTargetCount;  // scores as never reached
            continue;
        }
        TargetSet targets = make_targets(pool.front()->ref_hv);
        std::vector<std::array<std::optional<std::int64_t>, kTargetCount>> hits;
        hits.reserve(pool.size());
        for (const RunRecord* r : pool) hits.push_back(target_hits(*r, targets));

        for (int j = 0; j < kTargetCount; ++j) {
            ++cells;
            bool any_hit = false;
            for (std::size_t r = 0; r < pool.size(); ++r) any_hit |= hits[r][j].has_value();
            if (!any_hit) continue;  // all chains are infinite

            Rng rng(seed_mix(bootstrap_seed, static_cast<std::uint64_t>(key.first),
                             static_cast<std::uint64_t>(key.second),
                             static_cast<std::uint64_t>(j)));
            for (int s = 0; s < samples; ++s) {
                double runtime = 0.0;
                for (;;) {
                    std::size_t pick = static_cast<std::size_t>(rng.below(pool.size()));
                    if (hits[pick][j]) {
                        runtime += static_cast<double>(*hits[pick][j]);
                        break;
                    }
                    runtime += static_cast<double>(pool[pick]->evals);
                }
                runtimes.push_back(runtime);
            }
        }
    }

    std::sort(runtimes.begin(), runtimes.end());
    const double denom = static_cast<double>(cells) * samples;
    for (std::size_t b = 0; b < budgets.size(); ++b) {
        auto it = std::upper_bound(runtimes.begin(), runtimes.end(), budgets[b] * n);
        curve.proportion[b] = static_cast<double>(it - runtimes.begin()) / denom;
    }
    return curve;
}

std::array<double, kTargetCount> art(const std::vector<RunRecord>& records,
                                     const TargetSet& targets) {
    if (records.empty()) throw std::invalid_argument("art: no records");
    std::array<double, kTargetCount> out;
    for (int j = 0; j < kTargetCount; ++j) {
        double evals = 0.0;
        int successes = 0;
        for (const auto& r : records) {
            auto hits = target_hits(r, targets);
            if (hits[j]) {
                evals += static_cast<double>(*hits[j]);
                ++successes;
            } else {
                evals += static_cast<double>(r.evals);
            }
        }
        out[j] = successes > 0 ? evals / successes : std::numeric_limits<double>::infinity();
    }
    return out;
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string serialize(const RunRecord& rec) {
    std::ostringstream os;
    os << "{\"format\":\"hmo-run-record\",\"version\":1"
       << ",\"k\":" << rec.k << ",\"n\":" << rec.n << ",\"instance\":" << rec.instance
       << ",\"seed\":" << rec.seed << ",\"budget\":" << rec.budget << ",\"evals\":" << rec.evals
       << ",\"algo\":\"" << rec.algo << "\"";
    if (rec.has_ref) {
        os << ",\"ref_point\":[" << fmt_double(rec.ref_point.f1) << ","
           << fmt_double(rec.ref_point.f2) << "]"
           << ",\"ref_hv\":" << fmt_double(rec.ref_hv) << ",\"ref_source\":\"" << rec.ref_source
           << "\"";
    } else {
        os << ",\"ref_point\":null,\"ref_hv\":null,\"ref_source\":null";
    }
    os << ",\"ledgers\":{";
    bool first = true;
    for (const auto& [name, count] : rec.ledgers) {
        if (!first) os << ",";
        os << "\"" << name << "\":" << count;
        first = false;
    }
    os << "},\"trace_len\":" << rec.trace.size() << "}\n";
    for (const auto& t : rec.trace) {
        os << "{\"eval\":" << t.eval_index << ",\"hv\":" << fmt_double(t.hv) << "}\n";
    }
    return os.str();
}

void persist(const RunRecord& rec, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("persist: cannot write " + path);
    out << serialize(rec);
}

RunRecord load_record(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw RecordParseError("cannot open " + path, 0);

    std::string line;
    int line_no = 0;
    auto parse_line = [&](const std::string& text) {
        try {
            return nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw RecordParseError("line " + std::to_string(line_no) + ": " + e.what(), line_no);
        }
    };

    if (!std::getline(in, line)) throw RecordParseError("empty record file: " + path, 0);
    ++line_no;
    auto header = parse_line(line);

    RunRecord rec;
    try {
        if (header.value("format", "") != "hmo-run-record") {
            throw RecordParseError("line 1: not a run-record file", 1);
        }
        rec.k = header.at("k").get<int>();
        rec.n = header.at("n").get<int>();
        rec.instance = header.at("instance").get<int>();
        rec.seed = header.at("seed").get<std::uint64_t>();
        rec.budget = header.at("budget").get<std::int64_t>();
        rec.evals = header.at("evals").get<std::int64_t>();
        rec.algo = header.at("algo").get<std::string>();
        if (!header.at("ref_hv").is_null()) {
            rec.has_ref = true;
            rec.ref_point.f1 = header.at("ref_point").at(0).get<double>();
            rec.ref_point.f2 = header.at("ref_point").at(1).get<double>();
            rec.ref_hv = header.at("ref_hv").get<double>();
            rec.ref_source = header.at("ref_source").get<std::string>();
        }
        for (const auto& [name, count] : header.at("ledgers").items()) {
            rec.ledgers[name] = count.get<std::int64_t>();
        }
        const auto expected = header.at("trace_len").get<std::size_t>();
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            auto entry = parse_line(line);
            rec.trace.push_back(
                {entry.at("eval").get<std::int64_t>(), entry.at("hv").get<double>()});
        }
        if (rec.trace.size() != expected) {
            throw RecordParseError("truncated record: expected " + std::to_string(expected) +
                                       " trace entries, found " + std::to_string(rec.trace.size()),
                                   line_no);
        }
    } catch (const nlohmann::json::exception& e) {
        throw RecordParseError("line " + std::to_string(line_no) + ": " + e.what(), line_no);
    }
    return rec;
}

}  // namespace hmo
