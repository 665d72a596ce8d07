#ifndef HMO_BENCH_HPP
#define HMO_BENCH_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hmo/evaluation.hpp"

namespace hmo {

inline constexpr int kTargetCount = 58;

/// The 58 hv-difference targets: thresholds factor * ref_hv with factors
/// {-1e-4, -10^-4.2, -10^-4.4, -10^-4.6, -10^-4.8, -1e-5, 0} followed by the
/// 51 positive values 10^-5, 10^-4.9, ..., 10^0. Stored ascending, so the
/// hardest (most negative) target comes first.
struct TargetSet {
    double ref_hv = 0.0;
    std::array<double, kTargetCount> factors{};
    std::array<double, kTargetCount> thresholds{};
};

TargetSet make_targets(double ref_hv);

/// One completed run: problem key, anytime hv trace, per-component ledgers.
struct RunRecord {
    int k = 0;
    int n = 0;
    int instance = 0;
    std::uint64_t seed = 0;
    std::int64_t budget = 0;
    std::int64_t evals = 0;  // evaluations actually performed
    std::string algo = "hybrid";

    bool has_ref = false;
    ObjectiveVector ref_point{};
    double ref_hv = 0.0;
    std::string ref_source;

    std::vector<TracePoint> trace;  // achieved hv, strictly increasing
    std::map<std::string, std::int64_t> ledgers;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// (eval_index, hv_diff) pairs with hv_diff = ref_hv - hv; strictly
/// decreasing in hv_diff. Requires a reference.
std::vector<std::pair<std::int64_t, double>> anytime_trace(const RunRecord& rec);

/// First evaluation index reaching each target (hv_diff <= threshold, weak
/// inequality), or nullopt when never reached.
std::array<std::optional<std::int64_t>, kTargetCount> target_hits(const RunRecord& rec,
                                                                  const TargetSet& targets);

/// Fraction of the 58 targets hit within the first `at_evals` evaluations.
double fraction_reached(const RunRecord& rec, const TargetSet& targets, std::int64_t at_evals);

/// 61 log-spaced budgets from 10^0 to 10^6, in evaluations per dimension.
std::vector<double> ecdf_budget_grid();

struct EcdfCurve {
    std::vector<double> budgets;     // evals / n
    std::vector<double> proportion;  // in [0, 1], non-decreasing
};

/// ECDF of simulated (bootstrapped) runtimes over all (problem, target)
/// cells. Records are pooled by (k, instance); unreached targets draw
/// simulated-restart chains from the pool (1000 seeded samples per cell).
/// Throws std::invalid_argument when records mix dimensions.
EcdfCurve ecdf(const std::vector<RunRecord>& records, const std::vector<double>& budgets,
               std::uint64_t bootstrap_seed, int samples = 1000);

/// Average runtime per target: total evaluations over all runs (hit time for
/// successful runs, consumed evaluations otherwise) divided by the number of
/// successful runs; +infinity when no run reached the target.
std::array<double, kTargetCount> art(const std::vector<RunRecord>& records,
                                     const TargetSet& targets);

class RecordParseError : public std::runtime_error {
public:
    RecordParseError(const std::string& msg, int line) : std::runtime_error(msg), line_number(line) {}
    int line_number;
};

/// JSON-lines serialization: a header object, then one object per trace
/// entry; doubles carry 17 significant digits. Unknown fields are ignored on
/// load; truncated files fail with a RecordParseError.
std::string serialize(const RunRecord& rec);
void persist(const RunRecord& rec, const std::string& path);
RunRecord load_record(const std::string& path);

}  // namespace hmo

#endif  // HMO_BENCH_HPP
