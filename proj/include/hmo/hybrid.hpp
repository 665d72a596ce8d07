#ifndef HMO_HYBRID_HPP
#define HMO_HYBRID_HPP

#include <optional>

#include "hmo/bench.hpp"
#include "hmo/problems.hpp"

namespace hmo {

/// Phase timeline of the hybrid, a pure function of the evaluation count:
/// P1 warm start [0, 10n), P2 steady-state only [10n, 1000n), P3 adds
/// restart-CMA [1000n, 20000n), P4 adds IPOP-MO-CMA beyond.
enum class Phase { P1, P2, P3, P4 };
Phase phase_of(std::int64_t evals, int n);

enum class Algo { hybrid, warmstart, ss_mocma, ipop_mocma, restart_cma };
std::string algo_name(Algo a);
std::optional<Algo> algo_from_name(const std::string& name);

struct HybridOptions {
    std::int64_t budget = 0;
    std::uint64_t seed = 1;
    Algo algo = Algo::hybrid;
};

/// Per-component consumption bookkeeping of one run, exposed for tests and
/// the acceptance suite.
struct HybridStats {
    std::array<std::int64_t, kComponentCount> p34_used{};  // evals spent in P3/P4
    std::int64_t cap = 0;  // per-algorithm P3/P4 cap that was enforced
};

/// Runs the full hybrid (or one component, for ablation) on one problem.
/// Identical (problem, budget, seed) produce identical records. `ref` feeds
/// the archive reference point and the hv-difference scale; without it the
/// run proceeds but the record carries no reference data.
RunRecord hybrid_run(const BiObjectiveProblem& p, const std::optional<ReferenceData>& ref,
                     const HybridOptions& opt, HybridStats* stats = nullptr);

}  // namespace hmo

#endif  // HMO_HYBRID_HPP
