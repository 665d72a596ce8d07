#ifndef HMO_WARMSTART_HPP
#define HMO_WARMSTART_HPP

#include <functional>
#include <optional>
#include <vector>

#include "hmo/evaluation.hpp"
#include "hmo/scalarize.hpp"

namespace hmo {

/// Aggregation-weight restart schedule for the warm start:
/// 0.5, 0.0, 1.0, 0.95, 0.90, ..., 0.05, 0.0 (23 entries), then cycling with
/// the refined-tolerance flag set.
struct ScheduleEntry {
    double alpha;
    bool refined;  // later sweeps use the smaller stopping tolerance
};
ScheduleEntry alpha_schedule(int i);
inline constexpr int kAlphaScheduleLength = 23;

struct TrustRegionOptions {
    double radius0 = 1.0;
    double ftol = 1e-3;
    int max_evals = 0;
    double radius_min = 1e-8;
};

struct TrustRegionResult {
    Vec x;
    double f = 0.0;
    int evals_used = 0;
};

/// Minimal model-based trust-region minimizer: quadratic models interpolating
/// a 2n+1-point sample set (least Frobenius-norm change between refits),
/// truncated-CG subproblem, iterates clipped to [-5,5]^n. Stops on the
/// relative-improvement window, on radius underflow, or when the evaluation
/// budget runs out. `f0`, when given, must be the objective value at x0 and
/// saves its evaluation.
TrustRegionResult tr_minimize(const std::function<double(const Vec&)>& fn, const Vec& x0,
                              std::optional<double> f0, const TrustRegionOptions& opt);

/// Trust-region minimization of a scalarized objective through the run
/// evaluator. Evaluated solutions are appended to `evals_log`. `known_x0`
/// supplies the start point's already-paid evaluation.
struct ScalarizedResult {
    Solution best;
    int evals_used = 0;
};
ScalarizedResult minimize_scalarized(const Scalarization& s, RunEvaluator& ev, Component who,
                                     const Solution& known_x0, const TrustRegionOptions& opt,
                                     std::vector<Solution>* evals_log = nullptr);

/// Phase-1 warm start: the alpha sweep of trust-region legs, first leg from
/// x = 0 with initial radius 6 and a 5n cap, later legs from the previous
/// best with radius 2. Performs exactly `budget` evaluations (the cached
/// f(0) counts once) and returns every evaluated solution.
std::vector<Solution> run_warmstart(RunEvaluator& ev, std::int64_t budget);

}  // namespace hmo

#endif  // HMO_WARMSTART_HPP
