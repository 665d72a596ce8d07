#ifndef HMO_EVALUATION_HPP
#define HMO_EVALUATION_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "hmo/core.hpp"
#include "hmo/problems.hpp"

namespace hmo {

/// The algorithms sharing one run's evaluation budget.
enum class Component { warmstart = 0, ss_mocma = 1, restart_cma = 2, ipop_mocma = 3 };
inline constexpr int kComponentCount = 4;

std::string component_name(Component c);

/// One point of the anytime trace: the archive hypervolume right after the
/// eval_index-th evaluation. Entries are emitted only when hv strictly grows.
struct TracePoint {
    std::int64_t eval_index = 0;
    double hv = 0.0;
};

class BudgetExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Single-writer evaluation ledger for one run. Every objective evaluation
/// flows through here: it is charged to the calling component, offered to the
/// archive, and appended to the trace when the hypervolume grows. The very
/// first evaluation of x = 0 is cached so that the scalarization normalizer
/// is charged exactly once per run.
class RunEvaluator {
public:
    RunEvaluator(const BiObjectiveProblem& problem, const ObjectiveVector& archive_ref,
                 std::int64_t budget)
        : problem_(problem), archive_(archive_ref), budget_(budget) {
        ledgers_.fill(0);
    }

    /// Evaluates the problem at x. Throws BudgetExhausted when no budget
    /// remains; throws std::runtime_error on a non-finite objective value.
    Solution evaluate(const Vec& x, Component who);

    /// Cached f(0); evaluated (and charged to `who`) on first use only.
    const Solution& origin(Component who);
    bool origin_cached() const { return origin_.has_value(); }

    std::int64_t total() const { return total_; }
    std::int64_t remaining() const { return budget_ - total_; }
    std::int64_t budget() const { return budget_; }
    std::int64_t ledger(Component c) const { return ledgers_[static_cast<std::size_t>(c)]; }

    const BiObjectiveProblem& problem() const { return problem_; }
    const ParetoArchive& archive() const { return archive_; }
    const std::vector<TracePoint>& trace() const { return trace_; }

private:
    const BiObjectiveProblem& problem_;
    ParetoArchive archive_;
    std::int64_t budget_ = 0;
    std::int64_t total_ = 0;
    std::array<std::int64_t, kComponentCount> ledgers_{};
    std::vector<TracePoint> trace_;
    std::optional<Solution> origin_;
};

}  // namespace hmo

#endif  // HMO_EVALUATION_HPP
