#ifndef HMO_CORE_HPP
#define HMO_CORE_HPP

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace hmo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Search space box used by every problem and every sampler.
inline constexpr double kLowerBound = -5.0;
inline constexpr double kUpperBound = 5.0;

/// A bi-objective value (minimization in both components).
struct ObjectiveVector {
    double f1 = 0.0;
    double f2 = 0.0;

    friend bool operator==(const ObjectiveVector& a, const ObjectiveVector& b) {
        return a.f1 == b.f1 && a.f2 == b.f2;
    }
};

/// An evaluated point. eval_index is the 1-based count of objective
/// evaluations performed in the run at the time this solution was created.
struct Solution {
    Vec point;
    ObjectiveVector value;
    std::int64_t eval_index = 0;
};

/// Weak Pareto dominance for minimization: a <= b componentwise and a != b.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

/// Front ranks by successive non-dominated peeling: rank 0 is the
/// non-dominated front, rank r+1 the front after removing ranks <= r.
std::vector<int> nondominated_sort(const std::vector<ObjectiveVector>& pop);

/// Exact area dominated by `front` and dominating `ref`. Dominated or
/// out-of-region points are allowed and contribute nothing.
double hv2d(const std::vector<ObjectiveVector>& front, const ObjectiveVector& ref);

/// hv2d(front) - hv2d(front \ {i}) for a front sorted ascending in f1 with
/// mutually non-dominated members.
double hv_contribution(std::size_t i, const std::vector<ObjectiveVector>& front,
                       const ObjectiveVector& ref);

/// All-time non-dominated set with incremental 2-D hypervolume. Members are
/// kept sorted by ascending f1 (hence strictly descending f2). Points that do
/// not dominate the reference point are retained but contribute zero
/// hypervolume. Exact (f1,f2) duplicates keep the first-inserted member.
class ParetoArchive {
public:
    explicit ParetoArchive(const ObjectiveVector& ref_point) : ref_(ref_point) {}

    /// Returns true iff the archive changed. Dominated candidates are
    /// rejected; members dominated by the candidate are removed.
    bool insert(const Solution& s);

    const std::vector<Solution>& members() const { return members_; }
    const ObjectiveVector& ref_point() const { return ref_; }
    double hv() const { return hv_; }

    std::vector<ObjectiveVector> front() const;

    /// Line-based text format: one "f1 f2 eval_index" triple per line,
    /// full-precision decimal.
    void write(std::ostream& os) const;

private:
    std::vector<Solution> members_;
    ObjectiveVector ref_;
    double hv_ = 0.0;
};

}  // namespace hmo

#endif  // HMO_CORE_HPP
