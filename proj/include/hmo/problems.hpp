#ifndef HMO_PROBLEMS_HPP
#define HMO_PROBLEMS_HPP

#include <stdexcept>
#include <string>
#include <utility>

#include "hmo/core.hpp"

namespace hmo {

/// The ten single-objective base functions. Each is a pure map with global
/// optimum value 0 at z = 0; problems compose them with a shift and, for the
/// non-separable ones, a rotation.
enum class BaseFunction {
    sphere,
    ellipsoid,
    rastrigin,
    rosenbrock,
    sharp_ridge,
    diff_powers,
    schaffer_like,
    griewank_rosenbrock,
    attr_sector,
    gallagher_like,
};

inline constexpr int kBaseFunctionCount = 10;
inline constexpr int kProblemCount = 55;  // unordered pairs of 10 functions

/// Difficulty groups used for grouped reporting; two base functions each.
enum class FunctionGroup { separable, moderate, illcond, multimodal, weakstructure };

FunctionGroup group_of(BaseFunction f);
std::string group_name(FunctionGroup g);
std::string base_function_name(BaseFunction f);

/// Evaluate a base function at z (optimum 0 at z = 0).
double eval_base(BaseFunction f, const Vec& z);

/// Canonical upper-triangle enumeration of unordered function pairs:
/// k=1 -> (sphere, sphere), k=2 -> (sphere, ellipsoid), ..., k=55 -> (gallagher, gallagher).
std::pair<BaseFunction, BaseFunction> problem_pair(int k);

/// A scalable bi-objective instance: objective i is
/// base_i(rot_i * (x - shift_i)). Immutable after construction; evaluation is
/// re-entrant and thread-safe.
class BiObjectiveProblem {
public:
    /// Deterministic in (k, n, instance). Throws std::invalid_argument on
    /// out-of-range arguments.
    static BiObjectiveProblem make(int k, int n, int instance);

    ObjectiveVector evaluate(const Vec& x) const;

    int k() const { return k_; }
    int dim() const { return n_; }
    int instance() const { return instance_; }
    BaseFunction fn1() const { return fn1_; }
    BaseFunction fn2() const { return fn2_; }
    const Vec& shift1() const { return shift1_; }
    const Vec& shift2() const { return shift2_; }
    const Mat& rot1() const { return rot1_; }
    const Mat& rot2() const { return rot2_; }

private:
    BiObjectiveProblem() = default;

    int k_ = 0;
    int n_ = 0;
    int instance_ = 0;
    BaseFunction fn1_ = BaseFunction::sphere;
    BaseFunction fn2_ = BaseFunction::sphere;
    Vec shift1_, shift2_;
    Mat rot1_, rot2_;
};

/// Scoring reference for one problem.
struct ReferenceData {
    enum class Source { analytic, long_run };
    ObjectiveVector ref_point;
    double ref_hv = 0.0;
    Source source = Source::analytic;
};

/// Thrown when a problem has no analytic reference and no committed
/// reference file; runs may proceed but produce no target metrics.
class NoReferenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reference point rule: objective-wise value at x = 0 scaled by 1.1.
ObjectiveVector reference_point(const BiObjectiveProblem& p);

/// Closed-form reference hypervolume for the bi-sphere family (k = 1).
double bisphere_ref_hv(const BiObjectiveProblem& p);

/// Relative path of the committed reference file for a problem.
std::string reference_file_name(int k, int n, int instance);

/// Analytic closed form for sphere-sphere; otherwise loads
/// `<ref_dir>/k{K}_n{N}_i{I}.ref`. Throws NoReferenceError when neither is
/// available.
ReferenceData reference_data(const BiObjectiveProblem& p, const std::string& ref_dir = "refs");

/// Writes a reference file (ref_point line, then archive front triples).
void write_reference_file(const std::string& path, const ObjectiveVector& ref_point,
                          const ParetoArchive& archive);

}  // namespace hmo

#endif  // HMO_PROBLEMS_HPP
