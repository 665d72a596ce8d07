#ifndef HMO_SCALARIZE_HPP
#define HMO_SCALARIZE_HPP

#include "hmo/core.hpp"

namespace hmo {

/// Linear aggregation of the two objectives with start-point normalization:
/// g(f) = alpha * f1 / norm1 + (1 - alpha) * f2 / norm2, where the norms are
/// |f(0)| of the run's first evaluation, guarded below by 1e-12.
struct Scalarization {
    double alpha = 0.5;
    double norm1 = 1.0;
    double norm2 = 1.0;

    double operator()(const ObjectiveVector& fv) const {
        return alpha * fv.f1 / norm1 + (1.0 - alpha) * fv.f2 / norm2;
    }
};

inline constexpr double kNormGuard = 1e-12;

/// Builds a scalarization from the objective value at the start point x = 0.
/// The caller is responsible for charging that evaluation once per run.
/// Throws std::invalid_argument on non-finite input or alpha outside [0,1].
Scalarization make_scalarization(const ObjectiveVector& f_origin, double alpha);

}  // namespace hmo

#endif  // HMO_SCALARIZE_HPP
