#include "hmo/scalarize.hpp"

#include <cmath>
#include <stdexcept>

namespace hmo {

Scalarization make_scalarization(const ObjectiveVector& f_origin, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("make_scalarization: alpha must be in [0,1]");
    }
    if (!std::isfinite(f_origin.f1) || !std::isfinite(f_origin.f2)) {
        throw std::invalid_argument("make_scalarization: non-finite f(0)");
    }
    Scalarization s;
    s.alpha = alpha;
    s.norm1 = std::max(std::abs(f_origin.f1), kNormGuard);
    s.norm2 = std::max(std::abs(f_origin.f2), kNormGuard);
    return s;
}

}  // namespace hmo
