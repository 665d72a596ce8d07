#include "hmo/evaluation.hpp"

#include <cmath>

namespace hmo {

std::string component_name(Component c) {
    switch (c) {
        case Component::warmstart: return "warmstart";
        case Component::ss_mocma: return "ss_mocma";
        case Component::restart_cma: return "restart_cma";
        case Component::ipop_mocma: return "ipop_mocma";
    }
    throw std::logic_error("component_name: bad component");
}

Solution RunEvaluator::evaluate(const Vec& x, Component who) {
    if (total_ >= budget_) throw BudgetExhausted("evaluation budget exhausted");
    ObjectiveVector v = problem_.evaluate(x);
    if (!std::isfinite(v.f1) || !std::isfinite(v.f2)) {
        throw std::runtime_error("non-finite objective value");
    }
    ++total_;
    ++ledgers_[static_cast<std::size_t>(who)];
    Solution s{x, v, total_};
    double before = archive_.hv();
    archive_.insert(s);
    if (archive_.hv() > before) trace_.push_back({total_, archive_.hv()});
    return s;
}

const Solution& RunEvaluator::origin(Component who) {
    if (!origin_) origin_ = evaluate(Vec::Zero(problem_.dim()), who);
    return *origin_;
}

}  // namespace hmo
