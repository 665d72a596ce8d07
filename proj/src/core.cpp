#include "hmo/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace hmo {

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    return a.f1 <= b.f1 && a.f2 <= b.f2 && (a.f1 < b.f1 || a.f2 < b.f2);
}

std::vector<int> nondominated_sort(const std::vector<ObjectiveVector>& pop) {
    const std::size_t n = pop.size();
    std::vector<int> rank(n, -1);
    std::vector<std::size_t> alive(n);
    for (std::size_t i = 0; i < n; ++i) alive[i] = i;

    int level = 0;
    while (!alive.empty()) {
        std::vector<std::size_t> next;
        next.reserve(alive.size());
        for (std::size_t i : alive) {
            bool dominated = false;
            for (std::size_t j : alive) {
                if (j != i && dominates(pop[j], pop[i])) {
                    dominated = true;
                    break;
                }
            }
            if (dominated) {
                next.push_back(i);
            } else {
                rank[i] = level;
            }
        }
        alive = std::move(next);
        ++level;
    }
    return rank;
}

namespace {

// Non-dominated staircase of the points strictly dominating ref, sorted by
// ascending f1 (f2 strictly descending).
std::vector<ObjectiveVector> staircase(const std::vector<ObjectiveVector>& front,
                                       const ObjectiveVector& ref) {
    std::vector<ObjectiveVector> pts;
    pts.reserve(front.size());
    for (const auto& p : front) {
        if (p.f1 < ref.f1 && p.f2 < ref.f2) pts.push_back(p);
    }
    std::sort(pts.begin(), pts.end(), [](const ObjectiveVector& a, const ObjectiveVector& b) {
        return a.f1 < b.f1 || (a.f1 == b.f1 && a.f2 < b.f2);
    });
    std::vector<ObjectiveVector> stairs;
    stairs.reserve(pts.size());
    double best_f2 = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) {
        if (p.f2 < best_f2) {
            stairs.push_back(p);
            best_f2 = p.f2;
        }
    }
    return stairs;
}

}  // namespace

double hv2d(const std::vector<ObjectiveVector>& front, const ObjectiveVector& ref) {
    const auto stairs = staircase(front, ref);
    double area = 0.0;
    for (std::size_t i = 0; i < stairs.size(); ++i) {
        double right = (i + 1 < stairs.size()) ? stairs[i + 1].f1 : ref.f1;
        area += (right - stairs[i].f1) * (ref.f2 - stairs[i].f2);
    }
    return area;
}

double hv_contribution(std::size_t i, const std::vector<ObjectiveVector>& front,
                       const ObjectiveVector& ref) {
    if (i >= front.size()) throw std::out_of_range("hv_contribution: index out of range");
    double right = (i + 1 < front.size()) ? std::min(front[i + 1].f1, ref.f1) : ref.f1;
    double top = (i > 0) ? std::min(front[i - 1].f2, ref.f2) : ref.f2;
    double w = right - front[i].f1;
    double h = top - front[i].f2;
    if (w <= 0.0 || h <= 0.0) return 0.0;
    return w * h;
}

bool ParetoArchive::insert(const Solution& s) {
    const ObjectiveVector v = s.value;
    auto pos_it = std::lower_bound(
        members_.begin(), members_.end(), v.f1,
        [](const Solution& m, double f1) { return m.value.f1 < f1; });
    std::size_t pos = static_cast<std::size_t>(pos_it - members_.begin());

    // Dominated-by check against the predecessor (smallest f2 among members
    // with strictly smaller f1) and an equal-f1 incumbent.
    if (pos > 0 && members_[pos - 1].value.f2 <= v.f2) return false;
    if (pos < members_.size() && members_[pos].value.f1 == v.f1 &&
        members_[pos].value.f2 <= v.f2) {
        return false;  // dominated, or exact duplicate: incumbent kept
    }

    // Members weakly dominated by v form a contiguous run starting at pos.
    std::size_t end = pos;
    while (end < members_.size() && members_[end].value.f2 >= v.f2) ++end;

    // Incremental hv update: only the strips of the predecessor, the removed
    // run, and the new member change.
    const double inf = std::numeric_limits<double>::infinity();
    auto strip = [this](const ObjectiveVector& m, double next_f1) {
        double w = std::min(next_f1, ref_.f1) - m.f1;
        double h = ref_.f2 - m.f2;
        return (w > 0.0 && h > 0.0) ? w * h : 0.0;
    };
    auto next_f1_of = [this, inf](std::size_t j) {
        return (j + 1 < members_.size()) ? members_[j + 1].value.f1 : inf;
    };

    double old_area = 0.0;
    double new_area = 0.0;
    if (pos > 0) {
        double old_next = (pos < members_.size()) ? members_[pos].value.f1 : inf;
        old_area += strip(members_[pos - 1].value, old_next);
        new_area += strip(members_[pos - 1].value, v.f1);
    }
    for (std::size_t j = pos; j < end; ++j) old_area += strip(members_[j].value, next_f1_of(j));
    new_area += strip(v, (end < members_.size()) ? members_[end].value.f1 : inf);

    members_.erase(members_.begin() + static_cast<std::ptrdiff_t>(pos),
                   members_.begin() + static_cast<std::ptrdiff_t>(end));
    members_.insert(members_.begin() + static_cast<std::ptrdiff_t>(pos), s);
    hv_ += new_area - old_area;
    return true;
}

std::vector<ObjectiveVector> ParetoArchive::front() const {
    std::vector<ObjectiveVector> f;
    f.reserve(members_.size());
    for (const auto& m : members_) f.push_back(m.value);
    return f;
}

void ParetoArchive::write(std::ostream& os) const {
    char buf[128];
    for (const auto& m : members_) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %lld\n", m.value.f1, m.value.f2,
                      static_cast<long long>(m.eval_index));
        os << buf;
    }
}

}  // namespace hmo
