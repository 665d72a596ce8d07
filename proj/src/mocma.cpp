#include "hmo/mocma.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hmo/cma.hpp"  // reflect_into_box

namespace hmo {

namespace {

constexpr double kSigmaMin = 1e-20;
constexpr double kSigmaMax = 1e4;

void repair_spd(Mat& c) {
    c = 0.5 * (c + c.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> eig(c);
    Vec vals = eig.eigenvalues();
    double top = std::max(vals.maxCoeff(), 1e-14);
    double floor_val = std::max(1e-14, top / 1e14);
    bool repaired = false;
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        if (vals(i) < floor_val) {
            vals(i) = floor_val;
            repaired = true;
        }
    }
    if (repaired) c = eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().transpose();
}

Vec sample_mutation(const MoIndividual& parent, Rng& rng) {
    const int n = static_cast<int>(parent.x.size());
    Eigen::LLT<Mat> llt(parent.cov);
    Mat l;
    if (llt.info() == Eigen::Success) {
        l = llt.matrixL();
    } else {
        Mat c = parent.cov;
        repair_spd(c);
        l = Eigen::LLT<Mat>(c).matrixL();
    }
    Vec z(n);
    for (int i = 0; i < n; ++i) z(i) = rng.normal();
    return reflect_into_box(parent.x + parent.sigma * (l * z));
}

void update_step_size(MoIndividual& ind, double succ, const MoConstants& k) {
    ind.p_succ = (1.0 - k.c_p) * ind.p_succ + k.c_p * succ;
    ind.sigma *= std::exp((1.0 / k.d) * (ind.p_succ - k.p_target) / (1.0 - k.p_target));
    ind.sigma = std::clamp(ind.sigma, kSigmaMin, kSigmaMax);
}

void update_covariance(MoIndividual& ind, const Vec& step, const MoConstants& k) {
    if (ind.p_succ < k.p_thresh) {
        ind.p_c = (1.0 - k.c_c) * ind.p_c + std::sqrt(k.c_c * (2.0 - k.c_c)) * step;
        ind.cov = (1.0 - k.c_cov) * ind.cov + k.c_cov * ind.p_c * ind.p_c.transpose();
    } else {
        ind.p_c = (1.0 - k.c_c) * ind.p_c;
        ind.cov = (1.0 - k.c_cov) * ind.cov +
                  k.c_cov * (ind.p_c * ind.p_c.transpose() + k.c_c * (2.0 - k.c_c) * ind.cov);
    }
    repair_spd(ind.cov);
}

}  // namespace

MoConstants MoConstants::for_dim(int n) {
    MoConstants k;
    k.d = 1.0 + n / 2.0;
    k.c_c = 2.0 / (n + 2.0);
    k.c_cov = 2.0 / (static_cast<double>(n) * n + 6.0);
    return k;
}

MoIndividual make_individual(const Solution& s, double sigma, const MoConstants& k) {
    MoIndividual ind;
    ind.x = s.point;
    ind.value = s.value;
    ind.sigma = sigma;
    ind.cov = Mat::Identity(s.point.size(), s.point.size());
    ind.p_succ = k.p_target;
    ind.p_c = Vec::Zero(s.point.size());
    ind.eval_index = s.eval_index;
    ind.evaluated = true;
    return ind;
}

MoIndividual crossover(const MoIndividual& a, const MoIndividual& b, Rng& rng,
                       const MoConstants& k) {
    double c = rng.normal(k.blend_mean, k.blend_std);
    MoIndividual child;
    child.x = reflect_into_box(a.x + c * (b.x - a.x));
    child.sigma = 0.5 * (a.sigma + b.sigma);
    child.cov = 0.5 * (a.cov + b.cov);
    child.p_succ = k.p_target;
    child.p_c = Vec::Zero(a.x.size());
    child.evaluated = false;
    return child;
}

std::size_t selection_victim(const std::vector<ObjectiveVector>& values,
                             const ObjectiveVector& ref) {
    auto ranks = nondominated_sort(values);
    int worst = *std::max_element(ranks.begin(), ranks.end());

    std::vector<std::size_t> front_idx;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (ranks[i] == worst) front_idx.push_back(i);
    }
    std::sort(front_idx.begin(), front_idx.end(), [&](std::size_t a, std::size_t b) {
        return values[a].f1 < values[b].f1 || (values[a].f1 == values[b].f1 && a < b);
    });
    std::vector<ObjectiveVector> front;
    front.reserve(front_idx.size());
    for (std::size_t i : front_idx) front.push_back(values[i]);

    std::size_t victim = front_idx[0];
    double min_contrib = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < front.size(); ++j) {
        double contrib = hv_contribution(j, front, ref);
        // Ties drop the latest candidate, keeping incumbents.
        if (contrib < min_contrib || (contrib == min_contrib && front_idx[j] > victim)) {
            min_contrib = contrib;
            victim = front_idx[j];
        }
    }
    return victim;
}

SsMocma::SsMocma(const std::vector<Solution>& seeds, RunEvaluator& ev, Rng rng)
    : n_(ev.problem().dim()), rng_(rng), k_(MoConstants::for_dim(ev.problem().dim())) {
    if (seeds.empty()) throw std::invalid_argument("SsMocma: need at least one seed");

    // Rank all seeds, dropping exact objective duplicates.
    std::vector<Solution> unique;
    for (const auto& s : seeds) {
        bool dup = false;
        for (const auto& u : unique) {
            if (u.value == s.value) {
                dup = true;
                break;
            }
        }
        if (!dup) unique.push_back(s);
    }
    std::vector<ObjectiveVector> values;
    values.reserve(unique.size());
    for (const auto& s : unique) values.push_back(s.value);
    auto ranks = nondominated_sort(values);

    // Sort by (rank, -contribution within rank front).
    std::vector<double> contrib(unique.size(), 0.0);
    int max_rank = *std::max_element(ranks.begin(), ranks.end());
    for (int r = 0; r <= max_rank; ++r) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < unique.size(); ++i) {
            if (ranks[i] == r) idx.push_back(i);
        }
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return values[a].f1 < values[b].f1; });
        std::vector<ObjectiveVector> front;
        for (std::size_t i : idx) front.push_back(values[i]);
        for (std::size_t j = 0; j < idx.size(); ++j) {
            contrib[idx[j]] = hv_contribution(j, front, ev.archive().ref_point());
        }
    }
    std::vector<std::size_t> order(unique.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (ranks[a] != ranks[b]) return ranks[a] < ranks[b];
        return contrib[a] > contrib[b];
    });

    const std::size_t target = 5;
    for (std::size_t i = 0; i < std::min(target, order.size()); ++i) {
        pop_.push_back(make_individual(unique[order[i]], 0.5, k_));
    }
    // Pad with evaluated Gaussian perturbations of the best seed.
    while (pop_.size() < target) {
        Vec x = unique[order[0]].point;
        for (int i = 0; i < n_; ++i) x(i) += 0.5 * rng_.normal();
        x = reflect_into_box(x);
        Solution s = ev.evaluate(x, Component::ss_mocma);
        pop_.push_back(make_individual(s, 0.5, k_));
    }
}

MoStepOutcome SsMocma::step(RunEvaluator& ev, std::optional<Solution> injected) {
    const std::int64_t before = ev.total();
    const ObjectiveVector ref = ev.archive().ref_point();

    MoIndividual child;
    std::size_t parent_idx = pop_.size();  // sentinel: no parent
    bool mutated = false;

    if (injected) {
        child = make_individual(*injected, 0.5, k_);
    } else if (pop_.size() >= 2 && rng_.uniform() < crossover_prob()) {
        std::size_t a = static_cast<std::size_t>(rng_.below(pop_.size()));
        std::size_t b = static_cast<std::size_t>(rng_.below(pop_.size() - 1));
        if (b >= a) ++b;
        child = crossover(pop_[a], pop_[b], rng_, k_);
    } else {
        parent_idx = static_cast<std::size_t>(rng_.below(pop_.size()));
        const MoIndividual& parent = pop_[parent_idx];
        child.x = sample_mutation(parent, rng_);
        child.sigma = parent.sigma;
        child.cov = parent.cov;
        child.p_succ = parent.p_succ;
        child.p_c = Vec::Zero(n_);
        mutated = true;
    }
    if (!child.evaluated) {
        Solution s = ev.evaluate(child.x, Component::ss_mocma);
        child.value = s.value;
        child.eval_index = s.eval_index;
        child.evaluated = true;
    }

    std::vector<ObjectiveVector> values;
    values.reserve(pop_.size() + 1);
    for (const auto& ind : pop_) values.push_back(ind.value);
    values.push_back(child.value);
    std::size_t victim = selection_victim(values, ref);
    bool child_survives = victim != pop_.size();

    if (mutated) {
        double succ = child_survives ? 1.0 : 0.0;
        update_step_size(pop_[parent_idx], succ, k_);
        if (child_survives) {
            Vec step = (child.x - pop_[parent_idx].x) / std::max(pop_[parent_idx].sigma, kSigmaMin);
            update_step_size(child, succ, k_);
            update_covariance(child, step, k_);
        }
    }

    if (child_survives) {
        pop_.erase(pop_.begin() + static_cast<std::ptrdiff_t>(victim));
        pop_.push_back(std::move(child));
    }

    ++iteration_;
    if (iteration_ % growth_period() == 0) {
        std::size_t pick = static_cast<std::size_t>(rng_.below(pop_.size()));
        MoIndividual clone = pop_[pick];
        clone.sigma = 0.5;
        clone.p_succ = k_.p_target;
        clone.p_c = Vec::Zero(n_);
        pop_.push_back(std::move(clone));
    }
    return {ev.total() - before};
}

IpopMocma::IpopMocma(int n, Rng rng) : n_(n), rng_(rng), k_(MoConstants::for_dim(n)) {}

std::int64_t IpopMocma::pending_count() const {
    return static_cast<std::int64_t>(
        std::count_if(pop_.begin(), pop_.end(), [](const MoIndividual& i) { return !i.evaluated; }));
}

std::int64_t IpopMocma::next_step_cost() const {
    if (!initialized_) return (pop_size() + 1) / 2;  // at least the fresh half
    std::int64_t pending = pending_count();
    return pending > 0 ? pending : pop_size();
}

void IpopMocma::rebuild(RunEvaluator& ev) {
    pop_.clear();
    const int size = pop_size();
    const auto& members = ev.archive().members();
    const int seeded = members.empty() ? 0 : size / 2;
    for (int i = 0; i < seeded; ++i) {
        const Solution& m = members[rng_.below(members.size())];
        pop_.push_back(make_individual(m, 2.0, k_));
    }
    for (int i = seeded; i < size; ++i) {
        MoIndividual ind;
        ind.x = Vec(n_);
        for (int j = 0; j < n_; ++j) ind.x(j) = rng_.uniform(-4.0, 4.0);
        ind.sigma = 2.0;
        ind.cov = Mat::Identity(n_, n_);
        ind.p_succ = k_.p_target;
        ind.p_c = Vec::Zero(n_);
        ind.evaluated = false;
        pop_.push_back(std::move(ind));
    }
    gens_since_restart_ = 0;
}

MoStepOutcome IpopMocma::step(RunEvaluator& ev) {
    const std::int64_t before = ev.total();
    if (!initialized_) {
        rebuild(ev);
        initialized_ = true;
    }

    if (pending_count() > 0) {
        // Warm-up: evaluate freshly initialized individuals.
        for (auto& ind : pop_) {
            if (ind.evaluated) continue;
            if (ev.remaining() <= 0) break;
            Solution s = ev.evaluate(ind.x, Component::ipop_mocma);
            ind.value = s.value;
            ind.eval_index = s.eval_index;
            ind.evaluated = true;
        }
        return {ev.total() - before};
    }

    const std::size_t parents = pop_.size();
    std::vector<MoIndividual> offspring;
    offspring.reserve(parents);
    for (std::size_t i = 0; i < parents; ++i) {
        if (ev.remaining() <= 0) return {ev.total() - before};
        MoIndividual child;
        child.x = sample_mutation(pop_[i], rng_);
        child.sigma = pop_[i].sigma;
        child.cov = pop_[i].cov;
        child.p_succ = pop_[i].p_succ;
        child.p_c = Vec::Zero(n_);
        Solution s = ev.evaluate(child.x, Component::ipop_mocma);
        child.value = s.value;
        child.eval_index = s.eval_index;
        child.evaluated = true;
        offspring.push_back(std::move(child));
    }

    // Environmental selection on the 2N union by iterative worst removal.
    std::vector<MoIndividual> pool = pop_;
    for (auto& c : offspring) pool.push_back(c);
    std::vector<bool> survives(pool.size(), true);
    std::vector<std::size_t> alive(pool.size());
    std::iota(alive.begin(), alive.end(), 0);
    const ObjectiveVector ref = ev.archive().ref_point();
    while (alive.size() > parents) {
        std::vector<ObjectiveVector> values;
        values.reserve(alive.size());
        for (std::size_t i : alive) values.push_back(pool[i].value);
        std::size_t victim_pos = selection_victim(values, ref);
        survives[alive[victim_pos]] = false;
        alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(victim_pos));
    }

    // Success-rule updates: offspring k surviving counts as a success for
    // parent k and for the offspring itself.
    for (std::size_t i = 0; i < parents; ++i) {
        bool succ = survives[parents + i];
        update_step_size(pool[i], succ ? 1.0 : 0.0, k_);
        if (succ) {
            Vec step = (pool[parents + i].x - pop_[i].x) / std::max(pop_[i].sigma, kSigmaMin);
            update_step_size(pool[parents + i], 1.0, k_);
            update_covariance(pool[parents + i], step, k_);
        }
    }

    std::vector<MoIndividual> next;
    next.reserve(parents);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (survives[i]) next.push_back(std::move(pool[i]));
    }
    pop_ = std::move(next);

    ++generation_;
    ++gens_since_restart_;
    if (gens_since_restart_ >= 50LL * n_) {
        ++restart_count_;
        rebuild(ev);
    }
    return {ev.total() - before};
}

}  // namespace hmo
