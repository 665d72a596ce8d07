#include "hmo/warmstart.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace hmo {

ScheduleEntry alpha_schedule(int i) {
    if (i < 0) throw std::invalid_argument("alpha_schedule: negative index");
    const int pos = i % kAlphaScheduleLength;
    const bool refined = i >= kAlphaScheduleLength;
    double alpha;
    if (pos == 0) {
        alpha = 0.5;
    } else if (pos == 1) {
        alpha = 0.0;
    } else if (pos == 2) {
        alpha = 1.0;
    } else if (pos <= 21) {
        alpha = 0.95 - 0.05 * (pos - 3);
    } else {
        alpha = 0.0;  // the schedule's duplicate trailing 0.0
    }
    return {alpha, refined};
}

namespace {

Vec clip_to_box(Vec x) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        x(i) = std::clamp(x(i), kLowerBound, kUpperBound);
    }
    return x;
}

/// Interpolation sample set plus the quadratic model
/// m(x) = c + g'(x - base) + 1/2 (x - base)' H (x - base).
struct QuadModel {
    Vec base;
    double c = 0.0;
    Vec g;
    Mat h;
    std::vector<Vec> pts;
    std::vector<double> vals;

    double predict(const Vec& x) const {
        Vec d = x - base;
        return c + g.dot(d) + 0.5 * d.dot(h * d);
    }
};

/// Least Frobenius-norm-change refit: keeps H as close as possible to the
/// previous Hessian while interpolating every sample point. Returns false on
/// a degenerate geometry (singular KKT system or large residual).
bool refit(QuadModel& m) {
    const int n = static_cast<int>(m.base.size());
    const int k = static_cast<int>(m.pts.size());
    const int dim = k + 1 + n;

    Mat kkt = Mat::Zero(dim, dim);
    Vec rhs = Vec::Zero(dim);
    std::vector<Vec> d(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) d[static_cast<std::size_t>(j)] = m.pts[static_cast<std::size_t>(j)] - m.base;

    for (int j = 0; j < k; ++j) {
        for (int l = 0; l < k; ++l) {
            double dot = d[static_cast<std::size_t>(j)].dot(d[static_cast<std::size_t>(l)]);
            kkt(j, l) = 0.5 * dot * dot;
        }
        kkt(j, k) = 1.0;
        kkt(k, j) = 1.0;
        kkt.block(k + 1, j, n, 1) = d[static_cast<std::size_t>(j)];
        kkt.block(j, k + 1, 1, n) = d[static_cast<std::size_t>(j)].transpose();
        rhs(j) = m.vals[static_cast<std::size_t>(j)] -
                 0.5 * d[static_cast<std::size_t>(j)].dot(m.h * d[static_cast<std::size_t>(j)]);
    }

    Eigen::FullPivLU<Mat> lu(kkt);
    if (!lu.isInvertible()) return false;
    Vec sol = lu.solve(rhs);
    if (!sol.allFinite()) return false;

    Mat h_new = m.h;
    for (int j = 0; j < k; ++j) {
        h_new.noalias() += sol(j) * d[static_cast<std::size_t>(j)] * d[static_cast<std::size_t>(j)].transpose();
    }
    double c_new = sol(k);
    Vec g_new = sol.segment(k + 1, n);

    double scale = 1.0;
    for (double v : m.vals) scale = std::max(scale, std::abs(v));
    for (int j = 0; j < k; ++j) {
        double pred = c_new + g_new.dot(d[static_cast<std::size_t>(j)]) +
                      0.5 * d[static_cast<std::size_t>(j)].dot(h_new * d[static_cast<std::size_t>(j)]);
        if (std::abs(pred - m.vals[static_cast<std::size_t>(j)]) > 1e-8 * scale) return false;
    }

    m.c = c_new;
    m.g = g_new;
    m.h = 0.5 * (h_new + h_new.transpose());
    return true;
}

/// Steihaug truncated-CG solution of min g's + 1/2 s'Hs subject to |s| <= radius.
Vec solve_subproblem(const Vec& g, const Mat& h, double radius) {
    const int n = static_cast<int>(g.size());
    Vec s = Vec::Zero(n);
    double gnorm = g.norm();
    if (gnorm < 1e-16) return s;

    Vec r = g;
    Vec dir = -g;
    const double tol = std::min(0.1, std::sqrt(gnorm)) * gnorm;

    auto to_boundary = [&](const Vec& base, const Vec& step) {
        // positive tau with |base + tau step| = radius
        double a = step.squaredNorm();
        double b = 2.0 * base.dot(step);
        double c = base.squaredNorm() - radius * radius;
        double disc = std::max(0.0, b * b - 4.0 * a * c);
        return (-b + std::sqrt(disc)) / (2.0 * a);
    };

    for (int it = 0; it < 2 * n + 10; ++it) {
        Vec hd = h * dir;
        double dhd = dir.dot(hd);
        if (dhd <= 0.0) return s + to_boundary(s, dir) * dir;
        double alpha = r.squaredNorm() / dhd;
        if ((s + alpha * dir).norm() >= radius) return s + to_boundary(s, dir) * dir;
        s += alpha * dir;
        Vec r_next = r + alpha * hd;
        if (r_next.norm() <= tol) return s;
        double beta = r_next.squaredNorm() / r.squaredNorm();
        dir = -r_next + beta * dir;
        r = r_next;
    }
    return s;
}

struct Budget {
    int used = 0;
    int cap = 0;
    bool spent() const { return used >= cap; }
};

/// Evaluates the 2n+1 initial sample set around `center`, reusing the known
/// center value. Returns false if the budget ran out before completion.
bool build_sample_set(QuadModel& m, const std::function<double(const Vec&)>& fn, Budget& budget,
                      Vec center, double center_val, double radius,
                      double& best_f, Vec& best_x) {
    const int n = static_cast<int>(center.size());
    m.base = center;
    m.pts.assign(1, center);
    m.vals.assign(1, center_val);
    m.g = Vec::Zero(n);
    m.h = Mat::Zero(n, n);
    m.c = center_val;

    for (int i = 0; i < n; ++i) {
        for (double sign : {+1.0, -1.0}) {
            if (budget.spent()) return false;
            Vec p = center;
            p(i) += sign * radius;
            p = clip_to_box(p);
            if ((p - center).norm() < 1e-12) {
                p = center;
                p(i) -= sign * 0.5 * radius;  // boundary start: probe inward
                p = clip_to_box(p);
            }
            double v = fn(p);
            ++budget.used;
            m.pts.push_back(p);
            m.vals.push_back(v);
            if (v < best_f) {
                best_f = v;
                best_x = p;
            }
        }
    }
    return true;
}

}  // namespace

TrustRegionResult tr_minimize(const std::function<double(const Vec&)>& fn, const Vec& x0,
                              std::optional<double> f0, const TrustRegionOptions& opt) {
    const int n = static_cast<int>(x0.size());
    Budget budget{0, opt.max_evals};

    Vec start = clip_to_box(x0);
    double f_start;
    if (f0.has_value() && (start - x0).norm() == 0.0) {
        f_start = *f0;
    } else {
        if (budget.spent()) return {start, std::numeric_limits<double>::infinity(), 0};
        f_start = fn(start);
        ++budget.used;
    }

    Vec best_x = start;
    double best_f = f_start;
    double radius = opt.radius0;

    // Relative improvement aggregated over the last n+1 accepted steps; the
    // deque holds the baseline (best after the model build) plus one entry
    // per accepted step.
    std::deque<double> g_hist;
    const std::size_t window = static_cast<std::size_t>(n) + 1;
    auto window_stalled = [&]() {
        if (g_hist.size() < 2) return false;
        double ref = g_hist.front();
        double cur = g_hist.back();
        double agg = (ref - cur) / std::max({std::abs(ref), std::abs(cur), 1.0});
        return agg < opt.ftol;
    };
    auto push_event = [&](double f) {
        g_hist.push_back(f);
        while (g_hist.size() > window + 1) g_hist.pop_front();
    };

    QuadModel model;
    if (!build_sample_set(model, fn, budget, start, f_start, radius, best_f, best_x)) {
        return {best_x, best_f, budget.used};
    }
    if (!refit(model)) return {best_x, best_f, budget.used};
    push_event(best_f);
    if (!std::isfinite(opt.ftol)) return {best_x, best_f, budget.used};

    bool just_rebuilt = true;
    while (!budget.spent() && radius >= opt.radius_min) {
        // Model is kept centered on the incumbent.
        if ((model.base - best_x).norm() > 0.0) {
            Vec d = best_x - model.base;
            model.c = model.predict(best_x);
            model.g += model.h * d;
            model.base = best_x;
        }

        Vec step = solve_subproblem(model.g, model.h, radius);
        double pred = -(model.g.dot(step) + 0.5 * step.dot(model.h * step));
        if (step.norm() < 1e-14 || pred <= 0.0) {
            radius *= 0.5;
            continue;
        }

        Vec trial = clip_to_box(best_x + step);
        double f_trial = fn(trial);
        ++budget.used;
        double actual = best_f - f_trial;
        double ratio = actual / std::max(pred, 1e-300);

        // Replace the sample point farthest from the incumbent.
        std::size_t drop = 0;
        double far = -1.0;
        for (std::size_t j = 0; j < model.pts.size(); ++j) {
            double dist = (model.pts[j] - best_x).norm();
            if (dist > far) {
                far = dist;
                drop = j;
            }
        }
        model.pts[drop] = trial;
        model.vals[drop] = f_trial;

        bool accepted = actual > 0.0;
        if (accepted) {
            best_x = trial;
            best_f = f_trial;
            push_event(best_f);
        }

        if (ratio < 0.25) {
            radius *= 0.5;
        } else if (ratio > 0.75) {
            radius = std::min(2.0 * radius, opt.radius0);
        }

        if (refit(model)) {
            just_rebuilt = false;
        } else {
            // Degenerate geometry: resample around the incumbent.
            if (just_rebuilt) break;
            if (!build_sample_set(model, fn, budget, best_x, best_f, radius, best_f, best_x))
                break;
            if (!refit(model)) break;
            just_rebuilt = true;
        }

        if (accepted && window_stalled()) break;
    }
    return {best_x, best_f, budget.used};
}

ScalarizedResult minimize_scalarized(const Scalarization& s, RunEvaluator& ev, Component who,
                                     const Solution& known_x0, const TrustRegionOptions& opt,
                                     std::vector<Solution>* evals_log) {
    Solution best = known_x0;
    double best_g = s(known_x0.value);
    int used = 0;
    auto fn = [&](const Vec& x) {
        Solution sol = ev.evaluate(x, who);
        ++used;
        if (evals_log) evals_log->push_back(sol);
        double val = s(sol.value);
        if (val < best_g) {
            best_g = val;
            best = sol;
        }
        return val;
    };
    tr_minimize(fn, known_x0.point, best_g, opt);
    return {best, used};
}

std::vector<Solution> run_warmstart(RunEvaluator& ev, std::int64_t budget) {
    const int n = ev.problem().dim();
    std::vector<Solution> all;
    all.reserve(static_cast<std::size_t>(budget));

    std::int64_t used_before = ev.total();
    bool origin_was_cached = ev.origin_cached();
    Solution incumbent = ev.origin(Component::warmstart);
    if (!origin_was_cached) all.push_back(incumbent);

    auto used = [&]() { return ev.total() - used_before; };

    int leg = 0;
    while (used() < budget) {
        ScheduleEntry entry = alpha_schedule(leg);
        Scalarization sc = make_scalarization(ev.origin(Component::warmstart).value, entry.alpha);

        TrustRegionOptions opt;
        opt.radius0 = (leg == 0) ? 6.0 : 2.0;
        opt.ftol = entry.refined ? 1e-4 : 1e-3;
        std::int64_t remaining = budget - used();
        opt.max_evals = static_cast<int>(
            (leg == 0) ? std::min<std::int64_t>(5 * n, remaining) : remaining);

        auto res = minimize_scalarized(sc, ev, Component::warmstart, incumbent, opt, &all);
        incumbent = res.best;
        ++leg;
    }
    return all;
}

}  // namespace hmo
