#include "hmo/cma.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>

namespace hmo {

namespace {

constexpr double kSigmaMin = 1e-20;
constexpr double kSigmaMax = 1e4;
constexpr double kEigMin = 1e-14;
constexpr double kEigMax = 1e14;
constexpr double kRunSigmaStop = 1e-12;

}  // namespace

int CmaState::default_lambda(int n) {
    return 4 + static_cast<int>(std::floor(3.0 * std::log(static_cast<double>(n))));
}

CmaState::CmaState(const Vec& mean0, double sigma0, int lambda, Rng rng)
    : n_(static_cast<int>(mean0.size())), lambda_(lambda), mean_(mean0), sigma_(sigma0),
      rng_(rng) {
    if (lambda_ < 2) throw std::invalid_argument("CmaState: lambda must be >= 2");
    mu_ = std::max(1, lambda_ / 2);
    weights_.resize(mu_);
    for (int i = 0; i < mu_; ++i) {
        weights_(i) = std::log(mu_ + 0.5) - std::log(static_cast<double>(i + 1));
    }
    weights_ /= weights_.sum();
    mu_eff_ = 1.0 / weights_.squaredNorm();

    const double n = static_cast<double>(n_);
    c_sigma_ = (mu_eff_ + 2.0) / (n + mu_eff_ + 5.0);
    d_sigma_ = 1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff_ - 1.0) / (n + 1.0)) - 1.0) + c_sigma_;
    c_c_ = (4.0 + mu_eff_ / n) / (n + 4.0 + 2.0 * mu_eff_ / n);
    c_1_ = 2.0 / ((n + 1.3) * (n + 1.3) + mu_eff_);
    c_mu_ = std::min(1.0 - c_1_, 2.0 * (mu_eff_ - 2.0 + 1.0 / mu_eff_) /
                                     ((n + 2.0) * (n + 2.0) + mu_eff_));
    chi_n_ = std::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));

    c_ = Mat::Identity(n_, n_);
    p_sigma_ = Vec::Zero(n_);
    p_c_ = Vec::Zero(n_);
    update_decomposition();
}

Vec reflect_into_box(Vec x) {
    const double lo = kLowerBound;
    const double hi = kUpperBound;
    const double width = hi - lo;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        double v = x(i);
        if (v >= lo && v <= hi) continue;
        // Fold onto the period-2*width triangle wave.
        double t = std::fmod(v - lo, 2.0 * width);
        if (t < 0.0) t += 2.0 * width;
        x(i) = (t <= width) ? lo + t : hi - (t - width);
    }
    return x;
}

void CmaState::update_decomposition() {
    Mat sym = 0.5 * (c_ + c_.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> eig(sym);
    Vec vals = eig.eigenvalues();
    double top = std::max(vals.maxCoeff(), kEigMin);
    double floor_val = std::max(kEigMin, top / kEigMax);
    bool repaired = false;
    for (int i = 0; i < n_; ++i) {
        if (vals(i) < floor_val) {
            vals(i) = floor_val;
            repaired = true;
        } else if (vals(i) > kEigMax) {
            vals(i) = kEigMax;
            repaired = true;
        }
    }
    const Mat& b = eig.eigenvectors();
    if (repaired) c_ = b * vals.asDiagonal() * b.transpose();
    c_sqrt_ = b * vals.cwiseSqrt().asDiagonal() * b.transpose();
    c_inv_sqrt_ = b * vals.cwiseSqrt().cwiseInverse().asDiagonal() * b.transpose();
}

std::vector<Vec> CmaState::ask() {
    std::vector<Vec> out;
    out.reserve(static_cast<std::size_t>(lambda_));
    for (int k = 0; k < lambda_; ++k) {
        Vec z(n_);
        for (int i = 0; i < n_; ++i) z(i) = rng_.normal();
        out.push_back(reflect_into_box(mean_ + sigma_ * (c_sqrt_ * z)));
    }
    return out;
}

void CmaState::tell(const std::vector<Vec>& points, const std::vector<double>& fitness) {
    if (points.size() != static_cast<std::size_t>(lambda_) || fitness.size() != points.size()) {
        throw std::invalid_argument("CmaState::tell: need exactly lambda points and fitnesses");
    }

    std::vector<int> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        double fa = fitness[static_cast<std::size_t>(a)];
        double fb = fitness[static_cast<std::size_t>(b)];
        bool ga = std::isfinite(fa);
        bool gb = std::isfinite(fb);
        if (ga != gb) return ga;  // non-finite ranked worst
        if (!ga) return false;
        return fa < fb;
    });

    Vec mean_old = mean_;
    mean_ = Vec::Zero(n_);
    for (int i = 0; i < mu_; ++i) {
        mean_ += weights_(i) * points[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    }

    Vec delta = (mean_ - mean_old) / sigma_;
    p_sigma_ = (1.0 - c_sigma_) * p_sigma_ +
               std::sqrt(c_sigma_ * (2.0 - c_sigma_) * mu_eff_) * (c_inv_sqrt_ * delta);

    double ps_norm = p_sigma_.norm();
    double hs_thresh =
        (1.4 + 2.0 / (n_ + 1.0)) *
        std::sqrt(1.0 - std::pow(1.0 - c_sigma_, 2.0 * static_cast<double>(iteration_ + 1))) *
        chi_n_;
    double h_sigma = ps_norm < hs_thresh ? 1.0 : 0.0;

    p_c_ = (1.0 - c_c_) * p_c_ +
           h_sigma * std::sqrt(c_c_ * (2.0 - c_c_) * mu_eff_) * delta;

    Mat rank_mu = Mat::Zero(n_, n_);
    for (int i = 0; i < mu_; ++i) {
        Vec y = (points[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] - mean_old) / sigma_;
        rank_mu.noalias() += weights_(i) * y * y.transpose();
    }
    c_ = (1.0 - c_1_ - c_mu_) * c_ +
         c_1_ * (p_c_ * p_c_.transpose() + (1.0 - h_sigma) * c_c_ * (2.0 - c_c_) * c_) +
         c_mu_ * rank_mu;

    sigma_ *= std::exp((c_sigma_ / d_sigma_) * (ps_norm / chi_n_ - 1.0));
    sigma_ = std::clamp(sigma_, kSigmaMin, kSigmaMax);

    ++iteration_;
    update_decomposition();
}

int lambda_for_exponent(int restart_index, double b) {
    if (restart_index < 0) throw std::invalid_argument("sample_lambda: negative restart index");
    const double lambda_min = 50.0;
    const double lambda_max = lambda_min * std::pow(1.02, restart_index);
    return static_cast<int>(std::lround(lambda_min * std::pow(lambda_max / lambda_min, b)));
}

int sample_lambda(int restart_index, Rng& rng) {
    return lambda_for_exponent(restart_index, rng.uniform(0.0, 2.0));
}

std::int64_t restart_iteration_cap(int restart_index) {
    return std::llround(100.0 * std::pow(1.02, restart_index));
}

RestartParams sample_restart_params(int restart_index, Rng& rng) {
    RestartParams p;
    p.alpha = rng.uniform();
    p.lambda = sample_lambda(restart_index, rng);
    p.iteration_cap = restart_iteration_cap(restart_index);
    return p;
}

RestartCma::RestartCma(int n, std::uint64_t seed) : n_(n), rng_(seed) {
    params_ = sample_restart_params(0, rng_);
}

void RestartCma::begin_run(RunEvaluator& ev) {
    Vec mean0(n_);
    for (int i = 0; i < n_; ++i) mean0(i) = rng_.uniform(-4.0, 4.0);
    cma_.emplace(mean0, 2.0, params_.lambda, rng_.split(0x636d61ULL));
    scalarization_ = make_scalarization(ev.origin(Component::restart_cma).value, params_.alpha);
    run_best_.reset();
    run_best_g_ = std::numeric_limits<double>::infinity();
    last_improvement_iter_ = 0;
}

RestartCma::StepOutcome RestartCma::step(RunEvaluator& ev, std::int64_t eval_slice) {
    StepOutcome out;
    const std::int64_t before = ev.total();
    if (!cma_) begin_run(ev);  // may charge f(0) when it is not cached yet

    // The slice gates whole generations; the one-time normalizer charge above
    // is reported in evals_used but does not displace a generation.
    std::int64_t gen_evals = 0;
    while (gen_evals + cma_->lambda() <= eval_slice && ev.remaining() >= cma_->lambda()) {
        auto points = cma_->ask();
        std::vector<double> fitness;
        fitness.reserve(points.size());
        Solution gen_best;
        double gen_best_g = std::numeric_limits<double>::infinity();
        for (const auto& x : points) {
            Solution s = ev.evaluate(x, Component::restart_cma);
            double g = (*scalarization_)(s.value);
            fitness.push_back(g);
            if (g < gen_best_g) {
                gen_best_g = g;
                gen_best = s;
            }
        }
        gen_evals += cma_->lambda();
        cma_->tell(points, fitness);

        if (gen_best_g < run_best_g_) {
            run_best_g_ = gen_best_g;
            run_best_ = gen_best;
            last_improvement_iter_ = cma_->iteration();
        }

        const std::int64_t stagnation_span =
            20 + static_cast<std::int64_t>((n_ + cma_->lambda() - 1) / cma_->lambda());
        bool done = cma_->iteration() >= params_.iteration_cap ||
                    cma_->sigma() < kRunSigmaStop ||
                    cma_->iteration() - last_improvement_iter_ >= stagnation_span;
        if (done) {
            out.finished_best = run_best_;
            ++restart_index_;
            params_ = sample_restart_params(restart_index_, rng_);
            cma_.reset();
            break;
        }
    }
    out.evals_used = ev.total() - before;
    return out;
}

}  // namespace hmo
