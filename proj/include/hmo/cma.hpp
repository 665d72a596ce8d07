#ifndef HMO_CMA_HPP
#define HMO_CMA_HPP

#include <optional>
#include <vector>

#include "hmo/evaluation.hpp"
#include "hmo/rng.hpp"
#include "hmo/scalarize.hpp"

namespace hmo {

/// (mu/mu_w, lambda)-CMA-ES with cumulative step-size adaptation and
/// rank-one/rank-mu covariance updates, the community-standard constants.
/// Samples are clipped to [-5,5]^n by coordinate-wise reflection.
class CmaState {
public:
    CmaState(const Vec& mean0, double sigma0, int lambda, Rng rng);

    /// Standard default population size 4 + floor(3 ln n).
    static int default_lambda(int n);

    std::vector<Vec> ask();

    /// Ranks by fitness (non-finite ranked worst, ties kept stable) and
    /// applies the mean/path/covariance/step-size updates.
    void tell(const std::vector<Vec>& points, const std::vector<double>& fitness);

    const Vec& mean() const { return mean_; }
    double sigma() const { return sigma_; }
    const Mat& cov() const { return c_; }
    int lambda() const { return lambda_; }
    int dim() const { return n_; }
    std::int64_t iteration() const { return iteration_; }

private:
    void update_decomposition();

    int n_;
    int lambda_;
    int mu_;
    Vec weights_;
    double mu_eff_;
    double c_sigma_, d_sigma_, c_c_, c_1_, c_mu_, chi_n_;

    Vec mean_;
    double sigma_;
    Mat c_;
    Vec p_sigma_, p_c_;
    std::int64_t iteration_ = 0;

    Mat c_sqrt_;      // C^{1/2}
    Mat c_inv_sqrt_;  // C^{-1/2}
    Rng rng_;
};

/// Reflects coordinates into [-5,5] (triangle-wave folding).
Vec reflect_into_box(Vec x);

/// Population size for restart i: round(lambda_min * (lambda_max/lambda_min)^b)
/// with lambda_min = 50, lambda_max = 50 * 1.02^i, b ~ U[0,2].
int sample_lambda(int restart_index, Rng& rng);

/// The deterministic part of sample_lambda for a given exponent b.
int lambda_for_exponent(int restart_index, double b);

/// Iteration cap for restart i: round(100 * 1.02^i).
std::int64_t restart_iteration_cap(int restart_index);

/// Per-restart parameters of the randomized restart wrapper.
struct RestartParams {
    double alpha = 0.5;
    int lambda = 50;
    std::int64_t iteration_cap = 100;
};
RestartParams sample_restart_params(int restart_index, Rng& rng);

/// CMA-ES with restarts on freshly sampled scalarizations: each restart draws
/// alpha ~ U[0,1], a population size by sample_lambda, mean ~ U[-4,4]^n and
/// sigma = 2. A run ends at its iteration cap, on sigma underflow, or on
/// best-fitness stagnation over 20 + ceil(n/lambda) generations.
class RestartCma {
public:
    RestartCma(int n, std::uint64_t seed);

    struct StepOutcome {
        std::int64_t evals_used = 0;
        std::optional<Solution> finished_best;  // set when a run just ended
    };

    /// Advances the current run by whole generations while they fit into
    /// `eval_slice`. When the run terminates, returns its best solution (for
    /// injection) and prepares restart i+1.
    StepOutcome step(RunEvaluator& ev, std::int64_t eval_slice);

    /// Evaluations the next atomic step (one generation) would consume.
    std::int64_t next_step_cost() const { return cma_ ? cma_->lambda() : params_.lambda; }

    int restart_index() const { return restart_index_; }
    double current_alpha() const { return params_.alpha; }
    const CmaState* state() const { return cma_ ? &*cma_ : nullptr; }

private:
    void begin_run(RunEvaluator& ev);

    int n_;
    Rng rng_;
    int restart_index_ = 0;
    RestartParams params_;
    std::optional<CmaState> cma_;
    std::optional<Scalarization> scalarization_;
    std::optional<Solution> run_best_;
    double run_best_g_ = 0.0;
    std::int64_t last_improvement_iter_ = 0;
};

}  // namespace hmo

#endif  // HMO_CMA_HPP
