#ifndef HMO_MOCMA_HPP
#define HMO_MOCMA_HPP

#include <optional>
#include <vector>

#include "hmo/evaluation.hpp"
#include "hmo/rng.hpp"

namespace hmo {

/// Success-rule constants of the (1+1)-MO-CMA update, plus the crossover
/// blend distribution. The blend draws from N(mean, std^2); the paper's
/// N(1/2, 1/4) is read with 1/4 as the variance, so blend_std defaults to 1/2.
struct MoConstants {
    double p_target = 0.181;
    double c_p = 1.0 / 12.0;
    double d = 0.0;       // step-size damping, 1 + n/2
    double c_c = 0.0;     // evolution-path learning rate, 2/(n+2)
    double c_cov = 0.0;   // covariance learning rate, 2/(n^2+6)
    double p_thresh = 0.44;
    double blend_mean = 0.5;
    double blend_std = 0.5;

    static MoConstants for_dim(int n);
};

/// One individual of either MO-CMA-ES variant.
struct MoIndividual {
    Vec x;
    ObjectiveVector value{};
    double sigma = 0.5;
    Mat cov;
    double p_succ = 0.181;
    Vec p_c;
    std::int64_t eval_index = 0;
    bool evaluated = false;
};

MoIndividual make_individual(const Solution& s, double sigma, const MoConstants& k);

/// Blend crossover: x3 = a.x + c (b.x - a.x) with c ~ N(blend_mean,
/// blend_std^2), reflected into the box; sigma and C are averaged, the
/// success statistics reset. The result is not yet evaluated.
MoIndividual crossover(const MoIndividual& a, const MoIndividual& b, Rng& rng,
                       const MoConstants& k);

/// Index of the selection victim among `values` (mutually comparable
/// candidates): worst non-dominated rank, then smallest hypervolume
/// contribution within that rank's front, ties dropping the latest candidate.
std::size_t selection_victim(const std::vector<ObjectiveVector>& values,
                             const ObjectiveVector& ref);

struct MoStepOutcome {
    std::int64_t evals_used = 0;
};

/// Steady-state (mu+1)-MO-CMA-ES with population growth and crossover. The
/// initial population is the five best seeds under non-dominated sorting with
/// hypervolume-contribution tie-break; short seed lists are padded by
/// sigma=1/2 Gaussian perturbations of the best seed (evaluated on creation).
class SsMocma {
public:
    SsMocma(const std::vector<Solution>& seeds, RunEvaluator& ev, Rng rng);

    /// One iteration: one offspring (1 evaluation), hypervolume-based
    /// replacement, success-rule updates, growth every 50n iterations.
    /// An injected candidate replaces the offspring and charges nothing.
    MoStepOutcome step(RunEvaluator& ev, std::optional<Solution> injected = std::nullopt);

    const std::vector<MoIndividual>& population() const { return pop_; }
    std::int64_t iteration() const { return iteration_; }
    int base_size() const { return 5; }
    std::int64_t growth_period() const { return 50LL * n_; }
    double crossover_prob() const { return 0.1; }

private:
    int n_;
    Rng rng_;
    MoConstants k_;
    std::vector<MoIndividual> pop_;
    std::int64_t iteration_ = 0;
};

/// Generational MO-CMA-ES with population doubling restarts every 50n
/// generations (pop starts at 10, restart r has 10 * 2^r individuals with
/// sigma = 2). At (re)initialization half of the individuals are seeded from
/// archive members when the archive is non-empty; the rest are drawn
/// uniformly from [-4,4]^n and evaluated by a warm-up step before the next
/// generation.
class IpopMocma {
public:
    IpopMocma(int n, Rng rng);

    MoStepOutcome step(RunEvaluator& ev);

    /// Cost of the next atomic step: pending warm-up evaluations, or one
    /// full generation.
    std::int64_t next_step_cost() const;

    const std::vector<MoIndividual>& population() const { return pop_; }
    int restart_count() const { return restart_count_; }
    int pop_size() const { return 10 << restart_count_; }
    std::int64_t generation() const { return generation_; }

private:
    void rebuild(RunEvaluator& ev);
    std::int64_t pending_count() const;

    int n_;
    Rng rng_;
    MoConstants k_;
    std::vector<MoIndividual> pop_;
    int restart_count_ = 0;
    std::int64_t generation_ = 0;        // total completed generations
    std::int64_t gens_since_restart_ = 0;
    bool initialized_ = false;
};

}  // namespace hmo

#endif  // HMO_MOCMA_HPP
