#include "hmo/hybrid.hpp"

#include <algorithm>
#include <deque>

#include "hmo/cma.hpp"
#include "hmo/mocma.hpp"
#include "hmo/rng.hpp"
#include "hmo/warmstart.hpp"

namespace hmo {

Phase phase_of(std::int64_t evals, int n) {
    if (evals < 0) throw std::invalid_argument("phase_of: negative evaluation count");
    if (evals < 10LL * n) return Phase::P1;
    if (evals < 1000LL * n) return Phase::P2;
    if (evals < 20000LL * n) return Phase::P3;
    return Phase::P4;
}

std::string algo_name(Algo a) {
    switch (a) {
        case Algo::hybrid: return "hybrid";
        case Algo::warmstart: return "warmstart";
        case Algo::ss_mocma: return "ss-mocma";
        case Algo::ipop_mocma: return "ipop-mocma";
        case Algo::restart_cma: return "restart-cma";
    }
    throw std::logic_error("algo_name: bad algo");
}

std::optional<Algo> algo_from_name(const std::string& name) {
    for (Algo a : {Algo::hybrid, Algo::warmstart, Algo::ss_mocma, Algo::ipop_mocma,
                   Algo::restart_cma}) {
        if (algo_name(a) == name) return a;
    }
    return std::nullopt;
}

namespace {

RunRecord finish_record(const BiObjectiveProblem& p, const std::optional<ReferenceData>& ref,
                        const HybridOptions& opt, const RunEvaluator& ev) {
    RunRecord rec;
    rec.k = p.k();
    rec.n = p.dim();
    rec.instance = p.instance();
    rec.seed = opt.seed;
    rec.budget = opt.budget;
    rec.evals = ev.total();
    rec.algo = algo_name(opt.algo);
    if (ref) {
        rec.has_ref = true;
        rec.ref_point = ref->ref_point;
        rec.ref_hv = ref->ref_hv;
        rec.ref_source =
            ref->source == ReferenceData::Source::analytic ? "analytic" : "long_run";
    }
    rec.trace = ev.trace();
    for (int c = 0; c < kComponentCount; ++c) {
        rec.ledgers[component_name(static_cast<Component>(c))] =
            ev.ledger(static_cast<Component>(c));
    }
    return rec;
}

/// The conductor: a cooperative scheduler over the three main algorithms.
/// Each turn goes to the phase-active component with the least evaluations
/// consumed in the current phase (ties in the order ss, restart-CMA, IPOP),
/// so evaluation shares equalize to within one atomic step. A component
/// whose next atomic step does not fit the remaining budget is skipped while
/// smaller ones can still act; P3/P4 consumption is capped per algorithm.
void run_hybrid_schedule(RunEvaluator& ev, const HybridOptions& opt, Rng& master,
                         HybridStats* stats) {
    const int n = ev.problem().dim();

    auto seeds = run_warmstart(ev, std::min<std::int64_t>(10LL * n, opt.budget));
    if (ev.remaining() <= 0) return;

    SsMocma ss(seeds, ev, master.split(1));
    RestartCma rcma(n, master.next_u64());
    IpopMocma ipop(n, master.split(3));
    Rng inject_rng = master.split(4);
    std::deque<Solution> injection_queue;

    const std::int64_t cap =
        std::min<std::int64_t>(400000LL * n, opt.budget / 3);
    if (stats) stats->cap = cap;

    std::array<std::int64_t, kComponentCount> phase_used{};
    std::array<std::int64_t, kComponentCount> p34_used{};
    Phase prev_phase = phase_of(ev.total(), n);

    auto step_cost = [&](Component c) -> std::int64_t {
        switch (c) {
            case Component::ss_mocma: return 1;
            case Component::restart_cma: return rcma.next_step_cost();
            case Component::ipop_mocma: return ipop.next_step_cost();
            default: return 0;
        }
    };

    while (ev.remaining() > 0) {
        Phase phase = phase_of(ev.total(), n);
        if (phase != prev_phase) {
            phase_used.fill(0);
            prev_phase = phase;
        }

        std::vector<Component> active{Component::ss_mocma};
        if (phase >= Phase::P3) active.push_back(Component::restart_cma);
        if (phase == Phase::P4) active.push_back(Component::ipop_mocma);

        std::optional<Component> turn;
        for (Component c : active) {
            std::int64_t cost = step_cost(c);
            if (cost > ev.remaining()) continue;
            if (phase >= Phase::P3 &&
                p34_used[static_cast<std::size_t>(c)] + cost > cap) {
                continue;
            }
            if (!turn || phase_used[static_cast<std::size_t>(c)] <
                             phase_used[static_cast<std::size_t>(*turn)]) {
                turn = c;
            }
        }
        if (!turn) break;  // nothing fits the remaining budget or the caps

        std::int64_t used = 0;
        switch (*turn) {
            case Component::ss_mocma: {
                if (phase == Phase::P4 && !ipop.population().empty() &&
                    inject_rng.uniform() < 0.1) {
                    // Draw an evaluated member of IPOP's current population.
                    std::vector<const MoIndividual*> ready;
                    for (const auto& ind : ipop.population()) {
                        if (ind.evaluated) ready.push_back(&ind);
                    }
                    if (!ready.empty()) {
                        const MoIndividual* pick = ready[inject_rng.below(ready.size())];
                        injection_queue.push_back({pick->x, pick->value, pick->eval_index});
                    }
                }
                std::optional<Solution> injected;
                if (!injection_queue.empty()) {
                    injected = injection_queue.front();
                    injection_queue.pop_front();
                }
                used = ss.step(ev, injected).evals_used;
                break;
            }
            case Component::restart_cma: {
                auto out = rcma.step(ev, rcma.next_step_cost());
                if (out.finished_best) injection_queue.push_back(*out.finished_best);
                used = out.evals_used;
                break;
            }
            case Component::ipop_mocma: {
                used = ipop.step(ev).evals_used;
                break;
            }
            default: break;
        }

        phase_used[static_cast<std::size_t>(*turn)] += used;
        if (phase >= Phase::P3) p34_used[static_cast<std::size_t>(*turn)] += used;
    }

    if (stats) stats->p34_used = p34_used;
}

void run_single_component(RunEvaluator& ev, const HybridOptions& opt, Rng& master) {
    const int n = ev.problem().dim();
    switch (opt.algo) {
        case Algo::warmstart: {
            run_warmstart(ev, opt.budget);
            break;
        }
        case Algo::ss_mocma: {
            auto seeds = run_warmstart(ev, std::min<std::int64_t>(10LL * n, opt.budget));
            if (ev.remaining() <= 0) break;
            SsMocma ss(seeds, ev, master.split(1));
            while (ev.remaining() > 0) ss.step(ev);
            break;
        }
        case Algo::restart_cma: {
            RestartCma rcma(n, master.next_u64());
            while (ev.remaining() >= rcma.next_step_cost()) {
                rcma.step(ev, rcma.next_step_cost());
            }
            break;
        }
        case Algo::ipop_mocma: {
            IpopMocma ipop(n, master.split(3));
            while (ev.remaining() >= ipop.next_step_cost()) ipop.step(ev);
            break;
        }
        case Algo::hybrid: break;  // handled by the caller
    }
}

}  // namespace

RunRecord hybrid_run(const BiObjectiveProblem& p, const std::optional<ReferenceData>& ref,
                     const HybridOptions& opt, HybridStats* stats) {
    const int n = p.dim();
    if (opt.budget < n + 2) throw std::invalid_argument("hybrid_run: budget too small");

    ObjectiveVector ref_point = ref ? ref->ref_point : reference_point(p);
    RunEvaluator ev(p, ref_point, opt.budget);
    Rng master(seed_mix(0x484d4f31ULL, opt.seed));

    if (opt.algo == Algo::hybrid) {
        run_hybrid_schedule(ev, opt, master, stats);
    } else {
        run_single_component(ev, opt, master);
    }
    return finish_record(p, ref, opt, ev);
}

}  // namespace hmo
