#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <limits>

#include "hmo/evaluation.hpp"
#include "hmo/rng.hpp"
#include "hmo/scalarize.hpp"

using namespace hmo;

TEST_CASE("make_scalarization: norms from f(0)") {
    auto s = make_scalarization({2, 4}, 0.5);
    CHECK(s.norm1 == 2.0);
    CHECK(s.norm2 == 4.0);
    CHECK(s({2, 4}) == doctest::Approx(1.0));
}

TEST_CASE("make_scalarization: degenerate weights") {
    auto s1 = make_scalarization({1, 1}, 1.0);
    CHECK(s1({5, 99}) == doctest::Approx(5.0));
    auto s0 = make_scalarization({1, 1}, 0.0);
    CHECK(s0({99, 7}) == doctest::Approx(7.0));
}

TEST_CASE("make_scalarization: zero normalizer guard") {
    auto s = make_scalarization({0, 3}, 0.5);
    CHECK(s.norm1 == 1e-12);
    CHECK(std::isfinite(s({1, 1})));
}

TEST_CASE("make_scalarization: validation") {
    CHECK_THROWS_AS(make_scalarization({1, 1}, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_scalarization({1, 1}, 1.1), std::invalid_argument);
    double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(make_scalarization({nan, 1}, 0.5), std::invalid_argument);
}

TEST_CASE("g: pinned value and dominance monotonicity") {
    Scalarization s{0.5, 1.0, 1.0};
    CHECK(s({2, 4}) == doctest::Approx(3.0));

    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        double alpha = rng.uniform(0.01, 0.99);
        auto sc = make_scalarization({rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)}, alpha);
        ObjectiveVector a{rng.uniform(), rng.uniform()};
        ObjectiveVector b{a.f1 + rng.uniform(0.0, 1.0), a.f2 + rng.uniform(0.0, 1.0)};
        if (dominates(a, b)) CHECK(sc(a) < sc(b));
    }
}

TEST_CASE("g: argmin over a finite set is non-dominated") {
    Rng rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<ObjectiveVector> set(20);
        for (auto& v : set) v = {rng.uniform(), rng.uniform()};
        auto sc = make_scalarization({1, 1}, rng.uniform(0.05, 0.95));
        std::size_t best = 0;
        for (std::size_t i = 1; i < set.size(); ++i) {
            if (sc(set[i]) < sc(set[best])) best = i;
        }
        for (std::size_t i = 0; i < set.size(); ++i) {
            CHECK_FALSE(dominates(set[i], set[best]));
        }
    }
}

TEST_CASE("run evaluator: charging, origin cache, trace") {
    auto p = BiObjectiveProblem::make(1, 2, 1);
    RunEvaluator ev(p, reference_point(p), 5);

    const Solution& o1 = ev.origin(Component::warmstart);
    CHECK(o1.eval_index == 1);
    CHECK(ev.total() == 1);
    const Solution& o2 = ev.origin(Component::ss_mocma);
    CHECK(o2.eval_index == 1);  // cached: no second charge
    CHECK(ev.total() == 1);
    CHECK(ev.ledger(Component::warmstart) == 1);
    CHECK(ev.ledger(Component::ss_mocma) == 0);

    ev.evaluate(p.shift1(), Component::ss_mocma);
    ev.evaluate(p.shift1(), Component::ss_mocma);  // duplicate value: no trace growth
    CHECK(ev.total() == 3);
    CHECK(ev.ledger(Component::ss_mocma) == 2);

    ev.evaluate(p.shift2(), Component::restart_cma);
    ev.evaluate(0.5 * (p.shift1() + p.shift2()), Component::restart_cma);
    CHECK(ev.total() == 5);
    CHECK_THROWS_AS(ev.evaluate(p.shift1(), Component::ss_mocma), BudgetExhausted);

    // Ledgers always sum to the total.
    std::int64_t sum = 0;
    for (int c = 0; c < kComponentCount; ++c) sum += ev.ledger(static_cast<Component>(c));
    CHECK(sum == ev.total());

    // Trace is strictly increasing in hv and eval_index.
    const auto& tr = ev.trace();
    REQUIRE(!tr.empty());
    for (std::size_t i = 1; i < tr.size(); ++i) {
        CHECK(tr[i].hv > tr[i - 1].hv);
        CHECK(tr[i].eval_index > tr[i - 1].eval_index);
    }
}
