#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "hmo/core.hpp"
#include "hmo/rng.hpp"

using namespace hmo;

namespace {

// O(N^3) peeling oracle, kept independent of nondominated_sort.
std::vector<int> brute_force_ranks(const std::vector<ObjectiveVector>& pop) {
    std::vector<int> rank(pop.size(), -1);
    int level = 0;
    for (;;) {
        bool any_unranked = false;
        std::vector<std::size_t> front;
        for (std::size_t i = 0; i < pop.size(); ++i) {
            if (rank[i] >= 0) continue;
            any_unranked = true;
            bool dominated = false;
            for (std::size_t j = 0; j < pop.size(); ++j) {
                if (rank[j] >= 0 || i == j) continue;
                if (dominates(pop[j], pop[i])) {
                    dominated = true;
                    break;
                }
            }
            if (!dominated) front.push_back(i);
        }
        if (!any_unranked) break;
        for (std::size_t i : front) rank[i] = level;
        ++level;
    }
    return rank;
}

// Monte-Carlo estimate of the dominated area inside [0,ref1]x[0,ref2].
// Returns (estimate, standard error).
std::pair<double, double> mc_hv(const std::vector<ObjectiveVector>& front,
                                const ObjectiveVector& ref, std::size_t samples, Rng& rng) {
    std::size_t hits = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        double x = rng.uniform(0.0, ref.f1);
        double y = rng.uniform(0.0, ref.f2);
        for (const auto& p : front) {
            if (p.f1 <= x && p.f2 <= y) {
                ++hits;
                break;
            }
        }
    }
    double box = ref.f1 * ref.f2;
    double p = static_cast<double>(hits) / static_cast<double>(samples);
    double se = box * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
    return {box * p, se};
}

std::vector<ObjectiveVector> random_population(Rng& rng, std::size_t n) {
    std::vector<ObjectiveVector> pop(n);
    for (auto& p : pop) p = {rng.uniform(), rng.uniform()};
    return pop;
}

// Sorted non-dominated staircase out of random points.
std::vector<ObjectiveVector> random_front(Rng& rng, std::size_t n) {
    auto pop = random_population(rng, n);
    auto ranks = brute_force_ranks(pop);
    std::vector<ObjectiveVector> front;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        if (ranks[i] == 0) front.push_back(pop[i]);
    }
    std::sort(front.begin(), front.end(),
              [](const ObjectiveVector& a, const ObjectiveVector& b) { return a.f1 < b.f1; });
    return front;
}

}  // namespace

TEST_CASE("dominates: definition cases") {
    CHECK(dominates({1, 2}, {2, 3}));
    CHECK_FALSE(dominates({1, 2}, {1, 2}));
    CHECK_FALSE(dominates({1, 3}, {3, 1}));
    CHECK_FALSE(dominates({3, 1}, {1, 3}));
    CHECK(dominates({1, 2}, {1, 3}));  // weak: equal first component
}

TEST_CASE("nondominated_sort: small cases") {
    CHECK(nondominated_sort({{1, 1}}) == std::vector<int>{0});
    CHECK(nondominated_sort({{0, 2}, {2, 0}, {1, 1}, {2, 2}}) == std::vector<int>{0, 0, 0, 1});
}

TEST_CASE("nondominated_sort: agrees with brute-force peeling") {
    Rng rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 1 + rng.below(64);
        auto pop = random_population(rng, n);
        // Inject exact duplicates now and then.
        if (n > 4 && trial % 3 == 0) pop[0] = pop[1];
        CHECK(nondominated_sort(pop) == brute_force_ranks(pop));
    }
}

TEST_CASE("hv2d: pinned values") {
    ObjectiveVector ref{1, 1};
    CHECK(hv2d({{0, 0}}, ref) == doctest::Approx(1.0));
    CHECK(hv2d({{0.25, 0.75}, {0.75, 0.25}}, ref) == doctest::Approx(0.3125));
    CHECK(hv2d({}, ref) == 0.0);
    // Point outside the region of interest contributes nothing.
    CHECK(hv2d({{2, 2}}, ref) == 0.0);
    CHECK(hv2d({{0.5, 0.5}, {2, 0.1}}, ref) == doctest::Approx(0.25));
}

TEST_CASE("hv2d: permutation and duplication invariance") {
    Rng rng(7);
    ObjectiveVector ref{1, 1};
    auto pop = random_population(rng, 20);
    double base = hv2d(pop, ref);
    auto shuffled = pop;
    std::reverse(shuffled.begin(), shuffled.end());
    CHECK(hv2d(shuffled, ref) == doctest::Approx(base).epsilon(1e-12));
    auto doubled = pop;
    doubled.insert(doubled.end(), pop.begin(), pop.end());
    CHECK(hv2d(doubled, ref) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("hv2d: monotone under adding points") {
    Rng rng(11);
    ObjectiveVector ref{1, 1};
    std::vector<ObjectiveVector> pts;
    double prev = 0.0;
    for (int i = 0; i < 200; ++i) {
        pts.push_back({rng.uniform(), rng.uniform()});
        double now = hv2d(pts, ref);
        CHECK(now >= prev - 1e-15);
        prev = now;
    }
}

TEST_CASE("hv2d: matches Monte-Carlo oracle") {
    Rng rng(2024);
    ObjectiveVector ref{1, 1};
    for (int trial = 0; trial < 5; ++trial) {
        auto pop = random_population(rng, 50);
        double exact = hv2d(pop, ref);
        auto [est, se] = mc_hv(pop, ref, 2'000'000, rng);
        CHECK(std::abs(exact - est) <= 3.5 * se);
    }
}

TEST_CASE("hv_contribution: pinned values") {
    ObjectiveVector ref{1, 1};
    CHECK(hv_contribution(0, {{0, 0}}, ref) == doctest::Approx(1.0));
    std::vector<ObjectiveVector> front{{0.25, 0.75}, {0.75, 0.25}};
    CHECK(hv_contribution(0, front, ref) == doctest::Approx(0.125));
    CHECK(hv_contribution(1, front, ref) == doctest::Approx(0.125));
    CHECK_THROWS_AS((void)hv_contribution(2, front, ref), std::out_of_range);
}

TEST_CASE("hv_contribution: equals leave-one-out hv2d") {
    Rng rng(99);
    ObjectiveVector ref{1, 1};
    for (int trial = 0; trial < 200; ++trial) {
        auto front = random_front(rng, 2 + rng.below(40));
        double full = hv2d(front, ref);
        double sum = 0.0;
        for (std::size_t i = 0; i < front.size(); ++i) {
            auto loo = front;
            loo.erase(loo.begin() + static_cast<std::ptrdiff_t>(i));
            double expect = full - hv2d(loo, ref);
            double got = hv_contribution(i, front, ref);
            CHECK(std::abs(got - expect) <= 1e-12 * std::max(1.0, full));
            sum += got;
        }
        CHECK(sum <= full + 1e-12);
        if (front.size() == 1) CHECK(sum == doctest::Approx(full));
    }
}

TEST_CASE("archive: basic accept/reject") {
    ParetoArchive arch({1, 1});
    CHECK(arch.insert({Vec(), {0, 0}, 1}));
    CHECK(arch.hv() == doctest::Approx(1.0));
    CHECK_FALSE(arch.insert({Vec(), {1, 1}, 2}));  // dominated (weakly, by corner)
    CHECK_FALSE(arch.insert({Vec(), {0, 0}, 3}));  // duplicate: incumbent kept
    CHECK(arch.members().size() == 1);
    CHECK(arch.members()[0].eval_index == 1);
}

TEST_CASE("archive: duplicate keeps first-inserted member") {
    ParetoArchive arch({2, 2});
    CHECK(arch.insert({Vec(), {0.5, 1.0}, 1}));
    CHECK_FALSE(arch.insert({Vec(), {0.5, 1.0}, 2}));
    REQUIRE(arch.members().size() == 1);
    CHECK(arch.members()[0].eval_index == 1);
}

TEST_CASE("archive: random insertions match batch recompute") {
    Rng rng(5);
    ObjectiveVector ref{1, 1};
    ParetoArchive arch(ref);
    std::vector<ObjectiveVector> all;
    double prev_hv = 0.0;
    for (int i = 0; i < 1000; ++i) {
        ObjectiveVector v{rng.uniform(-0.2, 1.4), rng.uniform(-0.2, 1.4)};
        all.push_back(v);
        arch.insert({Vec(), v, i + 1});
        CHECK(arch.hv() >= prev_hv - 1e-12);
        prev_hv = arch.hv();
    }
    // Batch oracle: filter non-dominated, recompute hv from scratch.
    auto ranks = brute_force_ranks(all);
    std::vector<ObjectiveVector> expect_front;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (ranks[i] == 0) expect_front.push_back(all[i]);
    }
    std::sort(expect_front.begin(), expect_front.end(),
              [](const ObjectiveVector& a, const ObjectiveVector& b) { return a.f1 < b.f1; });

    REQUIRE(arch.members().size() == expect_front.size());
    for (std::size_t i = 0; i < expect_front.size(); ++i) {
        CHECK(arch.members()[i].value == expect_front[i]);
    }
    CHECK(arch.hv() == doctest::Approx(hv2d(all, ref)).epsilon(1e-9));
    // Sorted order invariant: f1 strictly increasing, f2 strictly decreasing.
    for (std::size_t i = 1; i < arch.members().size(); ++i) {
        CHECK(arch.members()[i - 1].value.f1 < arch.members()[i].value.f1);
        CHECK(arch.members()[i - 1].value.f2 > arch.members()[i].value.f2);
    }
}

TEST_CASE("archive: members outside the reference region are kept at zero hv") {
    ParetoArchive arch({1, 1});
    CHECK(arch.insert({Vec(), {3, 0.4}, 1}));
    CHECK(arch.hv() == 0.0);
    CHECK(arch.insert({Vec(), {0.4, 3}, 2}));
    CHECK(arch.hv() == 0.0);
    CHECK(arch.members().size() == 2);
    CHECK(arch.insert({Vec(), {0.5, 0.5}, 3}));
    CHECK(arch.hv() == doctest::Approx(0.25));
    CHECK(arch.members().size() == 3);
}

TEST_CASE("archive: text serialization") {
    ParetoArchive arch({1, 1});
    arch.insert({Vec(), {0.125, 0.75}, 3});
    arch.insert({Vec(), {0.5, 0.25}, 7});
    std::ostringstream os;
    arch.write(os);
    CHECK(os.str() == "0.125 0.75 3\n0.5 0.25 7\n");
}
