#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <map>

#include "tanglesim/arrival.hpp"
#include "tanglesim/selector.hpp"
#include "test_support.hpp"

using namespace tanglesim;
using test::DagBuilder;

namespace {

double binom_sigma(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

}  // namespace

TEST_CASE("urts over a single tip is that tip") {
    Tangle g;
    Rng rng(1);
    for (int i = 0; i < 16; ++i) CHECK(select_urts(g, rng) == kGenesisId);
    CHECK(select_pair(g, SelectorKind::urts(), rng) == std::pair<TxId, TxId>{0, 0});
}

TEST_CASE("urts is uniform over four tips") {
    DagBuilder b;
    std::array<TxId, 4> tips{};
    for (auto& t : tips) t = b.issue(kGenesisId, kGenesisId);
    b.flush();
    REQUIRE(b.g.tip_count() == 4);

    const std::size_t n = 1'000'000;
    std::map<TxId, std::size_t> counts;
    Rng rng(2024);
    for (std::size_t i = 0; i < n; ++i) ++counts[select_urts(b.g, rng)];
    const double tol = 3.0 * binom_sigma(0.25, n);
    for (TxId t : tips)
        CHECK(std::abs(counts[t] / double(n) - 0.25) <= tol);
}

TEST_CASE("walk step with one approver is deterministic") {
    DagBuilder b;
    TxId only = b.grow(kGenesisId, kGenesisId);
    Rng rng(7);
    for (int i = 0; i < 8; ++i) {
        CHECK(walk_step(b.g, kGenesisId, 0.0, rng) == only);
        CHECK(walk_step(b.g, kGenesisId, 2.5, rng) == only);
    }
}

TEST_CASE("walk step splits evenly between equal weights for any alpha") {
    DagBuilder b;
    TxId l = b.issue(kGenesisId, kGenesisId);
    TxId r = b.issue(kGenesisId, kGenesisId);
    b.flush();

    const std::size_t n = 1'000'000;
    const double tol = 3.0 * binom_sigma(0.5, n);
    for (double alpha : {0.0, 0.3, 5.0}) {
        Rng rng(55);
        std::size_t left = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (walk_step(b.g, kGenesisId, alpha, rng) == l) ++left;
        CHECK(std::abs(left / double(n) - 0.5) <= tol);
        (void)r;
    }
}

TEST_CASE("biased step follows the exponential weight law") {
    // genesis with approvers of weight 10 and 5, built from real structure
    DagBuilder b;
    TxId heavy = b.issue(kGenesisId, kGenesisId);
    TxId light = b.issue(kGenesisId, kGenesisId);
    b.flush();
    TxId c = heavy;
    for (int i = 0; i < 9; ++i) c = b.grow(c, c);
    TxId d = light;
    for (int i = 0; i < 4; ++i) d = b.grow(d, d);
    REQUIRE(b.g.tx(heavy).cumulative_weight == 10);
    REQUIRE(b.g.tx(light).cumulative_weight == 5);

    const double alpha = 0.1;
    const double expected = std::exp(alpha * 10) / (std::exp(alpha * 10) + std::exp(alpha * 5));
    CHECK(expected == doctest::Approx(0.622459).epsilon(1e-4));

    const std::size_t n = 1'000'000;
    Rng rng(99);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (walk_step(b.g, kGenesisId, alpha, rng) == heavy) ++hits;
    CHECK(std::abs(hits / double(n) - expected) <= 3.0 * binom_sigma(expected, n));
}

TEST_CASE("softmax probabilities normalize and ignore weight shifts") {
    std::vector<double> w{3, 10, 10, 41, 7};
    for (double alpha : {0.0, 0.001, 0.1, 50.0, 1000.0}) {
        auto p = softmax_probs(w, alpha);
        double sum = 0;
        for (double v : p) sum += v;
        CHECK(std::abs(sum - 1.0) <= 1e-12);

        for (double c : {1.0, -17.0, 1000.0}) {
            std::vector<double> shifted = w;
            for (double& v : shifted) v += c;
            auto q = softmax_probs(shifted, alpha);
            for (std::size_t i = 0; i < p.size(); ++i)
                CHECK(std::abs(p[i] - q[i]) <= 1e-12);
        }
    }
}

TEST_CASE("walk on a chain reaches the unique tip") {
    DagBuilder b;
    TxId prev = kGenesisId;
    for (int i = 0; i < 10; ++i) prev = b.grow(prev, prev);
    for (double alpha : {0.0, 0.01, 100.0}) {
        Rng rng(4);
        CHECK(select_walk(b.g, alpha, rng) == prev);
    }
}

TEST_CASE("unbiased walk matches exhaustive path enumeration") {
    test::EightNodeDag fixture;
    const Tangle& g = fixture.tangle();
    REQUIRE(g.tip_count() == 3);

    auto oracle = test::oracle_exit_probabilities(g, 0.0);
    double mass = 0;
    for (const auto& [tip, p] : oracle) mass += p;
    REQUIRE(mass == doctest::Approx(1.0).epsilon(1e-12));

    const std::size_t n = 1'000'000;
    Rng rng(31);
    std::map<TxId, std::size_t> counts;
    for (std::size_t i = 0; i < n; ++i) ++counts[select_walk(g, 0.0, rng)];
    for (const auto& [tip, p] : oracle)
        CHECK(std::abs(counts[tip] / double(n) - p) <= 1e-2);
}

TEST_CASE("biased walk matches enumeration at moderate alpha") {
    test::EightNodeDag fixture;
    const Tangle& g = fixture.tangle();
    auto oracle = test::oracle_exit_probabilities(g, 0.5);

    const std::size_t n = 1'000'000;
    Rng rng(32);
    std::map<TxId, std::size_t> counts;
    for (std::size_t i = 0; i < n; ++i) ++counts[select_walk(g, 0.5, rng)];
    for (const auto& [tip, p] : oracle)
        CHECK(std::abs(counts[tip] / double(n) - p) <= 1e-2);
}

TEST_CASE("huge alpha walks the argmax-weight path") {
    DagBuilder b;
    TxId heavy = b.issue(kGenesisId, kGenesisId);
    TxId light = b.issue(kGenesisId, kGenesisId);
    b.flush();
    TxId end = heavy;
    for (int i = 0; i < 5; ++i) end = b.grow(end, end);
    REQUIRE(b.g.tx(heavy).cumulative_weight > b.g.tx(light).cumulative_weight);

    const std::size_t n = 100'000;
    Rng rng(8);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (select_walk(b.g, 1000.0, rng) == end) ++hits;
    CHECK(hits / double(n) >= 0.999);
}

TEST_CASE("walks terminate within the revealed transaction count and exit on tips") {
    SimConfig cfg;
    cfg.lambda = 25.0;
    cfg.duration = 30.0;
    cfg.warmup = 0.0;
    cfg.selector = SelectorAlgo::kWalk;
    cfg.alpha = 0.02;
    cfg.seed = 1234;
    Tangle g;
    run_simulation(g, cfg, {});

    Rng rng(17);
    for (int trial = 0; trial < 500; ++trial) {
        TxId x = kGenesisId;
        std::size_t steps = 0;
        while (!g.approvers(x).empty()) {
            x = walk_step(g, x, 0.02, rng);
            ++steps;
            REQUIRE(steps <= g.revealed_count());
        }
        CHECK(g.is_tip(x));
    }
}

TEST_CASE("pairs are two independent draws") {
    DagBuilder b;
    TxId l = b.issue(kGenesisId, kGenesisId);
    TxId r = b.issue(kGenesisId, kGenesisId);
    b.flush();
    (void)l;
    (void)r;

    const std::size_t n = 1'000'000;
    Rng rng(6);
    std::size_t repeats = 0;
    for (std::size_t i = 0; i < n; ++i) {
        auto [a, bb] = select_pair(b.g, SelectorKind::urts(), rng);
        if (a == bb) ++repeats;
    }
    CHECK(std::abs(repeats / double(n) - 0.5) <= 3.0 * binom_sigma(0.5, n));
}

TEST_CASE("walk pair distribution is the product of single-walk exits") {
    DagBuilder b;
    TxId t1 = b.issue(kGenesisId, kGenesisId);
    TxId t2 = b.issue(kGenesisId, kGenesisId);
    b.flush();

    auto oracle = test::oracle_exit_probabilities(b.g, 0.0);
    const std::size_t n = 1'000'000;
    Rng rng(62);
    std::map<std::pair<TxId, TxId>, std::size_t> counts;
    for (std::size_t i = 0; i < n; ++i) ++counts[select_pair(b.g, SelectorKind::walk(0.0), rng)];
    for (TxId x : {t1, t2})
        for (TxId y : {t1, t2}) {
            double expected = oracle[x] * oracle[y];
            CHECK(std::abs(counts[{x, y}] / double(n) - expected) <= 1e-2);
        }
}
