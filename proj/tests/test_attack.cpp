#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "tanglesim/attack.hpp"
#include "tanglesim/arrival.hpp"
#include "test_support.hpp"

using namespace tanglesim;
using test::DagBuilder;

namespace {

Tangle grown(double lambda, double duration, std::uint64_t seed) {
    SimConfig cfg;
    cfg.lambda = lambda;
    cfg.duration = duration;
    cfg.warmup = 0.0;
    cfg.seed = seed;
    Tangle g;
    run_simulation(g, cfg, {});
    return g;
}

// Toy target: genesis with exactly two honest approvers which remain tips.
DagBuilder toy_two_approvers() {
    DagBuilder b;
    b.issue(kGenesisId, kGenesisId);
    b.issue(kGenesisId, kGenesisId);
    b.flush();
    return b;
}

}  // namespace

TEST_CASE("parasite specs are validated") {
    ParasiteSpec spec;
    spec.size = 0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.size = 1;
    spec.kind = ParasiteKind::kCutSetChain;
    spec.kappa = 1.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.kappa = 0.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.kappa = 0.5;
    CHECK_NOTHROW(spec.validate());

    Tangle g;
    ParasiteSpec flood;
    flood.kind = ParasiteKind::kTipFlood;
    flood.size = 0;
    CHECK_THROWS_AS(build_tip_flood(g, flood), std::invalid_argument);
}

TEST_CASE("tip flood floods the tip set and wins uniform selection") {
    Tangle g = grown(20.0, 30.0, 5);
    const std::size_t honest = g.tip_count();

    ParasiteSpec spec;
    spec.kind = ParasiteKind::kTipFlood;
    spec.size = 3 * honest;
    AttackOutcome out = build_tip_flood(g, spec);
    CHECK(out.honest_tips_at_reveal == honest);
    CHECK(g.tip_count() == honest + spec.size);
    CHECK(g.tx(out.double_spend).is_conflict_marker);

    // uniform selection lands on an attacker tip with probability
    // size / (size + honest) = 3/4, and every attacker tip approves the
    // double spend
    const double expected = double(spec.size) / double(spec.size + honest);
    CHECK(expected == doctest::Approx(0.75));
    double conf = evaluate_attack(g, out.double_spend, SelectorKind::urts(), 100'000, 7);
    CHECK(std::abs(conf - expected) <= 3.0 * std::sqrt(expected * (1 - expected) / 100'000.0));
}

TEST_CASE("tip flood sized to the honest tip count splits selection evenly") {
    Tangle g = grown(20.0, 30.0, 6);
    ParasiteSpec spec;
    spec.kind = ParasiteKind::kTipFlood;
    spec.size = g.tip_count();
    AttackOutcome out = build_tip_flood(g, spec);
    double conf = evaluate_attack(g, out.double_spend, SelectorKind::urts(), 100'000, 8);
    CHECK(std::abs(conf - 0.5) <= 3.0 * std::sqrt(0.25 / 100'000.0));
}

TEST_CASE("the unbiased walk shrugs off a tip flood") {
    Tangle g = grown(20.0, 30.0, 9);
    ParasiteSpec spec;
    spec.kind = ParasiteKind::kTipFlood;
    spec.size = 3 * g.tip_count();
    AttackOutcome out = build_tip_flood(g, spec);
    // walk mass is topology driven; the single edge into the parasite at
    // the genesis carries ~1/(approvers+1) of it
    double conf = evaluate_attack(g, out.double_spend, SelectorKind::walk(0.0), 50'000, 9);
    CHECK(conf < 0.2);
}

TEST_CASE("cut-set chain sizes itself against kappa on the toy tangle") {
    DagBuilder b = toy_two_approvers();
    REQUIRE(b.g.approvers(kGenesisId).size() == 2);

    ParasiteSpec spec;
    spec.kind = ParasiteKind::kCutSetChain;
    spec.size = 100;  // generous budget
    spec.kappa = 0.6;
    AttackOutcome out = build_cut_set_chain(b.g, spec);

    // 4 chain approvers against 2 honest ones: 4/6 > 0.6, 3/5 is not
    CHECK(out.attacker_txs.size() == 4);
    CHECK(b.g.approvers(kGenesisId).size() == 6);

    double conf = evaluate_attack(b.g, out.double_spend, SelectorKind::walk(0.0), 100'000, 10);
    CHECK(conf > 0.6);
    const double exact = 4.0 / 6.0;
    CHECK(std::abs(conf - exact) <= 3.0 * std::sqrt(exact * (1 - exact) / 100'000.0));
}

TEST_CASE("cut-set chain reports an impossible kappa budget") {
    DagBuilder b = toy_two_approvers();
    ParasiteSpec spec;
    spec.kind = ParasiteKind::kCutSetChain;
    spec.size = 10;
    spec.kappa = 0.99;  // 10 of 12 approvers is not enough
    CHECK_THROWS_AS(build_cut_set_chain(b.g, spec), std::runtime_error);
}

TEST_CASE("hidden transactions do not influence selection before the reveal") {
    Tangle g = grown(15.0, 20.0, 11);
    auto tips_before = g.tips();

    auto draw = [&](std::uint64_t seed) {
        Rng rng(seed);
        std::vector<TxId> picks;
        for (int i = 0; i < 500; ++i) picks.push_back(select_urts(g, rng));
        for (int i = 0; i < 200; ++i) picks.push_back(select_walk(g, 0.0, rng));
        return picks;
    };
    auto before = draw(99);

    TxId hidden = g.add_hidden({kGenesisId, kGenesisId}, g.now() - 1.0);
    TxId hidden2 = g.add_hidden({hidden, kGenesisId}, g.now() - 1.0);
    (void)hidden2;
    CHECK(g.tips() == tips_before);
    CHECK(draw(99) == before);
}

TEST_CASE("walks entering the chain are absorbed onto attacker tips") {
    Tangle g = grown(15.0, 25.0, 12);
    ParasiteSpec spec;
    spec.kind = ParasiteKind::kCutSetChain;
    spec.size = 100'000;
    spec.kappa = 0.6;
    AttackOutcome out = build_cut_set_chain(g, spec);

    std::vector<std::uint8_t> is_attacker(g.size(), 0);
    for (TxId id : out.attacker_txs) is_attacker[id] = 1;
    // no honest transaction approves a chain element
    for (TxId id : out.attacker_txs)
        for (TxId a : g.approvers(id)) CHECK(is_attacker[a]);

    auto mask = g.descendants_mask(out.double_spend);
    Rng rng(13);
    std::size_t entered = 0;
    for (int i = 0; i < 2000; ++i) {
        TxId tip = select_walk(g, 0.0, rng);
        if (is_attacker[tip]) {
            ++entered;
            CHECK(mask[tip]);  // an attacker tip always carries the double spend
        }
    }
    CHECK(entered > 0);
}

TEST_CASE("a heavy main tangle repels the biased walk from the chain") {
    Tangle g = grown(20.0, 40.0, 14);
    ParasiteSpec spec;
    spec.kind = ParasiteKind::kCutSetChain;
    spec.size = 100'000;
    spec.kappa = 0.6;
    AttackOutcome out = build_cut_set_chain(g, spec);

    double urw = evaluate_attack(g, out.double_spend, SelectorKind::walk(0.0), 50'000, 15);
    double brw = evaluate_attack(g, out.double_spend, SelectorKind::walk(0.5), 50'000, 16);
    CHECK(urw > 0.6);
    CHECK(brw < 0.3);
    CHECK(brw < urw);
}

TEST_CASE("an unrevealed double spend has zero confidence") {
    Tangle g = grown(10.0, 15.0, 18);
    TxId hidden = g.add_hidden({kGenesisId, kGenesisId}, g.now() - 1.0);
    CHECK(evaluate_attack(g, hidden, SelectorKind::urts(), 1000, 19) == 0.0);
    CHECK(evaluate_attack(g, hidden, SelectorKind::walk(0.0), 1000, 20) == 0.0);
}
