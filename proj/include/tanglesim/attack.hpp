#pragma once

#include <cstdint>
#include <vector>

#include "tanglesim/metrics.hpp"
#include "tanglesim/selector.hpp"
#include "tanglesim/tangle.hpp"

namespace tanglesim {

enum class ParasiteKind { kTipFlood, kCutSetChain };

struct ParasiteSpec {
    ParasiteKind kind = ParasiteKind::kTipFlood;
    TxId anchor = kGenesisId;  // where the double spend attaches
    std::size_t size = 0;      // tip count (flood) / transaction budget (chain)
    double kappa = 0.6;        // acceptance confidence threshold (chain only)

    void validate() const;
};

struct AttackOutcome {
    std::vector<TxId> attacker_txs;  // everything the attacker issued, id order
    TxId double_spend = kNoTx;       // the conflict-marked transaction
    std::size_t honest_tips_at_reveal = 0;
};

// Flood attack: a hidden double spend attached at the anchor, a spine
// transaction, and `size` attacker tips each approving the double spend
// and the spine, all revealed simultaneously at the current time. With
// more attacker tips than honest ones, uniform selection favors the
// attacker.
AttackOutcome build_tip_flood(Tangle& g, const ParasiteSpec& spec);

// Chain attack against walk selectors: a hidden chain x0, x1, ... where
// x0 is the double spend attached at the anchor and every xi approves
// x(i-1) and the anchor, extended until the chain holds more than a kappa
// fraction of the anchor's direct approvers, then revealed. The anchor is
// a single-element cut set: every walk passes through it, steps onto the
// chain with probability above kappa, and cannot leave it. Throws when
// the kappa target cannot be met within the `size` budget.
AttackOutcome build_cut_set_chain(Tangle& g, const ParasiteSpec& spec);

// Monte-Carlo confidence level of the double spend under the given
// selector; thin wrapper over confidence_level.
double evaluate_attack(const Tangle& g, TxId double_spend, SelectorKind kind,
                       std::size_t samples, std::uint64_t seed);

}  // namespace tanglesim
