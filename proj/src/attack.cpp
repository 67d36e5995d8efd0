#include "tanglesim/attack.hpp"

#include <stdexcept>
#include <string>

namespace tanglesim {

void ParasiteSpec::validate() const {
    if (size < 1) throw std::invalid_argument("parasite size must be >= 1");
    if (kind == ParasiteKind::kCutSetChain && !(kappa > 0.0 && kappa < 1.0))
        throw std::invalid_argument("kappa must lie in (0, 1)");
}

AttackOutcome build_tip_flood(Tangle& g, const ParasiteSpec& spec) {
    spec.validate();
    if (!g.is_revealed(spec.anchor))
        throw std::invalid_argument("anchor must be a revealed transaction");

    AttackOutcome out;
    out.honest_tips_at_reveal = g.tip_count();
    const double reveal_time = g.now();
    const double issue_time = reveal_time - kRevealDelay;

    TxId ds = g.add_hidden({spec.anchor, spec.anchor}, issue_time);
    g.mark_conflict(ds);
    TxId spine = g.add_hidden({ds, ds}, issue_time);
    out.double_spend = ds;
    out.attacker_txs = {ds, spine};
    for (std::size_t i = 0; i < spec.size; ++i)
        out.attacker_txs.push_back(g.add_hidden({ds, spine}, issue_time));

    g.reveal_batch(out.attacker_txs, reveal_time);
    g.recompute_all_weights();  // walk selectors need coherent weights afterwards
    return out;
}

AttackOutcome build_cut_set_chain(Tangle& g, const ParasiteSpec& spec) {
    spec.validate();
    if (!g.is_revealed(spec.anchor))
        throw std::invalid_argument("anchor must be a revealed transaction");

    // The anchor itself is the cut set: every walk from the genesis to a
    // tip passes through it (trivially, for the default genesis anchor).
    // The chain needs enough direct approvers of the anchor to outweigh
    // the honest ones by more than kappa.
    const std::size_t honest = g.approvers(spec.anchor).size();
    std::size_t needed = 1;
    while (static_cast<double>(needed) / static_cast<double>(honest + needed) <= spec.kappa)
        ++needed;
    if (needed > spec.size)
        throw std::runtime_error("cut-set chain: kappa " + std::to_string(spec.kappa) +
                                 " needs " + std::to_string(needed) +
                                 " transactions, budget is " + std::to_string(spec.size));

    AttackOutcome out;
    out.honest_tips_at_reveal = g.tip_count();
    const double reveal_time = g.now();
    const double issue_time = reveal_time - kRevealDelay;

    TxId prev = g.add_hidden({spec.anchor, spec.anchor}, issue_time);
    g.mark_conflict(prev);
    out.double_spend = prev;
    out.attacker_txs.push_back(prev);
    for (std::size_t i = 1; i < needed; ++i) {
        prev = g.add_hidden({prev, spec.anchor}, issue_time);
        out.attacker_txs.push_back(prev);
    }

    g.reveal_batch(out.attacker_txs, reveal_time);
    g.recompute_all_weights();
    return out;
}

double evaluate_attack(const Tangle& g, TxId double_spend, SelectorKind kind,
                       std::size_t samples, std::uint64_t seed) {
    // Before the reveal no visible tip can approve the double spend.
    if (!g.is_revealed(double_spend)) return 0.0;
    return confidence_level(g, double_spend, kind, samples, seed);
}

}  // namespace tanglesim
