#include "tanglesim/selector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tanglesim {

std::vector<double> softmax_probs(std::span<const double> weights, double alpha) {
    std::vector<double> probs(weights.size());
    if (weights.empty()) return probs;
    double maxw = *std::max_element(weights.begin(), weights.end());
    double total = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        probs[i] = std::exp(alpha * (weights[i] - maxw));
        total += probs[i];
    }
    for (double& p : probs) p /= total;
    return probs;
}

TxId select_urts(const Tangle& g, Rng& rng) {
    const auto& tips = g.tips();
    if (tips.empty()) throw std::logic_error("select_urts: empty tip set");
    return tips[rng.uniform_index(tips.size())];
}

TxId walk_step(const Tangle& g, TxId x, double alpha, Rng& rng) {
    const auto& next = g.approvers(x);
    if (next.empty()) throw std::logic_error("walk_step: transaction has no revealed approver");
    if (next.size() == 1) return next[0];
    if (alpha == 0.0) return next[rng.uniform_index(next.size())];

    // Biased step; max weight shifted out of the exponent.
    thread_local std::vector<double> expw;
    expw.resize(next.size());
    std::uint32_t maxw = 0;
    for (TxId a : next) maxw = std::max(maxw, g.tx(a).cumulative_weight);
    double total = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
        expw[i] = std::exp(alpha * (static_cast<double>(g.tx(next[i]).cumulative_weight) -
                                    static_cast<double>(maxw)));
        total += expw[i];
    }
    double u = rng.uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < next.size(); ++i) {
        acc += expw[i];
        if (u < acc) return next[i];
    }
    return next.back();
}

TxId select_walk(const Tangle& g, double alpha, Rng& rng) {
    TxId x = kGenesisId;
    while (!g.approvers(x).empty()) x = walk_step(g, x, alpha, rng);
    return x;
}

TxId select_tip(const Tangle& g, SelectorKind kind, Rng& rng) {
    return kind.is_walk() ? select_walk(g, kind.alpha, rng) : select_urts(g, rng);
}

std::pair<TxId, TxId> select_pair(const Tangle& g, SelectorKind kind, Rng& rng) {
    TxId first = select_tip(g, kind, rng);
    TxId second = select_tip(g, kind, rng);
    return {first, second};
}

}  // namespace tanglesim
