#pragma once

#include <span>
#include <utility>
#include <vector>

#include "tanglesim/rng.hpp"
#include "tanglesim/tangle.hpp"

namespace tanglesim {

enum class SelectorAlgo { kUrts, kWalk };

// Tip selection algorithm: uniform over tips, or a random walk from the
// genesis whose step bias grows with cumulative weight (alpha = 0 is the
// unbiased walk).
struct SelectorKind {
    SelectorAlgo algo = SelectorAlgo::kUrts;
    double alpha = 0.0;

    static SelectorKind urts() { return {SelectorAlgo::kUrts, 0.0}; }
    static SelectorKind walk(double alpha) { return {SelectorAlgo::kWalk, alpha}; }

    bool is_walk() const { return algo == SelectorAlgo::kWalk; }
    // Only a biased walk reads cumulative weights, so only it pays for
    // maintaining them during a run.
    bool maintains_weights() const { return is_walk() && alpha > 0.0; }
    const char* name() const { return is_walk() ? "walk" : "urts"; }
};

// Softmax step distribution over approver weights: p_i proportional to
// exp(alpha * w_i). Computed with the maximum shifted out of the
// exponent, so it is exactly invariant under a common weight offset and
// never overflows for large alpha * w.
std::vector<double> softmax_probs(std::span<const double> weights, double alpha);

// Uniform pick over the current revealed tip set.
TxId select_urts(const Tangle& g, Rng& rng);

// One step of the walk: picks a revealed direct approver of x with
// probability exp(alpha*H_y) / sum_z exp(alpha*H_z) over the revealed
// approvers z of x, H being the cached cumulative weights. x must have at
// least one revealed approver.
TxId walk_step(const Tangle& g, TxId x, double alpha, Rng& rng);

// Walks from the genesis until a transaction with no revealed approver is
// reached and returns it; the result is always a revealed tip.
TxId select_walk(const Tangle& g, double alpha, Rng& rng);

// Single invocation of the configured algorithm.
TxId select_tip(const Tangle& g, SelectorKind kind, Rng& rng);

// Two independent invocations; the pair may repeat a tip.
std::pair<TxId, TxId> select_pair(const Tangle& g, SelectorKind kind, Rng& rng);

}  // namespace tanglesim
