#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "tanglesim/types.hpp"

namespace tanglesim {

// The DAG plus visibility bookkeeping.
//
// Transactions are appended in issuance order, so ids are dense and id
// order is a valid topological order (every parent edge points to a
// smaller id). A transaction is invisible between issuance and its reveal
// event; tip selection and walks only ever see revealed transactions.
//
// Single writer: all mutation happens on one thread per simulation run.
// Const queries are safe to run concurrently against a frozen instance.
class Tangle {
public:
    // Starts with a revealed genesis at t = 0.
    Tangle();

    double now() const { return now_; }
    std::size_t size() const { return txs_.size(); }
    std::size_t revealed_count() const { return revealed_count_; }
    void reserve(std::size_t n);

    const Transaction& tx(TxId id) const { return txs_[check(id)]; }
    bool is_revealed(TxId id) const { return revealed_[check(id)] != 0; }

    // Revealed direct approvers of id, in reveal order. Deduplicated: a
    // transaction approving id with both parent slots appears once.
    const std::vector<TxId>& approvers(TxId id) const { return approvers_[check(id)]; }

    // Current revealed tip set (revealed, no revealed approver). The order
    // is an implementation detail but deterministic.
    const std::vector<TxId>& tips() const { return tips_; }
    std::size_t tip_count() const { return tips_.size(); }
    bool is_tip(TxId id) const { return tip_pos_[check(id)] != kNoPos; }

    // Issues a transaction approving `parents` at `issue_time`. Both
    // parents must be revealed no later than issue_time. The new
    // transaction stays hidden until reveal() is called for it.
    TxId add_transaction(std::array<TxId, 2> parents, double issue_time);

    // Processes the reveal of `id` at its stored reveal_time: the
    // transaction enters the tip set, its parents leave it, and their
    // first approval time is recorded. Cumulative weights are NOT
    // touched; call update_weights_incremental(id) afterwards when the
    // run maintains them.
    void reveal(TxId id);

    // Attacker-side construction: adds a hidden transaction whose parents
    // only need to exist (they may themselves be hidden). Honest queries
    // cannot observe it until reveal_batch.
    TxId add_hidden(std::array<TxId, 2> parents, double issue_time);

    // Reveals hidden transactions simultaneously at `reveal_time`,
    // processing them in id order. Re-stamps their issue/reveal times to
    // (reveal_time - 1, reveal_time).
    void reveal_batch(const std::vector<TxId>& ids, double reveal_time);

    // Tags a double-spend transaction.
    void mark_conflict(TxId id) { txs_[check(id)].is_conflict_marker = true; }

    // Increments the cached weight of every transaction in the past cone
    // of `new_tx` (itself excluded, each node once even through duplicate
    // parent edges); returns the cone size.
    std::size_t update_weights_incremental(TxId new_tx);

    // Rebuilds every cached weight from the revealed structure.
    void recompute_all_weights();

    // 1 + |{revealed y : y reaches x along parent edges}| recomputed by
    // exhaustive traversal, independent of the cached weights.
    std::uint32_t cumulative_weight_oracle(TxId x) const;

    // True iff x is reachable from y along parent edges; y == x counts,
    // matching the weight convention that a transaction counts itself.
    bool indirectly_approves(TxId y, TxId x) const;

    // Byte mask over all ids: 1 for x itself and every revealed
    // transaction that indirectly approves x.
    std::vector<std::uint8_t> descendants_mask(TxId x) const;

    // Tip set recomputed from scratch per its definition; for
    // consistency checks against the incrementally maintained set.
    std::vector<TxId> rescan_tips() const;

    // Debug dump: one line per transaction,
    // `id issue_time reveal_time parent1 parent2` ("-" for no parent).
    void dump_edge_list(std::ostream& os) const;

    // Rebuilds a tangle from a dump. Every transaction is replayed as
    // revealed (dumps of quiescent states round-trip exactly) and the
    // cached weights are recomputed.
    static Tangle load_edge_list(std::istream& is);

private:
    static constexpr std::uint32_t kNoPos = 0xffffffffu;

    TxId check(TxId id) const;
    TxId append(std::array<TxId, 2> parents, double issue_time);
    void add_tip(TxId id);
    void remove_tip(TxId id);

    std::vector<Transaction> txs_;
    std::vector<std::vector<TxId>> approvers_;  // revealed edges only
    std::vector<TxId> tips_;                    // swap-remove vector
    std::vector<std::uint32_t> tip_pos_;        // id -> index in tips_, kNoPos if absent
    std::vector<std::uint8_t> revealed_;
    double now_ = 0.0;
    std::size_t revealed_count_ = 0;

    // Scratch for the single-writer weight update; queries use local
    // buffers so they stay safe on frozen snapshots.
    std::vector<std::uint64_t> visit_epoch_;
    std::uint64_t epoch_ = 0;
    std::vector<TxId> dfs_stack_;
};

}  // namespace tanglesim
