#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace tanglesim {

// Dense transaction id; ids are assigned in issuance order, genesis = 0,
// and double as indices into the append-only transaction array.
using TxId = std::uint32_t;

inline constexpr TxId kGenesisId = 0;
inline constexpr TxId kNoTx = std::numeric_limits<TxId>::max();

// Delay between a transaction selecting its parents and becoming visible.
// The time unit of the whole simulation; all rates are per unit of this.
inline constexpr double kRevealDelay = 1.0;

struct Transaction {
    TxId id = kNoTx;
    double issue_time = 0.0;   // when the parents were selected
    double reveal_time = 0.0;  // issue_time + kRevealDelay (genesis: 0)
    std::array<TxId, 2> parents{kNoTx, kNoTx};  // may be equal; genesis has none
    std::uint32_t cumulative_weight = 1;        // 1 + revealed indirect approvers
    double first_approval_time = -1.0;  // reveal time of first approver, < 0 if none yet
    bool is_conflict_marker = false;    // tags double-spend transactions

    bool approved() const { return first_approval_time >= 0.0; }
    bool is_genesis() const { return id == kGenesisId; }
    bool has_parent() const { return parents[0] != kNoTx; }
};

}  // namespace tanglesim
