#include "tanglesim/tangle.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tanglesim {

Tangle::Tangle() {
    Transaction genesis;
    genesis.id = kGenesisId;
    genesis.issue_time = 0.0;
    genesis.reveal_time = 0.0;
    txs_.push_back(genesis);
    approvers_.emplace_back();
    tip_pos_.push_back(kNoPos);
    revealed_.push_back(1);
    visit_epoch_.push_back(0);
    revealed_count_ = 1;
    add_tip(kGenesisId);
}

void Tangle::reserve(std::size_t n) {
    txs_.reserve(n);
    approvers_.reserve(n);
    tip_pos_.reserve(n);
    revealed_.reserve(n);
    visit_epoch_.reserve(n);
}

TxId Tangle::check(TxId id) const {
    if (id >= txs_.size()) throw std::invalid_argument("unknown transaction id");
    return id;
}

void Tangle::add_tip(TxId id) {
    tip_pos_[id] = static_cast<std::uint32_t>(tips_.size());
    tips_.push_back(id);
}

void Tangle::remove_tip(TxId id) {
    std::uint32_t pos = tip_pos_[id];
    if (pos == kNoPos) return;
    TxId moved = tips_.back();
    tips_[pos] = moved;
    tip_pos_[moved] = pos;
    tips_.pop_back();
    tip_pos_[id] = kNoPos;
}

TxId Tangle::append(std::array<TxId, 2> parents, double issue_time) {
    TxId id = static_cast<TxId>(txs_.size());
    Transaction t;
    t.id = id;
    t.issue_time = issue_time;
    t.reveal_time = issue_time + kRevealDelay;
    t.parents = parents;
    txs_.push_back(t);
    approvers_.emplace_back();
    tip_pos_.push_back(kNoPos);
    revealed_.push_back(0);
    visit_epoch_.push_back(0);
    return id;
}

TxId Tangle::add_transaction(std::array<TxId, 2> parents, double issue_time) {
    for (TxId p : parents) {
        check(p);
        if (!revealed_[p] || txs_[p].reveal_time > issue_time)
            throw std::invalid_argument("parent not revealed at issue time");
    }
    if (issue_time < now_)
        throw std::invalid_argument("issue time precedes current tangle time");
    return append(parents, issue_time);
}

TxId Tangle::add_hidden(std::array<TxId, 2> parents, double issue_time) {
    for (TxId p : parents) check(p);
    return append(parents, issue_time);
}

void Tangle::reveal(TxId id) {
    check(id);
    if (revealed_[id]) throw std::logic_error("transaction already revealed");
    Transaction& t = txs_[id];
    revealed_[id] = 1;
    ++revealed_count_;
    now_ = std::max(now_, t.reveal_time);

    TxId p0 = t.parents[0];
    TxId p1 = t.parents[1];
    for (int i = 0; i < 2; ++i) {
        TxId p = t.parents[i];
        if (i == 1 && p0 == p1) break;  // duplicate parents count once
        approvers_[p].push_back(id);
        if (txs_[p].first_approval_time < 0.0) txs_[p].first_approval_time = t.reveal_time;
        remove_tip(p);
    }
    add_tip(id);
}

void Tangle::reveal_batch(const std::vector<TxId>& ids, double reveal_time) {
    std::vector<TxId> sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    for (TxId id : sorted) {
        check(id);
        if (revealed_[id]) throw std::logic_error("reveal_batch: transaction already revealed");
        txs_[id].issue_time = reveal_time - kRevealDelay;
        txs_[id].reveal_time = reveal_time;
    }
    for (TxId id : sorted) reveal(id);
}

std::size_t Tangle::update_weights_incremental(TxId new_tx) {
    check(new_tx);
    const Transaction& t = txs_[new_tx];
    if (!t.has_parent()) return 0;
    ++epoch_;
    dfs_stack_.clear();
    for (TxId p : t.parents) {
        if (visit_epoch_[p] != epoch_) {
            visit_epoch_[p] = epoch_;
            dfs_stack_.push_back(p);
        }
    }
    std::size_t count = 0;
    while (!dfs_stack_.empty()) {
        TxId x = dfs_stack_.back();
        dfs_stack_.pop_back();
        ++txs_[x].cumulative_weight;
        ++count;
        const Transaction& cur = txs_[x];
        if (!cur.has_parent()) continue;
        for (TxId p : cur.parents) {
            if (visit_epoch_[p] != epoch_) {
                visit_epoch_[p] = epoch_;
                dfs_stack_.push_back(p);
            }
        }
    }
    return count;
}

void Tangle::recompute_all_weights() {
    for (Transaction& t : txs_) t.cumulative_weight = 1;
    for (TxId id = 0; id < txs_.size(); ++id) {
        if (revealed_[id]) update_weights_incremental(id);
    }
}

std::uint32_t Tangle::cumulative_weight_oracle(TxId x) const {
    check(x);
    std::vector<std::uint8_t> seen(txs_.size(), 0);
    std::vector<TxId> stack;
    seen[x] = 1;
    stack.push_back(x);
    std::uint32_t count = 1;  // the transaction itself
    while (!stack.empty()) {
        TxId cur = stack.back();
        stack.pop_back();
        for (TxId a : approvers_[cur]) {
            if (!seen[a]) {
                seen[a] = 1;
                ++count;
                stack.push_back(a);
            }
        }
    }
    return count;
}

bool Tangle::indirectly_approves(TxId y, TxId x) const {
    check(y);
    check(x);
    if (y == x) return true;
    if (y < x) return false;  // parent edges always point to smaller ids
    std::vector<std::uint8_t> seen(y - x + 1, 0);
    std::vector<TxId> stack;
    seen[y - x] = 1;
    stack.push_back(y);
    while (!stack.empty()) {
        TxId cur = stack.back();
        stack.pop_back();
        const Transaction& t = txs_[cur];
        if (!t.has_parent()) continue;
        for (TxId p : t.parents) {
            if (p == x) return true;
            if (p > x && !seen[p - x]) {
                seen[p - x] = 1;
                stack.push_back(p);
            }
        }
    }
    return false;
}

std::vector<std::uint8_t> Tangle::descendants_mask(TxId x) const {
    check(x);
    std::vector<std::uint8_t> mask(txs_.size(), 0);
    std::vector<TxId> stack;
    mask[x] = 1;
    stack.push_back(x);
    while (!stack.empty()) {
        TxId cur = stack.back();
        stack.pop_back();
        for (TxId a : approvers_[cur]) {
            if (!mask[a]) {
                mask[a] = 1;
                stack.push_back(a);
            }
        }
    }
    return mask;
}

std::vector<TxId> Tangle::rescan_tips() const {
    std::vector<std::uint8_t> approved(txs_.size(), 0);
    for (TxId id = 0; id < txs_.size(); ++id) {
        if (!revealed_[id]) continue;
        const Transaction& t = txs_[id];
        if (!t.has_parent()) continue;
        approved[t.parents[0]] = 1;
        approved[t.parents[1]] = 1;
    }
    std::vector<TxId> result;
    for (TxId id = 0; id < txs_.size(); ++id) {
        if (revealed_[id] && !approved[id]) result.push_back(id);
    }
    return result;
}

void Tangle::dump_edge_list(std::ostream& os) const {
    char buf[160];
    for (const Transaction& t : txs_) {
        if (t.has_parent()) {
            std::snprintf(buf, sizeof(buf), "%u %.17g %.17g %u %u\n", t.id, t.issue_time,
                          t.reveal_time, t.parents[0], t.parents[1]);
        } else {
            std::snprintf(buf, sizeof(buf), "%u %.17g %.17g - -\n", t.id, t.issue_time,
                          t.reveal_time);
        }
        os << buf;
    }
}

Tangle Tangle::load_edge_list(std::istream& is) {
    Tangle g;
    std::string line;
    std::size_t line_no = 0;
    std::vector<TxId> pending;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        TxId id;
        double issue, reveal;
        std::string p0, p1;
        if (!(ss >> id >> issue >> reveal >> p0 >> p1))
            throw std::invalid_argument("edge list parse error at line " + std::to_string(line_no));
        if (p0 == "-") {
            if (id != kGenesisId)
                throw std::invalid_argument("only the genesis may lack parents");
            continue;
        }
        std::array<TxId, 2> parents{static_cast<TxId>(std::stoul(p0)),
                                    static_cast<TxId>(std::stoul(p1))};
        TxId got = g.add_hidden(parents, issue);
        if (got != id)
            throw std::invalid_argument("edge list ids must be dense and in order");
        g.txs_[got].reveal_time = reveal;
        pending.push_back(got);
    }
    std::stable_sort(pending.begin(), pending.end(), [&](TxId a, TxId b) {
        return g.txs_[a].reveal_time < g.txs_[b].reveal_time;
    });
    for (TxId id : pending) g.reveal(id);
    g.recompute_all_weights();
    return g;
}

}  // namespace tanglesim
