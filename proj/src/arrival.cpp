#include "tanglesim/arrival.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace tanglesim {

void SimConfig::validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("lambda must be positive and finite");
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("alpha must be finite and >= 0");
    if (std::isnan(duration) || duration <= 0.0)
        throw std::invalid_argument("duration must be positive");
    if (!std::isfinite(duration) && max_transactions == 0)
        throw std::invalid_argument("infinite duration requires a transaction cap");
    if (!(warmup >= 0.0) || warmup >= duration)
        throw std::invalid_argument("warmup must satisfy 0 <= warmup < duration");
}

double next_interarrival(Rng& rng, double lambda) {
    return rng.exponential(lambda);
}

RunStats run_simulation(Tangle& g, const SimConfig& config,
                        std::span<SimObserver* const> observers) {
    config.validate();

    bool maintain_weights = config.kind().maintains_weights();
    for (SimObserver* obs : observers)
        if (obs->wants_weights()) maintain_weights = true;

    Rng arrivals = make_stream(config.seed, RngStream::kArrivals);
    Rng selection = make_stream(config.seed, RngStream::kTipSelection);
    SelectorKind kind = config.kind();

    if (config.max_transactions > 0) g.reserve(config.max_transactions + 1);

    // Reveals happen exactly one unit after issuance, so the pending queue
    // is already ordered by reveal time (ties by issuance order).
    std::deque<TxId> reveal_queue;
    constexpr double kInf = std::numeric_limits<double>::infinity();
    double next_issue = g.now() + next_interarrival(arrivals, config.lambda);
    RunStats stats;
    double last_event = g.now();

    for (;;) {
        bool cap_hit = config.max_transactions > 0 && stats.issued >= config.max_transactions;
        if (reveal_queue.empty() && cap_hit) break;  // queue drained after the cap
        double t_reveal = reveal_queue.empty() ? kInf : g.tx(reveal_queue.front()).reveal_time;
        double t_issue = cap_hit ? kInf : next_issue;

        if (t_reveal <= t_issue) {  // reveal first on ties
            if (t_reveal > config.duration) break;
            TxId id = reveal_queue.front();
            reveal_queue.pop_front();
            g.reveal(id);
            if (maintain_weights) g.update_weights_incremental(id);
            ++stats.revealed;
            last_event = t_reveal;
            for (SimObserver* obs : observers) obs->on_reveal(g, g.tx(id), t_reveal);
        } else {
            if (t_issue > config.duration) break;
            auto [p0, p1] = select_pair(g, kind, selection);
            TxId id = g.add_transaction({p0, p1}, t_issue);
            reveal_queue.push_back(id);
            ++stats.issued;
            last_event = t_issue;
            next_issue = t_issue + next_interarrival(arrivals, config.lambda);
        }
    }

    stats.truncated_by_cap =
        config.max_transactions > 0 && stats.issued >= config.max_transactions;
    stats.end_time = (std::isfinite(config.duration) && !stats.truncated_by_cap)
                         ? config.duration
                         : last_event;
    for (SimObserver* obs : observers) obs->on_finish(g, stats.end_time);
    return stats;
}

}  // namespace tanglesim
