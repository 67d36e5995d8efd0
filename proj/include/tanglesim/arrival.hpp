#pragma once

#include <cstdint>
#include <span>

#include "tanglesim/rng.hpp"
#include "tanglesim/selector.hpp"
#include "tanglesim/tangle.hpp"

namespace tanglesim {

// One simulation run: Poisson issuance at rate lambda, tip selection per
// `selector`/`alpha`, reveal one time unit after issuance.
struct SimConfig {
    double lambda = 100.0;  // arrivals per unit time
    double alpha = 0.0;     // walk bias (walk selector only)
    SelectorAlgo selector = SelectorAlgo::kUrts;
    double duration = 150.0;  // simulated end time; may be infinite when capped
    double warmup = 50.0;     // metrics recording starts here
    std::uint64_t seed = 1;
    std::uint64_t max_transactions = 0;  // 0 = no cap

    SelectorKind kind() const {
        return selector == SelectorAlgo::kWalk ? SelectorKind::walk(alpha)
                                               : SelectorKind::urts();
    }
    void validate() const;
};

// Hooks fired by the simulation loop. Reveal hooks run after the reveal
// (and the weight update, when weights are maintained) has been applied.
class SimObserver {
public:
    virtual ~SimObserver() = default;
    // A run only pays for cumulative-weight maintenance if the selector
    // needs it or some observer asks for it.
    virtual bool wants_weights() const { return false; }
    virtual void on_reveal(const Tangle& g, const Transaction& revealed, double now) {
        (void)g;
        (void)revealed;
        (void)now;
    }
    virtual void on_finish(const Tangle& g, double end_time) {
        (void)g;
        (void)end_time;
    }
};

struct RunStats {
    std::size_t issued = 0;
    std::size_t revealed = 0;
    double end_time = 0.0;         // duration, or the last event when capped
    bool truncated_by_cap = false;
};

// Exp(lambda) interarrival sample; deterministic given the rng state.
double next_interarrival(Rng& rng, double lambda);

// Runs the event loop on `g` until `config.duration` (or the transaction
// cap): issuance events select two tips among the currently revealed ones
// and schedule a reveal one unit later; reveal events attach the
// transaction and fire the observers. A reveal tied with an issuance is
// processed first.
RunStats run_simulation(Tangle& g, const SimConfig& config,
                        std::span<SimObserver* const> observers);

}  // namespace tanglesim
