#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tanglesim/arrival.hpp"
#include "tanglesim/stats.hpp"

namespace tanglesim {

struct ApprovalSample {
    TxId id = kNoTx;
    double issue_time = 0.0;
    double t_a = 0.0;  // reveal of first approver minus own reveal; >= 1
};

struct WeightSample {
    double elapsed = 0.0;  // time since the tracked transaction's issuance
    std::uint32_t weight = 1;
};

// Everything one run records. Tip statistics are time-weighted: each
// observed tip count is held until the next reveal event, since sampling
// at events only would overweight bursts.
struct MetricsRecord {
    std::vector<std::pair<double, std::uint32_t>> tip_series;  // (time, L) after warmup
    std::vector<std::pair<std::uint32_t, double>> tip_histogram;  // (L, probability)
    std::vector<ApprovalSample> approval_times;
    std::vector<std::pair<TxId, std::vector<WeightSample>>> cw_trajectories;
    std::size_t orphan_count = 0;  // unapproved beyond the horizon at run end
    bool partial = false;          // run stopped by the transaction cap
    double window_end = 0.0;       // end of the recording window
};

struct MetricsOptions {
    bool record_tips = true;
    bool record_approvals = true;
    std::size_t track_weights = 0;  // trajectories of the first k post-warmup transactions
    double orphan_horizon = 20.0;
};

// Observer wiring the record into a simulation run.
class MetricsRecorder : public SimObserver {
public:
    MetricsRecorder(const SimConfig& config, MetricsOptions options);

    bool wants_weights() const override { return options_.track_weights > 0; }
    void on_reveal(const Tangle& g, const Transaction& revealed, double now) override;
    void on_finish(const Tangle& g, double end_time) override;

    MetricsRecord take() { return std::move(record_); }
    const MetricsRecord& record() const { return record_; }

private:
    double warmup_;
    MetricsOptions options_;
    MetricsRecord record_;
    std::uint32_t prev_tip_count_ = 1;
};

struct SimOutcome {
    Tangle tangle;
    MetricsRecord record;
    RunStats stats;
};

// Convenience driver: one tangle, one recorder, one run.
SimOutcome run_with_metrics(const SimConfig& config, const MetricsOptions& options);

// Time-weighted mean and standard deviation of the tip count over the
// recorded window.
WeightedStats summarize_tips(const MetricsRecord& record);

// Sample mean and standard deviation of the time to first approval.
// Transactions never approved are excluded here and surface in
// orphan_count instead.
WeightedStats summarize_approval(const MetricsRecord& record);

// Relative residual |EL - (tA - 1) * 2 lambda| / EL of the uniform-selection
// steady-state relation between tip count and approval time.
double check_tip_approval_relation(double mean_tips, double mean_ta, double lambda);

// Two-phase fit of a cumulative-weight trajectory: exponential
// g(x) = exp(c x + d) on the early segment, linear f(x) = a x + b on the
// late segment. The changepoint is scanned over a grid of split indices
// and the split with the smallest total raw-scale residual wins; the
// exponential parameters come from a log-domain least squares. Splits at
// 0 (no exponential segment) and n (no linear segment) are admissible, so
// purely linear or purely exponential inputs degenerate cleanly.
struct GrowthPhases {
    double exp_c = 0.0, exp_d = 0.0;
    double lin_a = 0.0, lin_b = 0.0;
    std::size_t changepoint = 0;  // first index of the linear segment
    double exp_sse = 0.0;         // raw-scale residuals of the chosen fits
    double lin_sse = 0.0;
};

GrowthPhases fit_growth_phases(std::span<const WeightSample> trajectory);

// Least-squares line through the tip series.
LineFit tip_growth_slope(const MetricsRecord& record);

// Selection frequency of every current tip, estimated with `walks`
// selector invocations against the frozen tangle. Indexed like
// g.tips(); sums to 1. Decomposed into fixed chunks, so the result is
// identical for any job count.
std::vector<double> estimate_exit_frequencies(const Tangle& g, SelectorKind kind,
                                              std::size_t walks, std::uint64_t seed,
                                              std::size_t jobs = 1);

// Run-averaged adjusted exit probabilities: per run the per-tip selection
// frequencies on the final tip set, sorted descending, zero-padded to the
// maximum observed tip count across runs, then averaged element-wise.
struct ExitProfile {
    std::vector<double> probability;  // indexed by rank, non-increasing
    std::size_t runs = 0;
    std::size_t walks_per_run = 0;
};

ExitProfile exit_profile(const SimConfig& config, std::size_t runs,
                         std::size_t walks_per_run, std::size_t jobs = 0);

// Monte-Carlo confidence level of x: the fraction of selector invocations
// returning a tip that indirectly approves x.
double confidence_level(const Tangle& g, TxId x, SelectorKind kind, std::size_t samples,
                        std::uint64_t seed);

// Per-run summary of a batch member; the run's seed is derived from the
// batch seed and the run index, so any row can be reproduced alone.
struct RunSummaryRow {
    std::uint64_t seed = 0;
    WeightedStats tips{};
    WeightedStats ta{};
    bool has_ta = false;
    std::size_t orphans = 0;
};

std::vector<RunSummaryRow> run_batch_rows(const SimConfig& config, std::size_t runs,
                                          std::size_t jobs = 0);

// Batch summary across `runs` seeded runs of one configuration: the grand
// means of the per-run tip statistics and approval statistics.
struct BatchSummary {
    double mean_tips = 0.0;
    double std_tips = 0.0;  // mean of the per-run time stddevs
    double mean_ta = 0.0;
    double std_ta = 0.0;
    std::size_t runs = 0;
    std::size_t orphans = 0;
};

BatchSummary summarize_batch(std::span<const RunSummaryRow> rows);
BatchSummary run_batch(const SimConfig& config, std::size_t runs, std::size_t jobs = 0);

struct ScalingRow {
    double lambda = 0.0;
    BatchSummary summary;
};

// Batches over several lambda values; used to check how the tip-count
// mean and spread scale with the arrival rate.
std::vector<ScalingRow> scaling_study(const SimConfig& base, std::span<const double> lambdas,
                                      std::size_t runs_per_lambda, std::size_t jobs = 0);

}  // namespace tanglesim
