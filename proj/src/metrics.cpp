#include "tanglesim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

#include "tanglesim/parallel.hpp"

namespace tanglesim {

MetricsRecorder::MetricsRecorder(const SimConfig& config, MetricsOptions options)
    : warmup_(config.warmup), options_(options) {}

void MetricsRecorder::on_reveal(const Tangle& g, const Transaction& revealed, double now) {
    if (options_.track_weights > 0) {
        if (record_.cw_trajectories.size() < options_.track_weights &&
            revealed.issue_time >= warmup_ && !revealed.is_genesis()) {
            record_.cw_trajectories.push_back({revealed.id, {WeightSample{0.0, 1}}});
        }
        for (auto& [id, samples] : record_.cw_trajectories) {
            std::uint32_t w = g.tx(id).cumulative_weight;
            if (w != samples.back().weight)
                samples.push_back({now - g.tx(id).issue_time, w});
        }
    }

    if (now >= warmup_) {
        if (options_.record_tips) {
            if (record_.tip_series.empty() && now > warmup_)
                record_.tip_series.emplace_back(warmup_, prev_tip_count_);
            record_.tip_series.emplace_back(now, static_cast<std::uint32_t>(g.tip_count()));
        }
        if (options_.record_approvals && revealed.has_parent()) {
            for (int i = 0; i < 2; ++i) {
                TxId p = revealed.parents[i];
                if (i == 1 && p == revealed.parents[0]) break;
                const Transaction& parent = g.tx(p);
                if (parent.first_approval_time == now && parent.reveal_time >= warmup_) {
                    record_.approval_times.push_back(
                        {p, parent.issue_time, now - parent.reveal_time});
                }
            }
        }
    }
    prev_tip_count_ = static_cast<std::uint32_t>(g.tip_count());
}

void MetricsRecorder::on_finish(const Tangle& g, double end_time) {
    record_.window_end = end_time;
    if (!record_.tip_series.empty()) {
        std::map<std::uint32_t, double> hold;
        double total = 0.0;
        for (std::size_t i = 0; i < record_.tip_series.size(); ++i) {
            double until = i + 1 < record_.tip_series.size() ? record_.tip_series[i + 1].first
                                                             : end_time;
            double dt = until - record_.tip_series[i].first;
            if (dt <= 0.0) continue;
            hold[record_.tip_series[i].second] += dt;
            total += dt;
        }
        record_.tip_histogram.clear();
        for (const auto& [count, t] : hold)
            record_.tip_histogram.emplace_back(count, t / total);
    }
    record_.orphan_count = 0;
    for (TxId id = 0; id < g.size(); ++id) {
        if (!g.is_revealed(id)) continue;
        const Transaction& t = g.tx(id);
        if (!t.approved() && end_time - t.reveal_time > options_.orphan_horizon)
            ++record_.orphan_count;
    }
}

SimOutcome run_with_metrics(const SimConfig& config, const MetricsOptions& options) {
    SimOutcome out;
    MetricsRecorder recorder(config, options);
    SimObserver* obs[] = {&recorder};
    out.stats = run_simulation(out.tangle, config, obs);
    out.record = recorder.take();
    out.record.partial = out.stats.truncated_by_cap;
    return out;
}

WeightedStats summarize_tips(const MetricsRecord& record) {
    if (record.tip_series.empty())
        throw std::invalid_argument("summarize_tips: empty tip series");
    std::vector<double> values, weights;
    values.reserve(record.tip_series.size());
    weights.reserve(record.tip_series.size());
    for (std::size_t i = 0; i < record.tip_series.size(); ++i) {
        double until = i + 1 < record.tip_series.size() ? record.tip_series[i + 1].first
                                                        : record.window_end;
        double dt = until - record.tip_series[i].first;
        if (dt <= 0.0) continue;
        values.push_back(record.tip_series[i].second);
        weights.push_back(dt);
    }
    return weighted_stats(values, weights);
}

WeightedStats summarize_approval(const MetricsRecord& record) {
    if (record.approval_times.empty())
        throw std::invalid_argument("summarize_approval: no approvals recorded");
    std::vector<double> ta;
    ta.reserve(record.approval_times.size());
    for (const auto& s : record.approval_times) ta.push_back(s.t_a);
    return sample_stats(ta);
}

double check_tip_approval_relation(double mean_tips, double mean_ta, double lambda) {
    if (!(mean_tips > 0.0)) throw std::invalid_argument("mean_tips must be positive");
    return std::abs(mean_tips - (mean_ta - 1.0) * 2.0 * lambda) / mean_tips;
}

namespace {

struct SegmentSums {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    std::size_t n = 0;

    void add(double x, double y) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
        ++n;
    }
    void subtract(const SegmentSums& o) {
        sx -= o.sx;
        sy -= o.sy;
        sxx -= o.sxx;
        sxy -= o.sxy;
        syy -= o.syy;
        n -= o.n;
    }
    // Returns false when the segment cannot be fit (fewer than two points
    // or no x spread).
    bool fit(double& slope, double& intercept, double& sse, double& syy_centered) const {
        if (n < 2) return false;
        const double nn = static_cast<double>(n);
        const double cxx = sxx - sx * sx / nn;
        const double cxy = sxy - sx * sy / nn;
        const double cyy = syy - sy * sy / nn;
        if (cxx <= 0.0) return false;
        slope = cxy / cxx;
        intercept = (sy - slope * sx) / nn;
        sse = std::max(0.0, cyy - slope * cxy);
        syy_centered = cyy;
        return true;
    }
};

}  // namespace

GrowthPhases fit_growth_phases(std::span<const WeightSample> trajectory) {
    constexpr std::size_t kMinSegment = 3;
    const std::size_t n = trajectory.size();
    if (n < 2 * kMinSegment)
        throw std::invalid_argument("fit_growth_phases: trajectory too short for two phases");

    // Prefix sums: log domain for the exponential fit parameters, raw
    // domain for the linear fit. Both give O(1) segment fits per split.
    std::vector<SegmentSums> log_prefix(n + 1), raw_prefix(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        log_prefix[i + 1] = log_prefix[i];
        raw_prefix[i + 1] = raw_prefix[i];
        const double x = trajectory[i].elapsed;
        const double w = trajectory[i].weight;
        log_prefix[i + 1].add(x, std::log(w));
        raw_prefix[i + 1].add(x, w);
    }

    // Residual of the exponential fit in the raw domain, so splits with
    // and without an exponential segment compete on the same scale.
    auto exp_fit_raw_sse = [&](std::size_t k, double& c, double& d) {
        double sse_log, syy_log;
        if (!log_prefix[k].fit(c, d, sse_log, syy_log))
            return std::numeric_limits<double>::infinity();
        double sse = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double arg = c * trajectory[i].elapsed + d;
            const double r = trajectory[i].weight - (arg < 700.0 ? std::exp(arg)
                                                                 : std::numeric_limits<double>::infinity());
            sse += r * r;
        }
        return sse;
    };
    auto lin_fit_sse = [&](std::size_t k, double& a, double& b) {
        SegmentSums late = raw_prefix[n];
        late.subtract(raw_prefix[k]);
        double sse, syy;
        if (!late.fit(a, b, sse, syy)) return std::numeric_limits<double>::infinity();
        return sse;
    };

    // Scanned grid of candidate changepoints, both degenerate splits
    // included: the total raw residual decides.
    std::vector<std::size_t> candidates{0, n};
    const std::size_t stride = std::max<std::size_t>(1, (n - 2 * kMinSegment) / 256);
    for (std::size_t k = kMinSegment; k + kMinSegment <= n; k += stride)
        candidates.push_back(k);

    double best_score = std::numeric_limits<double>::infinity();
    std::size_t best_k = 0;
    bool found = false;
    for (std::size_t k : candidates) {
        double c = 0, d = 0, a = 0, b = 0;
        double score = 0.0;
        if (k > 0) score += exp_fit_raw_sse(k, c, d);
        if (k < n) score += lin_fit_sse(k, a, b);
        if (!std::isfinite(score)) continue;
        if (!found || score < best_score) {
            found = true;
            best_score = score;
            best_k = k;
        }
    }
    if (!found) throw std::invalid_argument("fit_growth_phases: degenerate trajectory");

    GrowthPhases out;
    out.changepoint = best_k;
    if (best_k > 0) out.exp_sse = exp_fit_raw_sse(best_k, out.exp_c, out.exp_d);
    if (best_k < n) out.lin_sse = lin_fit_sse(best_k, out.lin_a, out.lin_b);
    return out;
}

LineFit tip_growth_slope(const MetricsRecord& record) {
    if (record.tip_series.size() < 3)
        throw std::invalid_argument("tip_growth_slope: tip series too short");
    std::vector<double> x, y;
    x.reserve(record.tip_series.size());
    y.reserve(record.tip_series.size());
    for (const auto& [t, count] : record.tip_series) {
        x.push_back(t);
        y.push_back(count);
    }
    return fit_line(x, y);
}

std::vector<double> estimate_exit_frequencies(const Tangle& g, SelectorKind kind,
                                              std::size_t walks, std::uint64_t seed,
                                              std::size_t jobs) {
    if (walks == 0) throw std::invalid_argument("estimate_exit_frequencies: walks must be >= 1");
    const auto& tips = g.tips();
    std::vector<std::uint32_t> tip_index(g.size(), 0);
    for (std::size_t i = 0; i < tips.size(); ++i) tip_index[tips[i]] = static_cast<std::uint32_t>(i);

    const std::size_t chunks = std::min<std::size_t>(64, walks);
    std::vector<std::vector<std::uint64_t>> counts(chunks);
    parallel_for(chunks, jobs, [&](std::size_t c) {
        std::size_t quota = walks / chunks + (c < walks % chunks ? 1 : 0);
        Rng rng(derive_seed(seed, c));
        std::vector<std::uint64_t> local(tips.size(), 0);
        for (std::size_t i = 0; i < quota; ++i) ++local[tip_index[select_tip(g, kind, rng)]];
        counts[c] = std::move(local);
    });

    std::vector<double> freq(tips.size(), 0.0);
    for (const auto& local : counts)
        for (std::size_t i = 0; i < freq.size(); ++i) freq[i] += static_cast<double>(local[i]);
    for (double& f : freq) f /= static_cast<double>(walks);
    return freq;
}

ExitProfile exit_profile(const SimConfig& config, std::size_t runs,
                         std::size_t walks_per_run, std::size_t jobs) {
    if (runs == 0 || walks_per_run == 0)
        throw std::invalid_argument("exit_profile: runs and walks_per_run must be >= 1");
    config.validate();

    std::vector<std::vector<double>> sorted_freqs(runs);
    parallel_for(runs, jobs, [&](std::size_t r) {
        SimConfig run_config = config;
        run_config.seed = derive_seed(config.seed, r);
        Tangle g;
        run_simulation(g, run_config, {});
        auto freq = estimate_exit_frequencies(g, run_config.kind(), walks_per_run,
                                              derive_seed(run_config.seed, 0xE717), 1);
        std::sort(freq.begin(), freq.end(), std::greater<double>());
        sorted_freqs[r] = std::move(freq);
    });

    std::size_t max_len = 0;
    for (const auto& f : sorted_freqs) max_len = std::max(max_len, f.size());
    ExitProfile profile;
    profile.runs = runs;
    profile.walks_per_run = walks_per_run;
    profile.probability.assign(max_len, 0.0);
    for (const auto& f : sorted_freqs)
        for (std::size_t i = 0; i < f.size(); ++i) profile.probability[i] += f[i];
    for (double& p : profile.probability) p /= static_cast<double>(runs);
    return profile;
}

double confidence_level(const Tangle& g, TxId x, SelectorKind kind, std::size_t samples,
                        std::uint64_t seed) {
    if (samples == 0) throw std::invalid_argument("confidence_level: samples must be >= 1");
    if (!g.is_revealed(x)) throw std::invalid_argument("confidence_level: x not revealed");
    const auto approves_x = g.descendants_mask(x);
    Rng rng(derive_seed(seed, 0xC0FF));
    std::size_t hits = 0;
    for (std::size_t i = 0; i < samples; ++i)
        hits += approves_x[select_tip(g, kind, rng)];
    return static_cast<double>(hits) / static_cast<double>(samples);
}

std::vector<RunSummaryRow> run_batch_rows(const SimConfig& config, std::size_t runs,
                                          std::size_t jobs) {
    if (runs == 0) throw std::invalid_argument("run_batch_rows: runs must be >= 1");
    config.validate();

    std::vector<RunSummaryRow> rows(runs);
    parallel_for(runs, jobs, [&](std::size_t r) {
        SimConfig run_config = config;
        run_config.seed = derive_seed(config.seed, r);
        MetricsOptions opts;
        opts.track_weights = 0;
        SimOutcome out = run_with_metrics(run_config, opts);
        RunSummaryRow row;
        row.seed = run_config.seed;
        row.tips = summarize_tips(out.record);
        if (!out.record.approval_times.empty()) {
            row.ta = summarize_approval(out.record);
            row.has_ta = true;
        }
        row.orphans = out.record.orphan_count;
        rows[r] = row;
    });
    return rows;
}

BatchSummary summarize_batch(std::span<const RunSummaryRow> rows) {
    if (rows.empty()) throw std::invalid_argument("summarize_batch: no rows");
    BatchSummary s;
    s.runs = rows.size();
    std::size_t ta_runs = 0;
    for (const RunSummaryRow& r : rows) {
        s.mean_tips += r.tips.mean;
        s.std_tips += r.tips.stddev;
        if (r.has_ta) {
            s.mean_ta += r.ta.mean;
            s.std_ta += r.ta.stddev;
            ++ta_runs;
        }
        s.orphans += r.orphans;
    }
    s.mean_tips /= static_cast<double>(s.runs);
    s.std_tips /= static_cast<double>(s.runs);
    if (ta_runs > 0) {
        s.mean_ta /= static_cast<double>(ta_runs);
        s.std_ta /= static_cast<double>(ta_runs);
    }
    return s;
}

BatchSummary run_batch(const SimConfig& config, std::size_t runs, std::size_t jobs) {
    return summarize_batch(run_batch_rows(config, runs, jobs));
}

std::vector<ScalingRow> scaling_study(const SimConfig& base, std::span<const double> lambdas,
                                      std::size_t runs_per_lambda, std::size_t jobs) {
    std::vector<ScalingRow> rows;
    rows.reserve(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        SimConfig config = base;
        config.lambda = lambdas[i];
        config.seed = derive_seed(base.seed, 0x5CA1E + i);
        rows.push_back({lambdas[i], run_batch(config, runs_per_lambda, jobs)});
    }
    return rows;
}

}  // namespace tanglesim
