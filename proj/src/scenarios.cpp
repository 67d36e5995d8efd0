#include "tanglesim/scenarios.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <stdexcept>

#include "tanglesim/attack.hpp"
#include "tanglesim/csv.hpp"
#include "tanglesim/metrics.hpp"
#include "tanglesim/stats.hpp"

namespace tanglesim {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += fmt(v[i]);
    }
    return out;
}

std::string join(const std::vector<std::uint64_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

// One directory per invocation with the resolved configuration echoed, so
// every CSV can be traced back to the exact inputs that produced it.
void write_config_used(const ScenarioConfig& cfg, const std::string& command) {
    std::ofstream out(std::filesystem::path(cfg.output_dir) / "config_used.txt",
                      std::ios::binary);
    if (!out) throw std::runtime_error("cannot write config_used.txt");
    out << "command = " << command << '\n'
        << "lambda = " << fmt(cfg.sim.lambda) << '\n'
        << "alpha = " << fmt(cfg.sim.alpha) << '\n'
        << "selector = " << cfg.sim.kind().name() << '\n'
        << "duration = " << fmt(cfg.sim.duration) << '\n'
        << "warmup = " << fmt(cfg.sim.warmup) << '\n'
        << "seed = " << cfg.sim.seed << '\n'
        << "max_transactions = " << cfg.sim.max_transactions << '\n'
        << "runs = " << cfg.runs << '\n'
        << "walks = " << cfg.walks << '\n'
        << "samples = " << cfg.samples << '\n'
        << "jobs = " << cfg.jobs << '\n'
        << "reps = " << cfg.reps << '\n'
        << "output_dir = " << cfg.output_dir << '\n'
        << "kind = " << cfg.attack_kind << '\n'
        << "attacker_size = " << cfg.attacker_size << '\n'
        << "kappa = " << fmt(cfg.kappa) << '\n'
        << "anchor = " << cfg.anchor << '\n'
        << "lambdas = " << join(cfg.lambdas) << '\n'
        << "tx_counts = " << join(cfg.tx_counts) << '\n'
        << "track_cw = " << cfg.track_cw << '\n'
        << "orphan_horizon = " << fmt(cfg.orphan_horizon) << '\n';
}

void prepare_output_dir(const ScenarioConfig& cfg, const std::string& command) {
    std::filesystem::create_directories(cfg.output_dir);
    write_config_used(cfg, command);
}

std::filesystem::path out_path(const ScenarioConfig& cfg, const char* file) {
    return std::filesystem::path(cfg.output_dir) / file;
}

void write_run_outputs(const ScenarioConfig& cfg, const MetricsRecord& record) {
    {
        CsvWriter w(out_path(cfg, "tips.csv").string(), "time,tip_count");
        for (const auto& [t, count] : record.tip_series) w.field(t).field(count), w.endrow();
    }
    {
        CsvWriter w(out_path(cfg, "tip_hist.csv").string(), "tip_count,probability");
        for (const auto& [count, p] : record.tip_histogram) w.field(count).field(p), w.endrow();
    }
    {
        CsvWriter w(out_path(cfg, "approval.csv").string(), "tx_id,issue_time,t_A");
        for (const auto& s : record.approval_times)
            w.field(s.id).field(s.issue_time).field(s.t_a), w.endrow();
    }
    {
        CsvWriter w(out_path(cfg, "cw.csv").string(), "tx_id,elapsed,weight");
        for (const auto& [id, samples] : record.cw_trajectories)
            for (const auto& s : samples) w.field(id).field(s.elapsed).field(s.weight), w.endrow();
    }
}

ParasiteKind parse_attack_kind(const std::string& name) {
    if (name == "tip_flood") return ParasiteKind::kTipFlood;
    if (name == "cut_set_chain") return ParasiteKind::kCutSetChain;
    throw std::invalid_argument("unknown attack kind: " + name);
}

}  // namespace

int cmd_simulate(const ScenarioConfig& cfg) {
    cfg.sim.validate();
    prepare_output_dir(cfg, "simulate");

    MetricsOptions opts;
    opts.track_weights = cfg.track_cw;
    opts.orphan_horizon = cfg.orphan_horizon;
    SimOutcome out = run_with_metrics(cfg.sim, opts);
    write_run_outputs(cfg, out.record);

    WeightedStats tips{}, ta{};
    if (!out.record.tip_series.empty()) tips = summarize_tips(out.record);
    if (!out.record.approval_times.empty()) ta = summarize_approval(out.record);
    std::cout << "lambda=" << fmt(cfg.sim.lambda) << " selector=" << cfg.sim.kind().name()
              << " EL=" << fmt(tips.mean) << " sigma=" << fmt(tips.stddev)
              << " tA=" << fmt(ta.mean) << '\n';
    return 0;
}

int cmd_batch(const ScenarioConfig& cfg) {
    cfg.sim.validate();
    if (cfg.runs == 0) throw std::invalid_argument("runs must be >= 1");
    prepare_output_dir(cfg, "batch");

    auto rows = run_batch_rows(cfg.sim, cfg.runs, cfg.jobs);
    {
        CsvWriter w(out_path(cfg, "batch.csv").string(),
                    "run,seed,mean_tips,std_tips,mean_tA,std_tA,orphans");
        for (std::size_t r = 0; r < rows.size(); ++r) {
            w.field(r).field(rows[r].seed).field(rows[r].tips.mean).field(rows[r].tips.stddev);
            w.field(rows[r].ta.mean).field(rows[r].ta.stddev).field(rows[r].orphans);
            w.endrow();
        }
    }
    BatchSummary s = summarize_batch(rows);
    std::cout << "lambda=" << fmt(cfg.sim.lambda) << " selector=" << cfg.sim.kind().name()
              << " runs=" << s.runs << " EL=" << fmt(s.mean_tips)
              << " sigma=" << fmt(s.std_tips) << " tA=" << fmt(s.mean_ta)
              << " residual=" << fmt(check_tip_approval_relation(s.mean_tips, s.mean_ta,
                                                                 cfg.sim.lambda))
              << '\n';
    return 0;
}

int cmd_scaling(const ScenarioConfig& cfg) {
    cfg.sim.validate();
    if (cfg.lambdas.empty()) throw std::invalid_argument("scaling needs a lambdas list");
    for (double l : cfg.lambdas)
        if (!(l > 0)) throw std::invalid_argument("lambdas must be positive");
    if (cfg.runs == 0) throw std::invalid_argument("runs must be >= 1");
    prepare_output_dir(cfg, "scaling");

    auto rows = scaling_study(cfg.sim, cfg.lambdas, cfg.runs, cfg.jobs);
    {
        CsvWriter w(out_path(cfg, "scaling.csv").string(),
                    "lambda,selector,alpha,mean_tips,std_tips,mean_tA,std_tA");
        for (const auto& row : rows) {
            w.field(row.lambda).field(cfg.sim.kind().name()).field(cfg.sim.alpha);
            w.field(row.summary.mean_tips).field(row.summary.std_tips);
            w.field(row.summary.mean_ta).field(row.summary.std_ta);
            w.endrow();
        }
    }
    if (rows.size() >= 2) {
        std::vector<double> lx, ly_mean, ly_std;
        for (const auto& row : rows) {
            lx.push_back(std::log(row.lambda));
            ly_mean.push_back(std::log(row.summary.mean_tips));
            ly_std.push_back(std::log(row.summary.std_tips));
        }
        std::cout << "loglog_slope_mean_tips=" << fmt(fit_line(lx, ly_mean).slope)
                  << " loglog_slope_std_tips=" << fmt(fit_line(lx, ly_std).slope) << '\n';
    } else {
        std::cout << "single lambda, no regression\n";
    }
    return 0;
}

int cmd_exitprofile(const ScenarioConfig& cfg) {
    cfg.sim.validate();
    if (cfg.runs == 0 || cfg.walks == 0)
        throw std::invalid_argument("exitprofile needs runs >= 1 and walks >= 1");
    prepare_output_dir(cfg, "exitprofile");

    ExitProfile profile = exit_profile(cfg.sim, cfg.runs, cfg.walks, cfg.jobs);
    CsvWriter w(out_path(cfg, "exit_profile.csv").string(), "rank,probability");
    for (std::size_t i = 0; i < profile.probability.size(); ++i)
        w.field(i + 1).field(profile.probability[i]), w.endrow();
    std::cout << "runs=" << profile.runs << " walks=" << profile.walks_per_run
              << " ranks=" << profile.probability.size() << '\n';
    return 0;
}

int cmd_attack(const ScenarioConfig& cfg) {
    cfg.sim.validate();
    ParasiteSpec spec;
    spec.kind = parse_attack_kind(cfg.attack_kind);
    spec.anchor = static_cast<TxId>(cfg.anchor);
    spec.size = cfg.attacker_size;
    spec.kappa = cfg.kappa;
    spec.validate();
    if (cfg.samples == 0) throw std::invalid_argument("samples must be >= 1");
    prepare_output_dir(cfg, "attack");

    Tangle g;
    run_simulation(g, cfg.sim, {});
    AttackOutcome outcome = spec.kind == ParasiteKind::kTipFlood
                                ? build_tip_flood(g, spec)
                                : build_cut_set_chain(g, spec);
    double confidence = evaluate_attack(g, outcome.double_spend, cfg.sim.kind(), cfg.samples,
                                        derive_seed(cfg.sim.seed, 0xA77));

    CsvWriter w(out_path(cfg, "attack.csv").string(),
                "kind,selector,alpha,kappa,attacker_size,honest_tips,confidence_of_double_spend");
    w.field(cfg.attack_kind).field(cfg.sim.kind().name()).field(cfg.sim.alpha).field(cfg.kappa);
    w.field(outcome.attacker_txs.size()).field(outcome.honest_tips_at_reveal).field(confidence);
    w.endrow();

    std::cout << "kind=" << cfg.attack_kind << " selector=" << cfg.sim.kind().name()
              << " attacker_txs=" << outcome.attacker_txs.size()
              << " honest_tips=" << outcome.honest_tips_at_reveal
              << " confidence=" << fmt(confidence) << '\n';
    return 0;
}

int cmd_bench(const ScenarioConfig& cfg) {
    if (cfg.tx_counts.empty()) throw std::invalid_argument("bench needs a tx_counts list");
    for (std::uint64_t n : cfg.tx_counts)
        if (n < 2) throw std::invalid_argument("tx_counts entries must be >= 2");
    if (cfg.reps == 0) throw std::invalid_argument("reps must be >= 1");
    {
        SimConfig probe = cfg.sim;
        probe.duration = std::numeric_limits<double>::infinity();
        probe.warmup = 0.0;
        probe.max_transactions = 2;
        probe.validate();
    }
    prepare_output_dir(cfg, "bench");

    // Timings isolate the simulation itself: no observers, one run at a
    // time, best of `reps` repetitions.
    std::vector<double> log_n, log_t;
    CsvWriter w(out_path(cfg, "bench.csv").string(), "selector,alpha,weights_updated,n,seconds");
    for (std::size_t i = 0; i < cfg.tx_counts.size(); ++i) {
        const std::uint64_t n = cfg.tx_counts[i];
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
            SimConfig run = cfg.sim;
            run.duration = std::numeric_limits<double>::infinity();
            run.warmup = 0.0;
            run.max_transactions = n;
            run.seed = derive_seed(cfg.sim.seed, i * 1000 + rep);
            auto start = std::chrono::steady_clock::now();
            Tangle g;
            run_simulation(g, run, {});
            std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
            best = std::min(best, elapsed.count());
        }
        w.field(cfg.sim.kind().name()).field(cfg.sim.alpha);
        w.field(static_cast<int>(cfg.sim.kind().maintains_weights()));
        w.field(n).field(best);
        w.endrow();
        std::cout << "n=" << n << " seconds=" << fmt(best) << '\n';
        log_n.push_back(std::log(static_cast<double>(n)));
        log_t.push_back(std::log(std::max(best, 1e-9)));
    }
    if (log_n.size() >= 2) {
        std::cout << "loglog_exponent=" << fmt(fit_line(log_n, log_t).slope) << '\n';
    } else {
        std::cout << "single size, no exponent\n";
    }
    return 0;
}

}  // namespace tanglesim
