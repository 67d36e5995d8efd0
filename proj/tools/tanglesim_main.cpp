#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tanglesim/scenarios.hpp"

namespace {

using tanglesim::ScenarioConfig;
using tanglesim::SelectorAlgo;

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& s) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoull(item));
    }
    return out;
}

SelectorAlgo parse_selector(const std::string& s) {
    if (s == "urts") return SelectorAlgo::kUrts;
    if (s == "walk") return SelectorAlgo::kWalk;
    throw std::invalid_argument("selector must be urts or walk");
}

// Scenario files are flat `key = value` text (also `key value`); '#'
// starts a comment. Every key is also a command-line flag and flags win
// over the file.
struct FileKeys {
    std::map<std::string, std::function<void(const std::string&)>> apply;
    std::map<std::string, CLI::Option*> flag;

    void bind(const std::string& key, CLI::Option* opt,
              std::function<void(const std::string&)> fn) {
        apply[key] = std::move(fn);
        flag[key] = opt;
    }

    void load(const std::string& path) const {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config file: " + path);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
            std::string key, value;
            std::stringstream ss(line);
            if (!(ss >> key)) continue;  // blank line
            std::string tok;
            ss >> tok;
            if (tok == "=") ss >> value;
            else value = tok;
            if (auto eq = key.find('='); eq != std::string::npos) {
                value = key.substr(eq + 1);
                key.resize(eq);
            }
            auto it = apply.find(key);
            if (it == apply.end())
                throw std::runtime_error("unknown configuration key '" + key + "' at " + path +
                                         ":" + std::to_string(line_no));
            if (value.empty())
                throw std::runtime_error("missing value for key '" + key + "' at " + path + ":" +
                                         std::to_string(line_no));
            auto fl = flag.find(key);
            if (fl != flag.end() && fl->second != nullptr && fl->second->count() > 0)
                continue;  // explicit flag wins over the file
            try {
                it->second(value);
            } catch (const std::exception& e) {
                throw std::runtime_error("bad value for key '" + key + "' at " + path + ":" +
                                         std::to_string(line_no) + ": " + e.what());
            }
        }
    }
};

void add_common_options(CLI::App* sub, ScenarioConfig* cfg, std::string* selector_name,
                        std::string* config_path, FileKeys& keys) {
    CLI::Option* config_opt =
        sub->add_option("--config", *config_path, "scenario file with key = value lines");
    (void)config_opt;

    auto* lambda = sub->add_option("--lambda", cfg->sim.lambda, "arrival rate (tx per unit time)");
    keys.bind("lambda", lambda, [cfg](const std::string& v) { cfg->sim.lambda = std::stod(v); });

    auto* alpha = sub->add_option("--alpha", cfg->sim.alpha, "walk bias parameter");
    keys.bind("alpha", alpha, [cfg](const std::string& v) { cfg->sim.alpha = std::stod(v); });

    auto* selector = sub->add_option("--selector", *selector_name, "tip selector: urts | walk")
                         ->check(CLI::IsMember({"urts", "walk"}));
    keys.bind("selector", selector,
              [cfg](const std::string& v) { cfg->sim.selector = parse_selector(v); });

    auto* duration = sub->add_option("--duration", cfg->sim.duration, "simulated end time");
    keys.bind("duration", duration, [cfg](const std::string& v) { cfg->sim.duration = std::stod(v); });

    auto* warmup = sub->add_option("--warmup", cfg->sim.warmup, "metrics start time");
    keys.bind("warmup", warmup, [cfg](const std::string& v) { cfg->sim.warmup = std::stod(v); });

    auto* seed = sub->add_option("--seed", cfg->sim.seed, "root RNG seed");
    keys.bind("seed", seed, [cfg](const std::string& v) { cfg->sim.seed = std::stoull(v); });

    auto* cap = sub->add_option("--max-transactions", cfg->sim.max_transactions,
                                "hard transaction cap (0 = none)");
    keys.bind("max_transactions", cap,
              [cfg](const std::string& v) { cfg->sim.max_transactions = std::stoull(v); });

    auto* runs = sub->add_option("--runs", cfg->runs, "independent runs");
    keys.bind("runs", runs, [cfg](const std::string& v) { cfg->runs = std::stoull(v); });

    auto* walks = sub->add_option("--walks", cfg->walks, "selector invocations per run");
    keys.bind("walks", walks, [cfg](const std::string& v) { cfg->walks = std::stoull(v); });

    auto* samples = sub->add_option("--samples", cfg->samples, "Monte-Carlo evaluation samples");
    keys.bind("samples", samples, [cfg](const std::string& v) { cfg->samples = std::stoull(v); });

    auto* jobs = sub->add_option("--jobs", cfg->jobs, "worker threads (0 = all cores)");
    keys.bind("jobs", jobs, [cfg](const std::string& v) { cfg->jobs = std::stoull(v); });

    auto* reps = sub->add_option("--reps", cfg->reps, "bench repetitions per size");
    keys.bind("reps", reps, [cfg](const std::string& v) { cfg->reps = std::stoull(v); });

    auto* outdir = sub->add_option("--output-dir", cfg->output_dir, "output directory");
    keys.bind("output_dir", outdir, [cfg](const std::string& v) { cfg->output_dir = v; });

    auto* kind = sub->add_option("--kind", cfg->attack_kind, "attack kind: tip_flood | cut_set_chain")
                     ->check(CLI::IsMember({"tip_flood", "cut_set_chain"}));
    keys.bind("kind", kind, [cfg](const std::string& v) { cfg->attack_kind = v; });

    auto* size = sub->add_option("--size", cfg->attacker_size, "attacker transaction count/budget");
    keys.bind("attacker_size", size,
              [cfg](const std::string& v) { cfg->attacker_size = std::stoull(v); });

    auto* kappa = sub->add_option("--kappa", cfg->kappa, "acceptance confidence threshold");
    keys.bind("kappa", kappa, [cfg](const std::string& v) { cfg->kappa = std::stod(v); });

    auto* anchor = sub->add_option("--anchor", cfg->anchor, "attack anchor transaction id");
    keys.bind("anchor", anchor, [cfg](const std::string& v) { cfg->anchor = std::stoull(v); });

    auto* lambdas = sub->add_option(
        "--lambdas", [cfg](const std::vector<std::string>& vals) {
            cfg->lambdas = parse_double_list(vals.back());
            return true;
        },
        "comma-separated lambda list");
    keys.bind("lambdas", lambdas, [cfg](const std::string& v) { cfg->lambdas = parse_double_list(v); });

    auto* txc = sub->add_option(
        "--tx-counts", [cfg](const std::vector<std::string>& vals) {
            cfg->tx_counts = parse_u64_list(vals.back());
            return true;
        },
        "comma-separated transaction counts");
    keys.bind("tx_counts", txc, [cfg](const std::string& v) { cfg->tx_counts = parse_u64_list(v); });

    auto* track = sub->add_option("--track-cw", cfg->track_cw,
                                  "cumulative-weight trajectories to record");
    keys.bind("track_cw", track, [cfg](const std::string& v) { cfg->track_cw = std::stoull(v); });

    auto* horizon = sub->add_option("--orphan-horizon", cfg->orphan_horizon,
                                    "age after which an unapproved transaction counts as orphan");
    keys.bind("orphan_horizon", horizon,
              [cfg](const std::string& v) { cfg->orphan_horizon = std::stod(v); });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continuous-time DAG ledger simulator"};
    app.require_subcommand(1);

    ScenarioConfig cfg;
    std::string selector_name = "urts";
    std::string config_path;
    std::map<CLI::App*, FileKeys> keys_by_sub;

    struct Sub {
        const char* name;
        const char* desc;
        int (*run)(const ScenarioConfig&);
    };
    const Sub subs[] = {
        {"simulate", "one run; writes tips/tip_hist/approval/cw CSVs", tanglesim::cmd_simulate},
        {"batch", "many seeded runs; writes per-run batch.csv", tanglesim::cmd_batch},
        {"scaling", "batches across a lambda list; writes scaling.csv", tanglesim::cmd_scaling},
        {"exitprofile", "run-averaged exit probabilities; writes exit_profile.csv",
         tanglesim::cmd_exitprofile},
        {"attack", "parasite-chain attack evaluation; writes attack.csv", tanglesim::cmd_attack},
        {"bench", "runtime vs tangle size; writes bench.csv", tanglesim::cmd_bench},
    };

    std::map<CLI::App*, const Sub*> dispatch;
    for (const Sub& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.desc);
        add_common_options(sub, &cfg, &selector_name, &config_path, keys_by_sub[sub]);
        dispatch[sub] = &s;
    }

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* active = app.get_subcommands().front();
        // Flags already parsed; the file only fills in what was not given.
        if (active->count("--config") > 0) keys_by_sub[active].load(config_path);
        if (active->count("--selector") > 0) cfg.sim.selector = parse_selector(selector_name);
        return dispatch[active]->run(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
