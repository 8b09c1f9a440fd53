#include "mergesim/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "mergesim/config.hpp"
#include "mergesim/render.hpp"
#include "mergesim/results.hpp"

namespace fs = std::filesystem;

namespace mergesim {

std::string checkpoint_filename(bool sharing, std::uint64_t seed) {
    return "model_" + std::string(sharing ? "on" : "off") + "_" + std::to_string(seed) + ".bin";
}

std::optional<std::pair<bool, std::uint64_t>> parse_checkpoint_filename(const std::string& path) {
    const std::string name = fs::path(path).filename().string();
    if (name.rfind("model_", 0) != 0 || name.size() < 12) return std::nullopt;
    if (name.substr(name.size() - 4) != ".bin") return std::nullopt;
    const std::string core = name.substr(6, name.size() - 10); // "<on|off>_<seed>"
    const auto under = core.find('_');
    if (under == std::string::npos) return std::nullopt;
    const std::string sharing = core.substr(0, under);
    if (sharing != "on" && sharing != "off") return std::nullopt;
    const std::string seed_str = core.substr(under + 1);
    if (seed_str.empty() ||
        seed_str.find_first_not_of("0123456789") != std::string::npos)
        return std::nullopt;
    return std::make_pair(sharing == "on", std::strtoull(seed_str.c_str(), nullptr, 10));
}

namespace {

std::string train_log_filename(bool sharing, std::uint64_t seed) {
    return "train_" + std::string(sharing ? "on" : "off") + "_" + std::to_string(seed) + ".csv";
}

std::vector<bool> sharings_for(const ExperimentConfig& cfg,
                               const std::optional<std::string>& flag) {
    if (flag) {
        if (*flag == "on") return {true};
        if (*flag == "off") return {false};
        throw std::invalid_argument("--sharing must be 'on' or 'off'");
    }
    switch (cfg.scenario) {
        case Scenario::sharing_on: return {true};
        case Scenario::sharing_off: return {false};
        case Scenario::both: return {true, false};
    }
    return {true, false};
}

} // namespace

int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err) {
    ExperimentConfig cfg;
    try {
        cfg = load_experiment_config(args.config_path);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    std::vector<bool> sharings;
    try {
        sharings = sharings_for(cfg, args.sharing);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    const std::vector<std::uint64_t> seeds =
        args.seed ? std::vector<std::uint64_t>{*args.seed} : cfg.seeds;
    const fs::path out_dir = args.out_dir ? *args.out_dir : cfg.output_dir;

    struct Job {
        bool sharing;
        std::uint64_t seed;
        fs::path model_path;
        fs::path log_path;
    };
    std::vector<Job> jobs;
    for (bool sharing : sharings)
        for (std::uint64_t seed : seeds)
            jobs.push_back({sharing, seed, out_dir / checkpoint_filename(sharing, seed),
                            out_dir / train_log_filename(sharing, seed)});

    for (const Job& job : jobs)
        if (!args.force && (fs::exists(job.model_path) || fs::exists(job.log_path))) {
            err << "error: output " << job.model_path.string()
                << " exists; pass --force to overwrite\n";
            return 1;
        }

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        err << "error: cannot create output directory " << out_dir.string() << "\n";
        return 1;
    }

    const int n_jobs = static_cast<int>(jobs.size());
    std::vector<std::string> failures(jobs.size());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n_jobs; ++i) {
        const Job& job = jobs[i];
        try {
            EnvConfig env_cfg = cfg.env;
            env_cfg.sharing = job.sharing;
            const TrainResult result = train(env_cfg, cfg.train, job.seed);
            nn::save_checkpoint(job.model_path.string(), result.net);
            write_training_log_csv(job.log_path.string(), result.episodes);
#pragma omp critical
            out << "trained sharing=" << (job.sharing ? "on" : "off") << " seed=" << job.seed
                << " episodes=" << result.episodes.size() << " -> " << job.model_path.string()
                << "\n";
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    }
    for (const std::string& f : failures)
        if (!f.empty()) {
            err << "error: " << f << "\n";
            return 1;
        }
    return 0;
}

int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
    if (args.checkpoints.empty()) {
        err << "error: eval needs at least one checkpoint\n";
        return 1;
    }
    ExperimentConfig cfg;
    try {
        cfg = load_experiment_config(args.config_path);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    std::map<bool, std::map<std::uint64_t, nn::QNetwork>> nets;
    for (const std::string& path : args.checkpoints) {
        const auto parsed = parse_checkpoint_filename(path);
        if (!parsed) {
            err << "error: checkpoint name '" << path
                << "' does not match model_<on|off>_<seed>.bin\n";
            return 1;
        }
        try {
            nets[parsed->first][parsed->second] = nn::load_checkpoint(path);
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            return 1;
        }
    }

    std::vector<EvalCell> cells;
    for (const auto& [sharing, by_seed] : nets) {
        std::vector<const nn::QNetwork*> ordered;
        for (const auto& [seed, net] : by_seed) ordered.push_back(&net);
        const auto side = evaluate(ordered, cfg.env, sharing, cfg.eval_episodes_per_cell,
                                   cfg.eval_seed);
        cells.insert(cells.end(), side.begin(), side.end());
    }

    const ResultsTable table = build_results_table(cfg.env.triggers, cells);
    const fs::path out_path =
        args.out_path ? fs::path(*args.out_path) : fs::path(cfg.output_dir) / "results.csv";
    std::error_code ec;
    fs::create_directories(out_path.parent_path(), ec);
    try {
        write_results_csv(out_path.string(), table);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    out << results_to_csv(table);
    out << "wrote " << out_path.string() << "\n";

    bool absent = false;
    for (const ResultsRow& row : table.rows)
        absent = absent || !row.with_sharing.present || !row.without_sharing.present;
    if (absent) {
        err << "warning: table has absent cells (missing checkpoints for a scenario)\n";
        return 2;
    }
    return 0;
}

int cmd_render(const RenderArgs& args, std::ostream& out, std::ostream& err) {
    ExperimentConfig cfg;
    try {
        if (args.config_path) cfg = load_experiment_config(*args.config_path);
        cfg.validate();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    EnvConfig env_cfg = cfg.env;
    nn::QNetwork net;
    try {
        if (args.sharing == "on") env_cfg.sharing = true;
        else if (args.sharing == "off") env_cfg.sharing = false;
        else throw std::invalid_argument("--sharing must be 'on' or 'off'");
        env_cfg.fixed_intent = IntentCatalog::by_name(args.intent);
        env_cfg.fixed_trigger = args.trigger;
        net = nn::load_checkpoint(args.checkpoint);
        if (net.input_size() != env_cfg.observation_size())
            throw std::invalid_argument("checkpoint input size does not match the environment");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    const std::uint64_t seed = args.seed ? *args.seed : cfg.eval_seed;
    RolloutResult roll;
    try {
        roll = greedy_rollout(net, env_cfg, seed);
    } catch (const std::exception& e) {
        err << "error: rollout failed: " << e.what() << "\n";
        return 1;
    }

    std::size_t snapshot = roll.log.steps.size() - 1;
    std::ostringstream annotation;
    annotation << "intent " << args.intent;
    if (args.trigger) annotation << " @ " << *args.trigger << " m";
    annotation << ", sharing " << args.sharing;
    if (roll.merge) {
        snapshot = 0;
        while (snapshot < roll.log.steps.size() && !roll.log.steps[snapshot].merged_now) ++snapshot;
        annotation << " - merged at t = " << roll.merge->t_m << " s";
    } else {
        annotation << " - no merge";
    }

    try {
        const std::string svg =
            render_snapshot_svg(env_cfg.geometry, roll.log, snapshot, annotation.str());
        std::ofstream svg_out(args.out_svg, std::ios::binary);
        if (!svg_out) throw std::runtime_error("cannot open '" + args.out_svg + "' for writing");
        svg_out << svg;
        if (args.log_path) write_episode_log_file(*args.log_path, roll.log);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    out << "wrote " << args.out_svg << (roll.merge ? "" : " (no merge occurred)") << "\n";
    return roll.merge ? 0 : 2;
}

int cmd_replay_verify(const ReplayVerifyArgs& args, std::ostream& out, std::ostream& err) {
    EpisodeLog log;
    try {
        log = read_episode_log_file(args.log_path);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    const ComplianceReport compliance = verify_episode_compliance(log);
    if (compliance.compliant) {
        out << "compliance: OK (" << log.steps.size() << " steps, intent " << log.intent_name
            << ")\n";
    } else {
        out << "compliance: " << compliance.violations.size() << " violation(s)\n";
        for (const ComplianceViolation& v : compliance.violations) {
            if (v.kind == ComplianceViolation::Kind::uncommitted_action_used)
                out << "  step " << v.step << ": uncommitted action " << action_name(v.action)
                    << " used\n";
            else
                out << "  committed action " << action_name(v.action) << " never used\n";
        }
    }

    const std::vector<std::string> mismatches = verify_episode_rewards(log);
    if (mismatches.empty()) {
        out << "rewards: OK (all components re-derived from logged states)\n";
    } else {
        out << "rewards: " << mismatches.size() << " mismatch(es)\n";
        for (const std::string& m : mismatches) out << "  " << m << "\n";
    }

    return compliance.compliant && mismatches.empty() ? 0 : 2;
}

} // namespace mergesim
