// Acceptance suite: one pass/fail line per criterion.
//
//  1  reward components match their closed forms to 1e-9
//  2  sender compliance over 10,000 randomized episodes
//  3  IDM oracle equivalence and the MOBIL safety veto
//  4  gradient check and toy-MDP convergence of the DQN
//  5  bit-reproducible train -> evaluate pipeline
//  6  directional result-table reproduction (full training grid)
//  7  qualitative merge-position checks on rendered rollouts
//
// Criterion 6 trains 5 seeds x 2 scenarios at full scale and caches the
// checkpoints under --out-dir (default acceptance_out); re-runs reuse them.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mergesim/commands.hpp"
#include "mergesim/config.hpp"
#include "mergesim/learn.hpp"
#include "mergesim/render.hpp"
#include "mergesim/results.hpp"

using namespace mergesim;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Criterion {
    int id;
    std::string label;
    std::chrono::steady_clock::time_point start;

    Criterion(int id_, std::string label_) : id(id_), label(std::move(label_)) {
        start = std::chrono::steady_clock::now();
        std::printf("criterion %d: %s ...\n", id, label.c_str());
        std::fflush(stdout);
    }
    void finish(bool ok, const std::string& detail) {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %d: %s (%s) [%.1f s]\n", ok ? "PASS" : "FAIL", id,
                    label.c_str(), detail.c_str(), secs);
        std::fflush(stdout);
        if (!ok) ++g_failures;
    }
};

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// --- criterion 1 -----------------------------------------------------------

void criterion_reward_fidelity() {
    Criterion c(1, "reward components match the published closed forms to 1e-9");
    const RewardConfig r;
    const RoadGeometry geom;
    int checked = 0, bad = 0;
    auto expect = [&](double got, double want, const char* what) {
        ++checked;
        if (!close(got, want, 1e-9)) {
            ++bad;
            std::printf("    mismatch %s: got %.12g want %.12g\n", what, got, want);
        }
    };

    // speed reward: beta_s (v - v_min) / (v_max - v_min), input clamped
    expect(speed_reward(20.0, r), 0.0, "r_s(20)");
    expect(speed_reward(30.0, r), 0.275, "r_s(30)");
    expect(speed_reward(25.0, r), 0.275 * 0.5, "r_s(25)");
    expect(speed_reward(27.5, r), 0.275 * 0.75, "r_s(27.5)");
    expect(speed_reward(15.0, r), 0.0, "r_s clamp low");
    expect(speed_reward(99.0, r), 0.275, "r_s clamp high");

    // lane reward: beta_l on the rightmost highway lane only
    expect(lane_reward(LaneRef::highway(1), geom, r), 0.1, "r_l rightmost");
    expect(lane_reward(LaneRef::highway(0), geom, r), 0.0, "r_l leftmost");
    expect(lane_reward(LaneRef::ramp(), geom, r), 0.0, "r_l ramp");

    // merge-time terms
    auto merge = [&](double t_m, double v1, std::optional<MergeNeighbor> front,
                     std::optional<MergeNeighbor> rear) {
        MergeEvent e;
        e.t_m = t_m;
        e.v_m1 = v1;
        e.front = front;
        e.rear = rear;
        return merge_reward(e, r);
    };
    expect(merge(8.0, 30.0, {}, {}).r_q, 0.25, "r_q(8)");
    expect(merge(5.0, 30.0, {}, {}).r_q, 0.4, "r_q(5)");
    expect(merge(13.0, 30.0, {}, {}).r_q, 2.0 / 13.0, "r_q(13)");
    expect(merge(8.0, 30.0, MergeNeighbor{36.0, 29.0, 2}, {}).r_f, 0.0, "r_f at headway");
    expect(merge(8.0, 30.0, MergeNeighbor{18.0, 29.0, 2}, {}).r_f, 0.5 * std::log(0.5),
           "r_f half headway");
    expect(merge(8.0, 25.0, MergeNeighbor{24.0, 29.0, 2}, {}).r_f,
           0.5 * std::log(24.0 / (1.2 * 25.0)), "r_f(24, 25)");
    expect(merge(8.0, 30.0, MergeNeighbor{90.0, 29.0, 2}, {}).r_f, 0.0, "r_f large gap");
    expect(merge(8.0, 30.0, {}, MergeNeighbor{30.0, 25.0, 3}).r_r, 0.0, "r_r at headway");
    expect(merge(8.0, 30.0, {}, MergeNeighbor{15.0, 25.0, 3}).r_r, 0.5 * std::log(0.5),
           "r_r half headway");
    expect(merge(8.0, 30.0, {}, MergeNeighbor{10.0, 28.0, 3}).r_r,
           0.5 * std::log(10.0 / (1.2 * 28.0)), "r_r(10, 28)");
    expect(merge(8.0, 30.0, {}, {}).r_r, 0.0, "r_r missing rear");
    expect(merge(8.0, 30.0, {}, {}).r_f, 0.0, "r_f missing front");
    expect(merge(8.0, 30.0, {}, {}).r_e, 0.0, "r_e at target");
    expect(merge(8.0, 24.0, {}, {}).r_e, -0.2, "r_e(24)");
    expect(merge(8.0, 20.0, {}, {}).r_e, -1.0 / 3.0, "r_e(20)");
    expect(merge(8.0, 27.0, {}, {}).r_e, -0.1, "r_e(27)");

    // crash payoff and the component sum inside a live episode
    {
        EnvConfig cfg;
        cfg.fixed_intent = IntentCatalog::idle();
        MergeEnv env(cfg);
        env.reset(7);
        MergeEnv::StepResult last;
        while (!env.done()) last = env.step(Action::IDLE);
        expect(last.reward.r_c, -5.0, "r_c on crash");
        expect(last.reward.total,
               last.reward.r_s + last.reward.r_l + last.reward.r_c + last.reward.r_m(),
               "total = r_s + r_l + r_c + r_m");
        ++checked;
        if (env.done_reason() != DoneReason::crashed) ++bad;
    }

    std::ostringstream detail;
    detail << checked << " cases, " << bad << " mismatches";
    c.finish(bad == 0 && checked >= 20, detail.str());
}

// --- criterion 2 -----------------------------------------------------------

void criterion_intent_compliance() {
    Criterion c(2, "sender compliance over 10,000 randomized episodes");
    const int episodes = 10000;
    EnvConfig cfg;
    MergeEnv env(cfg);
    Rng action_rng(2026);

    int compliant = 0, fired_once_ok = 0, non_idle_completed = 0, trigger_ok = 0, checked_triggers = 0;
    int truncated = 0;
    bool all_first_decision = true;

    for (int ep = 0; ep < episodes; ++ep) {
        env.reset(50000 + ep);
        const SenderAssignment assignment = env.assignment();

        // half the episodes ride the ramp straight, half act randomly
        const bool random_av1 = ep % 2 == 1;
        std::vector<double> av2_x_at_decision;
        int fires = 0;
        int first_fire_index = -1;
        while (!env.done()) {
            av2_x_at_decision.push_back(env.world().vehicles[1].x);
            const Action a =
                random_av1 ? action_from_index(static_cast<int>(action_rng.uniform_index(5)))
                           : Action::IDLE;
            const auto sr = env.step(a);
            if (sr.sender_action != Action::IDLE) {
                ++fires;
                if (first_fire_index < 0) first_fire_index = env.steps_taken() - 1;
            }
        }

        if (check_compliance(env.sender_trace(), assignment.intent, env.sender_truncated())
                .compliant)
            ++compliant;
        if (env.sender_truncated()) ++truncated;

        if (const auto committed = assignment.committed_non_idle()) {
            ++checked_triggers;
            const auto& set = cfg.triggers.for_action(*committed);
            if (std::find(set.begin(), set.end(), *assignment.trigger_x) != set.end() &&
                *assignment.trigger_x < cfg.geometry.merge_zone_end())
                ++trigger_ok;
            if (!env.sender_truncated()) {
                ++non_idle_completed;
                if (fires == 1) ++fired_once_ok;
                // the fire happened at the first decision step at-or-past the trigger
                int expected_index = -1;
                for (std::size_t k = 0; k < av2_x_at_decision.size(); ++k)
                    if (av2_x_at_decision[k] >= *assignment.trigger_x) {
                        expected_index = static_cast<int>(k);
                        break;
                    }
                if (expected_index != first_fire_index) all_first_decision = false;
            } else if (fires > 1) {
                all_first_decision = false;
            }
        }
    }

    std::ostringstream detail;
    detail << compliant << "/" << episodes << " compliant, " << fired_once_ok << "/"
           << non_idle_completed << " single-fire, " << trigger_ok << "/" << checked_triggers
           << " triggers in the published sets, " << truncated << " truncated early";
    c.finish(compliant == episodes && fired_once_ok == non_idle_completed &&
                 trigger_ok == checked_triggers && all_first_decision && non_idle_completed > 0,
             detail.str());
}

// --- criterion 3 -----------------------------------------------------------

void criterion_model_oracles() {
    Criterion c(3, "IDM matches an independent oracle; MOBIL safety veto holds");
    Rng rng(31415);
    int idm_bad = 0;
    for (int i = 0; i < 1000; ++i) {
        IdmParams p;
        p.v0 = rng.uniform(15.0, 35.0);
        p.T = rng.uniform(0.8, 2.5);
        p.s0 = rng.uniform(2.0, 12.0);
        p.a = rng.uniform(1.0, 4.0);
        p.b = rng.uniform(2.0, 6.0);
        p.delta = rng.uniform01() < 0.5 ? 4.0 : rng.uniform(2.0, 6.0);
        const double v = rng.uniform(0.0, 35.0);
        const bool has_leader = rng.uniform01() < 0.75;
        const double gap = rng.uniform(0.5, 150.0);
        const std::optional<double> lv =
            has_leader ? std::optional<double>(rng.uniform(0.0, 35.0)) : std::nullopt;

        // independent transcription of the closed form
        double oracle = p.a * (1.0 - std::pow(v / p.v0, p.delta));
        if (lv) {
            const double s_star =
                p.s0 + std::max(0.0, v * p.T + v * (v - *lv) / (2.0 * std::sqrt(p.a * p.b)));
            oracle -= p.a * (s_star / gap) * (s_star / gap);
        }
        oracle = std::clamp(oracle, -2.0 * p.b, 5.0);
        if (!close(idm_acceleration(v, gap, lv, p, 5.0), oracle, 1e-9)) ++idm_bad;
    }

    int mobil_safety_violations = 0, changes = 0;
    const IdmParams idm;
    const MobilParams mobil;
    for (int i = 0; i < 10000; ++i) {
        MobilLane current, candidate;
        auto neighbor = [&]() {
            return MobilNeighbor{rng.uniform(1.0, 90.0), rng.uniform(3.0, 33.0)};
        };
        if (rng.uniform01() < 0.8) current.leader = neighbor();
        if (rng.uniform01() < 0.5) current.follower = neighbor();
        if (rng.uniform01() < 0.7) candidate.leader = neighbor();
        if (rng.uniform01() < 0.7) candidate.follower = neighbor();
        if (current.leader && current.follower)
            current.follower_to_leader_gap = current.leader->gap + current.follower->gap + 5.0;
        if (candidate.leader && candidate.follower)
            candidate.follower_to_leader_gap =
                candidate.leader->gap + candidate.follower->gap + 5.0;
        const double ego_speed = rng.uniform(8.0, 33.0);
        const bool change = mobil_decide(ego_speed, current, candidate, idm, mobil);
        changes += change ? 1 : 0;
        if (change && candidate.follower) {
            const double imposed = idm_acceleration(candidate.follower->speed,
                                                    candidate.follower->gap, ego_speed, idm);
            if (imposed < -mobil.b_safe) ++mobil_safety_violations;
        }
    }

    std::ostringstream detail;
    detail << "idm mismatches " << idm_bad << "/1000, safety violations "
           << mobil_safety_violations << "/10000 (" << changes << " changes)";
    c.finish(idm_bad == 0 && mobil_safety_violations == 0 && changes > 0, detail.str());
}

// --- criterion 4 -----------------------------------------------------------

bool gradient_check() {
    Rng rng(271828);
    const std::vector<std::vector<int>> shapes{{4, 9, 3}, {6, 12, 12, 4}};
    for (const auto& dims : shapes) {
        nn::QNetwork net(dims);
        net.init_he_uniform(rng);
        const int batch = 5;
        std::vector<double> obs(static_cast<std::size_t>(batch) * dims.front());
        for (double& v : obs) v = rng.uniform(-1.0, 1.0);
        std::vector<int> actions(batch);
        for (int b = 0; b < batch; ++b)
            actions[b] = static_cast<int>(rng.uniform_index(static_cast<uint32_t>(dims.back())));
        std::vector<double> targets(batch);
        for (int b = 0; b < batch; ++b) targets[b] = rng.uniform(-0.4, 0.4);

        nn::Gradients grads = nn::Gradients::zeros_like(net);
        nn::dqn_loss_and_grads(net, obs.data(), actions.data(), targets.data(), batch, 1.0, grads);

        const double h = 1e-6;
        for (std::size_t l = 0; l < net.layers().size(); ++l) {
            auto probe = [&](std::vector<double>& params, const std::vector<double>& analytic) {
                const std::size_t stride = std::max<std::size_t>(1, params.size() / 30);
                for (std::size_t i = 0; i < params.size(); i += stride) {
                    const double keep = params[i];
                    nn::Gradients g2 = nn::Gradients::zeros_like(net);
                    params[i] = keep + h;
                    const double up = nn::dqn_loss_and_grads(net, obs.data(), actions.data(),
                                                             targets.data(), batch, 1.0, g2);
                    params[i] = keep - h;
                    const double down = nn::dqn_loss_and_grads(net, obs.data(), actions.data(),
                                                               targets.data(), batch, 1.0, g2);
                    params[i] = keep;
                    const double fd = (up - down) / (2.0 * h);
                    const double denom = std::max({std::abs(fd), std::abs(analytic[i]), 1e-8});
                    if (std::abs(fd - analytic[i]) / denom >= 1e-4) return false;
                }
                return true;
            };
            if (!probe(net.layers()[l].W, grads.W[l])) return false;
            if (!probe(net.layers()[l].b, grads.b[l])) return false;
        }
    }
    return true;
}

// deterministic 2-state / 2-action MDP with an analytically known Q*
struct ToyMdp {
    // transition[s][a] -> next state, reward[s][a]
    int next[2][2] = {{0, 1}, {0, 1}};
    double reward[2][2] = {{0.1, 0.0}, {2.0, 0.3}};
    double gamma = 0.95;

    // value-iteration oracle
    std::array<std::array<double, 2>, 2> q_star() const {
        std::array<std::array<double, 2>, 2> q{};
        for (int it = 0; it < 10000; ++it) {
            std::array<std::array<double, 2>, 2> nq{};
            for (int s = 0; s < 2; ++s)
                for (int a = 0; a < 2; ++a)
                    nq[s][a] = reward[s][a] +
                               gamma * std::max(q[next[s][a]][0], q[next[s][a]][1]);
            q = nq;
        }
        return q;
    }

    static Observation encode(int s) { return s == 0 ? Observation{1.0, 0.0} : Observation{0.0, 1.0}; }
};

bool toy_mdp_convergence(double& out_err, int& out_steps) {
    const ToyMdp mdp;
    const auto q_star = mdp.q_star();

    TrainConfig cfg;
    cfg.hidden = {32, 32};
    cfg.learning_rate = 1e-3;
    cfg.batch_size = 32;
    cfg.gamma = mdp.gamma;
    cfg.buffer_capacity = 5000;
    cfg.learning_starts = 200;
    cfg.target_update_interval = 100;
    cfg.total_steps = 20000;

    nn::QNetwork net(std::vector<int>{2, 32, 32, 2});
    Rng rng(777);
    net.init_he_uniform(rng);
    nn::QNetwork target = net;
    nn::AdamState adam = nn::AdamState::zeros_like(net);
    ReplayBuffer buffer(cfg.buffer_capacity);
    long grad_steps = 0;

    auto max_err = [&]() {
        double err = 0.0;
        for (int s = 0; s < 2; ++s) {
            const auto q = net.forward(ToyMdp::encode(s));
            for (int a = 0; a < 2; ++a) err = std::max(err, std::abs(q[a] - q_star[s][a]));
        }
        return err;
    };

    int state = 0;
    for (int step = 0; step < cfg.total_steps; ++step) {
        // epsilon-greedy over the two toy actions
        int action;
        if (rng.uniform01() < 0.5) {
            action = static_cast<int>(rng.uniform_index(2));
        } else {
            const auto q = net.forward(ToyMdp::encode(state));
            action = q[1] > q[0] ? 1 : 0;
        }
        const int next_state = mdp.next[state][action];
        buffer.push(Transition{ToyMdp::encode(state), action, mdp.reward[state][action],
                               ToyMdp::encode(next_state), false});
        state = next_state;
        train_step(net, target, buffer, cfg, adam, rng, grad_steps);
        if ((step + 1) % 500 == 0 && buffer.size() >= static_cast<std::size_t>(cfg.learning_starts)) {
            if (max_err() < 1e-2) {
                out_err = max_err();
                out_steps = step + 1;
                return true;
            }
        }
    }
    out_err = max_err();
    out_steps = cfg.total_steps;
    return out_err < 1e-2;
}

void criterion_learner_soundness() {
    Criterion c(4, "gradient check and toy-MDP convergence");
    const bool grads_ok = gradient_check();
    double err = 0.0;
    int steps = 0;
    const bool toy_ok = toy_mdp_convergence(err, steps);
    std::ostringstream detail;
    detail << "gradcheck " << (grads_ok ? "ok" : "FAILED") << "; toy MDP max|Q-Q*| = " << err
           << " after " << steps << " steps";
    c.finish(grads_ok && toy_ok, detail.str());
}

// --- criterion 5 -----------------------------------------------------------

void criterion_determinism(const fs::path& out_dir) {
    Criterion c(5, "train -> evaluate is bit-reproducible for a fixed seed");
    EnvConfig env_cfg;
    TrainConfig cfg;
    cfg.hidden = {64, 64};
    cfg.total_steps = 4000;
    cfg.learning_starts = 500;
    cfg.buffer_capacity = 4000;

    const fs::path dir = out_dir / "determinism";
    fs::create_directories(dir);

    std::array<std::string, 2> model_paths, csv_texts;
    for (int run = 0; run < 2; ++run) {
        const TrainResult result = train(env_cfg, cfg, 11);
        model_paths[run] = (dir / ("model_run" + std::to_string(run) + ".bin")).string();
        nn::save_checkpoint(model_paths[run], result.net);
        const auto cells = evaluate({&result.net}, env_cfg, true, 1, 4242);
        csv_texts[run] = results_to_csv(build_results_table(env_cfg.triggers, cells));
    }

    const bool models_equal = slurp(model_paths[0]) == slurp(model_paths[1]);
    const bool csv_equal = csv_texts[0] == csv_texts[1] && !csv_texts[0].empty();
    std::ostringstream detail;
    detail << "checkpoints " << (models_equal ? "identical" : "DIFFER") << ", eval CSV "
           << (csv_equal ? "identical" : "DIFFER");
    c.finish(models_equal && csv_equal, detail.str());
}

// --- criteria 6 and 7 ------------------------------------------------------

struct Grid {
    std::vector<nn::QNetwork> nets_on, nets_off;
};

Grid train_or_load_grid(const ExperimentConfig& cfg, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    struct Job {
        bool sharing;
        std::uint64_t seed;
        std::string path;
    };
    std::vector<Job> jobs;
    for (bool sharing : {true, false})
        for (std::uint64_t seed : cfg.seeds)
            jobs.push_back({sharing, seed, (out_dir / checkpoint_filename(sharing, seed)).string()});

    const int n = static_cast<int>(jobs.size());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        if (fs::exists(jobs[i].path)) continue;
        EnvConfig env_cfg = cfg.env;
        env_cfg.sharing = jobs[i].sharing;
        const TrainResult result = train(env_cfg, cfg.train, jobs[i].seed);
        nn::save_checkpoint(jobs[i].path, result.net);
        write_training_log_csv(
            (out_dir / ("train_" + std::string(jobs[i].sharing ? "on" : "off") + "_" +
                        std::to_string(jobs[i].seed) + ".csv"))
                .string(),
            result.episodes);
#pragma omp critical
        {
            std::printf("    trained sharing=%s seed=%llu\n", jobs[i].sharing ? "on" : "off",
                        static_cast<unsigned long long>(jobs[i].seed));
            std::fflush(stdout);
        }
    }

    Grid grid;
    for (std::uint64_t seed : cfg.seeds) {
        grid.nets_on.push_back(
            nn::load_checkpoint((out_dir / checkpoint_filename(true, seed)).string()));
        grid.nets_off.push_back(
            nn::load_checkpoint((out_dir / checkpoint_filename(false, seed)).string()));
    }
    return grid;
}

void criterion_table_direction(const ExperimentConfig& cfg, const Grid& grid,
                               const fs::path& out_dir) {
    Criterion c(6, "directional result-table reproduction (5 seeds x 2 scenarios)");

    std::vector<const nn::QNetwork*> on, off;
    for (const auto& n : grid.nets_on) on.push_back(&n);
    for (const auto& n : grid.nets_off) off.push_back(&n);

    std::vector<EvalCell> cells = evaluate(on, cfg.env, true, cfg.eval_episodes_per_cell,
                                           cfg.eval_seed);
    const std::vector<EvalCell> cells_off =
        evaluate(off, cfg.env, false, cfg.eval_episodes_per_cell, cfg.eval_seed);
    cells.insert(cells.end(), cells_off.begin(), cells_off.end());
    const ResultsTable table = build_results_table(cfg.env.triggers, cells);
    write_results_csv((out_dir / "results.csv").string(), table);
    std::printf("%s", results_to_csv(table).c_str());

    int sharing_crash_free = 0, mean_better = 0, se_not_worse = 0;
    for (const ResultsRow& row : table.rows) {
        if (row.with_sharing.crash_rate_pct == 0.0) ++sharing_crash_free;
        if (row.with_sharing.mean >= row.without_sharing.mean) ++mean_better;
        if (row.with_sharing.std_error <= row.without_sharing.std_error) ++se_not_worse;
    }
    std::ostringstream detail;
    detail << "sharing crash-free " << sharing_crash_free << "/10 (need 10), mean >= "
           << mean_better << "/10 (need 8), SE <= " << se_not_worse << "/10 (need 7)";
    c.finish(sharing_crash_free == 10 && mean_better >= 8 && se_not_worse >= 7, detail.str());
}

void criterion_figure_checks(const ExperimentConfig& cfg, const Grid& grid,
                             const fs::path& out_dir) {
    Criterion c(7, "merge-position checks: ahead under SLOWER, behind under IDLE");

    int slower_ahead = 0, idle_behind = 0;
    const int n = static_cast<int>(grid.nets_on.size());
    for (int i = 0; i < n; ++i) {
        EnvConfig slower_cfg = cfg.env;
        slower_cfg.sharing = true;
        slower_cfg.fixed_intent = IntentCatalog::slower();
        slower_cfg.fixed_trigger = 190.0;
        const RolloutResult s = greedy_rollout(grid.nets_on[i], slower_cfg, cfg.eval_seed);
        if (s.merge && s.av1_merge_x > s.av2_merge_x) ++slower_ahead;

        EnvConfig idle_cfg = cfg.env;
        idle_cfg.sharing = true;
        idle_cfg.fixed_intent = IntentCatalog::idle();
        const RolloutResult d = greedy_rollout(grid.nets_on[i], idle_cfg, cfg.eval_seed);
        if (d.merge && d.av1_merge_x < d.av2_merge_x) ++idle_behind;

        if (i == 0) { // snapshot artifacts from the first seed
            for (const auto* roll : {&s, &d}) {
                if (roll->log.steps.empty()) continue;
                std::size_t snap = 0;
                while (snap < roll->log.steps.size() && !roll->log.steps[snap].merged_now) ++snap;
                if (snap == roll->log.steps.size()) snap = roll->log.steps.size() - 1;
                const std::string name = roll == &s ? "snapshot_slower_190.svg"
                                                    : "snapshot_idle.svg";
                std::ofstream svg(out_dir / name);
                svg << render_snapshot_svg(cfg.env.geometry, roll->log, snap,
                                           roll == &s ? "intent SLOWER @ 190 m, sharing on"
                                                      : "intent IDLE, sharing on");
            }
        }
    }
    std::ostringstream detail;
    detail << "SLOWER merges ahead " << slower_ahead << "/" << n << " (need 4), IDLE merges behind "
           << idle_behind << "/" << n << " (need 4)";
    c.finish(slower_ahead >= 4 && idle_behind >= 4, detail.str());
}

} // namespace

int main(int argc, char** argv) {
    fs::path out_dir = "acceptance_out";
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--out-dir" && i + 1 < argc) {
            out_dir = argv[++i];
        } else if (arg == "--only" && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            std::string tok;
            while (std::getline(ss, tok, ',')) only.push_back(std::atoi(tok.c_str()));
        } else {
            std::fprintf(stderr, "usage: acceptance [--out-dir DIR] [--only 1,2,...]\n");
            return 1;
        }
    }
    auto wanted = [&](int id) {
        return only.empty() || std::find(only.begin(), only.end(), id) != only.end();
    };
    fs::create_directories(out_dir);

    if (wanted(1)) criterion_reward_fidelity();
    if (wanted(2)) criterion_intent_compliance();
    if (wanted(3)) criterion_model_oracles();
    if (wanted(4)) criterion_learner_soundness();
    if (wanted(5)) criterion_determinism(out_dir);
    if (wanted(6) || wanted(7)) {
        ExperimentConfig cfg; // published defaults: 40k steps, 5 seeds
        cfg.validate();
        const Grid grid = train_or_load_grid(cfg, out_dir);
        if (wanted(6)) criterion_table_direction(cfg, grid, out_dir);
        if (wanted(7)) criterion_figure_checks(cfg, grid, out_dir);
    }

    std::printf("%s\n", g_failures == 0 ? "acceptance: all criteria passed"
                                        : "acceptance: FAILURES present");
    return g_failures == 0 ? 0 : 1;
}
