#include "mergesim/learn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mergesim {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be > 0");
    data_.reserve(capacity);
}

void ReplayBuffer::push(Transition t) {
    if (data_.size() < capacity_) {
        data_.push_back(std::move(t));
        return;
    }
    data_[head_] = std::move(t); // overwrite the oldest
    head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
    if (i >= data_.size()) throw std::out_of_range("ReplayBuffer::at");
    return data_[(head_ + i) % data_.size()];
}

const Transition& ReplayBuffer::sample(Rng& rng) const {
    if (data_.empty()) throw std::logic_error("ReplayBuffer::sample on empty buffer");
    return data_[rng.uniform_index(static_cast<std::uint32_t>(data_.size()))];
}

void TrainConfig::validate() const {
    if (learning_rate <= 0.0) throw std::invalid_argument("TrainConfig: learning_rate must be > 0");
    if (buffer_capacity <= 0 || batch_size <= 0 || total_steps <= 0)
        throw std::invalid_argument("TrainConfig: sizes must be positive");
    if (learning_starts < batch_size)
        throw std::invalid_argument("TrainConfig: learning_starts must cover a batch");
    if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("TrainConfig: gamma in [0, 1]");
    if (train_freq <= 0 || gradient_steps <= 0 || target_update_interval <= 0)
        throw std::invalid_argument("TrainConfig: frequencies must be positive");
    if (epsilon_fraction <= 0.0 || epsilon_fraction > 1.0)
        throw std::invalid_argument("TrainConfig: epsilon_fraction in (0, 1]");
    if (hidden.empty()) throw std::invalid_argument("TrainConfig: need at least one hidden layer");
}

double TrainConfig::epsilon_at(int step) const {
    const double span = epsilon_fraction * total_steps;
    if (step >= span) return epsilon_end;
    return epsilon_start + (epsilon_end - epsilon_start) * (step / span);
}

std::vector<double> td_targets(const std::vector<const Transition*>& batch,
                               const nn::QNetwork& target_net, double gamma) {
    if (batch.empty()) throw std::invalid_argument("td_targets: empty batch");
    const int n = static_cast<int>(batch.size());
    const int in = target_net.input_size();
    const int out = target_net.output_size();
    std::vector<double> next_obs(static_cast<std::size_t>(n) * in);
    for (int b = 0; b < n; ++b) {
        if (static_cast<int>(batch[b]->next_obs.size()) != in)
            throw std::invalid_argument("td_targets: observation length mismatch");
        std::copy(batch[b]->next_obs.begin(), batch[b]->next_obs.end(),
                  next_obs.begin() + static_cast<long>(b) * in);
    }
    const std::vector<double> q_next = target_net.forward_batch(next_obs.data(), n);
    std::vector<double> targets(n);
    for (int b = 0; b < n; ++b) {
        if (batch[b]->terminal) {
            targets[b] = batch[b]->reward;
            continue;
        }
        double best = q_next[static_cast<long>(b) * out];
        for (int a = 1; a < out; ++a)
            best = std::max(best, q_next[static_cast<long>(b) * out + a]);
        targets[b] = batch[b]->reward + gamma * best;
    }
    return targets;
}

std::optional<double> train_step(nn::QNetwork& net, nn::QNetwork& target_net, ReplayBuffer& buffer,
                                 const TrainConfig& cfg, nn::AdamState& adam, Rng& rng,
                                 long& gradient_steps_done) {
    if (buffer.size() < static_cast<std::size_t>(cfg.learning_starts)) return std::nullopt;

    std::vector<const Transition*> batch(cfg.batch_size);
    for (int b = 0; b < cfg.batch_size; ++b) batch[b] = &buffer.sample(rng);

    const std::vector<double> targets = td_targets(batch, target_net, cfg.gamma);

    const int in = net.input_size();
    std::vector<double> obs(static_cast<std::size_t>(cfg.batch_size) * in);
    std::vector<int> actions(cfg.batch_size);
    for (int b = 0; b < cfg.batch_size; ++b) {
        std::copy(batch[b]->obs.begin(), batch[b]->obs.end(), obs.begin() + static_cast<long>(b) * in);
        actions[b] = batch[b]->action;
    }

    nn::Gradients grads = nn::Gradients::zeros_like(net);
    const double loss = nn::dqn_loss_and_grads(net, obs.data(), actions.data(), targets.data(),
                                               cfg.batch_size, cfg.huber_delta, grads);
    nn::AdamParams adam_params = cfg.adam;
    adam_params.lr = cfg.learning_rate;
    nn::adam_update(net, grads, adam, adam_params);

    ++gradient_steps_done;
    if (gradient_steps_done % cfg.target_update_interval == 0) target_net = net;
    return loss;
}

Action select_action(const std::vector<double>& q_values, double epsilon, Rng& rng) {
    if (q_values.size() != static_cast<std::size_t>(kNumActions))
        throw std::invalid_argument("select_action: expected one value per action");
    if (epsilon < 0.0 || epsilon > 1.0)
        throw std::invalid_argument("select_action: epsilon in [0, 1]");
    if (epsilon > 0.0 && rng.uniform01() < epsilon)
        return action_from_index(static_cast<int>(rng.uniform_index(kNumActions)));
    int best = 0;
    for (int a = 1; a < kNumActions; ++a)
        if (q_values[a] > q_values[best]) best = a; // lowest index wins ties
    return action_from_index(best);
}

TrainResult train(const EnvConfig& env_cfg, const TrainConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    MergeEnv env(env_cfg);

    Rng rng(seed);
    std::vector<int> dims;
    dims.push_back(env_cfg.observation_size());
    dims.insert(dims.end(), cfg.hidden.begin(), cfg.hidden.end());
    dims.push_back(kNumActions);
    nn::QNetwork net(dims);
    net.init_he_uniform(rng);
    nn::QNetwork target_net = net;
    nn::AdamState adam = nn::AdamState::zeros_like(net);
    ReplayBuffer buffer(static_cast<std::size_t>(cfg.buffer_capacity));

    TrainResult result;
    long gradient_steps_done = 0;
    int episode = 0;
    double episode_return = 0.0;
    double last_loss = 0.0;
    Observation obs = env.reset(rng.next_u64());

    for (int step = 0; step < cfg.total_steps; ++step) {
        const double eps = cfg.epsilon_at(step);
        const std::vector<double> q = net.forward(obs);
        const Action a = select_action(q, eps, rng);
        const MergeEnv::StepResult sr = env.step(a);

        buffer.push(Transition{std::move(obs), static_cast<int>(a), sr.reward.total, sr.obs,
                               sr.done});
        obs = sr.obs;
        episode_return += sr.reward.total;

        if (step % cfg.train_freq == 0) {
            for (int g = 0; g < cfg.gradient_steps; ++g) {
                if (const auto loss =
                        train_step(net, target_net, buffer, cfg, adam, rng, gradient_steps_done))
                    last_loss = *loss;
            }
        }

        if (sr.done) {
            result.episodes.push_back({step + 1, episode, episode_return, last_loss, eps});
            ++episode;
            episode_return = 0.0;
            obs = env.reset(rng.next_u64());
        }
    }

    result.net = std::move(net);
    return result;
}

void write_training_log_csv(const std::string& path, const std::vector<EpisodeStat>& episodes) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "step,episode,return,loss,epsilon\n";
    char buf[128];
    for (const EpisodeStat& e : episodes) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%.17g\n", e.step_end, e.episode,
                      e.cumulative_reward, e.loss, e.epsilon);
        out << buf;
    }
}

RolloutResult greedy_rollout(const nn::QNetwork& net, const EnvConfig& cfg, std::uint64_t seed) {
    MergeEnv env(cfg);
    Rng rng(0); // select_action with epsilon 0 never draws from it
    RolloutResult result;
    std::vector<EpisodeLogStep> steps;
    Observation obs = env.reset(seed);
    while (!env.done()) {
        const Action a = select_action(net.forward(obs), 0.0, rng);
        const MergeEnv::StepResult sr = env.step(a);
        result.cumulative_reward += sr.reward.total;
        if (sr.merge) {
            result.merge = sr.merge;
            result.av1_merge_x = env.world().vehicles[0].x;
            result.av2_merge_x = env.world().vehicles[1].x;
        }
        EpisodeLogStep log_step;
        log_step.step = env.steps_taken();
        log_step.av1_action = a;
        log_step.sender_action = sr.sender_action;
        log_step.vehicles = env.world().vehicles;
        log_step.reward = sr.reward;
        log_step.done = sr.done;
        log_step.reason = sr.reason;
        log_step.merged_now = sr.merge.has_value();
        steps.push_back(std::move(log_step));
        obs = sr.obs;
    }
    result.crashed = env.done_reason() == DoneReason::crashed;
    result.log = capture_episode_log(env, steps);
    return result;
}

std::vector<std::pair<std::string, std::optional<double>>> table_grid_rows(const TriggerSets& sets) {
    std::vector<std::pair<std::string, std::optional<double>>> rows;
    rows.emplace_back("IDLE", std::nullopt);
    for (double t : sets.lane_left) rows.emplace_back("LANE_LEFT", t);
    for (double t : sets.faster) rows.emplace_back("FASTER", t);
    for (double t : sets.slower) rows.emplace_back("SLOWER", t);
    return rows;
}

std::vector<EvalCell> evaluate(const std::vector<const nn::QNetwork*>& nets_per_seed,
                               const EnvConfig& base_cfg, bool sharing, int episodes_per_cell,
                               std::uint64_t eval_seed) {
    if (nets_per_seed.empty()) throw std::invalid_argument("evaluate: no networks");
    if (episodes_per_cell <= 0) throw std::invalid_argument("evaluate: episodes_per_cell >= 1");

    const auto rows = table_grid_rows(base_cfg.triggers);
    std::vector<EvalCell> cells(rows.size());

    const int n_rows = static_cast<int>(rows.size());
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < n_rows; ++r) {
        EvalCell cell;
        cell.intent_name = rows[r].first;
        cell.trigger = rows[r].second;
        cell.sharing = sharing;

        EnvConfig cfg = base_cfg;
        cfg.sharing = sharing;
        cfg.fixed_intent = IntentCatalog::by_name(cell.intent_name);
        cfg.fixed_trigger = cell.trigger;

        for (const nn::QNetwork* net : nets_per_seed) {
            double total = 0.0;
            bool crashed = false;
            for (int e = 0; e < episodes_per_cell; ++e) {
                const RolloutResult roll =
                    greedy_rollout(*net, cfg, eval_seed + static_cast<std::uint64_t>(e));
                total += roll.cumulative_reward;
                crashed = crashed || roll.crashed;
            }
            cell.per_seed_return.push_back(total / episodes_per_cell);
            cell.per_seed_crash.push_back(crashed);
        }

        const int n = static_cast<int>(cell.per_seed_return.size());
        double mean = 0.0;
        for (double v : cell.per_seed_return) mean += v;
        mean /= n;
        double var = 0.0;
        for (double v : cell.per_seed_return) var += (v - mean) * (v - mean);
        cell.mean = mean;
        cell.std_error = n > 1 ? std::sqrt(var / (n - 1)) / std::sqrt(static_cast<double>(n)) : 0.0;
        int crashes = 0;
        for (bool c : cell.per_seed_crash) crashes += c ? 1 : 0;
        cell.crash_rate_pct = 100.0 * crashes / n;
        cells[r] = std::move(cell);
    }
    return cells;
}

} // namespace mergesim
