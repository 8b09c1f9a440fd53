#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mergesim/env.hpp"
#include "mergesim/episode_log.hpp"
#include "mergesim/nn/network.hpp"

namespace mergesim {

struct Transition {
    Observation obs;
    int action = 0;
    double reward = 0.0;
    Observation next_obs;
    bool terminal = false;
};

// Fixed-capacity ring buffer with FIFO eviction and uniform with-replacement
// batch sampling.
class ReplayBuffer {
  public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(Transition t);
    std::size_t size() const { return data_.size(); }
    std::size_t capacity() const { return capacity_; }
    const Transition& at(std::size_t i) const; // 0 = oldest
    const Transition& sample(Rng& rng) const;

  private:
    std::size_t capacity_;
    std::size_t head_ = 0; // slot holding the oldest element once full
    std::vector<Transition> data_;
};

struct TrainConfig {
    double learning_rate = 5e-4;
    int buffer_capacity = 15000;
    int learning_starts = 1000;
    int batch_size = 32;
    double gamma = 0.95;
    int train_freq = 1;
    int gradient_steps = 1;
    int target_update_interval = 50; // gradient steps between target syncs
    int total_steps = 40000;
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    double epsilon_fraction = 0.1; // fraction of total_steps for the linear decay
    std::vector<int> hidden{512, 512};
    double huber_delta = 1.0;
    nn::AdamParams adam;

    void validate() const;
    double epsilon_at(int step) const;
};

// y = r + gamma * max_a Q_target(s', a) for non-terminal transitions, y = r
// for terminal ones.
std::vector<double> td_targets(const std::vector<const Transition*>& batch,
                               const nn::QNetwork& target_net, double gamma);

// One uniform batch, one Huber-loss Adam step; syncs the target network every
// target_update_interval gradient steps. No-op (nullopt) until the buffer
// holds learning_starts transitions.
std::optional<double> train_step(nn::QNetwork& net, nn::QNetwork& target_net, ReplayBuffer& buffer,
                                 const TrainConfig& cfg, nn::AdamState& adam, Rng& rng,
                                 long& gradient_steps_done);

// Epsilon-greedy; greedy ties resolve to the lowest action index.
Action select_action(const std::vector<double>& q_values, double epsilon, Rng& rng);

struct EpisodeStat {
    int step_end = 0; // global env step count when the episode finished
    int episode = 0;
    double cumulative_reward = 0.0;
    double loss = 0.0; // most recent training loss at episode end
    double epsilon = 0.0;
};

struct TrainResult {
    nn::QNetwork net;
    std::vector<EpisodeStat> episodes;
};

// Full training run: total_steps environment policy steps on MergeEnv with a
// freshly sampled sender assignment per episode. Bit-reproducible per seed.
TrainResult train(const EnvConfig& env_cfg, const TrainConfig& cfg, std::uint64_t seed);

// CSV columns: step,episode,return,loss,epsilon.
void write_training_log_csv(const std::string& path, const std::vector<EpisodeStat>& episodes);

struct RolloutResult {
    double cumulative_reward = 0.0;
    bool crashed = false;
    std::optional<MergeEvent> merge;
    double av1_merge_x = 0.0; // AV1/AV2 positions at the merge step
    double av2_merge_x = 0.0;
    EpisodeLog log; // full trace, for logs and rendering
};

// Greedy (epsilon = 0) rollout of a frozen network.
RolloutResult greedy_rollout(const nn::QNetwork& net, const EnvConfig& cfg, std::uint64_t seed);

// The result-table grid: IDLE with no trigger, then each non-IDLE intent
// crossed with its trigger candidates.
std::vector<std::pair<std::string, std::optional<double>>> table_grid_rows(const TriggerSets& sets);

struct EvalCell {
    std::string intent_name;
    std::optional<double> trigger;
    bool sharing = true;
    double mean = 0.0;
    double std_error = 0.0;
    double crash_rate_pct = 0.0; // share of seeds with any crash, in percent
    std::vector<double> per_seed_return;
    std::vector<bool> per_seed_crash;
};

// Greedy evaluation of one network per seed over every grid cell. Cells roll
// out episodes_per_cell episodes seeded from eval_seed; deterministic, and
// cells may be evaluated concurrently.
std::vector<EvalCell> evaluate(const std::vector<const nn::QNetwork*>& nets_per_seed,
                               const EnvConfig& base_cfg, bool sharing, int episodes_per_cell,
                               std::uint64_t eval_seed);

} // namespace mergesim
