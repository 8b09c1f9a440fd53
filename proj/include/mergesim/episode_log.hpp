#pragma once
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mergesim/env.hpp"

namespace mergesim {

// Newline-delimited text log of one episode: header, per-step vehicle states,
// actions, and the reward breakdown. Self-contained — carries the reward and
// geometry constants needed to re-verify it offline. Doubles are printed
// round-trip exact.
struct EpisodeLogStep {
    int step = 0; // 1-based policy step
    Action av1_action = Action::IDLE;
    Action sender_action = Action::IDLE;
    std::vector<VehicleState> vehicles; // post-step states, fixed order
    RewardBreakdown reward;
    bool done = false;
    DoneReason reason = DoneReason::none;
    bool merged_now = false;
};

struct EpisodeLog {
    bool sharing = true;
    std::string intent_name = "IDLE";
    std::optional<double> trigger_x;
    std::uint64_t seed = 0;
    bool sender_truncated = false;
    RewardConfig reward;
    double lane_width = 4.0;
    int highway_lane_count = 2;
    double merge_zone_end = 310.0;
    double policy_period = 1.0;
    std::vector<EpisodeLogStep> steps;
};

// Captures a finished (or in-progress) episode from the environment's traces.
EpisodeLog capture_episode_log(const MergeEnv& env, const std::vector<EpisodeLogStep>& steps);

void write_episode_log(std::ostream& out, const EpisodeLog& log);
void write_episode_log_file(const std::string& path, const EpisodeLog& log);

// Throws std::runtime_error with a line number on malformed input.
EpisodeLog read_episode_log(std::istream& in);
EpisodeLog read_episode_log_file(const std::string& path);

// Recomputes every reward component from the logged states and compares with
// the logged values. Returns one message per mismatch beyond the tolerance.
std::vector<std::string> verify_episode_rewards(const EpisodeLog& log, double tolerance = 1e-9);

// Compliance of the logged sender trace against the logged intent.
ComplianceReport verify_episode_compliance(const EpisodeLog& log);

} // namespace mergesim
