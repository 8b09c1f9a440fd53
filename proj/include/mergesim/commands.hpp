#pragma once
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mergesim {

// Subcommand implementations, separated from the CLI parser so they can be
// driven from tests. All return a process exit code: 0 success, 1 usage or
// validation failure, 2 a reported runtime condition (verification mismatch,
// missing cells, no merge in a rendered rollout).

struct TrainArgs {
    std::string config_path;
    std::optional<std::string> sharing; // "on" / "off"; default from the config scenario
    std::optional<std::uint64_t> seed;  // default: every seed in the config
    std::optional<std::string> out_dir; // default: config output_dir
    bool force = false;
};
int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err);

struct EvalArgs {
    std::string config_path;
    std::vector<std::string> checkpoints; // model_<on|off>_<seed>.bin files
    std::optional<std::string> out_path;  // default: <output_dir>/results.csv
};
int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err);

struct RenderArgs {
    std::optional<std::string> config_path; // defaults apply when omitted
    std::string checkpoint;
    std::string intent = "IDLE";
    std::optional<double> trigger;
    std::string sharing = "on";
    std::string out_svg;
    std::optional<std::string> log_path; // optional episode-log dump
    std::optional<std::uint64_t> seed;   // default: the config's eval seed
};
int cmd_render(const RenderArgs& args, std::ostream& out, std::ostream& err);

struct ReplayVerifyArgs {
    std::string log_path;
};
int cmd_replay_verify(const ReplayVerifyArgs& args, std::ostream& out, std::ostream& err);

// model_<on|off>_<seed>.bin
std::string checkpoint_filename(bool sharing, std::uint64_t seed);
std::optional<std::pair<bool, std::uint64_t>> parse_checkpoint_filename(const std::string& path);

} // namespace mergesim
