#include <iostream>

#include "CLI11.hpp"
#include "mergesim/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"mergesim - highway-merge simulator with intent sharing and DQN training"};
    app.require_subcommand(1);

    mergesim::TrainArgs train_args;
    std::string train_sharing, train_out;
    std::uint64_t train_seed = 0;
    auto* train = app.add_subcommand("train", "train merging policies and write checkpoints");
    train->add_option("--config", train_args.config_path, "experiment config JSON")->required();
    auto* ts = train->add_option("--sharing", train_sharing, "on|off (default: config scenario)");
    auto* tseed = train->add_option("--seed", train_seed, "single seed (default: config seeds)");
    auto* tout = train->add_option("--out", train_out, "output directory override");
    train->add_flag("--force", train_args.force, "overwrite existing outputs");

    mergesim::EvalArgs eval_args;
    std::string eval_out;
    auto* eval = app.add_subcommand("eval", "evaluate checkpoints over the result grid");
    eval->add_option("--config", eval_args.config_path, "experiment config JSON")->required();
    eval->add_option("checkpoints", eval_args.checkpoints, "model_<on|off>_<seed>.bin files")
        ->required();
    auto* eout = eval->add_option("--out", eval_out, "results CSV path");

    mergesim::RenderArgs render_args;
    std::string render_config;
    double render_trigger = 0.0;
    std::uint64_t render_seed = 0;
    auto* render = app.add_subcommand("render", "render a merge snapshot SVG from a rollout");
    render->add_option("--checkpoint", render_args.checkpoint, "trained model")->required();
    auto* rcfg = render->add_option("--config", render_config, "experiment config JSON");
    render->add_option("--intent", render_args.intent, "IDLE|LANE_LEFT|FASTER|SLOWER")->required();
    auto* rtrig = render->add_option("--trigger", render_trigger, "action-trigger position (m)");
    render->add_option("--sharing", render_args.sharing, "on|off")->required();
    render->add_option("--out", render_args.out_svg, "output SVG path")->required();
    std::string render_log;
    auto* rlog = render->add_option("--log", render_log, "also write the episode log");
    auto* rseed = render->add_option("--seed", render_seed, "rollout seed");

    mergesim::ReplayVerifyArgs verify_args;
    auto* verify = app.add_subcommand("replay-verify",
                                      "re-check compliance and rewards of an episode log");
    verify->add_option("log", verify_args.log_path, "episode log file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            if (*ts) train_args.sharing = train_sharing;
            if (*tseed) train_args.seed = train_seed;
            if (*tout) train_args.out_dir = train_out;
            return mergesim::cmd_train(train_args, std::cout, std::cerr);
        }
        if (eval->parsed()) {
            if (*eout) eval_args.out_path = eval_out;
            return mergesim::cmd_eval(eval_args, std::cout, std::cerr);
        }
        if (render->parsed()) {
            if (*rcfg) render_args.config_path = render_config;
            if (*rtrig) render_args.trigger = render_trigger;
            if (*rlog) render_args.log_path = render_log;
            if (*rseed) render_args.seed = render_seed;
            return mergesim::cmd_render(render_args, std::cout, std::cerr);
        }
        if (verify->parsed()) return mergesim::cmd_replay_verify(verify_args, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
