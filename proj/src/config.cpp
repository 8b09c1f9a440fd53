#include "mergesim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mergesim {

using nlohmann::json;

std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::sharing_on: return "sharing_on";
        case Scenario::sharing_off: return "sharing_off";
        case Scenario::both: return "both";
    }
    throw std::invalid_argument("scenario_name: bad scenario");
}

Scenario scenario_from_name(const std::string& name) {
    if (name == "sharing_on") return Scenario::sharing_on;
    if (name == "sharing_off") return Scenario::sharing_off;
    if (name == "both") return Scenario::both;
    throw std::invalid_argument("config: unknown scenario '" + name + "'");
}

void ExperimentConfig::validate() const {
    env.validate();
    train.validate();
    if (output_dir.empty()) throw std::invalid_argument("config: output_dir must not be empty");
    if (seeds.empty()) throw std::invalid_argument("config: need at least one seed");
    if (eval_episodes_per_cell <= 0)
        throw std::invalid_argument("config: eval.episodes_per_cell must be >= 1");
}

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
    for (const auto& [key, _] : obj.items())
        if (!known.count(key))
            throw std::invalid_argument("config: unknown key '" + key + "' in " + where);
}

template <typename T>
void get_to(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) obj.at(key).get_to(out);
}

void parse_geometry(const json& j, RoadGeometry& g) {
    reject_unknown(j, {"segment_lengths", "highway_lane_count", "lane_width"}, "env.geometry");
    if (j.contains("segment_lengths")) {
        const auto v = j.at("segment_lengths").get<std::vector<double>>();
        if (v.size() != 4)
            throw std::invalid_argument("config: env.geometry.segment_lengths needs 4 entries");
        std::copy(v.begin(), v.end(), g.segment_lengths.begin());
    }
    get_to(j, "highway_lane_count", g.highway_lane_count);
    get_to(j, "lane_width", g.lane_width);
}

void parse_env(const json& j, EnvConfig& env) {
    reject_unknown(j,
                   {"geometry", "speed_ladder", "gains", "limits", "idm", "mobil", "reward",
                    "triggers", "horizon_steps", "policy_period", "ticks_per_step", "av1",
                    "av2", "humans", "spawn_jitter", "vehicle", "seed"},
                   "env");
    if (j.contains("geometry")) parse_geometry(j.at("geometry"), env.geometry);
    if (j.contains("speed_ladder")) j.at("speed_ladder").get_to(env.ladder.speeds);
    if (j.contains("gains")) {
        const json& g = j.at("gains");
        reject_unknown(g, {"kp_speed", "kp_lat", "kp_head"}, "env.gains");
        get_to(g, "kp_speed", env.gains.kp_speed);
        get_to(g, "kp_lat", env.gains.kp_lat);
        get_to(g, "kp_head", env.gains.kp_head);
    }
    if (j.contains("limits")) {
        const json& g = j.at("limits");
        reject_unknown(g, {"a_max", "steer_max"}, "env.limits");
        get_to(g, "a_max", env.limits.a_max);
        get_to(g, "steer_max", env.limits.steer_max);
    }
    if (j.contains("idm")) {
        const json& g = j.at("idm");
        reject_unknown(g, {"v0", "T", "s0", "a", "b", "delta"}, "env.idm");
        get_to(g, "v0", env.idm.v0);
        get_to(g, "T", env.idm.T);
        get_to(g, "s0", env.idm.s0);
        get_to(g, "a", env.idm.a);
        get_to(g, "b", env.idm.b);
        get_to(g, "delta", env.idm.delta);
    }
    if (j.contains("mobil")) {
        const json& g = j.at("mobil");
        reject_unknown(g, {"politeness", "a_threshold", "b_safe"}, "env.mobil");
        get_to(g, "politeness", env.mobil.politeness);
        get_to(g, "a_threshold", env.mobil.a_threshold);
        get_to(g, "b_safe", env.mobil.b_safe);
    }
    if (j.contains("reward")) {
        const json& g = j.at("reward");
        reject_unknown(g,
                       {"beta_s", "beta_l", "beta_c", "beta_q", "beta_f", "beta_r", "beta_e",
                        "v_min", "v_max", "v_star", "t_headway"},
                       "env.reward");
        get_to(g, "beta_s", env.reward.beta_s);
        get_to(g, "beta_l", env.reward.beta_l);
        get_to(g, "beta_c", env.reward.beta_c);
        get_to(g, "beta_q", env.reward.beta_q);
        get_to(g, "beta_f", env.reward.beta_f);
        get_to(g, "beta_r", env.reward.beta_r);
        get_to(g, "beta_e", env.reward.beta_e);
        get_to(g, "v_min", env.reward.v_min);
        get_to(g, "v_max", env.reward.v_max);
        get_to(g, "v_star", env.reward.v_star);
        get_to(g, "t_headway", env.reward.t_headway);
    }
    if (j.contains("triggers")) {
        const json& g = j.at("triggers");
        reject_unknown(g, {"LANE_LEFT", "FASTER", "SLOWER"}, "env.triggers");
        get_to(g, "LANE_LEFT", env.triggers.lane_left);
        get_to(g, "FASTER", env.triggers.faster);
        get_to(g, "SLOWER", env.triggers.slower);
    }
    get_to(j, "horizon_steps", env.horizon_steps);
    get_to(j, "policy_period", env.policy_period);
    get_to(j, "ticks_per_step", env.ticks_per_step);
    if (j.contains("av1")) {
        const json& g = j.at("av1");
        reject_unknown(g, {"x", "speed"}, "env.av1");
        get_to(g, "x", env.av1_x);
        get_to(g, "speed", env.av1_speed);
    }
    if (j.contains("av2")) {
        const json& g = j.at("av2");
        reject_unknown(g, {"x", "speed"}, "env.av2");
        get_to(g, "x", env.av2_x);
        get_to(g, "speed", env.av2_speed);
    }
    if (j.contains("humans")) {
        env.humans.clear();
        for (const json& h : j.at("humans")) {
            reject_unknown(h, {"lane", "x", "speed"}, "env.humans[]");
            HumanSpawn spawn;
            h.at("lane").get_to(spawn.lane);
            h.at("x").get_to(spawn.x);
            h.at("speed").get_to(spawn.speed);
            env.humans.push_back(spawn);
        }
    }
    if (j.contains("spawn_jitter")) {
        const json& g = j.at("spawn_jitter");
        reject_unknown(g, {"x", "speed"}, "env.spawn_jitter");
        get_to(g, "x", env.spawn_jitter_x);
        get_to(g, "speed", env.spawn_jitter_speed);
    }
    if (j.contains("vehicle")) {
        const json& g = j.at("vehicle");
        reject_unknown(g, {"length", "width"}, "env.vehicle");
        get_to(g, "length", env.vehicle_length);
        get_to(g, "width", env.vehicle_width);
    }
    get_to(j, "seed", env.seed);
}

void parse_train(const json& j, TrainConfig& train) {
    reject_unknown(j,
                   {"learning_rate", "buffer_size", "learning_starts", "batch_size", "gamma",
                    "train_freq", "gradient_steps", "target_update_interval", "total_steps",
                    "epsilon_start", "epsilon_end", "epsilon_fraction", "hidden", "huber_delta"},
                   "train");
    get_to(j, "learning_rate", train.learning_rate);
    get_to(j, "buffer_size", train.buffer_capacity);
    get_to(j, "learning_starts", train.learning_starts);
    get_to(j, "batch_size", train.batch_size);
    get_to(j, "gamma", train.gamma);
    get_to(j, "train_freq", train.train_freq);
    get_to(j, "gradient_steps", train.gradient_steps);
    get_to(j, "target_update_interval", train.target_update_interval);
    get_to(j, "total_steps", train.total_steps);
    get_to(j, "epsilon_start", train.epsilon_start);
    get_to(j, "epsilon_end", train.epsilon_end);
    get_to(j, "epsilon_fraction", train.epsilon_fraction);
    get_to(j, "hidden", train.hidden);
    get_to(j, "huber_delta", train.huber_delta);
}

} // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
    }
    reject_unknown(j, {"version", "env", "train", "scenario", "output_dir", "seeds", "eval"},
                   "the top level");
    if (!j.contains("version") || !j.at("version").is_number_integer() ||
        j.at("version").get<int>() != 1)
        throw std::invalid_argument("config: requires \"version\": 1");

    ExperimentConfig cfg;
    if (j.contains("env")) parse_env(j.at("env"), cfg.env);
    if (j.contains("train")) parse_train(j.at("train"), cfg.train);
    if (j.contains("scenario")) cfg.scenario = scenario_from_name(j.at("scenario").get<std::string>());
    get_to(j, "output_dir", cfg.output_dir);
    get_to(j, "seeds", cfg.seeds);
    if (j.contains("eval")) {
        const json& g = j.at("eval");
        reject_unknown(g, {"episodes_per_cell", "seed"}, "eval");
        get_to(g, "episodes_per_cell", cfg.eval_episodes_per_cell);
        get_to(g, "seed", cfg.eval_seed);
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_experiment_config(ss.str());
}

} // namespace mergesim
