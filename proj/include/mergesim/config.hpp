#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "mergesim/env.hpp"
#include "mergesim/learn.hpp"

namespace mergesim {

enum class Scenario { sharing_on, sharing_off, both };
std::string scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

// One experiment = one JSON document. Versioned schema; unknown keys are
// rejected so typos fail loudly. Every field has a default, so {"version": 1}
// is a valid config.
struct ExperimentConfig {
    EnvConfig env;
    TrainConfig train;
    Scenario scenario = Scenario::both;
    std::string output_dir = "runs";
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
    int eval_episodes_per_cell = 1;
    std::uint64_t eval_seed = 9000;

    void validate() const;
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

} // namespace mergesim
