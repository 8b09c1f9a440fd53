#pragma once
#include <optional>
#include <string>
#include <vector>

#include "mergesim/learn.hpp"

namespace mergesim {

// One row of the result table: an (intent, trigger) pair with the with- and
// without-sharing statistics side by side.
struct ResultsRow {
    std::string intent_name;
    std::optional<double> trigger;

    struct Side {
        bool present = false;
        double mean = 0.0;
        double std_error = 0.0;
        double crash_rate_pct = 0.0;
    };
    Side with_sharing;
    Side without_sharing;
};

struct ResultsTable {
    std::vector<ResultsRow> rows;

    ResultsRow* find(const std::string& intent, const std::optional<double>& trigger);
};

// Builds the full grid (IDLE + 3 intents x 3 triggers) and fills in whatever
// cells are provided.
ResultsTable build_results_table(const TriggerSets& sets, const std::vector<EvalCell>& cells);

// RFC 4180 CSV with the fixed column set; absent cells serialize as "absent".
std::string results_to_csv(const ResultsTable& table);
ResultsTable results_from_csv(const std::string& text);

void write_results_csv(const std::string& path, const ResultsTable& table);
ResultsTable read_results_csv(const std::string& path);

} // namespace mergesim
