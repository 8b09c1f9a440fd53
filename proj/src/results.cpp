#include "mergesim/results.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mergesim {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool trigger_eq(const std::optional<double>& a, const std::optional<double>& b) {
    if (a.has_value() != b.has_value()) return false;
    return !a || *a == *b;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    out.push_back(field);
    return out;
}

void side_to_fields(const ResultsRow::Side& s, std::ostringstream& os) {
    if (!s.present) {
        os << ",absent,absent,absent";
        return;
    }
    os << ',' << fmt(s.mean) << ',' << fmt(s.std_error) << ',' << fmt(s.crash_rate_pct);
}

ResultsRow::Side side_from_fields(const std::vector<std::string>& f, std::size_t base, int line_no) {
    ResultsRow::Side s;
    if (f[base] == "absent") {
        if (f[base + 1] != "absent" || f[base + 2] != "absent")
            throw std::runtime_error("results csv: partial absent marker at line " +
                                     std::to_string(line_no));
        return s;
    }
    s.present = true;
    s.mean = std::strtod(f[base].c_str(), nullptr);
    s.std_error = std::strtod(f[base + 1].c_str(), nullptr);
    s.crash_rate_pct = std::strtod(f[base + 2].c_str(), nullptr);
    return s;
}

constexpr const char* kHeader =
    "Intent,Trigger,WithSharingMean,WithSharingSE,WithSharingCrashPct,"
    "WithoutSharingMean,WithoutSharingSE,WithoutSharingCrashPct";

} // namespace

ResultsRow* ResultsTable::find(const std::string& intent, const std::optional<double>& trigger) {
    for (ResultsRow& row : rows)
        if (row.intent_name == intent && trigger_eq(row.trigger, trigger)) return &row;
    return nullptr;
}

ResultsTable build_results_table(const TriggerSets& sets, const std::vector<EvalCell>& cells) {
    ResultsTable table;
    for (const auto& [intent, trigger] : table_grid_rows(sets)) {
        ResultsRow row;
        row.intent_name = intent;
        row.trigger = trigger;
        table.rows.push_back(row);
    }
    for (const EvalCell& cell : cells) {
        ResultsRow* row = table.find(cell.intent_name, cell.trigger);
        if (!row)
            throw std::invalid_argument("results: cell (" + cell.intent_name +
                                        ") does not match the grid");
        ResultsRow::Side& side = cell.sharing ? row->with_sharing : row->without_sharing;
        side.present = true;
        side.mean = cell.mean;
        side.std_error = cell.std_error;
        side.crash_rate_pct = cell.crash_rate_pct;
    }
    return table;
}

std::string results_to_csv(const ResultsTable& table) {
    std::ostringstream os;
    os << kHeader << "\r\n";
    for (const ResultsRow& row : table.rows) {
        os << row.intent_name << ',' << (row.trigger ? fmt(*row.trigger) : std::string("N/A"));
        side_to_fields(row.with_sharing, os);
        side_to_fields(row.without_sharing, os);
        os << "\r\n";
    }
    return os.str();
}

ResultsTable results_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line))
        throw std::runtime_error("results csv: empty input");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader) throw std::runtime_error("results csv: unexpected header");

    ResultsTable table;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 8)
            throw std::runtime_error("results csv: expected 8 fields at line " +
                                     std::to_string(line_no));
        ResultsRow row;
        row.intent_name = f[0];
        if (f[1] != "N/A") row.trigger = std::strtod(f[1].c_str(), nullptr);
        row.with_sharing = side_from_fields(f, 2, line_no);
        row.without_sharing = side_from_fields(f, 5, line_no);
        table.rows.push_back(row);
    }
    if (table.rows.empty()) throw std::runtime_error("results csv: no data rows");
    return table;
}

void write_results_csv(const std::string& path, const ResultsTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << results_to_csv(table);
}

ResultsTable read_results_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return results_from_csv(ss.str());
}

} // namespace mergesim
