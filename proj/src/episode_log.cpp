#include "mergesim/episode_log.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mergesim {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Line {
    std::string tag;
    std::map<std::string, std::string> kv;
};

Line parse_line(const std::string& raw, int line_no) {
    Line out;
    std::istringstream ss(raw);
    if (!(ss >> out.tag))
        throw std::runtime_error("episode log: empty record at line " + std::to_string(line_no));
    std::string token;
    while (ss >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("episode log: bad token '" + token + "' at line " +
                                     std::to_string(line_no));
        out.kv[token.substr(0, eq)] = token.substr(eq + 1);
    }
    return out;
}

const std::string& want(const Line& line, const std::string& key, int line_no) {
    const auto it = line.kv.find(key);
    if (it == line.kv.end())
        throw std::runtime_error("episode log: missing key '" + key + "' at line " +
                                 std::to_string(line_no));
    return it->second;
}

double want_d(const Line& line, const std::string& key, int line_no) {
    return std::strtod(want(line, key, line_no).c_str(), nullptr);
}

int want_i(const Line& line, const std::string& key, int line_no) {
    return std::atoi(want(line, key, line_no).c_str());
}

LaneRef lane_from_name(const std::string& name, int line_no) {
    if (name == "ramp") return LaneRef::ramp();
    if (name.rfind("highway", 0) == 0) return LaneRef::highway(std::atoi(name.c_str() + 7));
    throw std::runtime_error("episode log: bad lane '" + name + "' at line " +
                             std::to_string(line_no));
}

double lane_center_of(const EpisodeLog& log, const LaneRef& lane) {
    if (lane.is_ramp()) return log.lane_width * log.highway_lane_count;
    return log.lane_width * lane.index;
}

} // namespace

EpisodeLog capture_episode_log(const MergeEnv& env, const std::vector<EpisodeLogStep>& steps) {
    EpisodeLog log;
    log.sharing = env.config().sharing;
    log.intent_name = env.assignment().intent.name();
    log.trigger_x = env.assignment().trigger_x;
    log.seed = env.episode_seed();
    log.sender_truncated = env.sender_truncated();
    log.reward = env.config().reward;
    log.lane_width = env.config().geometry.lane_width;
    log.highway_lane_count = env.config().geometry.highway_lane_count;
    log.merge_zone_end = env.config().geometry.merge_zone_end();
    log.policy_period = env.config().policy_period;
    log.steps = steps;
    return log;
}

void write_episode_log(std::ostream& out, const EpisodeLog& log) {
    out << "mergesim-episode-log v1\n";
    out << "config sharing=" << (log.sharing ? 1 : 0) << " intent=" << log.intent_name
        << " trigger=" << (log.trigger_x ? fmt(*log.trigger_x) : std::string("none"))
        << " seed=" << log.seed << " truncated=" << (log.sender_truncated ? 1 : 0)
        << " beta_s=" << fmt(log.reward.beta_s) << " beta_l=" << fmt(log.reward.beta_l)
        << " beta_c=" << fmt(log.reward.beta_c) << " beta_q=" << fmt(log.reward.beta_q)
        << " beta_f=" << fmt(log.reward.beta_f) << " beta_r=" << fmt(log.reward.beta_r)
        << " beta_e=" << fmt(log.reward.beta_e) << " v_min=" << fmt(log.reward.v_min)
        << " v_max=" << fmt(log.reward.v_max) << " v_star=" << fmt(log.reward.v_star)
        << " t_headway=" << fmt(log.reward.t_headway) << " lane_width=" << fmt(log.lane_width)
        << " highway_lane_count=" << log.highway_lane_count
        << " merge_zone_end=" << fmt(log.merge_zone_end)
        << " policy_period=" << fmt(log.policy_period) << "\n";
    for (const EpisodeLogStep& s : log.steps) {
        out << "step k=" << s.step << " av1=" << action_name(s.av1_action)
            << " sender=" << action_name(s.sender_action) << " done=" << (s.done ? 1 : 0)
            << " reason=" << done_reason_name(s.reason) << " merged=" << (s.merged_now ? 1 : 0)
            << "\n";
        for (const VehicleState& v : s.vehicles) {
            out << "veh k=" << s.step << " id=" << v.id << " x=" << fmt(v.x) << " y=" << fmt(v.y)
                << " vx=" << fmt(v.vx) << " vy=" << fmt(v.vy) << " heading=" << fmt(v.heading)
                << " speed=" << fmt(v.speed) << " lane=" << lane_name(v.lane)
                << " target_lane=" << lane_name(v.target_lane)
                << " target_speed=" << fmt(v.target_speed) << " length=" << fmt(v.length)
                << " width=" << fmt(v.width) << " crashed=" << (v.crashed ? 1 : 0) << "\n";
        }
        const RewardBreakdown& r = s.reward;
        out << "reward k=" << s.step << " r_s=" << fmt(r.r_s) << " r_l=" << fmt(r.r_l)
            << " r_c=" << fmt(r.r_c) << " r_q=" << fmt(r.r_q) << " r_f=" << fmt(r.r_f)
            << " r_r=" << fmt(r.r_r) << " r_e=" << fmt(r.r_e) << " total=" << fmt(r.total)
            << "\n";
    }
}

void write_episode_log_file(const std::string& path, const EpisodeLog& log) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_episode_log(out, log);
}

EpisodeLog read_episode_log(std::istream& in) {
    EpisodeLog log;
    std::string raw;
    int line_no = 0;

    if (!std::getline(in, raw) || raw != "mergesim-episode-log v1")
        throw std::runtime_error("episode log: bad or missing header at line 1");
    ++line_no;

    bool have_config = false;
    EpisodeLogStep* current = nullptr;
    while (std::getline(in, raw)) {
        ++line_no;
        if (raw.empty()) continue;
        const Line line = parse_line(raw, line_no);
        if (line.tag == "config") {
            log.sharing = want_i(line, "sharing", line_no) != 0;
            log.intent_name = want(line, "intent", line_no);
            const std::string trig = want(line, "trigger", line_no);
            if (trig != "none") log.trigger_x = std::strtod(trig.c_str(), nullptr);
            log.seed = std::strtoull(want(line, "seed", line_no).c_str(), nullptr, 10);
            log.sender_truncated = want_i(line, "truncated", line_no) != 0;
            log.reward.beta_s = want_d(line, "beta_s", line_no);
            log.reward.beta_l = want_d(line, "beta_l", line_no);
            log.reward.beta_c = want_d(line, "beta_c", line_no);
            log.reward.beta_q = want_d(line, "beta_q", line_no);
            log.reward.beta_f = want_d(line, "beta_f", line_no);
            log.reward.beta_r = want_d(line, "beta_r", line_no);
            log.reward.beta_e = want_d(line, "beta_e", line_no);
            log.reward.v_min = want_d(line, "v_min", line_no);
            log.reward.v_max = want_d(line, "v_max", line_no);
            log.reward.v_star = want_d(line, "v_star", line_no);
            log.reward.t_headway = want_d(line, "t_headway", line_no);
            log.lane_width = want_d(line, "lane_width", line_no);
            log.highway_lane_count = want_i(line, "highway_lane_count", line_no);
            log.merge_zone_end = want_d(line, "merge_zone_end", line_no);
            log.policy_period = want_d(line, "policy_period", line_no);
            have_config = true;
        } else if (line.tag == "step") {
            log.steps.emplace_back();
            current = &log.steps.back();
            current->step = want_i(line, "k", line_no);
            current->av1_action = action_from_name(want(line, "av1", line_no));
            current->sender_action = action_from_name(want(line, "sender", line_no));
            current->done = want_i(line, "done", line_no) != 0;
            const std::string reason = want(line, "reason", line_no);
            if (reason == "none") current->reason = DoneReason::none;
            else if (reason == "crashed") current->reason = DoneReason::crashed;
            else if (reason == "horizon") current->reason = DoneReason::horizon;
            else if (reason == "road_end") current->reason = DoneReason::road_end;
            else
                throw std::runtime_error("episode log: bad reason at line " +
                                         std::to_string(line_no));
            current->merged_now = want_i(line, "merged", line_no) != 0;
        } else if (line.tag == "veh") {
            if (!current)
                throw std::runtime_error("episode log: vehicle before step at line " +
                                         std::to_string(line_no));
            VehicleState v;
            v.id = want_i(line, "id", line_no);
            v.x = want_d(line, "x", line_no);
            v.y = want_d(line, "y", line_no);
            v.vx = want_d(line, "vx", line_no);
            v.vy = want_d(line, "vy", line_no);
            v.heading = want_d(line, "heading", line_no);
            v.speed = want_d(line, "speed", line_no);
            v.lane = lane_from_name(want(line, "lane", line_no), line_no);
            v.target_lane = lane_from_name(want(line, "target_lane", line_no), line_no);
            v.target_speed = want_d(line, "target_speed", line_no);
            v.length = want_d(line, "length", line_no);
            v.width = want_d(line, "width", line_no);
            v.crashed = want_i(line, "crashed", line_no) != 0;
            current->vehicles.push_back(v);
        } else if (line.tag == "reward") {
            if (!current)
                throw std::runtime_error("episode log: reward before step at line " +
                                         std::to_string(line_no));
            current->reward.r_s = want_d(line, "r_s", line_no);
            current->reward.r_l = want_d(line, "r_l", line_no);
            current->reward.r_c = want_d(line, "r_c", line_no);
            current->reward.r_q = want_d(line, "r_q", line_no);
            current->reward.r_f = want_d(line, "r_f", line_no);
            current->reward.r_r = want_d(line, "r_r", line_no);
            current->reward.r_e = want_d(line, "r_e", line_no);
            current->reward.total = want_d(line, "total", line_no);
        } else {
            throw std::runtime_error("episode log: unknown record '" + line.tag + "' at line " +
                                     std::to_string(line_no));
        }
    }
    if (!have_config) throw std::runtime_error("episode log: missing config record");
    if (log.steps.empty()) throw std::runtime_error("episode log: no steps");
    return log;
}

EpisodeLog read_episode_log_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_episode_log(in);
}

std::vector<std::string> verify_episode_rewards(const EpisodeLog& log, double tolerance) {
    std::vector<std::string> mismatches;
    RewardConfig cfg = log.reward;
    RoadGeometry geom;
    geom.lane_width = log.lane_width;
    geom.highway_lane_count = log.highway_lane_count;

    auto complain = [&](int step, const std::string& what, double logged, double recomputed) {
        std::ostringstream os;
        os << "step " << step << ": " << what << " logged " << fmt(logged) << " recomputed "
           << fmt(recomputed);
        mismatches.push_back(os.str());
    };

    bool merged_seen = false;
    bool prev_crashed = false;
    for (const EpisodeLogStep& s : log.steps) {
        if (s.vehicles.empty()) {
            mismatches.push_back("step " + std::to_string(s.step) + ": no vehicle states");
            continue;
        }
        const VehicleState& av1 = s.vehicles[0];

        const double r_s = speed_reward(av1.speed, cfg);
        if (std::abs(r_s - s.reward.r_s) > tolerance) complain(s.step, "r_s", s.reward.r_s, r_s);

        const double r_l = lane_reward(av1.lane, geom, cfg);
        if (std::abs(r_l - s.reward.r_l) > tolerance) complain(s.step, "r_l", s.reward.r_l, r_l);

        const double r_c = (av1.crashed && !prev_crashed) ? cfg.beta_c : 0.0;
        if (std::abs(r_c - s.reward.r_c) > tolerance) complain(s.step, "r_c", s.reward.r_c, r_c);
        prev_crashed = av1.crashed;

        // merge detection from the logged boundary states
        RewardBreakdown m; // zeros unless this is the merge step
        if (!merged_seen && !av1.crashed && av1.lane.is_highway()) {
            const double center = log.lane_width * av1.lane.index;
            if (std::abs(av1.y - center) < log.lane_width / 4.0) {
                merged_seen = true;
                MergeEvent event;
                event.t_m = s.step * log.policy_period;
                event.v_m1 = av1.speed;
                for (std::size_t i = 1; i < s.vehicles.size(); ++i) {
                    const VehicleState& w = s.vehicles[i];
                    if (!(w.lane == av1.lane)) continue;
                    const double dx = w.x - av1.x;
                    const double gap = std::abs(dx) - 0.5 * (w.length + av1.length);
                    if (dx > 0.0 && (!event.front || gap < event.front->gap))
                        event.front = MergeNeighbor{gap, w.speed, w.id};
                    else if (dx < 0.0 && (!event.rear || gap < event.rear->gap))
                        event.rear = MergeNeighbor{gap, w.speed, w.id};
                }
                m = merge_reward(event, cfg);
            }
        }
        if (std::abs(m.r_q - s.reward.r_q) > tolerance) complain(s.step, "r_q", s.reward.r_q, m.r_q);
        if (std::abs(m.r_f - s.reward.r_f) > tolerance) complain(s.step, "r_f", s.reward.r_f, m.r_f);
        if (std::abs(m.r_r - s.reward.r_r) > tolerance) complain(s.step, "r_r", s.reward.r_r, m.r_r);
        if (std::abs(m.r_e - s.reward.r_e) > tolerance) complain(s.step, "r_e", s.reward.r_e, m.r_e);

        const double total = r_s + r_l + r_c + m.r_q + m.r_f + m.r_r + m.r_e;
        if (std::abs(total - s.reward.total) > tolerance)
            complain(s.step, "total", s.reward.total, total);
    }
    return mismatches;
}

ComplianceReport verify_episode_compliance(const EpisodeLog& log) {
    const Intent intent = IntentCatalog::by_name(log.intent_name);
    std::vector<Action> trace;
    trace.reserve(log.steps.size());
    for (const EpisodeLogStep& s : log.steps) trace.push_back(s.sender_action);
    return check_compliance(trace, intent, log.sender_truncated);
}

} // namespace mergesim
