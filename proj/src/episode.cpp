#include "roe/episode.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "roe/errors.hpp"

namespace roe {

using nlohmann::json;

namespace {

json frame_to_json(const FrameRecord& f) {
    json actions = json::array();
    for (ActionId a : f.action_taken) {
        actions.push_back(std::string(action_name(a)));
    }
    json rejected = json::array();
    for (const auto& r : f.rejected) {
        rejected.push_back({{"action", std::string(action_name(r.action))},
                            {"reason", r.reason}});
    }
    return json{{"index", f.index},
                {"tick", f.l2.tick},
                {"phase", std::string(phase_keyword(f.l2.phase))},
                {"situation", f.l2.situation_text},
                {"metrics",
                 {{"minerals", f.l2.metrics.minerals},
                  {"gas", f.l2.metrics.gas},
                  {"supply_used", f.l2.metrics.supply_used},
                  {"supply_cap", f.l2.metrics.supply_cap},
                  {"worker_count", f.l2.metrics.worker_count},
                  {"army_power", f.l2.metrics.army_power},
                  {"base_count", f.l2.metrics.base_count}}},
                {"actions", actions},
                {"rejected", rejected},
                {"events", f.events},
                {"raw_response", f.raw_response}};
}

GamePhase phase_from_keyword(const std::string& kw) {
    for (int i = 0; i < kPhaseCount; ++i) {
        if (phase_keyword(static_cast<GamePhase>(i)) == kw) {
            return static_cast<GamePhase>(i);
        }
    }
    throw MalformedLogError("unknown phase keyword in log: " + kw);
}

FrameRecord frame_from_json(const json& j) {
    FrameRecord f;
    f.index = j.at("index").get<int>();
    f.l2.tick = j.at("tick").get<int>();
    f.l2.phase = phase_from_keyword(j.at("phase").get<std::string>());
    f.l2.situation_text = j.at("situation").get<std::string>();
    const auto& m = j.at("metrics");
    f.l2.metrics.minerals = m.at("minerals").get<std::int64_t>();
    f.l2.metrics.gas = m.at("gas").get<std::int64_t>();
    f.l2.metrics.supply_used = m.at("supply_used").get<int>();
    f.l2.metrics.supply_cap = m.at("supply_cap").get<int>();
    f.l2.metrics.worker_count = m.at("worker_count").get<int>();
    f.l2.metrics.army_power = m.at("army_power").get<double>();
    f.l2.metrics.base_count = m.at("base_count").get<int>();
    for (const auto& a : j.at("actions")) {
        auto id = parse_action_name(a.get<std::string>());
        if (!id) {
            throw MalformedLogError("unknown action in log: " + a.get<std::string>());
        }
        f.action_taken.push_back(*id);
    }
    for (const auto& r : j.at("rejected")) {
        auto id = parse_action_name(r.at("action").get<std::string>());
        if (!id) {
            throw MalformedLogError("unknown rejected action in log");
        }
        f.rejected.push_back({*id, r.at("reason").get<std::string>()});
    }
    f.events = j.at("events").get<std::vector<std::string>>();
    f.raw_response = j.at("raw_response").get<std::string>();
    return f;
}

} // namespace

std::string EpisodeLog::to_jsonl() const {
    std::ostringstream out;
    json header{{"record", "episode_header"},
                {"seed", seed},
                {"difficulty", to_string(difficulty)},
                {"config_hash", config_hash},
                {"test_id", test_id},
                {"round", round}};
    out << header.dump() << "\n";
    for (const auto& f : frames) {
        out << frame_to_json(f).dump() << "\n";
    }
    if (result) {
        json r{{"record", "result"},
               {"outcome", to_string(result->outcome)},
               {"tick_ended", result->tick_ended},
               {"player_bases", result->final_state_snapshot.player_bases},
               {"opponent_bases", result->final_state_snapshot.opponent_bases},
               {"player_workers", result->final_state_snapshot.player_workers},
               {"opponent_workers", result->final_state_snapshot.opponent_workers},
               {"player_army_power", result->final_state_snapshot.player_army_power},
               {"opponent_army_power", result->final_state_snapshot.opponent_army_power}};
        out << r.dump() << "\n";
    }
    return out.str();
}

EpisodeLog EpisodeLog::from_jsonl(const std::string& text) {
    EpisodeLog log;
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw MalformedLogError("episode log line " + std::to_string(line_no) +
                                    " is not valid JSON: " + e.what());
        }
        const std::string kind = j.value("record", "frame");
        if (kind == "episode_header") {
            log.seed = j.at("seed").get<std::uint64_t>();
            log.difficulty = difficulty_from_string(j.at("difficulty").get<std::string>());
            log.config_hash = j.at("config_hash").get<std::uint64_t>();
            log.test_id = j.at("test_id").get<int>();
            log.round = j.at("round").get<int>();
            header_seen = true;
        } else if (kind == "result") {
            MatchResult r;
            const std::string outcome = j.at("outcome").get<std::string>();
            r.outcome = outcome == "Victory"   ? Outcome::Victory
                        : outcome == "Defeat" ? Outcome::Defeat
                                              : Outcome::Timeout;
            r.tick_ended = j.at("tick_ended").get<int>();
            r.final_state_snapshot.player_bases = j.at("player_bases").get<int>();
            r.final_state_snapshot.opponent_bases = j.at("opponent_bases").get<int>();
            r.final_state_snapshot.player_workers = j.at("player_workers").get<int>();
            r.final_state_snapshot.opponent_workers = j.at("opponent_workers").get<int>();
            r.final_state_snapshot.player_army_power = j.at("player_army_power").get<double>();
            r.final_state_snapshot.opponent_army_power =
                j.at("opponent_army_power").get<double>();
            log.result = r;
        } else {
            log.frames.push_back(frame_from_json(j));
        }
    }
    if (!header_seen) {
        throw MalformedLogError("episode log has no header line");
    }
    return log;
}

void EpisodeLog::save_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write episode log: " + path);
    }
    out << to_jsonl();
}

EpisodeLog EpisodeLog::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open episode log: " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return from_jsonl(ss.str());
}

void write_timeseries_csv(const std::string& path, const std::vector<TickSample>& series) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write time series: " + path);
    }
    out << "tick,player_minerals_total,player_gas_total,player_workers,player_army_supply,"
           "opponent_minerals_total,opponent_gas_total,opponent_workers,opponent_army_supply\n";
    for (const auto& s : series) {
        out << s.tick << "," << s.player_minerals_total << "," << s.player_gas_total << ","
            << s.player_workers << "," << s.player_army_supply << ","
            << s.opponent_minerals_total << "," << s.opponent_gas_total << ","
            << s.opponent_workers << "," << s.opponent_army_supply << "\n";
    }
}

} // namespace roe
