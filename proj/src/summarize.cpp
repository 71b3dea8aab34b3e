#include "roe/summarize.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "roe/errors.hpp"
#include "roe/llm_client.hpp"
#include "roe/prompts.hpp"

namespace roe {

std::string_view phase_keyword(GamePhase phase) {
    switch (phase) {
        case GamePhase::EarlyGame: return "Early Game";
        case GamePhase::EarlyMidGame: return "Early Mid Game";
        case GamePhase::MidGame: return "Mid Game";
        case GamePhase::LateMidGame: return "Late Mid Game";
        case GamePhase::LateGame: return "Late Game";
    }
    return "Early Game";
}

std::array<int, kPhaseCount> phase_keyword_occurrences(const std::string& text) {
    std::array<int, kPhaseCount> counts{};
    std::string masked = text;

    auto count_and_mask = [&masked](std::string_view keyword) {
        int n = 0;
        std::size_t pos = 0;
        while ((pos = masked.find(keyword, pos)) != std::string::npos) {
            ++n;
            for (std::size_t i = 0; i < keyword.size(); ++i) {
                masked[pos + i] = '\x01';
            }
            pos += keyword.size();
        }
        return n;
    };

    // Longer keywords first so "Mid Game" is not counted inside them.
    counts[1] = count_and_mask(phase_keyword(GamePhase::EarlyMidGame));
    counts[3] = count_and_mask(phase_keyword(GamePhase::LateMidGame));
    counts[0] = count_and_mask(phase_keyword(GamePhase::EarlyGame));
    counts[2] = count_and_mask(phase_keyword(GamePhase::MidGame));
    counts[4] = count_and_mask(phase_keyword(GamePhase::LateGame));
    return counts;
}

std::optional<GamePhase> extract_unique_phase(const std::string& text) {
    auto counts = phase_keyword_occurrences(text);
    int total = 0;
    int found = -1;
    for (int i = 0; i < kPhaseCount; ++i) {
        total += counts[i];
        if (counts[i] > 0) {
            found = i;
        }
    }
    if (total != 1) {
        return std::nullopt;
    }
    return static_cast<GamePhase>(found);
}

GamePhase classify_phase(const GameState& state) {
    const int tick = state.tick;
    const PlayerState& p = state.player;
    if (tick < 240 && p.bases <= 1) {
        return GamePhase::EarlyGame;
    }
    if (tick < 480 || (p.bases == 2 && p.tech_structures == 0)) {
        return GamePhase::EarlyMidGame;
    }
    if (tick < 720 || p.tech_structures > 0) {
        return GamePhase::MidGame;
    }
    if (tick < 960) {
        return GamePhase::LateMidGame;
    }
    return GamePhase::LateGame;
}

// ---------------------------------------------------------------------------
// L1
// ---------------------------------------------------------------------------

namespace {

std::string fixed1(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

const char* unit_label(int kind) {
    static const char* labels[] = {"melee", "ranged", "siege"};
    return labels[kind];
}

} // namespace

L1Summary l1_summarize(const std::vector<TextObservation>& observations) {
    if (observations.empty()) {
        throw ArgumentError("l1_summarize requires a non-empty window");
    }
    L1Summary out;
    out.tick_start = observations.front().tick;
    out.tick_end = observations.back().tick;

    const ObservationMetrics& last = observations.back().metrics;
    if (observations.size() == 1) {
        std::ostringstream text;
        text << "At " << format_time(out.tick_end) << ": minerals " << last.minerals << ", gas "
             << last.gas << ", supply " << last.supply_used << "/" << last.supply_cap
             << ", workers " << last.workers << ", bases " << last.bases << ", army power "
             << fixed1(last.army_power);
        for (const auto& e : observations.front().events) {
            text << "; " << e;
        }
        out.delta_text = text.str();
        return out;
    }

    const ObservationMetrics& first = observations.front().metrics;
    std::vector<std::string> parts;

    auto add_delta = [&parts](const char* label, std::int64_t from, std::int64_t to) {
        if (from == to) {
            return;
        }
        std::int64_t d = to - from;
        parts.push_back(std::string(label) + (d > 0 ? " +" : " ") + std::to_string(d) +
                        " (now " + std::to_string(to) + ")");
    };
    add_delta("minerals", first.minerals, last.minerals);
    add_delta("gas", first.gas, last.gas);
    add_delta("workers", first.workers, last.workers);
    add_delta("bases", first.bases, last.bases);
    for (int k = 0; k < 3; ++k) {
        int d = last.army[k] - first.army[k];
        if (d > 0) {
            parts.push_back("gained " + std::to_string(d) + " " + unit_label(k));
        } else if (d < 0) {
            parts.push_back("lost " + std::to_string(-d) + " " + unit_label(k));
        }
    }
    if (last.army_power != first.army_power) {
        double d = last.army_power - first.army_power;
        parts.push_back(std::string("army power ") + (d > 0 ? "+" : "") + fixed1(d));
    }
    std::vector<std::string> events;
    for (std::size_t i = 1; i < observations.size(); ++i) {
        for (const auto& e : observations[i].events) {
            events.push_back(e);
        }
    }

    std::ostringstream text;
    text << "From " << format_time(out.tick_start) << " to " << format_time(out.tick_end) << ": ";
    if (parts.empty() && events.empty()) {
        text << "no significant change";
    } else {
        for (std::size_t i = 0; i < parts.size(); ++i) {
            text << (i ? ", " : "") << parts[i];
        }
        if (parts.empty()) {
            text << "steady";
        }
        for (const auto& e : events) {
            text << "; " << e;
        }
    }
    out.delta_text = text.str();
    return out;
}

// ---------------------------------------------------------------------------
// L2
// ---------------------------------------------------------------------------

namespace {

L2Metrics metrics_from_state(const GameState& state) {
    const SimConfig& cfg = state.cfg();
    L2Metrics m;
    m.minerals = state.player.minerals;
    m.gas = state.player.gas;
    m.supply_used = state.player.supply_used;
    m.supply_cap = supply_cap(state.player, cfg);
    m.worker_count = state.player.workers;
    m.army_power = army_power(state.player, cfg);
    m.base_count = state.player.bases;
    return m;
}

std::string render_situation(const GameState& state, GamePhase phase, const L2Metrics& m,
                             const std::vector<L1Summary>& l1s) {
    const PlayerState& p = state.player;
    std::ostringstream out;
    out << "=== Situation Report ===\n";
    out << "Phase: " << phase_keyword(phase) << "\n";
    out << "Time " << format_time(state.tick) << " | Minerals: " << m.minerals
        << " | Gas: " << m.gas << " | Supply: " << m.supply_used << "/" << m.supply_cap << "\n";
    out << "Workers: " << m.worker_count << " | Bases: " << m.base_count << "\n";
    out << "Army: melee=" << p.army[0] << " ranged=" << p.army[1] << " siege=" << p.army[2]
        << " (power " << fixed1(m.army_power) << ")"
        << (p.in_flight ? (p.in_flight->returning ? ", returning home" : ", attacking") : "")
        << "\n";
    out << "Tech structures: " << p.tech_structures << " | Outposts: " << p.outposts
        << " | Upgrades: " << p.upgrade_count() << " | Production structures: "
        << p.production_structures << "\n";
    if (state.opponent_knowledge) {
        const ScoutReport& r = *state.opponent_knowledge;
        out << "Enemy (as of " << format_time(r.tick) << "): bases=" << r.bases
            << " power=" << fixed1(r.army_power) << "\n";
    } else {
        out << "Enemy: no information\n";
    }
    out << "Recent: ";
    for (std::size_t i = 0; i < l1s.size(); ++i) {
        out << (i ? " | " : "") << l1s[i].delta_text;
    }
    return out.str();
}

} // namespace

L2Summary l2_summarize(const std::vector<L1Summary>& l1s, const GameState& state,
                       const L2Options& options) {
    if (l1s.empty()) {
        throw ArgumentError("l2_summarize requires at least one L1 summary");
    }
    GamePhase rule_phase = std::max(classify_phase(state), options.min_phase);
    GamePhase phase = rule_phase;

    if (options.mode == SummaryMode::Llm) {
        if (options.client == nullptr) {
            throw ArgumentError("llm summary mode requires a client");
        }
        const PromptCatalog catalog =
            options.catalog ? *options.catalog : PromptCatalog::builtin();
        L2Metrics m = metrics_from_state(state);
        std::string draft = render_situation(state, rule_phase, m, l1s);
        // Ask for the stage with the phase-division rules as system prompt.
        // Transport failures propagate to the caller (retryable there).
        std::vector<ChatMessage> messages = {
            {"system", catalog.phase_rules},
            {"user", draft + "\n\nName the current stage of the match. Answer with the stage "
                             "name only."}};
        std::string reply = options.client->query(messages, 0.0);
        if (auto parsed = extract_unique_phase(reply)) {
            phase = std::max(*parsed, options.min_phase);
        } else {
            if (options.warning) {
                *options.warning =
                    "llm phase reply lacked exactly one known stage keyword; used rule mode";
            }
            phase = rule_phase;
        }
    }

    L2Summary out;
    out.tick = state.tick;
    out.phase = phase;
    out.metrics = metrics_from_state(state);
    out.situation_text = render_situation(state, phase, out.metrics, l1s);
    return out;
}

} // namespace roe
