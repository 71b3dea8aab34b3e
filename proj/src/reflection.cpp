#include "roe/reflection.hpp"

#include <cctype>
#include <chrono>
#include <cstdio>
#include <sstream>
#include <thread>

#include "roe/errors.hpp"

namespace roe {

std::string ExperienceOrigin::to_string() const {
    if (kind == Kind::Expert) {
        return "Expert";
    }
    return "Self-Reflection Round " + std::to_string(round);
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct TimePointMatch {
    bool matched = false;
    int minutes = 0;
    int seconds = 0;
    std::string token; // the raw "mm:ss" text
    std::string recommendation;
};

// Shape: [bullet] d{1,2}:d{2} <sep> text, where <sep> is '-', ':' or an
// en/em dash.
TimePointMatch match_timepoint(const std::string& raw) {
    TimePointMatch m;
    std::string line = trim(raw);
    std::size_t i = 0;
    if (i < line.size() && (line[i] == '-' || line[i] == '*')) {
        // A leading "- " bullet; require a space so "-12:30" is not a bullet.
        if (i + 1 < line.size() && line[i + 1] == ' ') {
            i += 2;
            while (i < line.size() && line[i] == ' ') {
                ++i;
            }
        }
    }
    std::size_t digits_start = i;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) {
        ++i;
    }
    std::size_t mm_len = i - digits_start;
    if (mm_len < 1 || mm_len > 2 || i >= line.size() || line[i] != ':') {
        return m;
    }
    std::size_t ss_start = ++i;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) {
        ++i;
    }
    if (i - ss_start != 2) {
        return m;
    }
    m.token = line.substr(digits_start, i - digits_start);
    m.minutes = std::stoi(line.substr(digits_start, mm_len));
    m.seconds = std::stoi(line.substr(ss_start, 2));
    while (i < line.size() && line[i] == ' ') {
        ++i;
    }
    bool separator = false;
    if (i < line.size() && (line[i] == '-' || line[i] == ':')) {
        separator = true;
        ++i;
    } else if (i + 2 < line.size() && static_cast<unsigned char>(line[i]) == 0xE2 &&
               static_cast<unsigned char>(line[i + 1]) == 0x80 &&
               (static_cast<unsigned char>(line[i + 2]) == 0x93 ||
                static_cast<unsigned char>(line[i + 2]) == 0x94)) {
        separator = true; // en dash / em dash
        i += 3;
    }
    if (!separator) {
        return m;
    }
    while (i < line.size() && line[i] == ' ') {
        ++i;
    }
    std::string rec = trim(line.substr(i));
    if (rec.empty()) {
        return m;
    }
    m.matched = true;
    m.recommendation = rec;
    return m;
}

struct NumberedMatch {
    bool matched = false;
    int number = 0;
    std::string text;
};

NumberedMatch match_numbered_point(const std::string& raw) {
    NumberedMatch m;
    std::string line = trim(raw);
    std::size_t i = 0;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) {
        ++i;
    }
    if (i == 0 || i > 2 || i >= line.size() || line[i] != '.') {
        return m;
    }
    m.number = std::stoi(line.substr(0, i));
    m.matched = true;
    m.text = trim(line.substr(i + 1));
    return m;
}

bool is_section_header(const std::string& raw) {
    std::string line = trim(raw);
    if (line.size() < 2 || line.back() != ':') {
        return false;
    }
    for (char c : line.substr(0, line.size() - 1)) {
        if (!std::isalpha(static_cast<unsigned char>(c)) && c != ' ') {
            return false;
        }
    }
    return true;
}

ExperienceOrigin parse_origin_text(const std::string& text) {
    std::string t = trim(text);
    if (t == "Expert") {
        return {ExperienceOrigin::Kind::Expert, 0};
    }
    const std::string prefix = "Self-Reflection Round ";
    if (t.rfind(prefix, 0) == 0) {
        try {
            int round = std::stoi(t.substr(prefix.size()));
            return {ExperienceOrigin::Kind::SelfReflection, round};
        } catch (const std::exception&) {
        }
    }
    return {ExperienceOrigin::Kind::Expert, 0};
}

} // namespace

Experience parse_reflection(const std::string& text, ExperienceOrigin default_origin) {
    Experience e;
    e.origin = default_origin;
    e.raw_text = text;

    bool origin_seen = false;
    int open_point = -1; // index into strategic_points accepting continuations
    std::vector<int> point_numbers;

    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::string stripped = trim(line);
        if (stripped.empty()) {
            open_point = -1;
            continue;
        }
        if (!origin_seen && stripped.rfind("Origin:", 0) == 0) {
            e.origin = parse_origin_text(stripped.substr(7));
            origin_seen = true;
            continue;
        }
        if (auto tp = match_timepoint(line); tp.matched || !tp.token.empty()) {
            if (!tp.matched) {
                continue; // time-like but no separator/recommendation: prose
            }
            if (tp.seconds >= 60 || tp.minutes * 60 + tp.seconds > 1200) {
                throw ValidationError("timestamp out of range: " + tp.token);
            }
            char canonical[16];
            std::snprintf(canonical, sizeof(canonical), "%02d:%02d", tp.minutes, tp.seconds);
            e.key_timepoints.push_back(
                {tp.minutes * 60 + tp.seconds, canonical, tp.recommendation});
            open_point = -1;
            continue;
        }
        if (auto np = match_numbered_point(line); np.matched) {
            e.strategic_points.push_back(np.text);
            point_numbers.push_back(np.number);
            open_point = static_cast<int>(e.strategic_points.size()) - 1;
            continue;
        }
        if (is_section_header(line)) {
            open_point = -1;
            continue;
        }
        if (open_point >= 0) {
            e.strategic_points[open_point] += " " + stripped;
        }
    }

    if (e.strategic_points.size() != 8) {
        throw ValidationError("expected exactly 8 strategic points, found " +
                              std::to_string(e.strategic_points.size()));
    }
    for (int i = 0; i < 8; ++i) {
        if (point_numbers[i] != i + 1) {
            throw ValidationError("strategic points must be numbered 1 through 8 in order");
        }
        if (e.strategic_points[i].empty()) {
            throw ValidationError("strategic point " + std::to_string(i + 1) + " is empty");
        }
    }
    if (e.key_timepoints.size() < 5) {
        throw ValidationError("expected at least 5 key time points, found " +
                              std::to_string(e.key_timepoints.size()));
    }
    return e;
}

std::string render_experience(const Experience& e) {
    std::ostringstream out;
    out << "Origin: " << e.origin.to_string() << "\n";
    out << "Strategic Points:\n";
    for (std::size_t i = 0; i < e.strategic_points.size(); ++i) {
        out << (i + 1) << ". " << e.strategic_points[i] << "\n";
    }
    out << "Key Time Points:\n";
    for (const auto& tp : e.key_timepoints) {
        out << tp.time_text << " - " << tp.recommendation << "\n";
    }
    return out.str();
}

Experience expert_experience(const PromptCatalog& catalog) {
    return parse_reflection(catalog.expert_experience,
                            {ExperienceOrigin::Kind::Expert, 0});
}

std::vector<std::string> replay_analysis_aspects(const PromptCatalog& catalog) {
    std::vector<std::string> aspects;
    std::istringstream lines(catalog.reflection_key_aspects);
    std::string line;
    while (std::getline(lines, line)) {
        std::string stripped = trim(line);
        if (stripped.rfind("- ", 0) != 0) {
            continue;
        }
        stripped = stripped.substr(2);
        std::size_t paren = stripped.find(" (");
        if (paren != std::string::npos) {
            stripped = stripped.substr(0, paren);
        }
        aspects.push_back(trim(stripped));
    }
    return aspects;
}

std::string ReflectionPrompt::render() const {
    std::ostringstream out;
    out << role_introduction << "\n"
        << key_aspects << "\n"
        << task_instructions << "\n"
        << format_requirements << "\n"
        << "=== Key Moments ===\n"
        << key_frames_text << "\n\n"
        << "=== Previous Experience ===\n"
        << previous_experience << "\n"
        << "=== Match Result ===\n"
        << match_result << "\n";
    return out.str();
}

std::vector<ChatMessage> ReflectionPrompt::messages() const {
    std::ostringstream user;
    user << key_aspects << "\n"
         << task_instructions << "\n"
         << format_requirements << "\n"
         << "=== Key Moments ===\n"
         << key_frames_text << "\n\n"
         << "=== Previous Experience ===\n"
         << previous_experience << "\n"
         << "=== Match Result ===\n"
         << match_result << "\n";
    return {{"system", role_introduction}, {"user", user.str()}};
}

ReflectionPrompt build_reflection_prompt(const std::string& key_frames_text,
                                         const Experience& previous, const MatchResult& result,
                                         const PromptCatalog& catalog) {
    ReflectionPrompt p;
    p.role_introduction = catalog.reflection_role;
    p.key_aspects = catalog.reflection_key_aspects;
    p.task_instructions = catalog.reflection_task;
    p.format_requirements = catalog.reflection_format;
    p.key_frames_text = key_frames_text;
    p.previous_experience = previous.raw_text;

    std::ostringstream r;
    r << "Result: " << to_string(result.outcome) << ". The match ended at "
      << format_time(result.tick_ended) << ". Final standing: our bases "
      << result.final_state_snapshot.player_bases << ", enemy bases "
      << result.final_state_snapshot.opponent_bases << ", our army power "
      << result.final_state_snapshot.player_army_power << ", enemy army power "
      << result.final_state_snapshot.opponent_army_power << ".";
    p.match_result = r.str();
    return p;
}

namespace {

std::string query_with_transport_retry(LlmBackend& client,
                                       const std::vector<ChatMessage>& messages,
                                       double temperature, const RetryPolicy& retry) {
    int backoff_ms = retry.initial_backoff_ms;
    for (int attempt = 1;; ++attempt) {
        try {
            return client.query(messages, temperature);
        } catch (const TransportError&) {
            if (attempt >= retry.max_attempts) {
                throw;
            }
            if (retry.sleep) {
                std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
            }
            backoff_ms *= 2;
        }
    }
}

} // namespace

Experience generate_reflection(LlmBackend& client, const ReflectionPrompt& prompt, int round,
                               const RetryPolicy& retry) {
    const ExperienceOrigin origin{ExperienceOrigin::Kind::SelfReflection, round};
    auto messages = prompt.messages();
    std::string reply = query_with_transport_retry(client, messages, 1.0, retry);
    try {
        Experience e = parse_reflection(reply, origin);
        e.origin = origin;
        return e;
    } catch (const ValidationError&) {
        // One retry with an explicit format reminder appended.
        auto retry_messages = messages;
        retry_messages.push_back({"assistant", reply});
        retry_messages.push_back(
            {"user", "Your previous reply did not follow the required format. Answer again, "
                     "following it exactly.\n" +
                         prompt.format_requirements});
        std::string second = query_with_transport_retry(client, retry_messages, 1.0, retry);
        Experience e = parse_reflection(second, origin); // throws on second failure
        e.origin = origin;
        return e;
    }
}

SystemPrompt iterate_strategy(const SystemPrompt& system_prompt,
                              const Experience& new_experience) {
    SystemPrompt next = system_prompt;
    next.experience_section = new_experience.raw_text;
    return next;
}

} // namespace roe
