#pragma once

#include <string>
#include <vector>

#include "roe/agent.hpp"
#include "roe/llm_client.hpp"
#include "roe/prompts.hpp"
#include "roe/sim.hpp"

namespace roe {

struct ExperienceOrigin {
    enum class Kind { Expert, SelfReflection };
    Kind kind = Kind::Expert;
    int round = 0; // meaningful for SelfReflection

    bool operator==(const ExperienceOrigin&) const = default;
    std::string to_string() const;
};

struct TimePoint {
    int tick = 0;               // seconds since match start
    std::string time_text;      // canonical "mm:ss"
    std::string recommendation;

    bool operator==(const TimePoint&) const = default;
};

// The strategy document injected into the system prompt: the expert
// bootstrap or a generated self-reflection. Standardized format: exactly 8
// strategic points, at least 5 timestamped recommendations within
// [00:00, 20:00].
struct Experience {
    ExperienceOrigin origin;
    std::vector<std::string> strategic_points;
    std::vector<TimePoint> key_timepoints;
    std::string raw_text;
};

// Extracts numbered points ("1."–"8.") and "mm:ss - recommendation" lines,
// enforcing the format contract. Throws ValidationError naming the violated
// rule. The origin header is read when present, else default_origin.
Experience parse_reflection(const std::string& text,
                            ExperienceOrigin default_origin = {});

// Canonical template; parse_reflection round-trips its output.
std::string render_experience(const Experience& e);

// The versioned expert bootstrap from the prompt catalog.
Experience expert_experience(const PromptCatalog& catalog);

// Checklist names drawn from the catalog's key-aspects section; always
// includes "Opening Build Order", "Economy Management", "Scouting".
std::vector<std::string> replay_analysis_aspects(const PromptCatalog& catalog);

// The reflection request. Section order is fixed as declared.
struct ReflectionPrompt {
    std::string role_introduction;
    std::string key_aspects;
    std::string task_instructions;
    std::string format_requirements;
    std::string key_frames_text;
    std::string previous_experience;
    std::string match_result;

    std::string render() const;
    std::vector<ChatMessage> messages() const;
};

ReflectionPrompt build_reflection_prompt(const std::string& key_frames_text,
                                         const Experience& previous, const MatchResult& result,
                                         const PromptCatalog& catalog);

// One reflection query at temperature 1. On a malformed reply, retries once
// with an appended format reminder; a second malformed reply raises
// ValidationError (callers keep the previous Experience). Transport errors
// follow the retry policy and then propagate.
Experience generate_reflection(LlmBackend& client, const ReflectionPrompt& prompt, int round,
                               const RetryPolicy& retry = {});

// Returns a copy of the system prompt with only the experience section
// replaced by the new document's raw text.
SystemPrompt iterate_strategy(const SystemPrompt& system_prompt, const Experience& new_experience);

} // namespace roe
