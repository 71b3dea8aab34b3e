#pragma once

#include <string>

namespace roe {

// Plain-text prompt templates with named {placeholders}. The catalog ships
// on disk under prompts/ and is compiled in as the builtin fallback; the
// two must stay identical (a test enforces it).
struct PromptCatalog {
    std::string version;
    std::string role;                  // agent role section of the system prompt
    std::string phase_rules;           // stage names + division guidance
    std::string decision_instruction;  // uses {max_actions}
    std::string reflection_role;
    std::string reflection_key_aspects;
    std::string reflection_task;
    std::string reflection_format;
    std::string expert_experience;     // canonical-format experience document

    static PromptCatalog builtin();
    static PromptCatalog load_dir(const std::string& dir);
    void save_dir(const std::string& dir) const;
};

std::string replace_placeholder(std::string text, const std::string& name,
                                const std::string& value);

} // namespace roe
