#pragma once

#include <string>
#include <vector>

#include "roe/llm_client.hpp"
#include "roe/prompts.hpp"
#include "roe/summarize.hpp"

namespace roe {

inline constexpr int kDefaultMaxActions = 5;

// The agent's system prompt. The experience section is the part strategy
// iteration swaps out between rounds; everything else stays byte-identical.
struct SystemPrompt {
    std::string role_section;
    std::string experience_section;
    std::string action_library_section;
    std::string phase_rules_section;

    std::string render() const;
};

// Builds the standing sections from the catalog; the action library section
// lists all 18 display names in canonical order.
SystemPrompt make_system_prompt(const PromptCatalog& catalog, const std::string& experience_text);

struct MessageBundle {
    std::string system;
    std::string user;
    double temperature = 0.0; // decisions always run at 0

    std::vector<ChatMessage> messages() const {
        return {{"system", system}, {"user", user}};
    }
};

// Deterministic render of one decision request: system prompt plus the
// latest situation report, ending with the 1..max_actions instruction.
MessageBundle build_decision_messages(const SystemPrompt& prompt, const L2Summary& l2,
                                      const PromptCatalog& catalog,
                                      int max_actions = kDefaultMaxActions);

struct ActionQueue {
    std::vector<ActionId> actions; // non-empty, length <= max_actions
};

// Case-insensitive line-wise match against the action library. Unknown
// lines are skipped (reported through warnings); zero matches fall back to
// a single NO_OP; overflow is truncated to max_actions.
ActionQueue parse_actions(const std::string& text, int max_actions = kDefaultMaxActions,
                          std::vector<std::string>* warnings = nullptr);

struct RetryPolicy {
    int max_attempts = 3;
    int initial_backoff_ms = 200; // doubles per attempt
    bool sleep = true;            // tests disable the actual waiting
};

struct Decision {
    ActionQueue queue;
    std::string raw_text;
    int attempts = 1;
    bool transport_incident = false; // all attempts failed; NO_OP substituted
};

// One chat call at temperature 0 with transport retries; the game must not
// stall, so exhausted retries degrade to NO_OP with the incident recorded.
Decision decide(LlmBackend& client, const MessageBundle& bundle,
                int max_actions = kDefaultMaxActions, const RetryPolicy& retry = {});

} // namespace roe
