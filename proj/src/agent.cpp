#include "roe/agent.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <sstream>
#include <thread>

#include "roe/errors.hpp"

namespace roe {

std::string SystemPrompt::render() const {
    std::ostringstream out;
    out << role_section << "\n";
    out << "## Strategy Notes\n" << experience_section << "\n";
    out << "## Action Library\n" << action_library_section << "\n";
    out << "## Stage Rules\n" << phase_rules_section;
    return out.str();
}

SystemPrompt make_system_prompt(const PromptCatalog& catalog,
                                const std::string& experience_text) {
    SystemPrompt sp;
    sp.role_section = catalog.role;
    sp.experience_section = experience_text;
    std::ostringstream lib;
    for (const auto& action : action_library()) {
        lib << action.display_name << "\n";
    }
    sp.action_library_section = lib.str();
    sp.phase_rules_section = catalog.phase_rules;
    return sp;
}

MessageBundle build_decision_messages(const SystemPrompt& prompt, const L2Summary& l2,
                                      const PromptCatalog& catalog, int max_actions) {
    MessageBundle bundle;
    bundle.system = prompt.render();
    std::ostringstream user;
    user << l2.situation_text << "\n\n"
         << replace_placeholder(catalog.decision_instruction, "max_actions",
                                std::to_string(max_actions));
    bundle.user = user.str();
    bundle.temperature = 0.0;
    return bundle;
}

namespace {

std::string normalize_line(std::string line) {
    // Trim whitespace, a leading bullet, and a trailing period.
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    std::size_t begin = 0;
    while (begin < line.size() && is_space(line[begin])) {
        ++begin;
    }
    if (begin < line.size() && (line[begin] == '-' || line[begin] == '*')) {
        ++begin;
        while (begin < line.size() && is_space(line[begin])) {
            ++begin;
        }
    }
    std::size_t end = line.size();
    while (end > begin && is_space(line[end - 1])) {
        --end;
    }
    if (end > begin && line[end - 1] == '.') {
        --end;
    }
    return line.substr(begin, end - begin);
}

std::string to_upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

} // namespace

ActionQueue parse_actions(const std::string& text, int max_actions,
                          std::vector<std::string>* warnings) {
    ActionQueue queue;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line) &&
           static_cast<int>(queue.actions.size()) < max_actions) {
        std::string candidate = normalize_line(line);
        if (candidate.empty()) {
            continue;
        }
        auto id = parse_action_name(to_upper(candidate));
        if (id) {
            queue.actions.push_back(*id);
        } else if (warnings) {
            warnings->push_back("unrecognized action line skipped: " + candidate);
        }
    }
    if (queue.actions.empty()) {
        queue.actions.push_back(ActionId::NoOp);
        if (warnings) {
            warnings->push_back("no recognizable actions in response; defaulting to NO_OP");
        }
    }
    return queue;
}

Decision decide(LlmBackend& client, const MessageBundle& bundle, int max_actions,
                const RetryPolicy& retry) {
    Decision decision;
    int backoff_ms = retry.initial_backoff_ms;
    for (int attempt = 1; attempt <= retry.max_attempts; ++attempt) {
        decision.attempts = attempt;
        try {
            decision.raw_text = client.query(bundle.messages(), bundle.temperature);
            decision.queue = parse_actions(decision.raw_text, max_actions);
            return decision;
        } catch (const TransportError&) {
            if (attempt == retry.max_attempts) {
                break;
            }
            if (retry.sleep) {
                std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
            }
            backoff_ms *= 2;
        }
    }
    decision.transport_incident = true;
    decision.raw_text.clear();
    decision.queue.actions = {ActionId::NoOp};
    return decision;
}

} // namespace roe
