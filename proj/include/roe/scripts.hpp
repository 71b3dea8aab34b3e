#pragma once

#include <memory>
#include <string>
#include <vector>

#include "roe/llm_client.hpp"

namespace roe {

// Built-in script tables for offline runs and experiments:
//   do-nothing  NO_OP decisions, well-formed reflections
//   expert      phase-keyed macro play tuned to beat the Hard opponent
//   staged      weak play that improves as its own reflections are fed back
//               into the system prompt (defeat -> defeat -> victory arc)
ScriptTable builtin_script_table(const std::string& name);

std::vector<std::string> builtin_script_names();

// How a run names its backend; serialized into run manifests.
struct BackendSpec {
    std::string kind = "scripted";   // scripted | http | replay
    std::string script = "builtin:expert"; // builtin:<name> or a JSON file path
    std::string endpoint_url;
    std::string model_name = "gpt-3.5-turbo";
    std::string api_key_env_var = "ROE_API_KEY";
    double timeout_s = 60.0;
    std::string session_path;        // replay source
    std::string record_path;         // when set, wrap with a recorder

    std::string to_json_string() const;
    static BackendSpec from_json_string(const std::string& text);
};

std::shared_ptr<LlmBackend> make_backend(const BackendSpec& spec);

} // namespace roe
