#include "roe/scripts.hpp"

#include <json.hpp>

#include "roe/errors.hpp"

namespace roe {

using nlohmann::json;

namespace {

// A well-formed reflection any offline backend can return.
constexpr const char* kGenericReflection =
    R"(Strategic Points:
1. Keep worker production running from the first second.
2. Build the first supply structure before the queue blocks.
3. Scout before 02:00 so the enemy plan is known.
4. Take a second base once the first is saturated.
5. Keep at least two production structures busy from the fourth minute.
6. Add an outpost before the first enemy wave lands.
7. Shift spending from economy to army as the middle of the match nears.
8. Attack only with a clear power lead and keep attacking.
Key Time Points:
01:30 - First scout leaves the base.
02:00 - Second base started.
04:00 - Army production running.
06:00 - Defensive outpost in place.
10:00 - Push when stronger.
)";

// Stage 1 of the staged backend: the reflection that shifts play from idle
// to economy-focused. The "macro foundation" marker is what its decision
// rules key on.
constexpr const char* kStageOneReflection =
    R"(Strategic Points:
1. Priority: macro foundation. Rebuild the economy engine before anything else.
2. Train workers continuously; an idle base is a lost match.
3. Keep supply ahead of production so nothing blocks.
4. Collect gas early so later technology is not delayed.
5. Scout the enemy to know when the waves are coming.
6. Do not waste resources on premature attacks.
7. Hold a defensive posture while the economy grows.
8. Bank a stronger economy than the enemy before arming.
Key Time Points:
01:30 - First scout.
02:30 - Worker production uninterrupted so far.
03:00 - Supply comfortably ahead.
05:00 - Gas income established.
08:00 - Economy clearly ahead of the enemy.
)";

// Stage 2: the reflection that unlocks full macro play with timed attacks.
constexpr const char* kStageTwoReflection =
    R"(Strategic Points:
1. Priority: decisive aggression. Convert the economic lead into constant pressure.
2. Keep worker production running until both bases saturate.
3. Keep supply ahead at all times.
4. Add production structures whenever the bank grows.
5. Mix ranged units behind a melee line.
6. Fortify the home front with outposts before each enemy wave.
7. Strike as soon as army power clearly leads the defender's.
8. Keep attacking until every enemy base is razed.
Key Time Points:
01:36 - Scout first.
01:54 - Second base.
04:00 - Army production at full tilt.
08:00 - Outposts standing.
12:00 - Decisive push.
)";

// Phase-keyed macro bundles. "Phase: <name>" appears exactly once per
// decision prompt (in the situation report), so plain substrings suffice.
constexpr const char* kOpeningBundle =
    "TRAIN_WORKER\nBUILD_SUPPLY\nSCOUT\nBUILD_BARRACKS_ANALOG\nTRAIN_MELEE_UNIT";
constexpr const char* kEarlyMidBundle =
    "TRAIN_WORKER\nBUILD_SUPPLY\nEXPAND_BASE\nBUILD_GAS_COLLECTOR\nTRAIN_MELEE_UNIT";
constexpr const char* kMidBundle =
    "BUILD_SUPPLY\nBUILD_BARRACKS_ANALOG\nBUILD_GAS_COLLECTOR\nTRAIN_RANGED_UNIT\nTRAIN_MELEE_UNIT";
constexpr const char* kLateMidBundle =
    "BUILD_SUPPLY\nBUILD_OUTPOST\nTRAIN_RANGED_UNIT\nTRAIN_MELEE_UNIT\nATTACK";
constexpr const char* kLateBundle =
    "TRAIN_RANGED_UNIT\nTRAIN_MELEE_UNIT\nBUILD_SUPPLY\nATTACK\nDEFEND";

ScriptTable make_do_nothing() {
    ScriptTable t;
    t.rules.push_back({"TEMP=1", false, kGenericReflection});
    t.default_response = "NO_OP";
    return t;
}

ScriptTable make_expert() {
    ScriptTable t;
    t.rules.push_back({"TEMP=1", false, kGenericReflection});
    t.rules.push_back({"Phase: Early Game", false, kOpeningBundle});
    t.rules.push_back({"Phase: Early Mid Game", false, kEarlyMidBundle});
    t.rules.push_back({"Phase: Mid Game", false, kMidBundle});
    t.rules.push_back({"Phase: Late Mid Game", false, kLateMidBundle});
    t.rules.push_back({"Phase: Late Game", false, kLateBundle});
    t.default_response = "TRAIN_WORKER";
    return t;
}

ScriptTable make_staged() {
    ScriptTable t;
    // Reflection requests first: the previous experience embedded in the
    // prompt decides which stage comes next.
    t.rules.push_back({"TEMP=1[\\s\\S]*macro foundation", true, kStageTwoReflection});
    t.rules.push_back({"TEMP=1", false, kStageOneReflection});
    // Stage-2 decisions: full macro play, keyed on the marker the stage-2
    // reflection carries into the system prompt.
    t.rules.push_back({"decisive aggression[\\s\\S]*Phase: Early Game", true, kOpeningBundle});
    t.rules.push_back(
        {"decisive aggression[\\s\\S]*Phase: Early Mid Game", true, kEarlyMidBundle});
    t.rules.push_back({"decisive aggression[\\s\\S]*Phase: Mid Game", true, kMidBundle});
    t.rules.push_back(
        {"decisive aggression[\\s\\S]*Phase: Late Mid Game", true, kLateMidBundle});
    t.rules.push_back({"decisive aggression[\\s\\S]*Phase: Late Game", true, kLateBundle});
    // Stage-1 decisions: economy only, no army.
    t.rules.push_back(
        {"macro foundation", false, "TRAIN_WORKER\nBUILD_SUPPLY\nBUILD_GAS_COLLECTOR\nSCOUT\nDEFEND"});
    t.default_response = "NO_OP";
    return t;
}

} // namespace

std::vector<std::string> builtin_script_names() {
    return {"do-nothing", "expert", "staged"};
}

ScriptTable builtin_script_table(const std::string& name) {
    if (name == "do-nothing") {
        return make_do_nothing();
    }
    if (name == "expert") {
        return make_expert();
    }
    if (name == "staged") {
        return make_staged();
    }
    throw ConfigError("unknown builtin script table: " + name);
}

std::string BackendSpec::to_json_string() const {
    return json{{"kind", kind},
                {"script", script},
                {"endpoint_url", endpoint_url},
                {"model_name", model_name},
                {"api_key_env_var", api_key_env_var},
                {"timeout_s", timeout_s},
                {"session_path", session_path},
                {"record_path", record_path}}
        .dump(2);
}

BackendSpec BackendSpec::from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("backend spec is not valid JSON: ") + e.what());
    }
    BackendSpec s;
    s.kind = j.value("kind", "scripted");
    s.script = j.value("script", "builtin:expert");
    s.endpoint_url = j.value("endpoint_url", "");
    s.model_name = j.value("model_name", "gpt-3.5-turbo");
    s.api_key_env_var = j.value("api_key_env_var", "ROE_API_KEY");
    s.timeout_s = j.value("timeout_s", 60.0);
    s.session_path = j.value("session_path", "");
    s.record_path = j.value("record_path", "");
    return s;
}

std::shared_ptr<LlmBackend> make_backend(const BackendSpec& spec) {
    std::shared_ptr<LlmBackend> backend;
    if (spec.kind == "scripted") {
        ScriptTable table;
        const std::string builtin_prefix = "builtin:";
        if (spec.script.rfind(builtin_prefix, 0) == 0) {
            table = builtin_script_table(spec.script.substr(builtin_prefix.size()));
        } else {
            table = ScriptTable::load_file(spec.script);
        }
        backend = std::make_shared<ScriptedBackend>(std::move(table));
    } else if (spec.kind == "http") {
        HttpBackendConfig cfg;
        cfg.endpoint_url = spec.endpoint_url;
        cfg.model_name = spec.model_name;
        cfg.api_key_env_var = spec.api_key_env_var;
        cfg.timeout_s = spec.timeout_s;
        backend = std::make_shared<HttpBackend>(cfg);
    } else if (spec.kind == "replay") {
        if (spec.session_path.empty()) {
            throw ConfigError("replay backend requires session_path");
        }
        backend = std::make_shared<ReplayBackend>(spec.session_path);
    } else {
        throw ConfigError("unknown backend kind: " + spec.kind);
    }
    if (!spec.record_path.empty()) {
        backend = std::make_shared<RecordingBackend>(backend, spec.record_path);
    }
    return backend;
}

} // namespace roe
