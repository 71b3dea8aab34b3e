#include "roe/prompts.hpp"

#include <fstream>
#include <sstream>

#include "roe/errors.hpp"

namespace roe {

namespace {

constexpr const char* kVersion = "roe-prompts-v1";

constexpr const char* kRole =
    R"(You are the commander of one side in a timed real-time strategy match. You manage the economy, construction, technology, and army of your side, and you issue macro-level orders at regular intervals. You cannot see the enemy base unless you scout it. Destroy every enemy base before the match clock runs out, and do not lose your own bases.
)";

constexpr const char* kPhaseRules =
    R"(The match is divided into named stages, in this order: Early Game, Early Mid Game, Mid Game, Late Mid Game, Late Game.
Whenever you report the current stage, use exactly one of these names, spelled exactly as written.
Division guidance: the opening with a single base before 04:00 is the Early Game. The stretch before 08:00, or the moment a second base stands without tech, is the Early Mid Game. Before 12:00, or once a tech structure is standing, the match is in the Mid Game. Before 16:00 it is the Late Mid Game; after that it is the Late Game.
)";

constexpr const char* kDecisionInstruction =
    R"(Pick your next orders from the action list in your instructions. Reply with between 1 and {max_actions} actions, one action name per line, most urgent first. Use the exact action names and nothing else. Orders that cannot be paid for or are not currently possible will be skipped.
)";

constexpr const char* kReflectionRole =
    R"(You are a veteran strategy coach reviewing a finished match from its key moments.
)";

constexpr const char* kReflectionKeyAspects =
    R"(When you review the match, focus on these aspects:
- Opening Build Order (timing of the first structures)
- Economy Management (worker production and expansion timing)
- Scouting (when information about the enemy was gathered)
- Supply Management (avoiding supply blocks)
- Technology Timing (tech structure and upgrades)
- Army Composition (unit mix against the enemy's forces)
- Defense Readiness (outposts and defensive posture before enemy waves)
- Engagement Decisions (when to attack, retreat, or recall)
)";

constexpr const char* kReflectionTask =
    R"(Review the key moments below in three steps. First, go through the aspects listed above one by one and judge how they were handled. Second, make a list of the key mistakes and missed opportunities you can see in the moments provided, such as a delayed expansion or a late first scout. Third, turn those findings into a concrete plan for the next match.
)";

constexpr const char* kReflectionFormat =
    R"(Write your answer in this exact format:
Strategic Points:
1. <first strategic point>
2. <second strategic point>
(continue through)
8. <eighth strategic point>
Key Time Points:
<mm:ss> - <recommendation for that moment>
Give exactly 8 strategic points, numbered 1 through 8. Give no fewer than 5 key time points, each on its own line as mm:ss - recommendation, with times between 00:00 and 20:00.
)";

constexpr const char* kExpertExperience =
    R"(Origin: Expert
Strategic Points:
1. Open with constant worker production and start the first supply structure before the queue blocks.
2. Send a scout by 01:36 and refresh the report before committing to any attack.
3. Take the second base at about 01:54 so the economy can support two production structures.
4. Keep building workers until both bases are saturated, then shift spending to the army.
5. Stand up two production structures and a steady melee and ranged mix before 05:00.
6. Place an outpost by 05:42 and hold a defensive posture through the first enemy waves.
7. Add the tech structure and both upgrades once the second base is paying off.
8. Strike at 09:24 or once your army power clearly exceeds the defender's, and keep striking until every enemy base is razed.
Key Time Points:
01:36 - Scout the enemy for the first time.
01:54 - Start the second base.
03:30 - Two production structures running; army production begins.
05:42 - Outpost finished; hold the line through the first big wave.
09:24 - First major engagement; attack only with a power lead.
12:12 - Push into the enemy base and raze it.
)";

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open prompt file: " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write prompt file: " + path);
    }
    out << content;
}

} // namespace

PromptCatalog PromptCatalog::builtin() {
    PromptCatalog c;
    c.version = kVersion;
    c.role = kRole;
    c.phase_rules = kPhaseRules;
    c.decision_instruction = kDecisionInstruction;
    c.reflection_role = kReflectionRole;
    c.reflection_key_aspects = kReflectionKeyAspects;
    c.reflection_task = kReflectionTask;
    c.reflection_format = kReflectionFormat;
    c.expert_experience = kExpertExperience;
    return c;
}

PromptCatalog PromptCatalog::load_dir(const std::string& dir) {
    PromptCatalog c;
    std::string version = read_file(dir + "/VERSION");
    while (!version.empty() && (version.back() == '\n' || version.back() == '\r')) {
        version.pop_back();
    }
    c.version = version;
    c.role = read_file(dir + "/role.txt");
    c.phase_rules = read_file(dir + "/phase_rules.txt");
    c.decision_instruction = read_file(dir + "/decision_instruction.txt");
    c.reflection_role = read_file(dir + "/reflection_role.txt");
    c.reflection_key_aspects = read_file(dir + "/reflection_key_aspects.txt");
    c.reflection_task = read_file(dir + "/reflection_task.txt");
    c.reflection_format = read_file(dir + "/reflection_format.txt");
    c.expert_experience = read_file(dir + "/expert_experience.txt");
    return c;
}

void PromptCatalog::save_dir(const std::string& dir) const {
    write_file(dir + "/VERSION", version + "\n");
    write_file(dir + "/role.txt", role);
    write_file(dir + "/phase_rules.txt", phase_rules);
    write_file(dir + "/decision_instruction.txt", decision_instruction);
    write_file(dir + "/reflection_role.txt", reflection_role);
    write_file(dir + "/reflection_key_aspects.txt", reflection_key_aspects);
    write_file(dir + "/reflection_task.txt", reflection_task);
    write_file(dir + "/reflection_format.txt", reflection_format);
    write_file(dir + "/expert_experience.txt", expert_experience);
}

std::string replace_placeholder(std::string text, const std::string& name,
                                const std::string& value) {
    const std::string token = "{" + name + "}";
    std::size_t pos = 0;
    while ((pos = text.find(token, pos)) != std::string::npos) {
        text.replace(pos, token.size(), value);
        pos += value.size();
    }
    return text;
}

} // namespace roe
