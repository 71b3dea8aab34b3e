#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roe/sim.hpp"

namespace roe {

class LlmBackend;
struct PromptCatalog;

// ---------------------------------------------------------------------------
// Game phases
// ---------------------------------------------------------------------------

// Totally ordered as listed. The keyword strings appear verbatim in L2
// situation text; key-frame search depends on the exact spelling.
enum class GamePhase {
    EarlyGame = 0,
    EarlyMidGame = 1,
    MidGame = 2,
    LateMidGame = 3,
    LateGame = 4,
};

inline constexpr int kPhaseCount = 5;

std::string_view phase_keyword(GamePhase phase);

// Occurrence counts for each phase keyword in a text. "Mid Game" inside
// "Early Mid Game" / "Late Mid Game" is not double counted: the longer
// keywords are matched first and masked out.
std::array<int, kPhaseCount> phase_keyword_occurrences(const std::string& text);

// The phase whose keyword occurs in the text, when exactly one keyword
// occurrence exists overall; otherwise nullopt.
std::optional<GamePhase> extract_unique_phase(const std::string& text);

// Deterministic rule table over tick / bases / tech. First matching row
// wins:
//   Early Game      tick < 240 and bases <= 1
//   Early Mid Game  tick < 480, or bases = 2 with no tech structure
//   Mid Game        tick < 720, or a tech structure is present
//   Late Mid Game   tick < 960
//   Late Game       otherwise
GamePhase classify_phase(const GameState& state);

// ---------------------------------------------------------------------------
// Summaries
// ---------------------------------------------------------------------------

struct L1Summary {
    int tick_start = 0;
    int tick_end = 0;
    std::string delta_text;
};

// Folds a window of observations into a compressed delta description.
// Pure; throws ArgumentError on an empty window.
L1Summary l1_summarize(const std::vector<TextObservation>& observations);

struct L2Metrics {
    std::int64_t minerals = 0;
    std::int64_t gas = 0;
    int supply_used = 0;
    int supply_cap = 0;
    int worker_count = 0;
    double army_power = 0.0;
    int base_count = 0;
};

struct L2Summary {
    int tick = 0;
    std::string situation_text;
    GamePhase phase = GamePhase::EarlyGame;
    L2Metrics metrics;
};

enum class SummaryMode { Rule, Llm };

struct L2Options {
    SummaryMode mode = SummaryMode::Rule;
    LlmBackend* client = nullptr;          // required for SummaryMode::Llm
    const PromptCatalog* catalog = nullptr;
    // Floor for the phase label; episode pipelines pass the previous
    // record's phase so the labelled sequence never moves backward.
    GamePhase min_phase = GamePhase::EarlyGame;
    std::string* warning = nullptr;        // set on llm-mode fallback
};

// Renders the decision-rate situation report. Rule mode is a pure template
// fill using classify_phase. Llm mode asks the backend to name the phase
// and validates that the reply carries exactly one known keyword, falling
// back to rule mode (with a warning) otherwise.
L2Summary l2_summarize(const std::vector<L1Summary>& l1s, const GameState& state,
                       const L2Options& options = {});

// ---------------------------------------------------------------------------
// Episode records
// ---------------------------------------------------------------------------

// One record per decision point; an episode is the ordered list.
struct FrameRecord {
    int index = 0;
    L2Summary l2;
    std::vector<ActionId> action_taken;
    std::vector<std::string> events;
    // Full provenance of the decision, kept so every LLM choice is
    // recoverable from the log.
    std::string raw_response;
    std::vector<RejectedAction> rejected;
};

} // namespace roe
