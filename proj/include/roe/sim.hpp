#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "roe/sim_config.hpp"

namespace roe {

// ---------------------------------------------------------------------------
// Action library
// ---------------------------------------------------------------------------

enum class ActionId {
    NoOp = 0,
    TrainWorker,
    BuildSupply,
    BuildGasCollector,
    ExpandBase,
    BuildBarracksAnalog,
    BuildTechStructure,
    TrainMeleeUnit,
    TrainRangedUnit,
    TrainSiegeUnit,
    ResearchAttackUp,
    ResearchArmorUp,
    Scout,
    Attack,
    Retreat,
    Defend,
    BuildOutpost,
    MassRecallAnalog,
};

inline constexpr int kActionCount = 18;

struct Action {
    ActionId id;
    std::string_view display_name; // exactly as shown to the LLM
};

// The fixed, ordered library. The LLM always sees all of it; affordability
// is enforced at execution time.
const std::array<Action, kActionCount>& action_library();
std::string_view action_name(ActionId id);
std::optional<ActionId> parse_action_name(std::string_view name);

// ---------------------------------------------------------------------------
// Player / game state
// ---------------------------------------------------------------------------

enum class UnitKind { Melee = 0, Ranged = 1, Siege = 2 };
using ArmyCounts = std::array<int, 3>;

enum class PendingKind {
    Worker,
    MeleeUnit,
    RangedUnit,
    SiegeUnit,
    SupplyStructure,
    GasCollector,
    Base,
    Barracks,
    TechStructure,
    Outpost,
    AttackUpgrade,
    ArmorUpgrade,
};

struct PendingItem {
    PendingKind kind;
    int ticks_remaining = 0;
};

enum class Stance { Neutral, Defending };

// Units committed to an attack. While in flight they cannot defend home
// (unless mass-recalled).
struct AttackGroup {
    ArmyCounts units{0, 0, 0};
    int arrival_tick = 0;
    bool returning = false;
};

struct PlayerState {
    std::int64_t minerals = 0;
    std::int64_t gas = 0;
    int supply_used = 0;
    int workers = 0;
    int bases = 0;
    int supply_structures = 0;
    int gas_collectors = 0;
    int production_structures = 0;
    int tech_structures = 0;
    int outposts = 0;
    bool attack_upgrade = false;
    bool armor_upgrade = false;
    ArmyCounts army{0, 0, 0};
    std::vector<PendingItem> pending;
    std::optional<AttackGroup> in_flight;
    Stance stance = Stance::Neutral;
    int units_trained = 0; // lifetime army units enqueued (drives script rotation)

    // Conservation accounting (cumulative, never reset).
    std::int64_t minerals_earned = 0;
    std::int64_t gas_earned = 0;
    std::int64_t minerals_spent = 0;
    std::int64_t gas_spent = 0;
    // Fractional income remainder for rational multipliers.
    std::int64_t mineral_carry = 0;
    std::int64_t gas_carry = 0;

    int upgrade_count() const { return (attack_upgrade ? 1 : 0) + (armor_upgrade ? 1 : 0); }
};

int supply_cap(const PlayerState& p, const SimConfig& cfg);
int army_supply(const PlayerState& p, const SimConfig& cfg);
// Power of the home army: sum of count * unit_power * (1 + bonus * upgrades).
double army_power(const PlayerState& p, const SimConfig& cfg);
double group_power(const ArmyCounts& units, int upgrades, const SimConfig& cfg);

// What the player knows about the opponent: a snapshot taken when a scout
// executed, stale-dated with its tick.
struct ScoutReport {
    int tick = 0;
    int bases = 0;
    int workers = 0;
    ArmyCounts army{0, 0, 0};
    double army_power = 0.0;
    int tech_structures = 0;
};

enum class Outcome { Victory, Defeat, Timeout };

const char* to_string(Outcome o);

struct FinalSnapshot {
    int player_bases = 0;
    int opponent_bases = 0;
    int player_workers = 0;
    int opponent_workers = 0;
    double player_army_power = 0.0;
    double opponent_army_power = 0.0;
};

struct MatchResult {
    Outcome outcome = Outcome::Timeout;
    int tick_ended = 0;
    FinalSnapshot final_state_snapshot;
};

struct GameState {
    int tick = 0;
    PlayerState player;
    PlayerState opponent;
    std::optional<ScoutReport> opponent_knowledge;
    DifficultyLevel difficulty = DifficultyLevel::Hard;
    std::mt19937_64 rng;
    std::uint64_t seed = 0;
    std::optional<MatchResult> terminal;

    std::shared_ptr<const SimConfig> config;

    // Jittered copy of the difficulty's wave schedule, drawn once at
    // new_game from the seed.
    std::vector<int> wave_ticks;
    int next_wave = 0;

    // Events that occurred since the last observation, consumed by
    // observe_text.
    std::vector<std::string> recent_events;

    const SimConfig& cfg() const { return *config; }
};

// Per-tick sample for the resource/unit time series (Fig. 5/6 shape).
struct TickSample {
    int tick = 0;
    std::int64_t player_minerals_total = 0; // cumulative collected
    std::int64_t player_gas_total = 0;
    int player_workers = 0;
    int player_army_supply = 0;
    std::int64_t opponent_minerals_total = 0;
    std::int64_t opponent_gas_total = 0;
    int opponent_workers = 0;
    int opponent_army_supply = 0;
};

struct RejectedAction {
    ActionId action;
    std::string reason;
};

struct StepOutcome {
    std::vector<ActionId> executed;
    std::vector<RejectedAction> rejected;
    std::vector<std::string> events;
    std::vector<TickSample> samples; // one per tick advanced
};

// ---------------------------------------------------------------------------
// Observation
// ---------------------------------------------------------------------------

struct ObservationMetrics {
    std::int64_t minerals = 0;
    std::int64_t gas = 0;
    int supply_used = 0;
    int supply_cap = 0;
    int workers = 0;
    int bases = 0;
    ArmyCounts army{0, 0, 0};
    double army_power = 0.0;
    int supply_structures = 0;
    int gas_collectors = 0;
    int production_structures = 0;
    int tech_structures = 0;
    int outposts = 0;
    int upgrades = 0;
    int pending_count = 0;
};

struct TextObservation {
    int tick = 0;
    std::string text;
    ObservationMetrics metrics;
    std::vector<std::string> events;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

GameState new_game(const SimConfig& config, std::uint64_t seed, DifficultyLevel difficulty);

// The full fixed library, in canonical order. Throws StateError on a
// terminal state.
std::vector<Action> legal_actions(const GameState& state);

// Executes the queued actions at the current tick (unaffordable or invalid
// ones are recorded no-ops), then advances decision_interval ticks.
StepOutcome step(GameState& state, const std::vector<ActionId>& action_queue,
                 int decision_interval);

enum class CombatSide { Attacker, Defender };

struct CombatResult {
    CombatSide survivor_side;
    double survivor_power;
};

// Lanchester-square resolution; ties go to the defender with mutual
// annihilation.
CombatResult resolve_combat(double attacker_power, double defender_power);

TextObservation observe_text(const GameState& state);

std::optional<MatchResult> is_terminal(const GameState& state);

// The scripted opponent's actions for the current tick. Deterministic given
// the state (the seeded wave jitter is precomputed at new_game).
std::vector<ActionId> opponent_policy(const GameState& state);

// Pure schedule: units the opponent commits to the wave at wave_index.
int wave_quota(const DifficultyParams& params, int wave_index);

// "mm:ss" at 1 tick per second.
std::string format_time(int tick);

// Canonical JSON dump of the full state (bit-identical for identical
// trajectories) and an FNV-1a hash of it.
std::string state_to_json(const GameState& state);
std::uint64_t state_hash(const GameState& state);

} // namespace roe
