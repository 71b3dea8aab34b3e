#include "roe/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "roe/errors.hpp"

namespace roe {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Action library
// ---------------------------------------------------------------------------

const std::array<Action, kActionCount>& action_library() {
    static const std::array<Action, kActionCount> library = {{
        {ActionId::NoOp, "NO_OP"},
        {ActionId::TrainWorker, "TRAIN_WORKER"},
        {ActionId::BuildSupply, "BUILD_SUPPLY"},
        {ActionId::BuildGasCollector, "BUILD_GAS_COLLECTOR"},
        {ActionId::ExpandBase, "EXPAND_BASE"},
        {ActionId::BuildBarracksAnalog, "BUILD_BARRACKS_ANALOG"},
        {ActionId::BuildTechStructure, "BUILD_TECH_STRUCTURE"},
        {ActionId::TrainMeleeUnit, "TRAIN_MELEE_UNIT"},
        {ActionId::TrainRangedUnit, "TRAIN_RANGED_UNIT"},
        {ActionId::TrainSiegeUnit, "TRAIN_SIEGE_UNIT"},
        {ActionId::ResearchAttackUp, "RESEARCH_ATTACK_UP"},
        {ActionId::ResearchArmorUp, "RESEARCH_ARMOR_UP"},
        {ActionId::Scout, "SCOUT"},
        {ActionId::Attack, "ATTACK"},
        {ActionId::Retreat, "RETREAT"},
        {ActionId::Defend, "DEFEND"},
        {ActionId::BuildOutpost, "BUILD_OUTPOST"},
        {ActionId::MassRecallAnalog, "MASS_RECALL_ANALOG"},
    }};
    return library;
}

std::string_view action_name(ActionId id) {
    return action_library()[static_cast<int>(id)].display_name;
}

std::optional<ActionId> parse_action_name(std::string_view name) {
    for (const auto& a : action_library()) {
        if (a.display_name == name) {
            return a.id;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Derived player quantities
// ---------------------------------------------------------------------------

int supply_cap(const PlayerState& p, const SimConfig& cfg) {
    int cap = cfg.base_supply * p.bases + cfg.pylon_supply * p.supply_structures;
    return std::min(cap, cfg.max_supply);
}

static const UnitStats& unit_stats(UnitKind kind, const SimConfig& cfg) {
    switch (kind) {
        case UnitKind::Melee: return cfg.melee;
        case UnitKind::Ranged: return cfg.ranged;
        case UnitKind::Siege: return cfg.siege;
    }
    return cfg.melee;
}

int army_supply(const PlayerState& p, const SimConfig& cfg) {
    int total = 0;
    for (int k = 0; k < 3; ++k) {
        total += p.army[k] * unit_stats(static_cast<UnitKind>(k), cfg).supply;
    }
    if (p.in_flight) {
        for (int k = 0; k < 3; ++k) {
            total += p.in_flight->units[k] * unit_stats(static_cast<UnitKind>(k), cfg).supply;
        }
    }
    return total;
}

double group_power(const ArmyCounts& units, int upgrades, const SimConfig& cfg) {
    double base = 0.0;
    for (int k = 0; k < 3; ++k) {
        base += units[k] * unit_stats(static_cast<UnitKind>(k), cfg).power;
    }
    return base * (1.0 + cfg.upgrade_power_bonus * upgrades);
}

double army_power(const PlayerState& p, const SimConfig& cfg) {
    return group_power(p.army, p.upgrade_count(), cfg);
}

std::string format_time(int tick) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%02d:%02d", tick / 60, tick % 60);
    return buf;
}

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Victory: return "Victory";
        case Outcome::Defeat: return "Defeat";
        case Outcome::Timeout: return "Timeout";
    }
    return "Timeout";
}

// ---------------------------------------------------------------------------
// Game setup
// ---------------------------------------------------------------------------

GameState new_game(const SimConfig& config, std::uint64_t seed, DifficultyLevel difficulty) {
    config.validate();
    GameState s;
    s.config = std::make_shared<SimConfig>(config);
    s.difficulty = difficulty;
    s.seed = seed;
    s.rng.seed(seed);

    auto init_player = [&](PlayerState& p) {
        p.minerals = config.starting_minerals;
        p.workers = config.starting_workers;
        p.bases = 1;
        p.supply_used = config.starting_workers * config.worker.supply;
    };
    init_player(s.player);
    init_player(s.opponent);

    const auto& params = config.params(difficulty);
    s.wave_ticks.reserve(params.attack_wave_ticks.size());
    for (int base_tick : params.attack_wave_ticks) {
        int jitter = 0;
        if (config.wave_tick_jitter > 0) {
            std::uniform_int_distribution<int> dist(-config.wave_tick_jitter,
                                                    config.wave_tick_jitter);
            jitter = dist(s.rng);
        }
        s.wave_ticks.push_back(std::max(1, base_tick + jitter));
    }
    return s;
}

std::vector<Action> legal_actions(const GameState& state) {
    if (state.terminal) {
        throw StateError("legal_actions called on a terminal state");
    }
    const auto& lib = action_library();
    return std::vector<Action>(lib.begin(), lib.end());
}

std::optional<MatchResult> is_terminal(const GameState& state) {
    if (state.terminal) {
        return state.terminal;
    }
    const SimConfig& cfg = state.cfg();
    Outcome outcome;
    if (state.opponent.bases == 0) {
        outcome = Outcome::Victory;
    } else if (state.player.bases == 0) {
        outcome = Outcome::Defeat;
    } else if (state.tick >= cfg.max_ticks) {
        outcome = Outcome::Timeout;
    } else {
        return std::nullopt;
    }
    MatchResult r;
    r.outcome = outcome;
    r.tick_ended = state.tick;
    r.final_state_snapshot = FinalSnapshot{
        state.player.bases,  state.opponent.bases,
        state.player.workers, state.opponent.workers,
        army_power(state.player, cfg), army_power(state.opponent, cfg)};
    return r;
}

// ---------------------------------------------------------------------------
// Combat
// ---------------------------------------------------------------------------

CombatResult resolve_combat(double attacker_power, double defender_power) {
    attacker_power = std::max(0.0, attacker_power);
    defender_power = std::max(0.0, defender_power);
    if (attacker_power > defender_power) {
        return {CombatSide::Attacker,
                std::sqrt(attacker_power * attacker_power - defender_power * defender_power)};
    }
    // Ties go to the defender with mutual annihilation.
    return {CombatSide::Defender,
            std::sqrt(defender_power * defender_power - attacker_power * attacker_power)};
}

// Scale unit counts down to match the surviving power fraction, rounding
// each kind down.
static ArmyCounts reconstruct_survivors(const ArmyCounts& before, double power_before,
                                        double survivor_power) {
    ArmyCounts after{0, 0, 0};
    if (power_before <= 0.0) {
        return after;
    }
    double scale = survivor_power / power_before;
    for (int k = 0; k < 3; ++k) {
        after[k] = static_cast<int>(std::floor(before[k] * scale + 1e-9));
    }
    return after;
}

// ---------------------------------------------------------------------------
// Internal helpers
// ---------------------------------------------------------------------------

namespace {

struct Ledger {
    StepOutcome* outcome = nullptr;   // null for opponent actions
    GameState* state = nullptr;
    bool player_side = true;

    void executed(ActionId a) {
        if (outcome && player_side) {
            outcome->executed.push_back(a);
        }
    }
    void rejected(ActionId a, std::string reason) {
        if (outcome && player_side) {
            outcome->rejected.push_back({a, std::move(reason)});
        }
    }
    void event(std::string text) {
        state->recent_events.push_back(text);
        if (outcome) {
            outcome->events.push_back(std::move(text));
        }
    }
};

int pending_count(const PlayerState& p, PendingKind kind) {
    int n = 0;
    for (const auto& item : p.pending) {
        if (item.kind == kind) {
            ++n;
        }
    }
    return n;
}

int pending_units(const PlayerState& p) {
    return pending_count(p, PendingKind::MeleeUnit) + pending_count(p, PendingKind::RangedUnit) +
           pending_count(p, PendingKind::SiegeUnit);
}

bool spend(PlayerState& p, int minerals, int gas) {
    if (p.minerals < minerals || p.gas < gas) {
        return false;
    }
    p.minerals -= minerals;
    p.gas -= gas;
    p.minerals_spent += minerals;
    p.gas_spent += gas;
    return true;
}

void enqueue(PlayerState& p, PendingKind kind, int ticks) {
    p.pending.push_back({kind, ticks});
}

ScoutReport make_scout_report(const GameState& s) {
    const SimConfig& cfg = s.cfg();
    ScoutReport r;
    r.tick = s.tick;
    r.bases = s.opponent.bases;
    r.workers = s.opponent.workers;
    r.army = s.opponent.army;
    r.army_power = army_power(s.opponent, cfg);
    r.tech_structures = s.opponent.tech_structures;
    return r;
}

// True when the opponent script should commit everything it has.
bool allin_condition(const GameState& s) {
    const SimConfig& cfg = s.cfg();
    const auto& params = cfg.params(s.difficulty);
    if (params.attack_wave_ticks.empty() || s.tick < params.attack_wave_ticks.front()) {
        return false;
    }
    double own = army_power(s.opponent, cfg);
    return own >= cfg.allin_min_power &&
           army_power(s.player, cfg) < cfg.allin_army_ratio * own;
}

// Units the opponent commits when its Attack executes: its current wave
// quota, or everything under the all-in condition.
ArmyCounts opponent_commit(const GameState& s, bool allin) {
    const SimConfig& cfg = s.cfg();
    const PlayerState& o = s.opponent;
    if (allin) {
        return o.army;
    }
    int wave_index = std::max(0, s.next_wave - 1);
    int quota = wave_quota(cfg.params(s.difficulty), wave_index);
    ArmyCounts take{0, 0, 0};
    int remaining = quota;
    for (int k = 0; k < 3 && remaining > 0; ++k) {
        int n = std::min(o.army[k], remaining);
        take[k] = n;
        remaining -= n;
    }
    return take;
}

// Destroy units until supply_used fits the (possibly shrunk) cap. Order:
// siege, ranged, melee, then workers.
void enforce_supply_cap(PlayerState& p, const SimConfig& cfg, Ledger& log, bool is_player) {
    int cap = supply_cap(p, cfg);
    if (p.supply_used <= cap) {
        return;
    }
    int destroyed = 0;
    const UnitKind kill_order[] = {UnitKind::Siege, UnitKind::Ranged, UnitKind::Melee};
    for (UnitKind kind : kill_order) {
        int k = static_cast<int>(kind);
        const UnitStats& stats = unit_stats(kind, cfg);
        while (p.army[k] > 0 && p.supply_used > cap) {
            --p.army[k];
            p.supply_used -= stats.supply;
            ++destroyed;
        }
    }
    while (p.workers > 0 && p.supply_used > cap) {
        --p.workers;
        p.supply_used -= cfg.worker.supply;
        ++destroyed;
    }
    if (destroyed > 0 && is_player) {
        log.event("lost " + std::to_string(destroyed) + " units to the fall of the base");
    }
}

void execute_action(GameState& s, bool player_side, ActionId action, Ledger& log) {
    const SimConfig& cfg = s.cfg();
    PlayerState& self = player_side ? s.player : s.opponent;
    int cap = supply_cap(self, cfg);

    auto reject = [&](const char* reason) { log.rejected(action, reason); };
    auto train_unit = [&](const UnitStats& stats, PendingKind kind, const char* label) {
        if (self.production_structures < 1) {
            reject("requires a production structure");
            return;
        }
        if (kind == PendingKind::SiegeUnit && self.tech_structures < 1) {
            reject("requires a tech structure");
            return;
        }
        if (pending_units(self) >= self.production_structures) {
            reject("all production structures busy");
            return;
        }
        if (self.supply_used + stats.supply > cap) {
            reject("insufficient supply");
            return;
        }
        if (!spend(self, stats.mineral_cost, stats.gas_cost)) {
            reject("insufficient resources");
            return;
        }
        self.supply_used += stats.supply;
        self.units_trained += 1;
        enqueue(self, kind, stats.train_ticks);
        (void)label;
        log.executed(action);
    };

    switch (action) {
        case ActionId::NoOp:
            log.executed(action);
            break;

        case ActionId::TrainWorker: {
            if (pending_count(self, PendingKind::Worker) >= self.bases) {
                reject("all bases already training workers");
                return;
            }
            int worker_capacity =
                cfg.workers_per_base * (self.bases + pending_count(self, PendingKind::Base));
            if (self.workers + pending_count(self, PendingKind::Worker) >= worker_capacity) {
                reject("worker capacity reached");
                return;
            }
            if (self.supply_used + cfg.worker.supply > cap) {
                reject("insufficient supply");
                return;
            }
            if (!spend(self, cfg.worker.mineral_cost, cfg.worker.gas_cost)) {
                reject("insufficient resources");
                return;
            }
            self.supply_used += cfg.worker.supply;
            enqueue(self, PendingKind::Worker, cfg.worker.train_ticks);
            log.executed(action);
            break;
        }

        case ActionId::BuildSupply: {
            if (cap >= cfg.max_supply) {
                reject("supply cap at maximum");
                return;
            }
            int projected_headroom =
                cap + cfg.pylon_supply * pending_count(self, PendingKind::SupplyStructure) -
                self.supply_used;
            if (projected_headroom >= 2 * cfg.pylon_supply) {
                reject("sufficient supply headroom");
                return;
            }
            if (!spend(self, cfg.supply_structure.mineral_cost, cfg.supply_structure.gas_cost)) {
                reject("insufficient resources");
                return;
            }
            enqueue(self, PendingKind::SupplyStructure, cfg.supply_structure.build_ticks);
            log.executed(action);
            break;
        }

        case ActionId::BuildGasCollector: {
            int limit = cfg.max_gas_collectors_per_base * self.bases;
            if (self.gas_collectors + pending_count(self, PendingKind::GasCollector) >= limit) {
                reject("gas collector limit reached");
                return;
            }
            if (pending_count(self, PendingKind::GasCollector) > 0) {
                reject("gas collector already under construction");
                return;
            }
            if (!spend(self, cfg.gas_collector.mineral_cost, cfg.gas_collector.gas_cost)) {
                reject("insufficient resources");
                return;
            }
            enqueue(self, PendingKind::GasCollector, cfg.gas_collector.build_ticks);
            log.executed(action);
            break;
        }

        case ActionId::ExpandBase: {
            if (self.bases + pending_count(self, PendingKind::Base) >= cfg.max_bases) {
                reject("base limit reached");
                return;
            }
            if (pending_count(self, PendingKind::Base) > 0) {
                reject("expansion already underway");
                return;
            }
            if (!spend(self, cfg.base_building.mineral_cost, cfg.base_building.gas_cost)) {
                reject("insufficient resources");
                return;
            }
            enqueue(self, PendingKind::Base, cfg.base_building.build_ticks);
            log.executed(action);
            break;
        }

        case ActionId::BuildBarracksAnalog: {
            if (self.production_structures + pending_count(self, PendingKind::Barracks) >=
                cfg.max_production_structures) {
                reject("production structure limit reached");
                return;
            }
            if (pending_count(self, PendingKind::Barracks) > 0) {
                reject("production structure already under construction");
                return;
            }
            if (!spend(self, cfg.production_structure.mineral_cost,
                       cfg.production_structure.gas_cost)) {
                reject("insufficient resources");
                return;
            }
            enqueue(self, PendingKind::Barracks, cfg.production_structure.build_ticks);
            log.executed(action);
            break;
        }

        case ActionId::BuildTechStructure: {
            if (self.production_structures < 1) {
                reject("requires a production structure");
                return;
            }
            if (self.tech_structures + pending_count(self, PendingKind::TechStructure) >=
                cfg.max_tech_structures) {
                reject("tech structure limit reached");
                return;
            }
            if (!spend(self, cfg.tech_structure.mineral_cost, cfg.tech_structure.gas_cost)) {
                reject("insufficient resources");
                return;
            }
            enqueue(self, PendingKind::TechStructure, cfg.tech_structure.build_ticks);
            log.executed(action);
            break;
        }

        case ActionId::TrainMeleeUnit:
            train_unit(cfg.melee, PendingKind::MeleeUnit, "melee");
            break;
        case ActionId::TrainRangedUnit:
            train_unit(cfg.ranged, PendingKind::RangedUnit, "ranged");
            break;
        case ActionId::TrainSiegeUnit:
            train_unit(cfg.siege, PendingKind::SiegeUnit, "siege");
            break;

        case ActionId::ResearchAttackUp:
        case ActionId::ResearchArmorUp: {
            bool attack = action == ActionId::ResearchAttackUp;
            PendingKind kind = attack ? PendingKind::AttackUpgrade : PendingKind::ArmorUpgrade;
            bool done = attack ? self.attack_upgrade : self.armor_upgrade;
            if (self.tech_structures < 1) {
                reject("requires a tech structure");
                return;
            }
            if (done || pending_count(self, kind) > 0) {
                reject("upgrade already researched");
                return;
            }
            if (!spend(self, cfg.research_mineral_cost, cfg.research_gas_cost)) {
                reject("insufficient resources");
                return;
            }
            enqueue(self, kind, cfg.research_ticks);
            log.executed(action);
            break;
        }

        case ActionId::Scout: {
            if (player_side) {
                s.opponent_knowledge = make_scout_report(s);
                log.event("scout report received (as of " + format_time(s.tick) + ")");
            }
            log.executed(action);
            break;
        }

        case ActionId::Attack: {
            if (self.in_flight) {
                reject("an attack is already underway");
                return;
            }
            ArmyCounts commit;
            if (player_side) {
                commit = self.army;
            } else {
                bool allin = allin_condition(s);
                commit = opponent_commit(s, allin);
            }
            int committed = commit[0] + commit[1] + commit[2];
            if (committed == 0) {
                reject("no army to attack with");
                return;
            }
            if (committed < cfg.min_attack_units) {
                reject("army too small to march out");
                return;
            }
            for (int k = 0; k < 3; ++k) {
                self.army[k] -= commit[k];
            }
            self.in_flight = AttackGroup{commit, s.tick + cfg.attack_travel_ticks, false};
            self.stance = Stance::Neutral;
            log.executed(action);
            if (player_side) {
                log.event("our army marched out at " + format_time(s.tick));
            }
            break;
        }

        case ActionId::Retreat: {
            if (!self.in_flight || self.in_flight->returning) {
                reject("no outbound attack to recall");
                return;
            }
            self.in_flight->returning = true;
            self.in_flight->arrival_tick = s.tick + cfg.attack_travel_ticks;
            log.executed(action);
            if (player_side) {
                log.event("attack called off, army returning");
            }
            break;
        }

        case ActionId::Defend: {
            self.stance = Stance::Defending;
            log.executed(action);
            break;
        }

        case ActionId::BuildOutpost: {
            if (self.outposts + pending_count(self, PendingKind::Outpost) >= cfg.max_outposts) {
                reject("outpost limit reached");
                return;
            }
            if (pending_count(self, PendingKind::Outpost) > 0) {
                reject("outpost already under construction");
                return;
            }
            if (!spend(self, cfg.outpost.mineral_cost, cfg.outpost.gas_cost)) {
                reject("insufficient resources");
                return;
            }
            enqueue(self, PendingKind::Outpost, cfg.outpost.build_ticks);
            log.executed(action);
            break;
        }

        case ActionId::MassRecallAnalog: {
            if (self.tech_structures < 1) {
                reject("requires a tech structure");
                return;
            }
            if (!self.in_flight) {
                reject("no army in the field to recall");
                return;
            }
            if (!spend(self, 0, cfg.mass_recall_gas_cost)) {
                reject("insufficient resources");
                return;
            }
            for (int k = 0; k < 3; ++k) {
                self.army[k] += self.in_flight->units[k];
            }
            self.in_flight.reset();
            log.executed(action);
            if (player_side) {
                log.event("army recalled home instantly");
            }
            break;
        }
    }
}

void accrue_income(PlayerState& p, const SimConfig& cfg, int mult_num, int mult_den) {
    int miners = std::min(p.workers, cfg.workers_per_base * p.bases);
    std::int64_t mineral_raw = static_cast<std::int64_t>(miners) * cfg.mineral_rate;
    std::int64_t gas_raw = static_cast<std::int64_t>(p.gas_collectors) * cfg.gas_rate;
    if (p.bases == 0) {
        mineral_raw = 0;
        gas_raw = 0;
    }
    p.mineral_carry += mineral_raw * mult_num;
    std::int64_t credit = p.mineral_carry / mult_den;
    p.mineral_carry %= mult_den;
    p.minerals += credit;
    p.minerals_earned += credit;

    p.gas_carry += gas_raw * mult_num;
    std::int64_t gas_credit = p.gas_carry / mult_den;
    p.gas_carry %= mult_den;
    p.gas += gas_credit;
    p.gas_earned += gas_credit;
}

void progress_queues(PlayerState& p, Ledger& log, bool is_player) {
    auto it = p.pending.begin();
    while (it != p.pending.end()) {
        if (--it->ticks_remaining > 0) {
            ++it;
            continue;
        }
        switch (it->kind) {
            case PendingKind::Worker: p.workers += 1; break;
            case PendingKind::MeleeUnit: p.army[0] += 1; break;
            case PendingKind::RangedUnit: p.army[1] += 1; break;
            case PendingKind::SiegeUnit: p.army[2] += 1; break;
            case PendingKind::SupplyStructure: p.supply_structures += 1; break;
            case PendingKind::GasCollector: p.gas_collectors += 1; break;
            case PendingKind::Base:
                p.bases += 1;
                if (is_player) {
                    log.event("new base completed");
                }
                break;
            case PendingKind::Barracks: p.production_structures += 1; break;
            case PendingKind::TechStructure:
                p.tech_structures += 1;
                if (is_player) {
                    log.event("tech structure completed");
                }
                break;
            case PendingKind::Outpost: p.outposts += 1; break;
            case PendingKind::AttackUpgrade: p.attack_upgrade = true; break;
            case PendingKind::ArmorUpgrade: p.armor_upgrade = true; break;
        }
        it = p.pending.erase(it);
    }
}

// An attack group arriving at the enemy home base. Returns true if the
// defender lost a base.
void resolve_arrival(GameState& s, bool attacker_is_player, Ledger& log) {
    const SimConfig& cfg = s.cfg();
    PlayerState& attacker = attacker_is_player ? s.player : s.opponent;
    PlayerState& defender = attacker_is_player ? s.opponent : s.player;
    AttackGroup group = *attacker.in_flight;
    attacker.in_flight.reset();

    double att_power = group_power(group.units, attacker.upgrade_count(), cfg);
    double def_army = army_power(defender, cfg);
    if (defender.stance == Stance::Defending) {
        def_army *= cfg.defend_stance_bonus;
    }
    double def_static = 0.0;
    if (defender.bases > 0) {
        def_static = cfg.base_defense_power + cfg.outpost_power * defender.outposts;
    }
    double def_power = def_army + def_static;

    CombatResult result = resolve_combat(att_power, def_power);

    auto group_supply = [&](const ArmyCounts& units) {
        int total = 0;
        for (int k = 0; k < 3; ++k) {
            total += units[k] * unit_stats(static_cast<UnitKind>(k), cfg).supply;
        }
        return total;
    };

    if (result.survivor_side == CombatSide::Attacker) {
        // Defender's home army is wiped and a base falls.
        defender.supply_used -= group_supply(defender.army);
        defender.army = {0, 0, 0};
        defender.bases -= 1;
        ArmyCounts survivors = reconstruct_survivors(group.units, att_power, result.survivor_power);
        attacker.supply_used -= group_supply(group.units) - group_supply(survivors);
        if (survivors[0] + survivors[1] + survivors[2] > 0) {
            attacker.in_flight =
                AttackGroup{survivors, s.tick + cfg.attack_travel_ticks, true};
        }
        enforce_supply_cap(defender, cfg, log, !attacker_is_player);
        if (attacker_is_player) {
            log.event("our attack razed an enemy base at " + format_time(s.tick));
        } else {
            log.event("enemy attack destroyed one of our bases at " + format_time(s.tick));
        }
    } else {
        // Attack repelled; the attacking group is lost.
        attacker.supply_used -= group_supply(group.units);
        ArmyCounts survivors =
            reconstruct_survivors(defender.army, def_power, result.survivor_power);
        defender.supply_used -= group_supply(defender.army) - group_supply(survivors);
        defender.army = survivors;
        if (attacker_is_player) {
            log.event("our attack was repelled at " + format_time(s.tick));
        } else {
            log.event("enemy attack repelled at " + format_time(s.tick));
        }
    }
}

void check_terminal(GameState& s) {
    if (!s.terminal) {
        s.terminal = is_terminal(s);
    }
}

void advance_one_tick(GameState& s, Ledger& player_log) {
    const SimConfig& cfg = s.cfg();
    const auto& params = cfg.params(s.difficulty);
    s.tick += 1;

    accrue_income(s.player, cfg, 1, 1);
    accrue_income(s.opponent, cfg, params.income_mult_num, params.income_mult_den);

    progress_queues(s.player, player_log, true);
    progress_queues(s.opponent, player_log, false);

    // Scripted opponent acts every tick.
    Ledger opp_log{player_log.outcome, &s, false};
    for (ActionId a : opponent_policy(s)) {
        if (a == ActionId::Attack) {
            // Wave counter advances whether or not the commit succeeds.
            if (s.next_wave < static_cast<int>(s.wave_ticks.size()) &&
                s.tick >= s.wave_ticks[s.next_wave]) {
                s.next_wave += 1;
            }
        }
        execute_action(s, false, a, opp_log);
    }

    // Attack arrivals: player group first, then opponent.
    if (s.player.in_flight && s.player.in_flight->arrival_tick <= s.tick) {
        if (s.player.in_flight->returning) {
            for (int k = 0; k < 3; ++k) {
                s.player.army[k] += s.player.in_flight->units[k];
            }
            s.player.in_flight.reset();
            player_log.event("our army returned home");
        } else {
            resolve_arrival(s, true, player_log);
        }
    }
    check_terminal(s);
    if (s.terminal) {
        return;
    }
    if (s.opponent.in_flight && s.opponent.in_flight->arrival_tick <= s.tick) {
        if (s.opponent.in_flight->returning) {
            for (int k = 0; k < 3; ++k) {
                s.opponent.army[k] += s.opponent.in_flight->units[k];
            }
            s.opponent.in_flight.reset();
        } else {
            resolve_arrival(s, false, player_log);
        }
    }
    check_terminal(s);
}

TickSample take_sample(const GameState& s) {
    const SimConfig& cfg = s.cfg();
    TickSample t;
    t.tick = s.tick;
    t.player_minerals_total = cfg.starting_minerals + s.player.minerals_earned;
    t.player_gas_total = s.player.gas_earned;
    t.player_workers = s.player.workers;
    t.player_army_supply = army_supply(s.player, cfg);
    t.opponent_minerals_total = cfg.starting_minerals + s.opponent.minerals_earned;
    t.opponent_gas_total = s.opponent.gas_earned;
    t.opponent_workers = s.opponent.workers;
    t.opponent_army_supply = army_supply(s.opponent, cfg);
    return t;
}

} // namespace

// ---------------------------------------------------------------------------
// Opponent script
// ---------------------------------------------------------------------------

int wave_quota(const DifficultyParams& params, int wave_index) {
    return params.wave_quota(wave_index);
}

std::vector<ActionId> opponent_policy(const GameState& s) {
    const SimConfig& cfg = s.cfg();
    const auto& params = cfg.params(s.difficulty);
    const PlayerState& o = s.opponent;
    std::vector<ActionId> actions;

    int cap = supply_cap(o, cfg);

    // Supply ahead of demand.
    if (cap < cfg.max_supply && o.supply_used + 6 >= cap &&
        pending_count(o, PendingKind::SupplyStructure) == 0 &&
        o.minerals >= cfg.supply_structure.mineral_cost) {
        actions.push_back(ActionId::BuildSupply);
    }

    // Workers toward the difficulty's target.
    if (o.workers + pending_count(o, PendingKind::Worker) < params.worker_target &&
        o.minerals >= cfg.worker.mineral_cost) {
        actions.push_back(ActionId::TrainWorker);
    }

    // Expansions on the fixed schedule.
    int expansions_started = o.bases + pending_count(o, PendingKind::Base) - 1;
    if (expansions_started < static_cast<int>(params.expand_ticks.size()) &&
        s.tick >= params.expand_ticks[expansions_started] &&
        o.minerals >= cfg.base_building.mineral_cost) {
        actions.push_back(ActionId::ExpandBase);
    }

    // Production structures grow over time.
    int barracks_target = 1 + s.tick / params.barracks_interval;
    if (o.production_structures + pending_count(o, PendingKind::Barracks) < barracks_target &&
        o.minerals >= cfg.production_structure.mineral_cost) {
        actions.push_back(ActionId::BuildBarracksAnalog);
    }

    // Gas once the composition needs it.
    if (s.tick >= 150 &&
        o.gas_collectors + pending_count(o, PendingKind::GasCollector) < o.bases &&
        o.minerals >= cfg.gas_collector.mineral_cost) {
        actions.push_back(ActionId::BuildGasCollector);
    }

    // Tech on schedule (higher difficulties only).
    if (params.tech_tick >= 0 && s.tick >= params.tech_tick && o.production_structures >= 1 &&
        o.tech_structures + pending_count(o, PendingKind::TechStructure) < 1 &&
        o.minerals >= cfg.tech_structure.mineral_cost &&
        o.gas >= cfg.tech_structure.gas_cost) {
        actions.push_back(ActionId::BuildTechStructure);
    }

    // Upgrades once tech is standing.
    if (o.tech_structures >= 1 && params.tech_tick >= 0 && s.tick >= params.tech_tick + 150) {
        if (!o.attack_upgrade && pending_count(o, PendingKind::AttackUpgrade) == 0) {
            actions.push_back(ActionId::ResearchAttackUp);
        } else if (!o.armor_upgrade && pending_count(o, PendingKind::ArmorUpgrade) == 0) {
            actions.push_back(ActionId::ResearchArmorUp);
        }
    }

    // Keep production busy up to the difficulty's army budget. Swarm
    // composition: two melee per ranged, siege sprinkled in once tech
    // exists.
    int pending_army_supply = 0;
    for (const auto& item : o.pending) {
        if (item.kind == PendingKind::MeleeUnit) {
            pending_army_supply += cfg.melee.supply;
        } else if (item.kind == PendingKind::RangedUnit) {
            pending_army_supply += cfg.ranged.supply;
        } else if (item.kind == PendingKind::SiegeUnit) {
            pending_army_supply += cfg.siege.supply;
        }
    }
    int army_budget = params.army_supply_target - army_supply(o, cfg) - pending_army_supply;
    int free_slots = o.production_structures - pending_units(o);
    for (int i = 0; i < free_slots && army_budget > 0; ++i) {
        int rotation = (o.units_trained + i) % 6;
        if (o.tech_structures >= 1 && rotation == 5) {
            actions.push_back(ActionId::TrainSiegeUnit);
            army_budget -= cfg.siege.supply;
        } else if (rotation == 2 || rotation == 4) {
            actions.push_back(ActionId::TrainRangedUnit);
            army_budget -= cfg.ranged.supply;
        } else {
            actions.push_back(ActionId::TrainMeleeUnit);
            army_budget -= cfg.melee.supply;
        }
    }

    // Scheduled wave, or all-in when the player is far behind. The script
    // holds its army home while a player attack is inbound.
    bool player_inbound = s.player.in_flight && !s.player.in_flight->returning;
    bool wave_due = s.next_wave < static_cast<int>(s.wave_ticks.size()) &&
                    s.tick >= s.wave_ticks[s.next_wave];
    if ((wave_due || allin_condition(s)) && !player_inbound && !o.in_flight &&
        o.army[0] + o.army[1] + o.army[2] > 0) {
        actions.push_back(ActionId::Attack);
    }

    return actions;
}

// ---------------------------------------------------------------------------
// step / observe
// ---------------------------------------------------------------------------

StepOutcome step(GameState& state, const std::vector<ActionId>& action_queue,
                 int decision_interval) {
    if (state.terminal) {
        throw StateError("step called on a terminal state");
    }
    if (decision_interval < 1) {
        throw ArgumentError("decision_interval must be >= 1");
    }
    StepOutcome outcome;
    state.recent_events.clear();
    Ledger log{&outcome, &state, true};

    for (ActionId a : action_queue) {
        execute_action(state, true, a, log);
    }

    for (int i = 0; i < decision_interval && !state.terminal; ++i) {
        advance_one_tick(state, log);
        outcome.samples.push_back(take_sample(state));
    }
    return outcome;
}

TextObservation observe_text(const GameState& state) {
    const SimConfig& cfg = state.cfg();
    const PlayerState& p = state.player;

    TextObservation obs;
    obs.tick = state.tick;
    obs.events = state.recent_events;

    ObservationMetrics& m = obs.metrics;
    m.minerals = p.minerals;
    m.gas = p.gas;
    m.supply_used = p.supply_used;
    m.supply_cap = supply_cap(p, cfg);
    m.workers = p.workers;
    m.bases = p.bases;
    m.army = p.army;
    m.army_power = army_power(p, cfg);
    m.supply_structures = p.supply_structures;
    m.gas_collectors = p.gas_collectors;
    m.production_structures = p.production_structures;
    m.tech_structures = p.tech_structures;
    m.outposts = p.outposts;
    m.upgrades = p.upgrade_count();
    m.pending_count = static_cast<int>(p.pending.size());

    std::ostringstream out;
    out << "Time " << format_time(state.tick) << "\n";
    out << "Minerals: " << p.minerals << " | Gas: " << p.gas << "\n";
    out << "Supply: " << p.supply_used << "/" << m.supply_cap << "\n";
    out << "Workers: " << p.workers << " | Bases: " << p.bases << "\n";
    out << "Structures: supply=" << p.supply_structures << " gas_collectors=" << p.gas_collectors
        << " production=" << p.production_structures << " tech=" << p.tech_structures
        << " outposts=" << p.outposts << "\n";
    char power_buf[32];
    std::snprintf(power_buf, sizeof(power_buf), "%.1f", m.army_power);
    out << "Army: melee=" << p.army[0] << " ranged=" << p.army[1] << " siege=" << p.army[2]
        << " (power " << power_buf << ")\n";
    out << "Upgrades: attack=" << (p.attack_upgrade ? "yes" : "no")
        << " armor=" << (p.armor_upgrade ? "yes" : "no") << "\n";

    if (p.pending.empty()) {
        out << "Production queue: empty\n";
    } else {
        static const char* kind_names[] = {"worker",   "melee",    "ranged", "siege",
                                           "supply",   "gas",      "base",   "production",
                                           "tech",     "outpost",  "attack_up", "armor_up"};
        out << "Production queue:";
        for (const auto& item : p.pending) {
            out << " " << kind_names[static_cast<int>(item.kind)] << "("
                << item.ticks_remaining << ")";
        }
        out << "\n";
    }

    if (p.in_flight) {
        out << "Army status: " << (p.in_flight->returning ? "returning home" : "attacking")
            << ", arrives " << format_time(p.in_flight->arrival_tick) << "\n";
    } else {
        out << "Army status: at home"
            << (p.stance == Stance::Defending ? ", defensive posture" : "") << "\n";
    }

    if (state.opponent_knowledge) {
        const ScoutReport& r = *state.opponent_knowledge;
        char opp_power[32];
        std::snprintf(opp_power, sizeof(opp_power), "%.1f", r.army_power);
        out << "Enemy (as of " << format_time(r.tick) << "): bases=" << r.bases
            << " workers=" << r.workers << " melee=" << r.army[0] << " ranged=" << r.army[1]
            << " siege=" << r.army[2] << " tech=" << r.tech_structures << " power=" << opp_power
            << "\n";
    } else {
        out << "Enemy: no information\n";
    }

    if (obs.events.empty()) {
        out << "Recent events: none";
    } else {
        out << "Recent events:";
        for (const auto& e : obs.events) {
            out << "\n  - " << e;
        }
    }
    obs.text = out.str();
    return obs;
}

// ---------------------------------------------------------------------------
// Serialization (determinism checks)
// ---------------------------------------------------------------------------

namespace {

json player_to_json(const PlayerState& p) {
    json pending = json::array();
    for (const auto& item : p.pending) {
        pending.push_back({{"kind", static_cast<int>(item.kind)},
                           {"ticks", item.ticks_remaining}});
    }
    json j{{"minerals", p.minerals},
           {"gas", p.gas},
           {"supply_used", p.supply_used},
           {"workers", p.workers},
           {"bases", p.bases},
           {"supply_structures", p.supply_structures},
           {"gas_collectors", p.gas_collectors},
           {"production_structures", p.production_structures},
           {"tech_structures", p.tech_structures},
           {"outposts", p.outposts},
           {"attack_upgrade", p.attack_upgrade},
           {"armor_upgrade", p.armor_upgrade},
           {"army", p.army},
           {"pending", pending},
           {"stance", p.stance == Stance::Defending ? 1 : 0},
           {"units_trained", p.units_trained},
           {"minerals_earned", p.minerals_earned},
           {"gas_earned", p.gas_earned},
           {"minerals_spent", p.minerals_spent},
           {"gas_spent", p.gas_spent},
           {"mineral_carry", p.mineral_carry},
           {"gas_carry", p.gas_carry}};
    if (p.in_flight) {
        j["in_flight"] = {{"units", p.in_flight->units},
                          {"arrival", p.in_flight->arrival_tick},
                          {"returning", p.in_flight->returning}};
    }
    return j;
}

} // namespace

std::string state_to_json(const GameState& state) {
    json j;
    j["tick"] = state.tick;
    j["seed"] = state.seed;
    j["difficulty"] = to_string(state.difficulty);
    j["player"] = player_to_json(state.player);
    j["opponent"] = player_to_json(state.opponent);
    j["wave_ticks"] = state.wave_ticks;
    j["next_wave"] = state.next_wave;
    std::ostringstream rng_stream;
    rng_stream << state.rng;
    j["rng"] = rng_stream.str();
    if (state.opponent_knowledge) {
        const auto& r = *state.opponent_knowledge;
        j["scout"] = {{"tick", r.tick},       {"bases", r.bases},
                      {"workers", r.workers}, {"army", r.army},
                      {"power", r.army_power}, {"tech", r.tech_structures}};
    }
    if (state.terminal) {
        j["terminal"] = {{"outcome", to_string(state.terminal->outcome)},
                         {"tick_ended", state.terminal->tick_ended}};
    }
    j["events"] = state.recent_events;
    return j.dump();
}

std::uint64_t state_hash(const GameState& state) {
    return fnv1a64(state_to_json(state));
}

} // namespace roe
