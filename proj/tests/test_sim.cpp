#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "roe/episode.hpp"
#include "roe/errors.hpp"
#include "roe/sim.hpp"

using namespace roe;

namespace {

GameState opening(std::uint64_t seed = 7, DifficultyLevel level = DifficultyLevel::Hard) {
    return new_game(default_config(), seed, level);
}

// Stepped mutual-attrition duel: both sides deal damage proportional to
// their current power each sub-tick. Units die as their side's damage pool
// covers them. Independent check for the closed-form resolution.
struct DuelResult {
    bool attacker_won;
    int survivors;
};

DuelResult attrition_duel(int attacker_units, double attacker_unit_power, int defender_units,
                          double defender_unit_power, double dt = 1e-4) {
    double damage_to_a = 0.0;
    double damage_to_b = 0.0;
    int alive_a = attacker_units;
    int alive_b = defender_units;
    while (alive_a > 0 && alive_b > 0) {
        double power_a = alive_a * attacker_unit_power;
        double power_b = alive_b * defender_unit_power;
        damage_to_a += power_b * dt;
        damage_to_b += power_a * dt;
        alive_a = attacker_units - static_cast<int>(damage_to_a / attacker_unit_power);
        alive_b = defender_units - static_cast<int>(damage_to_b / defender_unit_power);
    }
    if (alive_a <= 0 && alive_b <= 0) {
        return {false, 0}; // simultaneous wipe: defender holds the field
    }
    return {alive_a > 0, alive_a > 0 ? alive_a : alive_b};
}

std::int64_t total_minerals(const PlayerState& p) {
    return p.minerals + p.minerals_spent;
}

std::int64_t total_gas(const PlayerState& p) {
    return p.gas + p.gas_spent;
}

void check_invariants(const GameState& s) {
    const SimConfig& cfg = s.cfg();
    for (const PlayerState* p : {&s.player, &s.opponent}) {
        REQUIRE(p->minerals >= 0);
        REQUIRE(p->gas >= 0);
        REQUIRE(p->workers >= 0);
        REQUIRE(p->bases >= 0);
        for (int k = 0; k < 3; ++k) {
            REQUIRE(p->army[k] >= 0);
        }
        REQUIRE(p->supply_used <= supply_cap(*p, cfg));
        // Conservation: held + spent = earned + starting.
        REQUIRE(total_minerals(*p) == p->minerals_earned + cfg.starting_minerals);
        REQUIRE(total_gas(*p) == p->gas_earned);
        for (const auto& item : p->pending) {
            REQUIRE(item.ticks_remaining > 0);
        }
    }
}

} // namespace

TEST_CASE("new_game returns the canonical opening") {
    GameState s = opening();
    CHECK(s.tick == 0);
    CHECK(s.player.workers == 12);
    CHECK(s.player.bases == 1);
    CHECK(s.player.minerals == default_config().starting_minerals);
    CHECK(!s.terminal);
    CHECK(!is_terminal(s));
}

TEST_CASE("new_game is deterministic") {
    GameState a = opening(7);
    GameState b = opening(7);
    CHECK(state_to_json(a) == state_to_json(b));
    CHECK(state_hash(a) == state_hash(b));

    GameState c = opening(8);
    CHECK(state_to_json(a) != state_to_json(c)); // wave jitter differs
}

TEST_CASE("invalid config is rejected with the offending field") {
    SimConfig cfg = default_config();
    cfg.max_ticks = 0;
    CHECK_THROWS_WITH_AS(new_game(cfg, 1, DifficultyLevel::Hard),
                         "max_ticks must be positive", ConfigError);
}

TEST_CASE("config json round trip and file load") {
    SimConfig cfg = default_config();
    SimConfig back = SimConfig::from_json_string(cfg.to_json_string());
    CHECK(back.to_json_string() == cfg.to_json_string());
    CHECK(back.hash() == cfg.hash());
}

TEST_CASE("shipped default config matches the builtin and its frozen hash") {
    SimConfig shipped = SimConfig::load_file(std::string(ROE_SOURCE_DIR) +
                                             "/configs/default_sim.json");
    CHECK(shipped.to_json_string() == default_config().to_json_string());
    CHECK(shipped.hash() == default_config().hash());
}

TEST_CASE("action library is fixed, ordered, and round-trips") {
    GameState s = opening();
    auto actions = legal_actions(s);
    REQUIRE(actions.size() == 18);
    CHECK(actions.front().display_name == "NO_OP");
    CHECK(actions.back().display_name == "MASS_RECALL_ANALOG");
    std::set<std::string_view> names;
    for (const auto& a : actions) {
        auto parsed = parse_action_name(a.display_name);
        REQUIRE(parsed);
        CHECK(*parsed == a.id); // bijection over the library
        names.insert(a.display_name);
    }
    CHECK(names.size() == 18);

    s.terminal = MatchResult{Outcome::Defeat, 100, {}};
    CHECK_THROWS_AS(legal_actions(s), StateError);
}

TEST_CASE("income oracle: workers x rate x ticks") {
    GameState s = opening();
    std::int64_t before = s.player.minerals;
    step(s, {}, 10);
    // 12 workers, 1 mineral each per tick, 10 ticks.
    CHECK(s.player.minerals == before + 120);
    CHECK(s.tick == 10);
    CHECK(s.player.army[0] + s.player.army[1] + s.player.army[2] == 0);
}

TEST_CASE("unaffordable action is a recorded no-op") {
    GameState s = opening();
    s.player.minerals = 10;
    StepOutcome out = step(s, {ActionId::TrainWorker}, 1);
    REQUIRE(out.rejected.size() == 1);
    CHECK(out.rejected[0].action == ActionId::TrainWorker);
    CHECK(out.rejected[0].reason == "insufficient resources");
    CHECK(out.executed.empty());
    CHECK(s.player.pending.empty());
}

TEST_CASE("step on a terminal state throws") {
    GameState s = opening();
    s.terminal = MatchResult{Outcome::Defeat, 5, {}};
    CHECK_THROWS_AS(step(s, {}, 10), StateError);
}

TEST_CASE("training a worker consumes and completes") {
    GameState s = opening();
    StepOutcome out = step(s, {ActionId::TrainWorker}, 1);
    CHECK(out.executed.size() == 1);
    CHECK(s.player.workers == 12);
    REQUIRE(s.player.pending.size() == 1);
    step(s, {}, default_config().worker.train_ticks);
    CHECK(s.player.workers == 13);
    CHECK(s.player.pending.empty());
}

TEST_CASE("supply cap formula") {
    SimConfig cfg = default_config();
    PlayerState p;
    p.bases = 2;
    p.supply_structures = 3;
    CHECK(supply_cap(p, cfg) == 2 * cfg.base_supply + 3 * cfg.pylon_supply);
    p.supply_structures = 100;
    CHECK(supply_cap(p, cfg) == cfg.max_supply);
}

TEST_CASE("resolve_combat closed form") {
    SUBCASE("unopposed attacker") {
        CombatResult r = resolve_combat(10, 0);
        CHECK(r.survivor_side == CombatSide::Attacker);
        CHECK(r.survivor_power == doctest::Approx(10.0));
    }
    SUBCASE("sqrt law") {
        CombatResult r = resolve_combat(10, 6);
        CHECK(r.survivor_side == CombatSide::Attacker);
        CHECK(r.survivor_power == doctest::Approx(8.0)); // sqrt(100 - 36)
    }
    SUBCASE("ties go to the defender with mutual annihilation") {
        CombatResult r = resolve_combat(5, 5);
        CHECK(r.survivor_side == CombatSide::Defender);
        CHECK(r.survivor_power == doctest::Approx(0.0));
    }
}

TEST_CASE("combat matches the stepped-attrition duel within one survivor") {
    const double unit_power = 5.0;
    for (int a = 0; a <= 20; ++a) {
        for (int b = 0; b <= 20; ++b) {
            if (a == 0 && b == 0) {
                continue;
            }
            CombatResult closed = resolve_combat(a * unit_power, b * unit_power);
            DuelResult duel = attrition_duel(a, unit_power, b, unit_power);
            bool closed_attacker_won = closed.survivor_side == CombatSide::Attacker;
            CHECK(closed_attacker_won == duel.attacker_won);
            int closed_survivors = static_cast<int>(
                std::floor(closed.survivor_power / unit_power + 1e-9));
            CHECK(std::abs(closed_survivors - duel.survivors) <= 1);
        }
    }
}

TEST_CASE("observe_text renders the opening and fog of war") {
    GameState s = opening();
    TextObservation obs = observe_text(s);
    CHECK(obs.text.find("Time 00:00") != std::string::npos);
    CHECK(obs.text.find("Workers: 12") != std::string::npos);
    CHECK(obs.text.find("Bases: 1") != std::string::npos);
    CHECK(obs.text.find("Enemy: no information") != std::string::npos);
}

TEST_CASE("scout reports are stamped with their tick") {
    GameState s = opening();
    step(s, {}, 96);
    REQUIRE(s.tick == 96);
    step(s, {ActionId::Scout}, 1);
    TextObservation obs = observe_text(s);
    CHECK(obs.text.find("as of 01:36") != std::string::npos);
}

TEST_CASE("terminal predicate") {
    GameState s = opening();
    SUBCASE("victory when the opponent has no bases") {
        s.opponent.bases = 0;
        auto r = is_terminal(s);
        REQUIRE(r);
        CHECK(r->outcome == Outcome::Victory);
    }
    SUBCASE("defeat when the player has no bases") {
        s.player.bases = 0;
        auto r = is_terminal(s);
        REQUIRE(r);
        CHECK(r->outcome == Outcome::Defeat);
    }
    SUBCASE("timeout at the tick cap with both alive") {
        s.tick = s.cfg().max_ticks;
        auto r = is_terminal(s);
        REQUIRE(r);
        CHECK(r->outcome == Outcome::Timeout);
    }
    SUBCASE("running game is not terminal") {
        CHECK(!is_terminal(s));
    }
}

TEST_CASE("opponent schedule: only economy before the first wave on Hard") {
    GameState s = opening(11, DifficultyLevel::Hard);
    int first_wave = s.wave_ticks.front();
    while (s.tick + 10 < first_wave && !s.terminal) {
        StepOutcome out = step(s, {}, 10);
        (void)out;
        CHECK(!s.opponent.in_flight);
    }
}

TEST_CASE("wave quotas grow with difficulty at every index") {
    SimConfig cfg = default_config();
    for (int index = 0; index < 8; ++index) {
        int harder = wave_quota(cfg.params(DifficultyLevel::Harder), index);
        int very_hard = wave_quota(cfg.params(DifficultyLevel::VeryHard), index);
        CHECK(very_hard > harder);
    }
}

TEST_CASE("opponent policy is deterministic for a given state") {
    GameState s = opening(5, DifficultyLevel::Harder);
    step(s, {}, 300);
    if (!s.terminal) {
        auto first = opponent_policy(s);
        auto second = opponent_policy(s);
        CHECK(first == second);
    }
}

TEST_CASE("defend stance and outposts strengthen the defender") {
    // An attack that would raze an undefended base is repelled once outposts
    // stand and the defender holds a defensive posture.
    SimConfig cfg = default_config();
    GameState s = new_game(cfg, 3, DifficultyLevel::Hard);
    s.opponent.army = {6, 0, 0}; // 30 power vs base defense 10
    s.opponent.in_flight = AttackGroup{{6, 0, 0}, s.tick + 1, false};
    for (int k = 0; k < 3; ++k) {
        s.opponent.army[k] -= s.opponent.in_flight->units[k];
    }
    s.opponent.supply_used += 6;
    GameState fortified = s;
    step(s, {}, 2);
    CHECK(s.player.bases == 0); // undefended: base razed

    fortified.player.outposts = 2; // +24 static power
    fortified.player.army = {2, 0, 0};
    fortified.player.supply_used += 2;
    step(fortified, {ActionId::Defend}, 2);
    CHECK(fortified.player.bases == 1);
}

TEST_CASE("attack commits the army and retreat recalls it") {
    GameState s = opening();
    s.player.army = {4, 2, 0};
    s.player.supply_used += 4 + 2 * 2;
    StepOutcome out = step(s, {ActionId::Attack}, 1);
    CHECK(out.executed.size() == 1);
    REQUIRE(s.player.in_flight);
    CHECK(s.player.army == ArmyCounts{0, 0, 0});

    StepOutcome retreat = step(s, {ActionId::Retreat}, 1);
    CHECK(retreat.executed.size() == 1);
    REQUIRE(s.player.in_flight);
    CHECK(s.player.in_flight->returning);
    step(s, {}, s.cfg().attack_travel_ticks + 1);
    CHECK(!s.player.in_flight);
    CHECK(s.player.army == ArmyCounts{4, 2, 0});
}

TEST_CASE("attack with no army is rejected") {
    GameState s = opening();
    StepOutcome out = step(s, {ActionId::Attack}, 1);
    REQUIRE(out.rejected.size() == 1);
    CHECK(out.rejected[0].reason == "no army to attack with");
}

TEST_CASE("randomized episodes hold the core invariants and are deterministic") {
    const auto& lib = action_library();
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        std::mt19937_64 rng(seed * 977);
        DifficultyLevel level = static_cast<DifficultyLevel>(seed % 4);
        GameState s = new_game(default_config(), seed, level);
        GameState replay = new_game(default_config(), seed, level);
        std::uniform_int_distribution<int> action_dist(0, 17);
        std::uniform_int_distribution<int> len_dist(0, 4);
        while (!s.terminal) {
            std::vector<ActionId> queue;
            int n = len_dist(rng);
            for (int i = 0; i < n; ++i) {
                queue.push_back(lib[action_dist(rng)].id);
            }
            step(s, queue, 10);
            step(replay, queue, 10);
            check_invariants(s);
        }
        CHECK(state_to_json(s) == state_to_json(replay));
        REQUIRE(s.terminal);
    }
}

TEST_CASE("time series samples cover every tick and cumulative series never decrease") {
    GameState s = opening();
    std::vector<TickSample> series;
    while (!s.terminal && s.tick < 300) {
        StepOutcome out = step(s, {ActionId::TrainWorker}, 10);
        series.insert(series.end(), out.samples.begin(), out.samples.end());
    }
    REQUIRE(series.size() == 300);
    for (std::size_t i = 1; i < series.size(); ++i) {
        CHECK(series[i].tick == series[i - 1].tick + 1);
        CHECK(series[i].player_minerals_total >= series[i - 1].player_minerals_total);
        CHECK(series[i].player_gas_total >= series[i - 1].player_gas_total);
        CHECK(series[i].opponent_minerals_total >= series[i - 1].opponent_minerals_total);
    }
}

TEST_CASE("format_time") {
    CHECK(format_time(0) == "00:00");
    CHECK(format_time(96) == "01:36");
    CHECK(format_time(1200) == "20:00");
}
