#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace roe {

enum class DifficultyLevel { Hard = 0, Harder = 1, VeryHard = 2, Elite = 3 };

const char* to_string(DifficultyLevel level);
DifficultyLevel difficulty_from_string(const std::string& name);

struct UnitStats {
    int mineral_cost = 0;
    int gas_cost = 0;
    int supply = 0;
    int train_ticks = 1;
    double power = 0.0;
};

struct BuildingStats {
    int mineral_cost = 0;
    int gas_cost = 0;
    int build_ticks = 1;
};

// Scripted-opponent parameters for one difficulty rung. income_multiplier
// is kept rational (num/den) so accrual stays in integer arithmetic.
struct DifficultyParams {
    std::string name;
    int income_mult_num = 1;
    int income_mult_den = 1;
    std::vector<int> attack_wave_ticks;
    int wave_base_size = 3;           // units committed to wave 0
    double wave_size_growth = 1.25;   // geometric growth per wave index
    int worker_target = 16;
    std::vector<int> expand_ticks;
    int barracks_interval = 240;      // one more production structure per interval
    int tech_tick = -1;               // -1: never builds tech
    int army_supply_target = 200;     // script stops training above this

    double income_multiplier() const {
        return static_cast<double>(income_mult_num) / income_mult_den;
    }
    // Units committed to the wave with this index (pure schedule, before
    // availability clamping).
    int wave_quota(int wave_index) const;
};

struct SimConfig {
    int max_ticks = 1200;             // 20 simulated minutes at 1 tick/s
    int starting_minerals = 50;
    int starting_workers = 12;
    int mineral_rate = 1;             // minerals per mining worker per tick
    int gas_rate = 1;                 // gas per collector per tick
    int workers_per_base = 16;        // mining saturation per base
    int base_supply = 14;
    int pylon_supply = 8;
    int max_supply = 200;
    int max_gas_collectors_per_base = 2;
    int max_bases = 8;
    int max_production_structures = 10;
    int max_tech_structures = 1;
    int max_outposts = 6;

    UnitStats worker{50, 0, 1, 12, 0.0};
    UnitStats melee{75, 0, 1, 15, 5.0};
    UnitStats ranged{100, 25, 2, 18, 11.0};
    UnitStats siege{150, 75, 3, 25, 20.0};

    BuildingStats supply_structure{100, 0, 15};
    BuildingStats gas_collector{75, 0, 20};
    BuildingStats base_building{400, 0, 60};
    BuildingStats production_structure{150, 0, 30};
    BuildingStats tech_structure{150, 100, 35};
    BuildingStats outpost{100, 0, 25};

    int research_mineral_cost = 100;
    int research_gas_cost = 100;
    int research_ticks = 40;
    double upgrade_power_bonus = 0.1; // per researched upgrade

    double base_defense_power = 10.0; // intrinsic power defending a home base
    double outpost_power = 12.0;
    double defend_stance_bonus = 1.25;

    int attack_travel_ticks = 15;
    int mass_recall_gas_cost = 50;
    int min_attack_units = 3; // smaller forces refuse to march

    // Opponent script knobs.
    double allin_army_ratio = 0.5;    // all-in when player army < ratio x own
    double allin_min_power = 30.0;    // ...but only with this much to commit
    int wave_tick_jitter = 8;         // +/- ticks, drawn once per game from the seed

    std::array<DifficultyParams, 4> difficulties;

    const DifficultyParams& params(DifficultyLevel level) const {
        return difficulties[static_cast<int>(level)];
    }

    // Throws ConfigError naming the offending field.
    void validate() const;

    std::string to_json_string() const;
    static SimConfig from_json_string(const std::string& text);
    static SimConfig load_file(const std::string& path);
    void save_file(const std::string& path) const;

    // FNV-1a over the canonical JSON serialization.
    std::uint64_t hash() const;
};

SimConfig default_config();

std::uint64_t fnv1a64(const std::string& bytes);

} // namespace roe
