#include "roe/sim_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "roe/errors.hpp"

namespace roe {

using nlohmann::json;

const char* to_string(DifficultyLevel level) {
    switch (level) {
        case DifficultyLevel::Hard: return "Hard";
        case DifficultyLevel::Harder: return "Harder";
        case DifficultyLevel::VeryHard: return "VeryHard";
        case DifficultyLevel::Elite: return "Elite";
    }
    return "Hard";
}

DifficultyLevel difficulty_from_string(const std::string& name) {
    if (name == "Hard") return DifficultyLevel::Hard;
    if (name == "Harder") return DifficultyLevel::Harder;
    if (name == "VeryHard") return DifficultyLevel::VeryHard;
    if (name == "Elite") return DifficultyLevel::Elite;
    throw ConfigError("unknown difficulty level: " + name);
}

int DifficultyParams::wave_quota(int wave_index) const {
    double size = wave_base_size * std::pow(wave_size_growth, wave_index);
    return static_cast<int>(size);
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace {

json unit_to_json(const UnitStats& u) {
    return json{{"mineral_cost", u.mineral_cost},
                {"gas_cost", u.gas_cost},
                {"supply", u.supply},
                {"train_ticks", u.train_ticks},
                {"power", u.power}};
}

UnitStats unit_from_json(const json& j) {
    UnitStats u;
    u.mineral_cost = j.at("mineral_cost").get<int>();
    u.gas_cost = j.at("gas_cost").get<int>();
    u.supply = j.at("supply").get<int>();
    u.train_ticks = j.at("train_ticks").get<int>();
    u.power = j.at("power").get<double>();
    return u;
}

json building_to_json(const BuildingStats& b) {
    return json{{"mineral_cost", b.mineral_cost},
                {"gas_cost", b.gas_cost},
                {"build_ticks", b.build_ticks}};
}

BuildingStats building_from_json(const json& j) {
    BuildingStats b;
    b.mineral_cost = j.at("mineral_cost").get<int>();
    b.gas_cost = j.at("gas_cost").get<int>();
    b.build_ticks = j.at("build_ticks").get<int>();
    return b;
}

json difficulty_to_json(const DifficultyParams& d) {
    return json{{"name", d.name},
                {"income_mult_num", d.income_mult_num},
                {"income_mult_den", d.income_mult_den},
                {"attack_wave_ticks", d.attack_wave_ticks},
                {"wave_base_size", d.wave_base_size},
                {"wave_size_growth", d.wave_size_growth},
                {"worker_target", d.worker_target},
                {"expand_ticks", d.expand_ticks},
                {"barracks_interval", d.barracks_interval},
                {"tech_tick", d.tech_tick},
                {"army_supply_target", d.army_supply_target}};
}

DifficultyParams difficulty_from_json(const json& j) {
    DifficultyParams d;
    d.name = j.at("name").get<std::string>();
    d.income_mult_num = j.at("income_mult_num").get<int>();
    d.income_mult_den = j.at("income_mult_den").get<int>();
    d.attack_wave_ticks = j.at("attack_wave_ticks").get<std::vector<int>>();
    d.wave_base_size = j.at("wave_base_size").get<int>();
    d.wave_size_growth = j.at("wave_size_growth").get<double>();
    d.worker_target = j.at("worker_target").get<int>();
    d.expand_ticks = j.at("expand_ticks").get<std::vector<int>>();
    d.barracks_interval = j.at("barracks_interval").get<int>();
    d.tech_tick = j.at("tech_tick").get<int>();
    d.army_supply_target = j.at("army_supply_target").get<int>();
    return d;
}

void require_positive(long long v, const char* field) {
    if (v <= 0) {
        throw ConfigError(std::string(field) + " must be positive");
    }
}

void require_non_negative(long long v, const char* field) {
    if (v < 0) {
        throw ConfigError(std::string(field) + " must be non-negative");
    }
}

} // namespace

void SimConfig::validate() const {
    require_positive(max_ticks, "max_ticks");
    require_non_negative(starting_minerals, "starting_minerals");
    require_positive(starting_workers, "starting_workers");
    require_positive(mineral_rate, "mineral_rate");
    require_positive(gas_rate, "gas_rate");
    require_positive(workers_per_base, "workers_per_base");
    require_positive(base_supply, "base_supply");
    require_positive(pylon_supply, "pylon_supply");
    require_positive(max_supply, "max_supply");
    require_positive(max_gas_collectors_per_base, "max_gas_collectors_per_base");
    require_positive(max_bases, "max_bases");
    require_positive(max_production_structures, "max_production_structures");
    require_positive(max_tech_structures, "max_tech_structures");
    require_positive(max_outposts, "max_outposts");

    const struct { const UnitStats* u; const char* name; } units[] = {
        {&worker, "worker"}, {&melee, "melee"}, {&ranged, "ranged"}, {&siege, "siege"}};
    for (const auto& [u, name] : units) {
        if (u->mineral_cost < 0 || u->gas_cost < 0) {
            throw ConfigError(std::string(name) + ".cost must be non-negative");
        }
        if (u->train_ticks <= 0) {
            throw ConfigError(std::string(name) + ".train_ticks must be positive");
        }
        if (u->supply < 0) {
            throw ConfigError(std::string(name) + ".supply must be non-negative");
        }
    }
    const struct { const BuildingStats* b; const char* name; } buildings[] = {
        {&supply_structure, "supply_structure"}, {&gas_collector, "gas_collector"},
        {&base_building, "base_building"},       {&production_structure, "production_structure"},
        {&tech_structure, "tech_structure"},     {&outpost, "outpost"}};
    for (const auto& [b, name] : buildings) {
        if (b->mineral_cost < 0 || b->gas_cost < 0) {
            throw ConfigError(std::string(name) + ".cost must be non-negative");
        }
        if (b->build_ticks <= 0) {
            throw ConfigError(std::string(name) + ".build_ticks must be positive");
        }
    }
    require_non_negative(research_mineral_cost, "research_mineral_cost");
    require_non_negative(research_gas_cost, "research_gas_cost");
    require_positive(research_ticks, "research_ticks");
    require_positive(attack_travel_ticks, "attack_travel_ticks");
    require_non_negative(mass_recall_gas_cost, "mass_recall_gas_cost");
    require_non_negative(min_attack_units, "min_attack_units");
    require_non_negative(wave_tick_jitter, "wave_tick_jitter");

    // Difficulty ladder: income multiplier and wave sizes strictly increase.
    for (int i = 0; i < 4; ++i) {
        const auto& d = difficulties[i];
        if (d.income_mult_num <= 0 || d.income_mult_den <= 0) {
            throw ConfigError("difficulties[" + std::to_string(i) +
                              "].income_mult must be positive");
        }
        if (d.wave_base_size <= 0) {
            throw ConfigError("difficulties[" + std::to_string(i) +
                              "].wave_base_size must be positive");
        }
        if (d.wave_size_growth < 1.0) {
            throw ConfigError("difficulties[" + std::to_string(i) +
                              "].wave_size_growth must be >= 1");
        }
        if (d.army_supply_target <= 0) {
            throw ConfigError("difficulties[" + std::to_string(i) +
                              "].army_supply_target must be positive");
        }
        for (int t : d.attack_wave_ticks) {
            if (t <= 0) {
                throw ConfigError("difficulties[" + std::to_string(i) +
                                  "].attack_wave_ticks entries must be positive");
            }
        }
    }
    for (int i = 1; i < 4; ++i) {
        const auto& lo = difficulties[i - 1];
        const auto& hi = difficulties[i];
        if (hi.income_multiplier() <= lo.income_multiplier()) {
            throw ConfigError("difficulties: income_multiplier must strictly increase "
                              "across levels");
        }
        for (int w = 0; w < 8; ++w) {
            if (hi.wave_quota(w) <= lo.wave_quota(w)) {
                throw ConfigError("difficulties: wave sizes must strictly increase "
                                  "across levels");
            }
        }
    }
}

std::string SimConfig::to_json_string() const {
    json j;
    j["max_ticks"] = max_ticks;
    j["starting_minerals"] = starting_minerals;
    j["starting_workers"] = starting_workers;
    j["mineral_rate"] = mineral_rate;
    j["gas_rate"] = gas_rate;
    j["workers_per_base"] = workers_per_base;
    j["base_supply"] = base_supply;
    j["pylon_supply"] = pylon_supply;
    j["max_supply"] = max_supply;
    j["max_gas_collectors_per_base"] = max_gas_collectors_per_base;
    j["max_bases"] = max_bases;
    j["max_production_structures"] = max_production_structures;
    j["max_tech_structures"] = max_tech_structures;
    j["max_outposts"] = max_outposts;
    j["units"] = json{{"worker", unit_to_json(worker)},
                      {"melee", unit_to_json(melee)},
                      {"ranged", unit_to_json(ranged)},
                      {"siege", unit_to_json(siege)}};
    j["buildings"] = json{{"supply_structure", building_to_json(supply_structure)},
                          {"gas_collector", building_to_json(gas_collector)},
                          {"base_building", building_to_json(base_building)},
                          {"production_structure", building_to_json(production_structure)},
                          {"tech_structure", building_to_json(tech_structure)},
                          {"outpost", building_to_json(outpost)}};
    j["research_mineral_cost"] = research_mineral_cost;
    j["research_gas_cost"] = research_gas_cost;
    j["research_ticks"] = research_ticks;
    j["upgrade_power_bonus"] = upgrade_power_bonus;
    j["base_defense_power"] = base_defense_power;
    j["outpost_power"] = outpost_power;
    j["defend_stance_bonus"] = defend_stance_bonus;
    j["attack_travel_ticks"] = attack_travel_ticks;
    j["mass_recall_gas_cost"] = mass_recall_gas_cost;
    j["min_attack_units"] = min_attack_units;
    j["allin_army_ratio"] = allin_army_ratio;
    j["allin_min_power"] = allin_min_power;
    j["wave_tick_jitter"] = wave_tick_jitter;
    json diffs = json::array();
    for (const auto& d : difficulties) {
        diffs.push_back(difficulty_to_json(d));
    }
    j["difficulties"] = diffs;
    return j.dump(2);
}

SimConfig SimConfig::from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    SimConfig c;
    try {
        c.max_ticks = j.at("max_ticks").get<int>();
        c.starting_minerals = j.at("starting_minerals").get<int>();
        c.starting_workers = j.at("starting_workers").get<int>();
        c.mineral_rate = j.at("mineral_rate").get<int>();
        c.gas_rate = j.at("gas_rate").get<int>();
        c.workers_per_base = j.at("workers_per_base").get<int>();
        c.base_supply = j.at("base_supply").get<int>();
        c.pylon_supply = j.at("pylon_supply").get<int>();
        c.max_supply = j.at("max_supply").get<int>();
        c.max_gas_collectors_per_base = j.at("max_gas_collectors_per_base").get<int>();
        c.max_bases = j.at("max_bases").get<int>();
        c.max_production_structures = j.at("max_production_structures").get<int>();
        c.max_tech_structures = j.at("max_tech_structures").get<int>();
        c.max_outposts = j.at("max_outposts").get<int>();
        const auto& units = j.at("units");
        c.worker = unit_from_json(units.at("worker"));
        c.melee = unit_from_json(units.at("melee"));
        c.ranged = unit_from_json(units.at("ranged"));
        c.siege = unit_from_json(units.at("siege"));
        const auto& buildings = j.at("buildings");
        c.supply_structure = building_from_json(buildings.at("supply_structure"));
        c.gas_collector = building_from_json(buildings.at("gas_collector"));
        c.base_building = building_from_json(buildings.at("base_building"));
        c.production_structure = building_from_json(buildings.at("production_structure"));
        c.tech_structure = building_from_json(buildings.at("tech_structure"));
        c.outpost = building_from_json(buildings.at("outpost"));
        c.research_mineral_cost = j.at("research_mineral_cost").get<int>();
        c.research_gas_cost = j.at("research_gas_cost").get<int>();
        c.research_ticks = j.at("research_ticks").get<int>();
        c.upgrade_power_bonus = j.at("upgrade_power_bonus").get<double>();
        c.base_defense_power = j.at("base_defense_power").get<double>();
        c.outpost_power = j.at("outpost_power").get<double>();
        c.defend_stance_bonus = j.at("defend_stance_bonus").get<double>();
        c.attack_travel_ticks = j.at("attack_travel_ticks").get<int>();
        c.mass_recall_gas_cost = j.at("mass_recall_gas_cost").get<int>();
        c.min_attack_units = j.at("min_attack_units").get<int>();
        c.allin_army_ratio = j.at("allin_army_ratio").get<double>();
        c.allin_min_power = j.at("allin_min_power").get<double>();
        c.wave_tick_jitter = j.at("wave_tick_jitter").get<int>();
        const auto& diffs = j.at("difficulties");
        if (diffs.size() != 4) {
            throw ConfigError("difficulties must list exactly 4 levels");
        }
        for (int i = 0; i < 4; ++i) {
            c.difficulties[i] = difficulty_from_json(diffs.at(i));
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
    c.validate();
    return c;
}

SimConfig SimConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_string(ss.str());
}

void SimConfig::save_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write config file: " + path);
    }
    out << to_json_string() << "\n";
}

std::uint64_t SimConfig::hash() const {
    return fnv1a64(to_json_string());
}

SimConfig default_config() {
    SimConfig c;
    c.difficulties[0] = DifficultyParams{
        "Hard", 1, 1, {300, 520, 740, 960, 1180}, 3, 1.30, 14, {420}, 260, -1, 70};
    c.difficulties[1] = DifficultyParams{
        "Harder", 7, 5, {280, 460, 640, 820, 1000, 1180}, 5, 1.45, 18, {380, 820}, 200, 700, 95};
    c.difficulties[2] = DifficultyParams{
        "VeryHard", 19, 10, {260, 420, 580, 740, 900, 1060}, 8, 1.60, 24, {340, 700}, 130, 480, 140};
    c.difficulties[3] = DifficultyParams{
        "Elite", 13, 5, {240, 380, 520, 660, 800, 940, 1080}, 12, 1.80, 30, {300, 600, 900}, 100, 400, 200};
    return c;
}

} // namespace roe
