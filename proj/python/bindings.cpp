#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "roe/errors.hpp"
#include "roe/harness.hpp"

namespace py = pybind11;

namespace {

std::vector<roe::ActionId> ids_from_names(const std::vector<std::string>& names) {
    std::vector<roe::ActionId> ids;
    ids.reserve(names.size());
    for (const auto& name : names) {
        auto id = roe::parse_action_name(name);
        if (!id) {
            throw roe::ArgumentError("unknown action name: " + name);
        }
        ids.push_back(*id);
    }
    return ids;
}

std::vector<std::string> names_from_ids(const std::vector<roe::ActionId>& ids) {
    std::vector<std::string> names;
    names.reserve(ids.size());
    for (roe::ActionId id : ids) {
        names.emplace_back(roe::action_name(id));
    }
    return names;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Desk-scale text RTS with episodic reflection: core operations";

    py::register_exception<roe::ConfigError>(m, "ConfigError");
    py::register_exception<roe::StateError>(m, "StateError");
    py::register_exception<roe::ArgumentError>(m, "ArgumentError");
    py::register_exception<roe::MalformedLogError>(m, "MalformedLogError");
    py::register_exception<roe::ValidationError>(m, "ValidationError");
    py::register_exception<roe::TransportError>(m, "TransportError");
    py::register_exception<roe::ReplayMissError>(m, "ReplayMissError");

    py::enum_<roe::DifficultyLevel>(m, "DifficultyLevel")
        .value("Hard", roe::DifficultyLevel::Hard)
        .value("Harder", roe::DifficultyLevel::Harder)
        .value("VeryHard", roe::DifficultyLevel::VeryHard)
        .value("Elite", roe::DifficultyLevel::Elite);

    py::enum_<roe::Outcome>(m, "Outcome")
        .value("Victory", roe::Outcome::Victory)
        .value("Defeat", roe::Outcome::Defeat)
        .value("Timeout", roe::Outcome::Timeout);

    py::enum_<roe::GamePhase>(m, "GamePhase")
        .value("EarlyGame", roe::GamePhase::EarlyGame)
        .value("EarlyMidGame", roe::GamePhase::EarlyMidGame)
        .value("MidGame", roe::GamePhase::MidGame)
        .value("LateMidGame", roe::GamePhase::LateMidGame)
        .value("LateGame", roe::GamePhase::LateGame);

    py::enum_<roe::AblationMode>(m, "AblationMode")
        .value("none", roe::AblationMode::None)
        .value("no_keyframe_full_log", roe::AblationMode::NoKeyframeFullLog)
        .value("no_keyframe_uniform", roe::AblationMode::NoKeyframeUniform)
        .value("no_reflection", roe::AblationMode::NoReflection);

    py::class_<roe::SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("max_ticks", &roe::SimConfig::max_ticks)
        .def_readwrite("starting_minerals", &roe::SimConfig::starting_minerals)
        .def_readwrite("starting_workers", &roe::SimConfig::starting_workers)
        .def_readwrite("mineral_rate", &roe::SimConfig::mineral_rate)
        .def("validate", &roe::SimConfig::validate)
        .def("hash", &roe::SimConfig::hash)
        .def("to_json", &roe::SimConfig::to_json_string)
        .def_static("from_json", &roe::SimConfig::from_json_string)
        .def_static("load_file", &roe::SimConfig::load_file)
        .def("save_file", &roe::SimConfig::save_file);
    m.def("default_config", &roe::default_config);

    py::class_<roe::PlayerState>(m, "PlayerState")
        .def_readonly("minerals", &roe::PlayerState::minerals)
        .def_readonly("gas", &roe::PlayerState::gas)
        .def_readonly("supply_used", &roe::PlayerState::supply_used)
        .def_readonly("workers", &roe::PlayerState::workers)
        .def_readonly("bases", &roe::PlayerState::bases)
        .def_readonly("army", &roe::PlayerState::army);

    py::class_<roe::MatchResult>(m, "MatchResult")
        .def_readonly("outcome", &roe::MatchResult::outcome)
        .def_readonly("tick_ended", &roe::MatchResult::tick_ended);

    py::class_<roe::GameState>(m, "GameState")
        .def_readonly("tick", &roe::GameState::tick)
        .def_readonly("player", &roe::GameState::player)
        .def_readonly("opponent", &roe::GameState::opponent)
        .def_readonly("difficulty", &roe::GameState::difficulty)
        .def_property_readonly("terminal",
                               [](const roe::GameState& s) { return s.terminal; })
        .def("to_json", &roe::state_to_json)
        .def("hash", &roe::state_hash);

    m.def("new_game", &roe::new_game, py::arg("config"), py::arg("seed"), py::arg("difficulty"));
    m.def("legal_actions", [](const roe::GameState& s) {
        std::vector<std::string> names;
        for (const auto& a : roe::legal_actions(s)) {
            names.emplace_back(a.display_name);
        }
        return names;
    });
    m.def("action_library", [] {
        std::vector<std::string> names;
        for (const auto& a : roe::action_library()) {
            names.emplace_back(a.display_name);
        }
        return names;
    });

    py::class_<roe::StepOutcome>(m, "StepOutcome")
        .def_property_readonly(
            "executed", [](const roe::StepOutcome& o) { return names_from_ids(o.executed); })
        .def_property_readonly("rejected",
                               [](const roe::StepOutcome& o) {
                                   std::vector<std::pair<std::string, std::string>> out;
                                   for (const auto& r : o.rejected) {
                                       out.emplace_back(std::string(roe::action_name(r.action)),
                                                        r.reason);
                                   }
                                   return out;
                               })
        .def_readonly("events", &roe::StepOutcome::events)
        .def_property_readonly("ticks_advanced", [](const roe::StepOutcome& o) {
            return o.samples.size();
        });

    m.def(
        "step",
        [](roe::GameState& state, const std::vector<std::string>& actions, int interval) {
            return roe::step(state, ids_from_names(actions), interval);
        },
        py::arg("state"), py::arg("actions"), py::arg("decision_interval") = 10);

    m.def("resolve_combat", [](double attacker, double defender) {
        roe::CombatResult r = roe::resolve_combat(attacker, defender);
        return std::make_pair(
            std::string(r.survivor_side == roe::CombatSide::Attacker ? "attacker" : "defender"),
            r.survivor_power);
    });

    m.def("observe_text", [](const roe::GameState& s) { return roe::observe_text(s).text; });
    m.def("is_terminal", [](const roe::GameState& s) { return roe::is_terminal(s); });
    m.def("format_time", &roe::format_time);

    m.def("classify_phase", &roe::classify_phase);
    m.def("phase_keyword", [](roe::GamePhase p) { return std::string(roe::phase_keyword(p)); });

    // --- key frames -------------------------------------------------------
    py::class_<roe::L2Summary>(m, "L2Summary")
        .def_readonly("tick", &roe::L2Summary::tick)
        .def_readonly("situation_text", &roe::L2Summary::situation_text)
        .def_readonly("phase", &roe::L2Summary::phase);

    py::class_<roe::FrameRecord>(m, "FrameRecord")
        .def_readonly("index", &roe::FrameRecord::index)
        .def_readonly("l2", &roe::FrameRecord::l2)
        .def_property_readonly(
            "actions", [](const roe::FrameRecord& f) { return names_from_ids(f.action_taken); })
        .def_readonly("events", &roe::FrameRecord::events)
        .def_readonly("raw_response", &roe::FrameRecord::raw_response);

    py::class_<roe::KeyFrameParams>(m, "KeyFrameParams")
        .def(py::init<>())
        .def_readwrite("window", &roe::KeyFrameParams::window)
        .def_readwrite("n_average", &roe::KeyFrameParams::n_average);

    py::class_<roe::KeyFrameSet>(m, "KeyFrameSet")
        .def_readonly("transition_frames", &roe::KeyFrameSet::transition_frames)
        .def_readonly("average_frames", &roe::KeyFrameSet::average_frames)
        .def_readonly("merged", &roe::KeyFrameSet::merged);

    m.def("detect_transitions", &roe::detect_transitions);
    m.def("select_key_frames", &roe::select_key_frames, py::arg("episode"),
          py::arg("params") = roe::KeyFrameParams{});
    m.def("render_key_frames", &roe::render_key_frames);

    // --- reflection -------------------------------------------------------
    py::class_<roe::TimePoint>(m, "TimePoint")
        .def_readonly("tick", &roe::TimePoint::tick)
        .def_readonly("time_text", &roe::TimePoint::time_text)
        .def_readonly("recommendation", &roe::TimePoint::recommendation);

    py::class_<roe::Experience>(m, "Experience")
        .def_property_readonly(
            "origin", [](const roe::Experience& e) { return e.origin.to_string(); })
        .def_readonly("strategic_points", &roe::Experience::strategic_points)
        .def_readonly("key_timepoints", &roe::Experience::key_timepoints)
        .def_readonly("raw_text", &roe::Experience::raw_text);

    m.def("parse_reflection",
          [](const std::string& text) { return roe::parse_reflection(text); });
    m.def("render_experience", &roe::render_experience);
    m.def("expert_experience",
          [] { return roe::expert_experience(roe::PromptCatalog::builtin()); });

    m.def(
        "parse_actions",
        [](const std::string& text, int max_actions) {
            return names_from_ids(roe::parse_actions(text, max_actions).actions);
        },
        py::arg("text"), py::arg("max_actions") = roe::kDefaultMaxActions);

    // --- backends & harness ------------------------------------------------
    py::class_<roe::LlmBackend, std::shared_ptr<roe::LlmBackend>>(m, "LlmBackend")
        .def("query", [](roe::LlmBackend& b,
                         const std::vector<std::pair<std::string, std::string>>& messages,
                         double temperature) {
            std::vector<roe::ChatMessage> msgs;
            for (const auto& [role, content] : messages) {
                msgs.push_back({role, content});
            }
            return b.query(msgs, temperature);
        });

    m.def("scripted_backend", [](const std::string& name) -> std::shared_ptr<roe::LlmBackend> {
        return std::make_shared<roe::ScriptedBackend>(roe::builtin_script_table(name));
    });
    m.def("scripted_backend_from_file",
          [](const std::string& path) -> std::shared_ptr<roe::LlmBackend> {
              return std::make_shared<roe::ScriptedBackend>(roe::ScriptTable::load_file(path));
          });
    m.def("builtin_script_names", &roe::builtin_script_names);

    py::class_<roe::RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("sim", &roe::RunConfig::sim)
        .def_readwrite("difficulty", &roe::RunConfig::difficulty)
        .def_readwrite("max_round", &roe::RunConfig::max_round)
        .def_readwrite("seed", &roe::RunConfig::seed)
        .def_readwrite("keyframe_params", &roe::RunConfig::keyframe_params)
        .def_readwrite("ablation", &roe::RunConfig::ablation)
        .def_readwrite("decision_interval", &roe::RunConfig::decision_interval)
        .def_readwrite("max_actions", &roe::RunConfig::max_actions)
        .def_readwrite("out_dir", &roe::RunConfig::out_dir);

    py::class_<roe::EpisodeRun>(m, "EpisodeRun")
        .def_readonly("result", &roe::EpisodeRun::result)
        .def_property_readonly(
            "frames", [](const roe::EpisodeRun& r) { return r.log.frames; })
        .def_property_readonly(
            "log_jsonl", [](const roe::EpisodeRun& r) { return r.log.to_jsonl(); })
        .def_property_readonly("ticks",
                               [](const roe::EpisodeRun& r) { return r.series.size(); });

    m.def(
        "run_episode",
        [](std::shared_ptr<roe::LlmBackend> backend, const roe::RunConfig& cfg,
           const roe::Experience& experience, std::uint64_t seed) {
            return roe::run_episode(*backend, cfg, experience, seed);
        },
        py::arg("backend"), py::arg("config"), py::arg("experience"), py::arg("seed"));

    py::class_<roe::TestRound>(m, "TestRound")
        .def_readonly("round_index", &roe::TestRound::round_index)
        .def_readonly("result", &roe::TestRound::result)
        .def_property_readonly("experience_origin", [](const roe::TestRound& r) {
            return r.experience_origin.to_string();
        });

    py::class_<roe::TestResult>(m, "TestResult")
        .def_readonly("rounds", &roe::TestResult::rounds)
        .def_readonly("victory", &roe::TestResult::victory)
        .def_readonly("rounds_used", &roe::TestResult::rounds_used)
        .def_readonly("context_overflows", &roe::TestResult::context_overflows);

    m.def(
        "run_test",
        [](std::shared_ptr<roe::LlmBackend> backend, const roe::RunConfig& cfg, int test_id) {
            return roe::run_test(*backend, cfg, test_id);
        },
        py::arg("backend"), py::arg("config"), py::arg("test_id") = 0);

    py::class_<roe::ExperimentReport>(m, "ExperimentReport")
        .def("win_rate_table", &roe::ExperimentReport::win_rate_table)
        .def("to_json", &roe::ExperimentReport::to_json_string);

    m.def(
        "run_experiment",
        [](std::shared_ptr<roe::LlmBackend> backend, const roe::RunConfig& cfg,
           const std::vector<roe::DifficultyLevel>& levels, int n_tests) {
            return roe::run_experiment(*backend, cfg, levels, n_tests);
        },
        py::arg("backend"), py::arg("config"), py::arg("difficulties"), py::arg("n_tests"));

    m.def("format_rate", &roe::format_rate);
}
