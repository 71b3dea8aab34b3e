#include "roe/harness.hpp"

#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "roe/errors.hpp"

namespace roe {

using nlohmann::json;
namespace fs = std::filesystem;

const char* to_string(AblationMode mode) {
    switch (mode) {
        case AblationMode::None: return "none";
        case AblationMode::NoKeyframeFullLog: return "no_keyframe_full_log";
        case AblationMode::NoKeyframeUniform: return "no_keyframe_uniform";
        case AblationMode::NoReflection: return "no_reflection";
    }
    return "none";
}

AblationMode ablation_from_string(const std::string& name) {
    if (name == "none") return AblationMode::None;
    if (name == "no_keyframe_full_log") return AblationMode::NoKeyframeFullLog;
    if (name == "no_keyframe_uniform") return AblationMode::NoKeyframeUniform;
    if (name == "no_reflection") return AblationMode::NoReflection;
    throw ConfigError("unknown ablation mode: " + name);
}

void RunConfig::validate() const {
    sim.validate();
    if (max_round < 1) {
        throw ConfigError("max_round must be >= 1");
    }
    if (decision_interval < 1) {
        throw ConfigError("decision_interval must be >= 1");
    }
    if (max_actions < 1) {
        throw ConfigError("max_actions must be >= 1");
    }
    if (keyframe_params.window < 0) {
        throw ConfigError("keyframe window must be >= 0");
    }
    if (keyframe_params.n_average < 0) {
        throw ConfigError("keyframe n_average must be >= 0");
    }
    if (context_budget_chars < 1) {
        throw ConfigError("context_budget_chars must be >= 1");
    }
}

// ---------------------------------------------------------------------------
// Episode
// ---------------------------------------------------------------------------

EpisodeRun run_episode(LlmBackend& client, const RunConfig& cfg, const Experience& experience,
                       std::uint64_t episode_seed, int test_id, int round,
                       const std::string& episode_dir) {
    cfg.validate();
    EpisodeRun out;
    GameState state = new_game(cfg.sim, episode_seed, cfg.difficulty);

    out.log.seed = episode_seed;
    out.log.difficulty = cfg.difficulty;
    out.log.config_hash = cfg.sim.hash();
    out.log.test_id = test_id;
    out.log.round = round;

    SystemPrompt system_prompt = make_system_prompt(cfg.catalog, experience.raw_text);

    TextObservation previous_obs = observe_text(state);
    GamePhase last_phase = GamePhase::EarlyGame;
    int index = 0;
    bool first_decision = true;

    while (!is_terminal(state)) {
        TextObservation current_obs = observe_text(state);
        std::vector<TextObservation> window;
        if (first_decision) {
            window = {current_obs};
        } else {
            window = {previous_obs, current_obs};
        }
        L1Summary l1 = l1_summarize(window);

        L2Options options;
        options.mode = cfg.summary_mode;
        options.client = &client;
        options.catalog = &cfg.catalog;
        options.min_phase = last_phase;
        L2Summary l2;
        try {
            l2 = l2_summarize({l1}, state, options);
        } catch (const TransportError&) {
            // The game must not stall on summarizer transport trouble.
            options.mode = SummaryMode::Rule;
            l2 = l2_summarize({l1}, state, options);
        }

        MessageBundle bundle =
            build_decision_messages(system_prompt, l2, cfg.catalog, cfg.max_actions);
        Decision decision = decide(client, bundle, cfg.max_actions, cfg.retry);

        StepOutcome step_outcome = step(state, decision.queue.actions, cfg.decision_interval);

        FrameRecord record;
        record.index = index;
        record.l2 = l2;
        record.action_taken = decision.queue.actions;
        record.events = step_outcome.events;
        record.raw_response = decision.raw_text;
        record.rejected = step_outcome.rejected;
        out.log.frames.push_back(std::move(record));

        out.series.insert(out.series.end(), step_outcome.samples.begin(),
                          step_outcome.samples.end());

        last_phase = l2.phase;
        previous_obs = current_obs;
        first_decision = false;
        ++index;
    }

    out.result = *is_terminal(state);
    out.log.result = out.result;

    if (!episode_dir.empty()) {
        fs::create_directories(episode_dir);
        out.log.save_file(episode_dir + "/round_" + std::to_string(round) + ".jsonl");
        write_timeseries_csv(
            episode_dir + "/round_" + std::to_string(round) + "_timeseries.csv", out.series);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Test (Algorithm 2 outer loop)
// ---------------------------------------------------------------------------

namespace {

json experience_to_json(const Experience& e) {
    json points = json::array();
    for (const auto& p : e.strategic_points) {
        points.push_back(p);
    }
    json timepoints = json::array();
    for (const auto& tp : e.key_timepoints) {
        timepoints.push_back(
            {{"time", tp.time_text}, {"tick", tp.tick}, {"recommendation", tp.recommendation}});
    }
    return json{{"origin", e.origin.to_string()},
                {"raw_text", e.raw_text},
                {"strategic_points", points},
                {"key_timepoints", timepoints}};
}

void persist_experience(const std::string& test_dir, int round, const Experience& e) {
    if (test_dir.empty()) {
        return;
    }
    fs::create_directories(test_dir + "/experiences");
    std::ofstream out(test_dir + "/experiences/round_" + std::to_string(round) + ".json");
    out << experience_to_json(e).dump(2) << "\n";
}

struct ReflectionFrames {
    std::string text;
    int frame_count = 0;
    bool overflow = false;
};

ReflectionFrames frames_for_reflection(const std::vector<FrameRecord>& frames,
                                       const RunConfig& cfg) {
    ReflectionFrames out;
    switch (cfg.ablation) {
        case AblationMode::None:
        case AblationMode::NoReflection: {
            KeyFrameSet set = select_key_frames(frames, cfg.keyframe_params);
            out.text = render_key_frames(set, frames);
            out.frame_count = static_cast<int>(set.merged.size());
            break;
        }
        case AblationMode::NoKeyframeUniform: {
            KeyFrameSet set = select_key_frames(frames, cfg.keyframe_params);
            KeyFrameSet uniform;
            uniform.params = cfg.keyframe_params;
            uniform.average_frames = set.average_frames;
            uniform.merged = set.average_frames;
            out.text = render_key_frames(uniform, frames);
            out.frame_count = static_cast<int>(uniform.merged.size());
            break;
        }
        case AblationMode::NoKeyframeFullLog: {
            KeyFrameSet all;
            all.params = cfg.keyframe_params;
            all.merged.resize(frames.size());
            std::iota(all.merged.begin(), all.merged.end(), 0);
            out.text = render_key_frames(all, frames);
            while (static_cast<int>(out.text.size()) > cfg.context_budget_chars &&
                   all.merged.size() > 1) {
                out.overflow = true; // oldest dropped first
                all.merged.erase(all.merged.begin());
                out.text = render_key_frames(all, frames);
            }
            out.frame_count = static_cast<int>(all.merged.size());
            break;
        }
    }
    return out;
}

} // namespace

TestResult run_test(LlmBackend& client, const RunConfig& cfg, int test_id) {
    cfg.validate();
    TestResult result;

    std::string test_dir;
    if (!cfg.out_dir.empty()) {
        test_dir = cfg.out_dir + "/tests/" + to_string(cfg.difficulty) + "_test_" +
                   std::to_string(test_id);
        fs::create_directories(test_dir + "/rounds");
    }

    Experience experience = expert_experience(cfg.catalog);
    persist_experience(test_dir, 0, experience);

    for (int round = 0; round < cfg.max_round; ++round) {
        std::uint64_t episode_seed = cfg.seed + 1000ULL * static_cast<std::uint64_t>(round);
        EpisodeRun episode =
            run_episode(client, cfg, experience, episode_seed, test_id, round,
                        test_dir.empty() ? "" : test_dir + "/rounds");

        result.rounds.push_back({round, episode.result, experience.origin});
        if (episode.result.outcome == Outcome::Victory) {
            result.victory = true;
            break;
        }
        if (round == cfg.max_round - 1) {
            break; // cap reached; no further round to reflect for
        }
        if (cfg.ablation == AblationMode::NoReflection) {
            continue; // expert experience reused every round
        }

        ReflectionFrames frames = frames_for_reflection(episode.log.frames, cfg);
        if (frames.overflow) {
            result.context_overflows += 1;
        }
        result.reflection_frame_counts.push_back(frames.frame_count);

        ReflectionPrompt prompt =
            build_reflection_prompt(frames.text, experience, episode.result, cfg.catalog);
        try {
            experience = generate_reflection(client, prompt, round + 1, cfg.retry);
            persist_experience(test_dir, round + 1, experience);
        } catch (const ValidationError&) {
            result.reflection_failures += 1; // previous experience retained
        } catch (const TransportError&) {
            result.reflection_failures += 1;
        }
    }
    result.rounds_used = static_cast<int>(result.rounds.size());
    return result;
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

std::string format_rate(int wins, int total) {
    if (total <= 0) {
        throw ArgumentError("win rate requires at least one test");
    }
    long long hundred = 100LL * wins;
    std::string pct;
    if (hundred % total == 0) {
        pct = std::to_string(hundred / total);
    } else if ((1000LL * wins) % total == 0) {
        long long tenths = 1000LL * wins / total;
        pct = std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
    } else {
        long long hundredths = (10000LL * wins + total / 2) / total;
        pct = std::to_string(hundredths / 100) + "." + std::to_string((hundredths / 10) % 10) +
              std::to_string(hundredths % 10);
    }
    return std::to_string(wins) + "/" + std::to_string(total) + " (" + pct + "%)";
}

ExperimentReport run_experiment(LlmBackend& client, const RunConfig& cfg,
                                const std::vector<DifficultyLevel>& difficulties, int n_tests) {
    if (n_tests < 1) {
        throw ConfigError("n_tests must be >= 1");
    }
    cfg.validate();
    ExperimentReport report;
    report.base_seed = cfg.seed;
    report.n_tests = n_tests;
    report.ablation = cfg.ablation;
    report.config_hash = cfg.sim.hash();
    report.prompt_catalog_version = cfg.catalog.version;

    for (DifficultyLevel level : difficulties) {
        DifficultyRow row;
        row.difficulty = level;
        row.tests_total = n_tests;
        for (int i = 0; i < n_tests; ++i) {
            RunConfig test_cfg = cfg;
            test_cfg.difficulty = level;
            test_cfg.seed = cfg.seed + static_cast<std::uint64_t>(i);
            TestResult test = run_test(client, test_cfg, i);
            if (test.victory) {
                row.tests_won += 1;
            }
            report.total_context_overflows += test.context_overflows;
            row.tests.push_back(std::move(test));
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

ExperimentReport run_ablation(LlmBackend& client, AblationMode mode, const RunConfig& cfg,
                              const std::vector<DifficultyLevel>& difficulties, int n_tests) {
    RunConfig ablated = cfg;
    ablated.ablation = mode;
    return run_experiment(client, ablated, difficulties, n_tests);
}

std::string ExperimentReport::win_rate_table() const {
    std::ostringstream out;
    out << "Win rates by difficulty";
    if (ablation != AblationMode::None) {
        out << " [ablation: " << to_string(ablation) << "]";
    }
    out << "\n";
    out << "-----------------------\n";
    for (const auto& row : rows) {
        out << to_string(row.difficulty) << ": " << format_rate(row.tests_won, row.tests_total)
            << "\n";
    }
    return out.str();
}

std::string ExperimentReport::to_json_string() const {
    json rows_json = json::array();
    for (const auto& row : rows) {
        json tests = json::array();
        for (const auto& t : row.tests) {
            json rounds = json::array();
            for (const auto& r : t.rounds) {
                rounds.push_back({{"round", r.round_index},
                                  {"outcome", to_string(r.result.outcome)},
                                  {"tick_ended", r.result.tick_ended},
                                  {"experience_origin", r.experience_origin.to_string()}});
            }
            tests.push_back({{"rounds", rounds},
                             {"victory", t.victory},
                             {"rounds_used", t.rounds_used},
                             {"reflection_failures", t.reflection_failures},
                             {"context_overflows", t.context_overflows},
                             {"reflection_frame_counts", t.reflection_frame_counts}});
        }
        rows_json.push_back({{"difficulty", to_string(row.difficulty)},
                             {"tests_won", row.tests_won},
                             {"tests_total", row.tests_total},
                             {"rate", format_rate(row.tests_won, row.tests_total)},
                             {"tests", tests}});
    }
    return json{{"rows", rows_json},
                {"base_seed", base_seed},
                {"n_tests", n_tests},
                {"ablation", to_string(ablation)},
                {"config_hash", config_hash},
                {"prompt_catalog_version", prompt_catalog_version},
                {"total_context_overflows", total_context_overflows}}
        .dump(2);
}

void emit_report(const ExperimentReport& report, const RunConfig& cfg,
                 const BackendSpec* backend_spec, const std::string& out_dir) {
    fs::create_directories(out_dir);

    {
        std::ofstream table(out_dir + "/report.txt");
        if (!table) {
            throw ConfigError("cannot write report: " + out_dir + "/report.txt");
        }
        table << report.win_rate_table();
    }
    {
        std::ofstream machine(out_dir + "/report.json");
        machine << report.to_json_string() << "\n";
    }

    json seeds = json::array();
    for (int i = 0; i < report.n_tests; ++i) {
        seeds.push_back(report.base_seed + static_cast<std::uint64_t>(i));
    }
    json difficulties = json::array();
    for (const auto& row : report.rows) {
        difficulties.push_back(to_string(row.difficulty));
    }
    json manifest{{"config_hash", report.config_hash},
                  {"base_seed", report.base_seed},
                  {"test_seeds", seeds},
                  {"n_tests", report.n_tests},
                  {"difficulties", difficulties},
                  {"ablation", to_string(report.ablation)},
                  {"max_round", cfg.max_round},
                  {"decision_interval", cfg.decision_interval},
                  {"max_actions", cfg.max_actions},
                  {"keyframe", {{"window", cfg.keyframe_params.window},
                                {"n_average", cfg.keyframe_params.n_average}}},
                  {"context_budget_chars", cfg.context_budget_chars},
                  {"summary_mode", cfg.summary_mode == SummaryMode::Rule ? "rule" : "llm"},
                  {"prompt_catalog_version", report.prompt_catalog_version}};
    if (backend_spec) {
        manifest["backend"] = json::parse(backend_spec->to_json_string());
    }
    std::ofstream mf(out_dir + "/manifest.json");
    mf << manifest.dump(2) << "\n";
}

} // namespace roe
