#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roe/agent.hpp"
#include "roe/episode.hpp"
#include "roe/keyframe.hpp"
#include "roe/llm_client.hpp"
#include "roe/prompts.hpp"
#include "roe/reflection.hpp"
#include "roe/scripts.hpp"
#include "roe/sim.hpp"

namespace roe {

enum class AblationMode { None, NoKeyframeFullLog, NoKeyframeUniform, NoReflection };

const char* to_string(AblationMode mode);
AblationMode ablation_from_string(const std::string& name);

struct RunConfig {
    SimConfig sim = default_config();
    DifficultyLevel difficulty = DifficultyLevel::Hard;
    int max_round = 5;
    std::uint64_t seed = 1;
    KeyFrameParams keyframe_params{};
    AblationMode ablation = AblationMode::None;
    int decision_interval = 10;
    int max_actions = kDefaultMaxActions;
    SummaryMode summary_mode = SummaryMode::Rule;
    // Character budget for reflection frames under no_keyframe_full_log;
    // oldest frames are dropped first when it is exceeded.
    int context_budget_chars = 16000;
    PromptCatalog catalog = PromptCatalog::builtin();
    RetryPolicy retry{};
    std::string out_dir; // persistence root; empty runs in memory only

    void validate() const;
};

struct EpisodeRun {
    EpisodeLog log;
    MatchResult result;
    std::vector<TickSample> series;
};

// One full game: init, then observe / summarize / decide / step / record
// until terminal. When episode_dir is set the log and time series are
// persisted before returning.
EpisodeRun run_episode(LlmBackend& client, const RunConfig& cfg, const Experience& experience,
                       std::uint64_t episode_seed, int test_id = 0, int round = 0,
                       const std::string& episode_dir = "");

struct TestRound {
    int round_index = 0;
    MatchResult result;
    ExperienceOrigin experience_origin;
};

// Up to max_round consecutive games against one difficulty; the test is a
// Victory if any round is won.
struct TestResult {
    std::vector<TestRound> rounds;
    bool victory = false;
    int rounds_used = 0;
    int reflection_failures = 0;
    int context_overflows = 0;
    std::vector<int> reflection_frame_counts;
};

// The outer loop: round 0 plays on the expert experience, every later round
// on the reflection generated from the previous round's key frames. Stops at
// the first Victory or at the round cap.
TestResult run_test(LlmBackend& client, const RunConfig& cfg, int test_id = 0);

struct DifficultyRow {
    DifficultyLevel difficulty = DifficultyLevel::Hard;
    int tests_won = 0;
    int tests_total = 0;
    std::vector<TestResult> tests;
};

struct ExperimentReport {
    std::vector<DifficultyRow> rows;
    std::uint64_t base_seed = 0;
    int n_tests = 0;
    AblationMode ablation = AblationMode::None;
    std::uint64_t config_hash = 0;
    std::string prompt_catalog_version;
    int total_context_overflows = 0;

    std::string win_rate_table() const;
    std::string to_json_string() const;
};

// "k/n (p%)" with p exact; integer percents print bare, finite fractions
// keep up to two decimals.
std::string format_rate(int wins, int total);

// Independent seeds per test: test i runs with cfg.seed + i; rounds within
// a test use that seed + 1000 * round.
ExperimentReport run_experiment(LlmBackend& client, const RunConfig& cfg,
                                const std::vector<DifficultyLevel>& difficulties, int n_tests);

ExperimentReport run_ablation(LlmBackend& client, AblationMode mode, const RunConfig& cfg,
                              const std::vector<DifficultyLevel>& difficulties, int n_tests);

// Writes report.txt, report.json, and manifest.json under out_dir.
void emit_report(const ExperimentReport& report, const RunConfig& cfg,
                 const BackendSpec* backend_spec, const std::string& out_dir);

} // namespace roe
