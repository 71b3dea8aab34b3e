#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "roe/errors.hpp"
#include "roe/harness.hpp"

namespace {

struct CommonOptions {
    std::uint64_t seed = 1;
    std::string difficulty = "Hard";
    std::string backend_kind = "scripted";
    std::string script = "builtin:expert";
    std::string endpoint;
    std::string model = "gpt-3.5-turbo";
    std::string api_key_env = "ROE_API_KEY";
    double timeout_s = 60.0;
    std::string session;
    std::string record;
    std::string config_path;
    std::string prompts_dir;
    std::string out_dir;
    int decision_interval = 10;
    int max_actions = roe::kDefaultMaxActions;
    int max_round = 5;
    int window = 1;
    int n_average = 8;
    std::string summary_mode = "rule";
    std::string ablation = "none";
};

void add_common_options(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--seed", opt.seed, "Base seed");
    cmd->add_option("--difficulty", opt.difficulty, "Hard | Harder | VeryHard | Elite");
    cmd->add_option("--backend", opt.backend_kind, "scripted | http | replay");
    cmd->add_option("--script", opt.script,
                    "Script table: builtin:<do-nothing|expert|staged> or a JSON file");
    cmd->add_option("--endpoint", opt.endpoint, "Chat completion endpoint URL");
    cmd->add_option("--model", opt.model, "Model name sent on the wire");
    cmd->add_option("--api-key-env", opt.api_key_env, "Env var holding the API key");
    cmd->add_option("--timeout", opt.timeout_s, "HTTP timeout in seconds");
    cmd->add_option("--session", opt.session, "Session file for the replay backend");
    cmd->add_option("--record", opt.record, "Record all calls to this session file");
    cmd->add_option("--config", opt.config_path, "Simulator config JSON");
    cmd->add_option("--prompts", opt.prompts_dir, "Prompt catalog directory");
    cmd->add_option("--out", opt.out_dir, "Output directory");
    cmd->add_option("--interval", opt.decision_interval, "Ticks between decisions");
    cmd->add_option("--max-actions", opt.max_actions, "Actions accepted per decision");
    cmd->add_option("--max-round", opt.max_round, "Rounds per test");
    cmd->add_option("--window", opt.window, "Key frames kept around each transition");
    cmd->add_option("--n-average", opt.n_average, "Evenly spaced key frames added");
    cmd->add_option("--summary-mode", opt.summary_mode, "rule | llm");
}

roe::BackendSpec backend_spec_from(const CommonOptions& opt) {
    roe::BackendSpec spec;
    spec.kind = opt.backend_kind;
    spec.script = opt.script;
    spec.endpoint_url = opt.endpoint;
    spec.model_name = opt.model;
    spec.api_key_env_var = opt.api_key_env;
    spec.timeout_s = opt.timeout_s;
    spec.session_path = opt.session;
    spec.record_path = opt.record;
    return spec;
}

roe::RunConfig run_config_from(const CommonOptions& opt) {
    roe::RunConfig cfg;
    if (!opt.config_path.empty()) {
        cfg.sim = roe::SimConfig::load_file(opt.config_path);
    }
    cfg.difficulty = roe::difficulty_from_string(opt.difficulty);
    cfg.seed = opt.seed;
    cfg.max_round = opt.max_round;
    cfg.decision_interval = opt.decision_interval;
    cfg.max_actions = opt.max_actions;
    cfg.keyframe_params.window = opt.window;
    cfg.keyframe_params.n_average = opt.n_average;
    cfg.ablation = roe::ablation_from_string(opt.ablation);
    cfg.summary_mode =
        opt.summary_mode == "llm" ? roe::SummaryMode::Llm : roe::SummaryMode::Rule;
    if (!opt.prompts_dir.empty()) {
        cfg.catalog = roe::PromptCatalog::load_dir(opt.prompts_dir);
    }
    cfg.out_dir = opt.out_dir;
    return cfg;
}

std::vector<roe::DifficultyLevel> parse_difficulties(const std::string& list) {
    std::vector<roe::DifficultyLevel> levels;
    std::istringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) {
            levels.push_back(roe::difficulty_from_string(item));
        }
    }
    if (levels.empty()) {
        throw roe::ConfigError("no difficulties given");
    }
    return levels;
}

int cmd_play(const CommonOptions& opt) {
    roe::RunConfig cfg = run_config_from(opt);
    auto backend = roe::make_backend(backend_spec_from(opt));
    roe::Experience experience = roe::expert_experience(cfg.catalog);
    roe::EpisodeRun run = roe::run_episode(*backend, cfg, experience, cfg.seed, 0, 0,
                                           opt.out_dir.empty() ? "" : opt.out_dir);
    std::cout << roe::to_string(run.result.outcome) << " at "
              << roe::format_time(run.result.tick_ended) << " ("
              << run.log.frames.size() << " decisions)\n";
    if (!opt.out_dir.empty()) {
        std::cout << "episode log written under " << opt.out_dir << "\n";
    }
    return 0;
}

int cmd_test(const CommonOptions& opt) {
    roe::RunConfig cfg = run_config_from(opt);
    auto backend = roe::make_backend(backend_spec_from(opt));
    roe::TestResult result = roe::run_test(*backend, cfg, 0);
    for (const auto& round : result.rounds) {
        std::cout << "round " << round.round_index << ": "
                  << roe::to_string(round.result.outcome) << " at "
                  << roe::format_time(round.result.tick_ended) << " (experience: "
                  << round.experience_origin.to_string() << ")\n";
    }
    std::cout << "test result: " << (result.victory ? "Victory" : "Defeat-after-cap") << " in "
              << result.rounds_used << " round(s)\n";
    return result.victory ? 0 : 1;
}

int run_experiment_command(const CommonOptions& opt, const std::string& difficulties,
                           int n_tests, const std::string& ablation_mode) {
    CommonOptions local = opt;
    local.ablation = ablation_mode;
    roe::RunConfig cfg = run_config_from(local);
    auto backend = roe::make_backend(backend_spec_from(local));
    auto levels = parse_difficulties(difficulties);
    roe::ExperimentReport report = roe::run_experiment(*backend, cfg, levels, n_tests);
    std::cout << report.win_rate_table();
    if (!opt.out_dir.empty()) {
        roe::BackendSpec spec = backend_spec_from(local);
        roe::emit_report(report, cfg, &spec, opt.out_dir);
        std::cout << "report written under " << opt.out_dir << "\n";
    }
    return 0;
}

int cmd_report(const std::string& run_dir) {
    std::ifstream in(run_dir + "/report.json");
    if (!in) {
        std::cerr << "no report.json under " << run_dir << "\n";
        return 1;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    nlohmann::json j = nlohmann::json::parse(ss.str());
    std::cout << "Win rates by difficulty";
    if (j.value("ablation", "none") != "none") {
        std::cout << " [ablation: " << j["ablation"].get<std::string>() << "]";
    }
    std::cout << "\n-----------------------\n";
    for (const auto& row : j.at("rows")) {
        std::cout << row.at("difficulty").get<std::string>() << ": "
                  << row.at("rate").get<std::string>() << "\n";
    }
    std::ifstream mf(run_dir + "/manifest.json");
    if (mf) {
        std::stringstream ms;
        ms << mf.rdbuf();
        nlohmann::json manifest = nlohmann::json::parse(ms.str());
        std::cout << "config hash: " << manifest.at("config_hash").get<std::uint64_t>()
                  << " | base seed: " << manifest.at("base_seed").get<std::uint64_t>()
                  << " | prompts: " << manifest.at("prompt_catalog_version").get<std::string>()
                  << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Desk-scale text RTS with episodic reflection"};
    app.require_subcommand(1);

    CommonOptions play_opt, test_opt, exp_opt, abl_opt;
    std::string exp_difficulties = "Hard,Harder,VeryHard,Elite";
    std::string abl_difficulties = "Hard";
    int exp_tests = 10;
    int abl_tests = 10;
    std::string abl_mode = "no_reflection";
    std::string report_dir;

    CLI::App* play = app.add_subcommand("play", "Run one episode");
    add_common_options(play, play_opt);

    CLI::App* test = app.add_subcommand("test", "Run one test (up to max-round episodes)");
    add_common_options(test, test_opt);

    CLI::App* experiment = app.add_subcommand("experiment", "Sweep difficulties");
    add_common_options(experiment, exp_opt);
    experiment->add_option("--difficulties", exp_difficulties, "Comma-separated levels");
    experiment->add_option("--tests", exp_tests, "Tests per difficulty");

    CLI::App* ablate = app.add_subcommand("ablate", "Run an ablation experiment");
    add_common_options(ablate, abl_opt);
    ablate->add_option("--mode", abl_mode,
                       "no_keyframe_full_log | no_keyframe_uniform | no_reflection")
        ->required();
    ablate->add_option("--difficulties", abl_difficulties, "Comma-separated levels");
    ablate->add_option("--tests", abl_tests, "Tests per difficulty");

    CLI::App* report = app.add_subcommand("report", "Print the report of a stored run");
    report->add_option("--run", report_dir, "Run directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (play->parsed()) {
            return cmd_play(play_opt);
        }
        if (test->parsed()) {
            return cmd_test(test_opt);
        }
        if (experiment->parsed()) {
            return run_experiment_command(exp_opt, exp_difficulties, exp_tests, "none");
        }
        if (ablate->parsed()) {
            return run_experiment_command(abl_opt, abl_difficulties, abl_tests, abl_mode);
        }
        if (report->parsed()) {
            return cmd_report(report_dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
